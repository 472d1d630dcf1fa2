"""Tubal tensor algebra: star-M tube products, t-SVD truncation and
recovery of M from a black-box tubal product."""

from .catalog import BlackBoxOp, make_transform, oracle_op, transform_by_name
from .discovery import (
    DiscoveryReport,
    classify_ring,
    equivalent_transforms,
    find_transform,
    idempotent_of,
    representation_matrix,
)
from .errors import TubalError
from .ring import (
    TransformSpec,
    canonical_transform,
    conjugate,
    isomorphism_to_canonical,
    leq,
    star,
    unit,
    validate_transform,
    weak_inverse,
)
from .tensor import (
    facewise_product,
    from_transform,
    herm_transpose,
    identity_tensor,
    mdot,
    tensor_star,
    to_transform,
)
from .tsvd import TSVDFactors, m_rank, multirank, tail_error, truncate_multirank, truncate_rank, tsvd

__version__ = "0.1.0"
