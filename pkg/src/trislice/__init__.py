"""Intersection-profile families, their proof tensors, bounds and exact search."""

__version__ = "0.1.0"

from .bounds import (
    BoundEntry,
    BoundReport,
    bound_report,
    frankl_wilson_bound,
    fw_positive_L_bound,
    generalized_rot_bound,
    sharper_bound,
    snevily_bound,
    snevily_conjecture_value,
)
from .errors import (
    ContextError,
    DuplicationError,
    HypothesisError,
    InvariantError,
    OrderError,
    ParameterError,
    PreconditionError,
    TrisliceError,
    VerificationError,
    WidthError,
)
from .family import Ordering, SetFamily, Subset, char_vector, lex_compare, meet_size
from .linalg import (
    ExactMatrix,
    ResidueMatrix,
    Shape,
    TriangularityCertificate,
    rank,
    rank_exact,
    rank_mod_p,
    triangularity,
)
from .profile import (
    IntersectionProfile,
    LiuConfiguration,
    VerificationReport,
    Violation,
    is_valid,
    parse_profile,
    verify_family,
    verify_liu_config,
)
from .search import SearchBudget, SearchOutcome, certify, extend_check, max_family
from .tensors import (
    ProofTensor,
    SliceDecomposition,
    frankl_wilson_matrix,
    liu_matrix,
    slice_decompose,
    snevily_matrix,
)
from .transforms import TraceResult, complement_replace, shrink_small, trace
