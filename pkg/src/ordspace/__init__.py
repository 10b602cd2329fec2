"""Finite-dimensional ordered *-vector spaces: order units, states, order norms, Archimedeanization."""
from .arch import (
    QuotientResult,
    arch_quotient,
    archimedeanize,
    factor_through,
    first_isomorphism,
    is_order_ideal,
    quotient,
)
from .cone import (
    MatrixPSD,
    OrderedSpace,
    PolyhedralH,
    PolyhedralV,
    closure,
    dual_cone,
    h_cone,
    is_closed,
    member,
    orthant,
    orthant_space,
    psd_space,
    v_cone,
)
from .core import ComplexElement, Mode, star
from .errors import (
    BracketError,
    CapabilityError,
    DimensionError,
    MalformedElementError,
    NotArchimedeanError,
    OrderSpaceError,
    ParseError,
    PreconditionError,
    ToleranceUnmetError,
    UnboundedPolytopeError,
    ValidationError,
)
from .funcsys import Embedding, kadison_embed, verify_embedding
from .io import parse_element, parse_space
from .norms import (
    CertifiedInterval,
    convex_combination_norm,
    decomposition_norm,
    maximal_norm,
    minimal_norm,
)
from .order import (
    extend_positive_functional,
    extreme_states,
    is_archimedean,
    order_seminorm,
    state_interval,
    validate_space,
)

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "CapabilityError",
    "CertifiedInterval",
    "ComplexElement",
    "DimensionError",
    "Embedding",
    "MalformedElementError",
    "MatrixPSD",
    "Mode",
    "NotArchimedeanError",
    "OrderSpaceError",
    "OrderedSpace",
    "ParseError",
    "PolyhedralH",
    "PolyhedralV",
    "PreconditionError",
    "QuotientResult",
    "ToleranceUnmetError",
    "UnboundedPolytopeError",
    "ValidationError",
    "arch_quotient",
    "archimedeanize",
    "closure",
    "convex_combination_norm",
    "decomposition_norm",
    "dual_cone",
    "extend_positive_functional",
    "extreme_states",
    "factor_through",
    "first_isomorphism",
    "h_cone",
    "is_archimedean",
    "is_closed",
    "is_order_ideal",
    "kadison_embed",
    "maximal_norm",
    "member",
    "minimal_norm",
    "order_seminorm",
    "orthant",
    "orthant_space",
    "parse_element",
    "parse_space",
    "psd_space",
    "quotient",
    "star",
    "state_interval",
    "v_cone",
    "validate_space",
    "verify_embedding",
]
