"""Characteristic data of locally standard torus actions as finite combinatorial objects."""
from .chardata import (
    CharData,
    CharDataError,
    ChernClass,
    InspectReport,
    InvalidCharDataError,
    ZERO_CHERN,
    empty_data,
    from_generators,
    inspect,
    link_data,
    require_valid,
    restrict_to_skeleton,
    transform,
    validate,
)
from .fanconv import Fan, FanError, fan_to_chardata, validate_fan
from .intlat import (
    INFINITE,
    ContainmentError,
    GeneratorSet,
    LatticeError,
    NotSaturatedError,
    SaturatedLattice,
    UnimodularMap,
    apply_unimodular,
    canonicalize,
    contains,
    quotient_order,
    random_unimodular,
    saturate,
    smith_invariants,
)
from .isodecide import IsoWitness, Mode, Status, Verdict, decide, fingerprint, invert_witness, verify_witness
from .polyconv import (
    PolytopeError,
    PolytopeIncidence,
    build_face_poset,
    charfunction_to_chardata,
    cube,
    is_simple,
    simplex_product,
    square_pyramid,
)
from .reports import Report, Violation
from .stratposet import PosetIso, StratPoset, Stratum, enumerate_isos, upper_set, validate_poset

__version__ = "0.1.0"

__all__ = [
    "apply_unimodular",
    "build_face_poset",
    "canonicalize",
    "CharData",
    "CharDataError",
    "charfunction_to_chardata",
    "ChernClass",
    "ContainmentError",
    "contains",
    "cube",
    "decide",
    "empty_data",
    "enumerate_isos",
    "Fan",
    "fan_to_chardata",
    "FanError",
    "fingerprint",
    "from_generators",
    "GeneratorSet",
    "INFINITE",
    "inspect",
    "InspectReport",
    "InvalidCharDataError",
    "invert_witness",
    "is_simple",
    "IsoWitness",
    "LatticeError",
    "link_data",
    "Mode",
    "NotSaturatedError",
    "PolytopeError",
    "PolytopeIncidence",
    "PosetIso",
    "quotient_order",
    "random_unimodular",
    "Report",
    "require_valid",
    "restrict_to_skeleton",
    "saturate",
    "SaturatedLattice",
    "simplex_product",
    "smith_invariants",
    "square_pyramid",
    "Status",
    "StratPoset",
    "Stratum",
    "transform",
    "UnimodularMap",
    "upper_set",
    "validate",
    "validate_fan",
    "validate_poset",
    "Verdict",
    "verify_witness",
    "Violation",
    "ZERO_CHERN",
]
