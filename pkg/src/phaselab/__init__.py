"""Cross-alphabet isomorphisms, paddable languages, errorless heuristics and phase curves."""

__version__ = "0.1.0"

from .errors import (
    AlphabetMismatchError,
    ConstructionError,
    CoverageError,
    DeviceError,
    InsufficientDataError,
    InvalidWordError,
    NoPredictionError,
    NotApplicableError,
    PhaselabError,
    ResourceLimitError,
    UndefinedFractionError,
    UnsupportedOperationError,
)
from .words import (
    Alphabet,
    Word,
    alpha_unrank,
    decode_word,
    encode_word,
    enumerate_words,
    omega_sum,
    theta_rank,
    xi_transcode,
)
from .langs import Builtin, LanguageSpec, Padder, builtin_language, complement, dec, pad, parse_language_token
from .iso import PreservingIso, build_xi, conjugate_language, transfer_padding
from .roughp import (
    Bijection,
    FaragoTarget,
    HeuristicOutcome,
    b_set,
    bottom_fraction,
    build_phi_csb,
    build_phi_oracle,
    errorless_heuristic,
    farago_target,
)
from .poly import PolySpec, parse_poly
from .phase import (
    CurveReport,
    Parameter,
    SliceStats,
    Tolerances,
    accepting_fraction,
    curve,
    detect_transition,
    get_parameter,
    transfer_parameter,
)
from .audits import adequacy_audit, chi_bounds, density, naeu_audit, sparsity_probe
from .protocol import DeviceModel, VerificationReport, build_cohort, predict_with_confidence, run_verification
from .estimators import PhaseCurve, XiTranscoder

__all__ = [
    "__version__",
    "AlphabetMismatchError",
    "ConstructionError",
    "CoverageError",
    "DeviceError",
    "InsufficientDataError",
    "InvalidWordError",
    "NoPredictionError",
    "NotApplicableError",
    "PhaselabError",
    "ResourceLimitError",
    "UndefinedFractionError",
    "UnsupportedOperationError",
    "Alphabet",
    "Word",
    "alpha_unrank",
    "decode_word",
    "encode_word",
    "enumerate_words",
    "omega_sum",
    "theta_rank",
    "xi_transcode",
    "Builtin",
    "LanguageSpec",
    "Padder",
    "builtin_language",
    "complement",
    "dec",
    "pad",
    "parse_language_token",
    "PreservingIso",
    "build_xi",
    "conjugate_language",
    "transfer_padding",
    "Bijection",
    "FaragoTarget",
    "HeuristicOutcome",
    "b_set",
    "bottom_fraction",
    "build_phi_csb",
    "build_phi_oracle",
    "errorless_heuristic",
    "farago_target",
    "PolySpec",
    "parse_poly",
    "CurveReport",
    "Parameter",
    "SliceStats",
    "Tolerances",
    "accepting_fraction",
    "curve",
    "detect_transition",
    "get_parameter",
    "transfer_parameter",
    "adequacy_audit",
    "chi_bounds",
    "density",
    "naeu_audit",
    "sparsity_probe",
    "DeviceModel",
    "VerificationReport",
    "build_cohort",
    "predict_with_confidence",
    "run_verification",
    "PhaseCurve",
    "XiTranscoder",
]
