"""awkit: exact computation and construction toolkit for anti-van der Waerden numbers."""

__version__ = "0.1.0"

from .model import (
    APFreeSet,
    Coloring,
    ColoringError,
    Factorization,
    GroupInstance,
    GroupKind,
    Progression,
    SolverOutcome,
    SpecialCertificate,
    canonical_relabel,
    canonicalize,
    color_classes,
    cyclic,
    format_coloring,
    interval,
    parse_coloring,
)

__all__ = [
    "APFreeSet",
    "Coloring",
    "ColoringError",
    "Factorization",
    "GroupInstance",
    "GroupKind",
    "Progression",
    "SolverOutcome",
    "SpecialCertificate",
    "canonical_relabel",
    "canonicalize",
    "color_classes",
    "cyclic",
    "format_coloring",
    "interval",
    "parse_coloring",
    "__version__",
]
