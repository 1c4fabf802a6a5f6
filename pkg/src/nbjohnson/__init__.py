"""Exact verification of the non-binary Johnson scheme J_r(k, n)."""
from .certificate import Certificate, InvariantViolation
from .cli import RunConfig, run
from .scheme import ResourceLimitError, SchemeParams, build_adjacency
from .spectra import SpectralData

__all__ = ["Certificate", "InvariantViolation", "ResourceLimitError", "RunConfig", "SchemeParams",
           "SpectralData", "build_adjacency", "run"]
