"""Orbits and stabilizers of PL Morse functions on triangulated surfaces."""

from .errors import MorseOrbitsError
from .plmorse import CIRCLE, REAL, MorseData, ScalarField, validate_morse
from .reeb import NodeKind, ReebGraph, build_reeb, detect_type, finalize_morse
from .surface import SurfaceClass, TriSurface, classify_surface, validate_surface

__all__ = [
    "CIRCLE",
    "REAL",
    "MorseData",
    "MorseOrbitsError",
    "NodeKind",
    "ReebGraph",
    "ScalarField",
    "SurfaceClass",
    "TriSurface",
    "build_reeb",
    "classify_surface",
    "detect_type",
    "finalize_morse",
    "validate_morse",
    "validate_surface",
]
