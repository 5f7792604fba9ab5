"""Exact computations with Sullivan and Quillen models of self-map spaces.

Derivation complexes and their nilradicals, Chevalley-Eilenberg cohomology,
Massey products, finite-group invariants and modular-form Poincare series.
"""

from .errors import (InvalidInput, LieModelsError, ParseError, PreconditionError,
                     UnsupportedCase, VerificationError, WindowError)
from .models import ModelPresentation, build_model, load_model, model_from_json, model_to_json

__version__ = "0.1.0"

__all__ = [
    "LieModelsError", "InvalidInput", "ParseError", "PreconditionError", "UnsupportedCase",
    "WindowError", "VerificationError", "ModelPresentation", "build_model", "load_model",
    "model_from_json", "model_to_json", "__version__",
]
