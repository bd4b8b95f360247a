"""Exact chain-complex machinery over F2 and the quantum CSS codes it yields."""

from __future__ import annotations

__version__ = "0.1.0"

from .complex import HAMMING, NORMALIZED, TOPCELL, BasedComplex, Cochain, from_facets, from_simplices
from .errors import BudgetExceeded, CosyxError, InputError, ValidationError
from .tensor import tensor, tensor_power

__all__ = [
    "HAMMING",
    "NORMALIZED",
    "TOPCELL",
    "BasedComplex",
    "Cochain",
    "from_facets",
    "from_simplices",
    "BudgetExceeded",
    "CosyxError",
    "InputError",
    "ValidationError",
    "tensor",
    "tensor_power",
    "__version__",
]
