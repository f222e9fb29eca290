"""Determinantal varieties over F_p: Hilbert-Burch models, secant loci and
presentations of blow-up images."""

from .algebra import DEFAULT_PRIME, Form, FormMatrix
from .graded import BettiTable, CapExceeded, GradedIdeal
from .hilburch import DegenerateError, DegreeMatrix, HilbertBurchMatrix, Line, analyze, sample_generic

__all__ = [
    "DEFAULT_PRIME", "Form", "FormMatrix", "BettiTable", "CapExceeded", "GradedIdeal",
    "DegenerateError", "DegreeMatrix", "HilbertBurchMatrix", "Line", "analyze", "sample_generic",
]
__version__ = "0.1.0"
