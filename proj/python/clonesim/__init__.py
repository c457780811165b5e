"""Phase-covariant 1 -> 2 cloner simulator."""

from ._core import *  # noqa: F401,F403
from ._core import ParameterError, Qubit, run_model

__all__ = ["ParameterError", "Qubit", "run_model"]
