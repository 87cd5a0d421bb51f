"""Discrepancy bounds for random double-infinite matrices."""
from .constants import *  # noqa: F401,F403
from .covers import *  # noqa: F401,F403
from .discrepancy import *  # noqa: F401,F403
from .errors import BudgetExceededError, DomainError, PrecisionError
from .harness import *  # noqa: F401,F403
from .kernels import BACKEND
from .matrix import *  # noqa: F401,F403
from .zeta import zeta, zeta_inv, zeta_with_error

from . import constants, covers, discrepancy, harness, matrix

__version__ = "0.1.0"

__all__ = (
    constants.__all__
    + covers.__all__
    + discrepancy.__all__
    + harness.__all__
    + matrix.__all__
    + ["zeta", "zeta_inv", "zeta_with_error", "BACKEND", "DomainError", "BudgetExceededError", "PrecisionError"]
)
