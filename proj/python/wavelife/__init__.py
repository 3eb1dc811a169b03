"""Lifespan of small solutions to u_tt - u_xx = A|u_t|^p|u|^q + B|u|^r in one space dimension."""

from ._core import *  # noqa: F401,F403
from ._core import __all__  # noqa: F401
