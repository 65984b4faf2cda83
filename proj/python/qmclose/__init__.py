"""qmclose: degree-truncated computations with quadratic modules."""

from _qmclose import *  # noqa: F401,F403
