"""Schatten norms, maximal output purity and multiplicativity checks for linear maps."""

from ._core import *  # noqa: F401,F403
from ._core import InputError, ChannelMap  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
