"""Hyperbolic random graphs, effective resistances, unit flows and random walks."""

from hyperwalk._core import *  # noqa: F401,F403
from hyperwalk._core import __doc__  # noqa: F401
