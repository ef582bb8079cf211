"""Dirichlet-to-Neumann matrices of quantum graphs and positivity of the semigroups they generate."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
