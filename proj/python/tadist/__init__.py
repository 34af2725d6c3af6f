"""Exact transportation-annihilation distances on finite metric spaces."""

from ._core import *  # noqa: F401,F403
from ._core import Error, ConfigError, MassError, DomainError, SolverError  # noqa: F401

__version__ = "0.1.0"
