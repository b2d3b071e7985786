"""Exact-arithmetic stability tests for polarized del Pezzo surfaces."""

from kstab.errors import DomainError, InvariantError
from kstab.lattice import DivClass, Rational, SurfaceModel, anticanonical, div, rational
from kstab.stability import Verdict, verdict

__version__ = "0.1.0"
