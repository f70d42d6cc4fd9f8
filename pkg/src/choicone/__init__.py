"""Choi matrices, bilinear dualities and Schmidt-number cones for maps between matrix algebras."""

from .errors import *  # noqa: F401,F403
from .matlin import DEFAULT_TOL, Side, TensorMatrix, ToleranceProfile
from .mapspace import LinearMap
from .transforms import SuperOp, TransformSpec
from .cones import Certificate, ConeId, Family, Verdict

__version__ = "0.1.0"
