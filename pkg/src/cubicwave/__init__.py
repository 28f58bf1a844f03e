"""Time-periodic solutions of a cubic wave equation on ``[0, pi]``.

Exact Poincare-Lindstedt expansion (:mod:`.resonant`) on top of exact
trigonometric polynomials (:mod:`.trigpoly`), with numerical cross-checks
from the one-mode Duffing reduction (:mod:`.duffing`) and a sine-spectral
simulator (:mod:`.pdesim`).
"""

from .trigpoly import TrigPoly, duhamel
from .resonant import EngineConfig, PerturbativeState, expand

__version__ = "0.1.0"

__all__ = ["TrigPoly", "duhamel", "EngineConfig", "PerturbativeState", "expand"]
