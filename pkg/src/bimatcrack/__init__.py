"""Interface cracks between dissimilar elastic half-planes.

Forward and inverse solves for anti-plane (Mode III) and plane-strain
(Modes I and II) loadings, built on half-line singular integral operators
evaluated by a Mellin-transform engine.
"""
from . import fieldops, materials, mode3, oracles, planestrain, specfun
from .materials import MaterialPair, derive_constants, formal_constants

__all__ = ["fieldops", "materials", "mode3", "oracles", "planestrain", "specfun",
           "MaterialPair", "derive_constants", "formal_constants"]
__version__ = "0.1.0"
