"""linklab: random planar link diagrams, their shadows and their tangles."""

from . import census, cmap, diagram, sampler, stats, tangle
from .cmap import RootedMap
from .diagram import LinkDiagram
from .errors import LinkLabError
from .sampler import RandomStream
from .tangle import BoundedQuadrangulation

__version__ = "0.1.0"

__all__ = ["census", "cmap", "diagram", "sampler", "stats", "tangle", "RootedMap",
           "LinkDiagram", "LinkLabError", "RandomStream", "BoundedQuadrangulation"]
