"""subdivlab: bipartite subdivision detection, regularization certificates,
probabilistic lower-bound constructions, and incidence-geometry experiments.
"""

from .bigraph import Bigraph
from .patterns import Embedding, SubdividedPattern, find_embedding

__version__ = "0.1.0"

__all__ = [
    "Bigraph",
    "SubdividedPattern",
    "Embedding",
    "find_embedding",
    "__version__",
]
