"""Eigenfunction supports and propagators of adjacency operators on locally finite graphs.

Exact certificates over Q, GF(p), number fields and Q(x); walk-count series
and truncated resolvents for complex spectral parameters.
"""

from graphprop.fields import field_make
from graphprop.graph import Graph, ball, gamma2_components, neighbors
from graphprop.zoo import make_graph

__version__ = "0.1.0"

__all__ = ["Graph", "ball", "field_make", "gamma2_components", "make_graph", "neighbors", "__version__"]
