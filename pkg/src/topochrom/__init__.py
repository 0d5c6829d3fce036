"""Graph families around stable Kneser graphs and generalized Mycielskians,
their explicit colorings and homomorphisms, exact coloring invariants
(chromatic, local chromatic, fractional, circular), and sampled
certification of the companion sphere-cover constructions."""

__version__ = "0.1.0"

from .core import Coloring, Graph, is_proper, is_s_wide, local_profile, walk_reachability

__all__ = [
    "__version__",
    "Graph",
    "Coloring",
    "is_proper",
    "is_s_wide",
    "local_profile",
    "walk_reachability",
]
