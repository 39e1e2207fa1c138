"""Fractional clique decompositions of dense balanced multipartite graphs."""

from .graph_core import (
    MultipartiteGraph,
    PartiteStructure,
    check_admissible,
    generate_admissible_instance,
    make_complete,
    threshold_c,
)
from .solver import decompose

__all__ = [
    "MultipartiteGraph",
    "PartiteStructure",
    "check_admissible",
    "decompose",
    "generate_admissible_instance",
    "make_complete",
    "threshold_c",
]
