"""Euler tours computed by a bounded-memory multipass stream pipeline."""

import json
from dataclasses import dataclass

from ._core import (
    Graph,
    IntegrityFault,
    NotEulerian,
    gen_eulerian,
    hierholzer,
    is_eulerian,
    perturb,
    read_graph,
    validate_tour,
    write_graph,
)
from ._core import solve_raw as _solve_raw

__all__ = [
    "Graph",
    "IntegrityFault",
    "NotEulerian",
    "Solution",
    "gen_eulerian",
    "hierholzer",
    "is_eulerian",
    "perturb",
    "read_graph",
    "solve",
    "validate_tour",
    "write_graph",
]


@dataclass
class Solution:
    tour: list
    stats: dict


def solve(graph, fidelity_relabel=False):
    """Euler tour of `graph` plus the pass statistics.

    Raises NotEulerian (with a `reason` attribute) when no tour exists.
    """
    tour, stats = _solve_raw(graph, fidelity_relabel)
    return Solution(tour=tour, stats=json.loads(stats))
