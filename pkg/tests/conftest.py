from __future__ import annotations

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from normwalk.lattice import LatticePolytope, convex_hull


def random_lattice_polytope(
    rng: random.Random, dim: int, lo: int, hi: int, n_points: int,
    full_dim: bool = True,
) -> LatticePolytope:
    """Hull of random integer points, resampled until full-dimensional."""
    while True:
        pts = [
            tuple(rng.randint(lo, hi) for _ in range(dim)) for _ in range(n_points)
        ]
        P = convex_hull(pts)
        if not full_dim or P.dim == dim:
            return P


def unit_cube(d: int) -> LatticePolytope:
    from itertools import product

    return convex_hull(list(product((0, 1), repeat=d)))


def unit_square() -> LatticePolytope:
    return convex_hull([(0, 0), (1, 0), (0, 1), (1, 1)])


def unimodular_triangle() -> LatticePolytope:
    return convex_hull([(0, 0), (1, 0), (0, 1)])


def empty_simplex_q2() -> LatticePolytope:
    """conv(0, e1, e2, (1,1,2)): normal w.r.t. its own lattice, not integrally closed."""
    return convex_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 2)])
