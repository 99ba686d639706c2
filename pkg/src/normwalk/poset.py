"""Quantum jumps, distance strata, walks, and desk-scale atlases.

A jump (P, z) adds one lattice point z to an integrally closed full-dimensional
polytope so that the hull stays integrally closed.  Candidate points live on
the strata at lattice distance 1 .. 1+(d-2)*width(P); the bound makes the
enumeration complete, hence maximality is decidable.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, floor

from . import homology, hull
from .intlinalg import dot, vec_sub
from .lattice import LatticePolytope, convex_hull
from .limits import guard
from .normality import is_integrally_closed

Point = tuple[int, ...]


@dataclass(frozen=True)
class Jump:
    """One quantum jump: target = conv(base ∪ {point}) gains exactly point."""

    base: LatticePolytope
    point: Point
    target: LatticePolytope
    height: int
    volume: int


def _require_full_dim(P: LatticePolytope, what: str):
    if not P.is_full_dimensional:
        raise ValueError(f"{what} needs a full-dimensional polytope")


def _require_ic(P: LatticePolytope, what: str):
    ok, _ = is_integrally_closed(P)
    if not ok:
        raise ValueError(f"{what} needs an integrally closed polytope")


def distance_strata(P: LatticePolytope, jmax: int):
    """Lattice points at distance 1..jmax from P, keyed by the distance.

    The stratum of z is -min_i(<u_i, z> - b_i) over the (primitive, inward)
    facet normals; the scan box is the vertex box of the fully relaxed
    polytope, so each stratum is complete.
    """
    _require_full_dim(P, "distance stratification")
    if jmax < 1:
        raise ValueError("strata start at distance 1")
    d = P.ambient_dim
    relaxed = [(n, b - jmax) for n, b in P.local_facets]
    corners = hull.vertices_from_facets(relaxed, d)
    if not corners:
        raise AssertionError("relaxed polytope has no vertices")
    lo = [floor(min(v[i] for v in corners)) for i in range(d)]
    hi = [ceil(max(v[i] for v in corners)) for i in range(d)]
    size = 1
    for a, b in zip(lo, hi):
        size *= b - a + 1
    guard(size, "distance strata scan")
    strata: dict[int, list[Point]] = {j: [] for j in range(1, jmax + 1)}
    facets = list(P.local_facets)
    for z in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        residual = min(dot(n, z) - b for n, b in facets)
        if -jmax <= residual <= -1:
            strata[-residual].append(z)
    return {j: sorted(pts) for j, pts in strata.items()}


def points_at_distance(P: LatticePolytope, j: int):
    """The stratum of lattice points at distance exactly j from P."""
    if j < 1:
        raise ValueError("distance must be a positive integer")
    return tuple(distance_strata(P, j)[j])


def height_bound(P: LatticePolytope) -> int:
    """Completeness bound for jump heights: max(1, 1 + (d-2)*width)."""
    d = P.dim
    return max(1, 1 + (d - 2) * P.facet_width)


def _jump_candidates(P: LatticePolytope):
    strata = distance_strata(P, height_bound(P))
    for j in sorted(strata):
        for z in strata[j]:
            yield j, z


def _swallows_segment_point(P: LatticePolytope, z: Point, base_points: set):
    """Cheap filter: a lattice point strictly between z and a vertex of P that
    is not already in P would be gained alongside z."""
    from math import gcd

    for v in P.vertices:
        diff = vec_sub(v, z)
        g = 0
        for a in diff:
            g = gcd(g, a)
        for t in range(1, g):
            w = tuple(zc + a * t // g for zc, a in zip(z, diff))
            if w not in base_points:
                return True
    return False


def _try_jump(P: LatticePolytope, z: Point, j: int, n_base: int, base_points: set):
    if _swallows_segment_point(P, z, base_points):
        return None
    Q = convex_hull(list(P.vertices) + [z])
    if Q.n_lattice_points != n_base + 1:
        return None
    ok, _ = is_integrally_closed(Q)
    if not ok:
        return None
    return Jump(
        base=P,
        point=z,
        target=Q,
        height=j,
        volume=Q.normalized_volume - P.normalized_volume,
    )


def enumerate_jumps_up(P: LatticePolytope):
    """All quantum jumps out of P, sorted by the added point.

    Complete: every candidate within the height bound is tested.
    """
    _require_full_dim(P, "jump enumeration")
    _require_ic(P, "jump enumeration")
    n_base = P.n_lattice_points
    base_points = set(P.lattice_points())
    jumps = []
    for j, z in _jump_candidates(P):
        jump = _try_jump(P, z, j, n_base, base_points)
        if jump is not None:
            jumps.append(jump)
    return tuple(sorted(jumps, key=lambda jp: jp.point))


def _pyramid_apex_height(Q: LatticePolytope, P: LatticePolytope, z: Point):
    """Lattice height of z over aff(P), measured inside Q's local model."""
    pverts = [Q.to_local(v) for v in P.vertices]
    zloc = Q.to_local(z)
    if Q.dim == 1:
        return abs(zloc[0] - pverts[0][0])
    _, dirs = hull.independent_directions(pverts)
    w = hull.hyperplane_normal(dirs)
    if w is None:
        raise AssertionError("degenerate pyramid base")
    return abs(dot(w, zloc) - dot(w, pverts[0]))


def enumerate_jumps_down(Q: LatticePolytope):
    """All (P, z) with P = conv(Q's lattice points minus z) one point below Q.

    Covers both same-dimension shrinkings and the removal of a unimodular
    pyramid apex (dimension drops by one).
    """
    _require_ic(Q, "downward jump enumeration")
    pts = Q.lattice_points()
    out = []
    for z in Q.vertices:
        rest = [p for p in pts if p != z]
        if not rest:
            continue
        P = convex_hull(rest)
        if P.contains(z):
            continue
        if P.dim == Q.dim - 1:
            if _pyramid_apex_height(Q, P, z) != 1:
                continue
        elif P.dim != Q.dim:
            continue
        ok, _ = is_integrally_closed(P)
        if ok:
            out.append((P, z))
    return tuple(out)


def is_minimal(Q: LatticePolytope) -> bool:
    return not enumerate_jumps_down(Q)


def is_maximal(P: LatticePolytope) -> bool:
    """No jump leaves P.  Lower-dimensional polytopes are never maximal:
    a unimodular pyramid over a normal polytope is normal."""
    _require_ic(P, "maximality")
    if not P.is_full_dimensional:
        return False
    n_base = P.n_lattice_points
    base_points = set(P.lattice_points())
    for j, z in _jump_candidates(P):
        if _try_jump(P, z, j, n_base, base_points) is not None:
            return False
    return True


@dataclass
class WalkTrace:
    chain: list[LatticePolytope]
    jumps: list[Jump]
    terminated_reason: str  # maximal_reached | step_budget | user_stop

    def volumes(self, include_initial: bool = False):
        polys = self.chain if include_initial else self.chain[1:]
        return tuple(p.normalized_volume for p in polys)

    def zeta_partial(self, s: int = 1, include_initial: bool = False) -> Fraction:
        """Partial sum of vol(P_i)^{-s}; both start conventions supported."""
        return sum(
            (Fraction(1, v ** s) for v in self.volumes(include_initial)),
            Fraction(0),
        )


def walk(
    P0: LatticePolytope,
    strategy: str = "greedy_volume",
    budget: int = 10,
    bits=None,
    should_stop=None,
) -> WalkTrace:
    """Ascend through quantum jumps, greedily by volume or uniformly at random.

    Greedy takes the maximal-volume jump, ties broken by lexicographically
    least added point; random draws uniformly through the supplied bit source,
    so identical bit files replay identical walks.
    """
    if budget < 1:
        raise ValueError("walk budget must be positive")
    if strategy not in ("greedy_volume", "random"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "random" and bits is None:
        raise ValueError("random walks need a bit source")
    chain = [P0]
    jumps: list[Jump] = []
    reason = "step_budget"
    for _ in range(budget):
        options = enumerate_jumps_up(chain[-1])
        if not options:
            reason = "maximal_reached"
            break
        if strategy == "greedy_volume":
            best_volume = max(j.volume for j in options)
            chosen = next(j for j in options if j.volume == best_volume)
        else:
            chosen = options[bits.take_uniform(len(options))]
        jumps.append(chosen)
        chain.append(chosen.target)
        if should_stop is not None and should_stop(chain):
            reason = "user_stop"
            break
    return WalkTrace(chain=chain, jumps=jumps, terminated_reason=reason)


# --- atlas --------------------------------------------------------------------

@dataclass
class Atlas:
    elements: list[LatticePolytope]
    hasse_edges: list[tuple[int, int]]
    betti: list[int]
    torsion: list[tuple[int, ...]] = field(default_factory=list)
    fingerprint_counts: Counter = field(default_factory=Counter)


def build_atlas(d: int, box_radius: int, max_simplices: int | None = None) -> Atlas:
    """Every integrally closed polytope with vertices in [0, box_radius]^d,
    the elementary relations among them, and the order-complex homology."""
    if d < 1 or box_radius < 1:
        raise ValueError("need dimension and radius at least 1")
    box = list(product(range(box_radius + 1), repeat=d))
    guard(2 ** len(box), "atlas vertex-set enumeration")
    seen: dict[tuple, LatticePolytope] = {}
    n_box = len(box)
    for mask in range(1, 2 ** n_box):
        subset = [box[i] for i in range(n_box) if mask >> i & 1]
        P = convex_hull(subset)
        if P.vertices not in seen and len(P.vertices) == len(subset):
            seen[P.vertices] = P
    elements = []
    for P in seen.values():
        ok, _ = is_integrally_closed(P)
        if ok:
            elements.append(P)
    elements.sort(key=lambda p: (p.n_lattice_points, p.vertices))
    index = {p.vertices: i for i, p in enumerate(elements)}
    edges = []
    for qi, Q in enumerate(elements):
        for P, _z in enumerate_jumps_down(Q):
            edges.append((index[P.vertices], qi))
    edges.sort()
    chains = homology.order_complex_chains(len(elements), edges, max_simplices)
    betti, torsion = homology.betti_numbers(chains)
    return Atlas(
        elements=elements,
        hasse_edges=edges,
        betti=betti,
        torsion=list(torsion),
        fingerprint_counts=Counter(p.fingerprint() for p in elements),
    )


# --- pluggable homotopy-model map (declared, externally supplied) ---------------

_embed_map_impl = None


def register_embed_map(fn) -> None:
    """Install an external map from cones/polytopes to points of R^d."""
    global _embed_map_impl
    _embed_map_impl = fn


def embed_map(obj):
    """Interface stub for the external homotopy-model map; unimplemented here."""
    if _embed_map_impl is None:
        raise NotImplementedError(
            "no embedding map registered; provide one via register_embed_map"
        )
    return _embed_map_impl(obj)
