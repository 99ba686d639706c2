"""Normality battery: integrally closed / normal, unimodularity, smoothness,
unimodular-cover falsification, and bounded Caratheodory-rank certificates.

The integrally-closed check decomposes every lattice point of cP for
c = 2 .. max(2, dim-1); that range suffices because the monoid over a lattice
polytope is generated in degrees up to dim-1.  A second, independent route
through the height-one Hilbert basis criterion is kept for cross-checking.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .cones import cone_over, hilbert_basis
from .intlinalg import det, dot, primitive, rank, saturation_basis, vec_sub
from .lattice import LatticePolytope, lambda_reduced, scan_polytope_points
from .limits import guard

Witness = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class NormalityReport:
    integrally_closed: bool
    normal_wrt_lambda: bool
    witness: Witness | None  # (c, z) with z in (cP) not a sum of c points


@dataclass(frozen=True)
class ICPCheck:
    """Bounded integral-Caratheodory verdict for one (r, c_max) pair."""

    r: int
    c_max: int
    holds: bool
    witness: Witness | None


@dataclass(frozen=True)
class CRCertificate:
    lower_bound: int
    upper_bound_checked: tuple[int, int, bool]  # (r, c_max, holds)
    witness: Witness | None
    envelope: tuple[int, int]  # theoretical (dim+1, 2*dim)


# --- integrally closed / normal ----------------------------------------------

def _scaled_points(P: LatticePolytope, c: int):
    return scan_polytope_points(
        [tuple(c * a for a in v) for v in P.local_vertices],
        [(n, c * b) for n, b in P.local_facets],
        P.dim,
    )


def _decomposes(z, c, pts, pts_set, facets, memo):
    """Greedy descent with full backtracking: z = x + (rest in (c-1)P)."""
    if c == 1:
        return z in pts_set
    key = (c, z)
    if key in memo:
        return False
    if c == 2:
        # rest is integral, so the facet test equals lattice membership
        half = tuple(a // 2 for a in z)
        k = len(z)
        for offset in _near_offsets(k):
            x = tuple(h + o for h, o in zip(half, offset))
            if x in pts_set and vec_sub(z, x) in pts_set:
                return True
        for x in pts:
            if vec_sub(z, x) in pts_set:
                return True
        memo.add(key)
        return False
    for x in pts:
        rest = vec_sub(z, x)
        if all(dot(n, rest) >= (c - 1) * b for n, b in facets):
            if _decomposes(rest, c - 1, pts, pts_set, facets, memo):
                return True
    memo.add(key)
    return False


def _near_offsets(k):
    """Offsets around z/2 tried first; tiny fixed neighbourhood."""
    if k == 1:
        return ((0,), (1,))
    if k == 2:
        return ((0, 0), (1, 0), (0, 1), (1, 1))
    from itertools import product

    return tuple(product((0, 1), repeat=k))


def is_integrally_closed(P: LatticePolytope):
    """Degree-bounded decomposition test; returns (flag, ambient witness)."""
    k = P.dim
    if k == 0:
        return True, None
    pts = list(P._local_lattice_points)
    pts_set = set(pts)
    facets = list(P.local_facets)
    memo: set = set()
    for c in range(2, max(2, k - 1) + 1):
        for z in _scaled_points(P, c):
            if not _decomposes(z, c, pts, pts_set, facets, memo):
                return False, (c, P.ambient_at_scale(z, c))
    return True, None


def integrally_closed_via_hilbert(P: LatticePolytope) -> bool:
    """Independent route: P is integrally closed iff Hilb(cone over P) sits
    at height one."""
    if P.dim == 0:
        return True
    hb = hilbert_basis(cone_over(P))
    return all(h[-1] == 1 for h in hb.elements)


def is_normal(P: LatticePolytope):
    """Normality relative to the subgroup generated by P's lattice points.

    Re-coordinatizes by the lambda subgroup, then runs the integrally-closed
    check there; the witness is mapped back to ambient coordinates.
    """
    ic, witness = is_integrally_closed(P)
    if ic:
        return True, None
    Q, to_ambient = lambda_reduced(P)
    ok, wit = is_integrally_closed(Q)
    if ok:
        return True, None
    c, z = wit
    return False, (c, to_ambient(c, z))


def normality_report(P: LatticePolytope) -> NormalityReport:
    ic, witness = is_integrally_closed(P)
    if ic:
        return NormalityReport(True, True, None)
    normal, _ = is_normal(P)
    return NormalityReport(False, normal, witness)


# --- unimodularity and smoothness ----------------------------------------------

def is_unimodular_simplex(P: LatticePolytope) -> bool:
    if len(P.vertices) != P.dim + 1:
        return False
    return P.dim == 0 or P.normalized_volume == 1


def _vertex_edges(P: LatticePolytope, v):
    """Primitive edge directions at a vertex of a full-dimensional polytope."""
    d = P.dim
    out = []
    for w in P.local_vertices:
        if w == v:
            continue
        common = [
            list(n) for n, b in P.local_facets if dot(n, v) == b and dot(n, w) == b
        ]
        if (rank(common) if common else 0) == d - 1:
            out.append(primitive(vec_sub(w, v)))
    return out


def is_smooth(P: LatticePolytope):
    """Every vertex simple with edge directions a basis of Z^d; else offender."""
    if not P.is_full_dimensional:
        raise ValueError("smoothness is defined for full-dimensional polytopes")
    d = P.dim
    for v in P.local_vertices:
        edges = _vertex_edges(P, v)
        if len(edges) != d or abs(det([list(e) for e in edges])) != 1:
            return False, v
    return True, None


# --- unimodular cover falsification ---------------------------------------------

def _unimodular_subsimplices(points, dim):
    """All unimodular simplices (any dimension) with vertices in the point set."""
    from math import comb

    simplices = []
    n = len(points)
    guard(sum(comb(n, m) for m in range(1, dim + 2)), "unimodular simplex enumeration")
    for m in range(1, dim + 2):
        for sub in combinations(points, m):
            if m == 1:
                simplices.append(sub)
                continue
            diffs = [list(vec_sub(p, sub[0])) for p in sub[1:]]
            basis, index = saturation_basis(diffs)
            if len(basis) == m - 1 and index == 1:
                simplices.append(sub)
    return simplices


def _in_simplex(point, verts) -> bool:
    base = verts[0]
    diffs = [vec_sub(v, base) for v in verts[1:]]
    target = [Fraction(a) - b for a, b in zip(point, base)]
    cols = len(diffs)
    d = len(base)
    rows = [[Fraction(diffs[j][i]) for j in range(cols)] + [target[i]] for i in range(d)]
    r = 0
    pivots = []
    for j in range(cols):
        piv = next((i for i in range(r, len(rows)) if rows[i][j]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][j]:
                f = rows[i][j] / rows[r][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(j)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            return False
    lam = [Fraction(0)] * cols
    for i, j in enumerate(pivots):
        lam[j] = rows[i][-1] / rows[i][j]
    return all(l >= 0 for l in lam) and sum(lam) <= 1


def _sample_points(P: LatticePolytope, trials: int, bits=None):
    """Barycenter first, then rational points with denominators 2, 3, 5, 7, ...

    With a bit source, each denominator class contributes a bounded number of
    uniformly drawn members instead of the full lexicographic sweep.
    """
    verts = P.vertices
    n = len(verts)
    bary = tuple(
        Fraction(sum(v[i] for v in verts), n) for i in range(P.ambient_dim)
    )
    seen = {bary}
    yield bary
    if P.dim == 0:
        return
    count = 1
    q = 1
    while count < trials:
        q = _next_prime(q)
        layer = [
            tuple(Fraction(a, q) for a in P.ambient_at_scale(y, q))
            for y in _scaled_points(P, q)
        ]
        if bits is not None and layer:
            chosen = []
            budget = min(len(layer), max(1, trials // 8))
            for _ in range(budget):
                chosen.append(layer[bits.take_uniform(len(layer))])
            layer = chosen
        for pt in layer:
            if pt in seen:
                continue
            seen.add(pt)
            yield pt
            count += 1
            if count >= trials:
                return


def _next_prime(q):
    q += 1
    while any(q % p == 0 for p in range(2, int(q ** 0.5) + 1)):
        q += 1
    return q


def ucp_falsify(P: LatticePolytope, trials: int = 64, bits=None):
    """Search for a rational point of P outside every unimodular subsimplex.

    A returned point certifies that P is not a union of unimodular simplices.
    One-sided: None means nothing was found within the sample budget.
    """
    report = normality_report(P)
    if not report.integrally_closed:
        warnings.warn("ucp_falsify called on a polytope that is not integrally closed")
    pts = P.lattice_points()
    simplices = _unimodular_subsimplices(list(pts), P.dim)
    for sample in _sample_points(P, trials, bits=bits):
        if not any(_in_simplex(sample, s) for s in simplices):
            return sample
    return None


# --- bounded Caratheodory machinery ----------------------------------------------

def _rep_with_support(z, c, r, pts, facets, start, memo):
    """Is (z, c) a nonneg combination of <= r distinct points pts[start:]?"""
    if c == 0:
        return not any(z)
    if r == 0:
        return False
    key = (z, c, r, start)
    if key in memo:
        return False
    for i in range(start, len(pts)):
        x = pts[i]
        for a in range(c, 0, -1):
            rest = tuple(p - a * q for p, q in zip(z, x))
            m = c - a
            if m == 0:
                if not any(rest):
                    return True
                continue
            if all(dot(n, rest) >= m * b for n, b in facets):
                if _rep_with_support(rest, m, r - 1, pts, facets, i + 1, memo):
                    return True
    memo.add(key)
    return False


def icp_check_bounded(P: LatticePolytope, r: int, c_max: int) -> ICPCheck:
    """Check every z in cP (c <= c_max) for a representation with <= r points."""
    ic, _ = is_integrally_closed(P)
    if not ic:
        raise ValueError("bounded Caratheodory checks need an integrally closed input")
    if r < 1 or c_max < 2:
        raise ValueError("need r >= 1 and c_max >= 2")
    pts = list(P._local_lattice_points)
    facets = list(P.local_facets)
    memo: set = set()
    for c in range(2, c_max + 1):
        for z in _scaled_points(P, c):
            if not _rep_with_support(z, c, r, pts, facets, 0, memo):
                return ICPCheck(r, c_max, False, (c, P.ambient_at_scale(z, c)))
    return ICPCheck(r, c_max, True, None)


def caratheodory_bounds(P: LatticePolytope, c_max: int) -> CRCertificate:
    """Certified lower bound for CR(P) from the bounded checks up to c_max.

    The raw result is the least r whose bounded check holds (recorded in
    upper_bound_checked); the reported lower_bound additionally floors at
    dim+1, the unconditional theorem for normal polytopes.  Vertex-rich
    polytopes (e.g. cubes, whose long diagonals pass through the interior)
    can have a raw value below dim+1 at small c_max.
    """
    ic, _ = is_integrally_closed(P)
    if not ic:
        raise ValueError("bounded Caratheodory checks need an integrally closed input")
    pts = list(P._local_lattice_points)
    facets = list(P.local_facets)
    best = 1
    witness = None
    for c in range(2, c_max + 1):
        for z in _scaled_points(P, c):
            memo: set = set()
            while not _rep_with_support(z, c, best, pts, facets, 0, memo):
                witness = (c, P.ambient_at_scale(z, c))
                best += 1
                memo = set()
                if best > len(pts):
                    raise AssertionError("no representation found at full support")
    return CRCertificate(
        lower_bound=max(best, P.dim + 1),
        upper_bound_checked=(best, c_max, True),
        witness=witness,
        envelope=(P.dim + 1, 2 * P.dim),
    )
