"""Pointed rational cones, Hilbert bases, homogenization, cone extension steps.

Two Hilbert basis routes exist on purpose: cones obtained by homogenizing a
lattice polytope use graded enumeration up to the dimension-dependent degree
bound, everything else goes through simplicial subdivision plus parallelepiped
points.  Tests cross-check the routes against each other and against a
brute-force oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import hull
from .intlinalg import dot, primitive, rank, saturation_basis, vec_sub
from .lattice import Chart, LatticePolytope, convex_hull, scan_polytope_points
from .limits import guard
from .ratlp import positive_functional

Point = tuple[int, ...]


class RationalCone:
    """Finitely generated rational cone; construct via cone() or cone_over()."""

    def __init__(self, rays, ambient_dim, dim, chart, local_rays, local_facets,
                 pointed, base_polytope=None):
        self.rays: tuple[Point, ...] = tuple(sorted(rays))
        self.ambient_dim = ambient_dim
        self.dim = dim
        self._chart: Chart | None = chart
        self.local_rays = tuple(sorted(local_rays))
        self.local_facets = tuple(local_facets)
        self.pointed = pointed
        self._base_polytope: LatticePolytope | None = base_polytope

    @property
    def generators(self) -> tuple[Point, ...]:
        return self.rays

    def __eq__(self, other):
        return (
            isinstance(other, RationalCone)
            and self.ambient_dim == other.ambient_dim
            and self.rays == other.rays
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.rays))

    def __repr__(self):
        return f"RationalCone(dim={self.dim}, rays={list(self.rays)})"

    def to_local(self, x):
        return x if self._chart is None else self._chart.to_local(x)

    def to_ambient(self, y):
        return y if self._chart is None else self._chart.to_ambient(y)

    def contains(self, x) -> bool:
        """Exact membership for integer or rational points."""
        if self._chart is None:
            y = tuple(x)
        else:
            y = _linear_local(self._chart, x)
            if y is None:
                return False
        return all(dot(n, y) >= 0 for n, _ in self.local_facets)


def _linear_local(chart: Chart, x):
    from .intlinalg import vec_mat

    y = vec_mat(tuple(Fraction(a) for a in x), chart.T)
    recon = [Fraction(0)] * len(chart.base)
    for yi, row in zip(y, chart.rows):
        for j, a in enumerate(row):
            recon[j] += yi * a
    if tuple(recon) != tuple(Fraction(a) for a in x):
        return None
    return y


def cone(generators, ambient_dim=None) -> RationalCone:
    """Cone spanned by integer generators; reduces them to extreme rays."""
    gens = [tuple(int(a) for a in g) for g in generators]
    gens = [primitive(g) for g in gens if any(g)]
    gens = list(dict.fromkeys(gens))
    if ambient_dim is None:
        if not gens:
            raise ValueError("ambient dimension required for the zero cone")
        ambient_dim = len(gens[0])
    if any(len(g) != ambient_dim for g in gens):
        raise ValueError("dimension mismatch among generators")
    if not gens:
        return RationalCone([], ambient_dim, 0, Chart((0,) * ambient_dim, []),
                            [], [], pointed=True)
    k = rank([list(g) for g in gens])
    if k == ambient_dim:
        chart = None
        local = gens
    else:
        basis, _ = saturation_basis([list(g) for g in gens])
        chart = Chart((0,) * ambient_dim, basis)
        local = [chart.to_local(g) for g in gens]
        for g, y in zip(gens, local):
            if chart.to_ambient(y) != g:
                raise AssertionError("cone chart failed to round-trip a generator")
    _, qfacets = hull.hull_structure(local + [(0,) * k], k)
    facets = [(n, b) for n, b in qfacets if b == 0]
    pointed = rank([list(n) for n, _ in facets]) == k if facets else k == 0
    local_rays = []
    for g in local:
        active = [list(n) for n, b in facets if dot(n, g) == 0]
        if (rank(active) if active else 0) == k - 1:
            local_rays.append(g)
    local_rays = sorted(set(local_rays))
    rays = local_rays if chart is None else [chart.to_ambient(y) for y in local_rays]
    return RationalCone(rays, ambient_dim, k, chart, local_rays, facets, pointed)


def cone_over(P: LatticePolytope) -> RationalCone:
    """Homogenization: the cone spanned by (v, 1) over the vertices of P."""
    gens = [v + (1,) for v in P.vertices]
    C = cone(gens, P.ambient_dim + 1)
    C._base_polytope = P
    return C


@dataclass(frozen=True)
class HilbertBasis:
    """Unique minimal generating set of C ∩ Z^d, lexicographically sorted."""

    elements: tuple[Point, ...]
    degrees: tuple[int, ...] | None = None

    def __len__(self):
        return len(self.elements)


def hilbert_basis(C: RationalCone) -> HilbertBasis:
    if not C.pointed:
        raise ValueError("Hilbert basis requires a pointed cone")
    if C.dim == 0:
        return HilbertBasis(elements=())
    if C._base_polytope is not None:
        return _hilbert_graded(C)
    return _hilbert_subdivision(C)


def _hilbert_graded(C: RationalCone) -> HilbertBasis:
    """Graded route for homogenized polytopes.

    Candidates are the lattice points of c*P for c up to max(1, dim P - 1),
    the degree bound for cones over lattice polytopes; a candidate at height c
    is irreducible when no lower graded piece splits off inside the cone.
    """
    P = C._base_polytope
    p = P.dim
    bound = max(1, p - 1)
    layers = {}
    for c in range(1, bound + 1):
        layers[c] = [
            tuple(y) for y in scan_polytope_points(
                [tuple(c * a for a in v) for v in P.local_vertices],
                [(n, c * b) for n, b in P.local_facets],
                p,
            )
        ]
    def in_scaled(y, m):
        return all(dot(n, y) >= m * b for n, b in P.local_facets)

    out = []
    for c in range(1, bound + 1):
        for y in layers[c]:
            reducible = False
            for c1 in range(1, c):
                rest = c - c1
                for w in layers[c1]:
                    diff = vec_sub(y, w)
                    if in_scaled(diff, rest):
                        reducible = True
                        break
                if reducible:
                    break
            if not reducible:
                out.append((P.ambient_at_scale(y, c) + (c,), c))
    out.sort()
    return HilbertBasis(
        elements=tuple(e for e, _ in out), degrees=tuple(c for _, c in out)
    )


def _hilbert_subdivision(C: RationalCone) -> HilbertBasis:
    """General route: simplicial subdivision + fundamental parallelepipeds."""
    k = C.dim
    candidates = set(C.local_rays)
    for simplex in _triangulate_cone(list(C.local_rays), list(C.local_facets), k):
        candidates.update(_parallelepiped_points(simplex, k))
    candidates.discard((0,) * k)

    def in_cone(y):
        return all(dot(n, y) >= 0 for n, _ in C.local_facets)

    basis = []
    cands = sorted(candidates)
    for h in cands:
        reducible = False
        for g in cands:
            if g == h:
                continue
            diff = vec_sub(h, g)
            # g + (h - g) = h with both parts nonzero points of the monoid
            if any(diff) and in_cone(diff):
                reducible = True
                break
        if not reducible:
            basis.append(h)
    elements = sorted(
        basis if C._chart is None else [C._chart.to_ambient(y) for y in basis]
    )
    return HilbertBasis(elements=tuple(elements))


def _triangulate_cone(rays, facets, k):
    """Cover a pointed full-dimensional cone by simplicial subcones."""
    if k == 0:
        return []
    if k == 1 or len(rays) == k:
        return [tuple(rays)]
    r0 = rays[0]
    out = []
    for n, _b in facets:
        if dot(n, r0) == 0:
            continue
        frays = [r for r in rays if dot(n, r) == 0]
        drop = max(range(k), key=lambda j: abs(n[j]))
        proj = {tuple(r[j] for j in range(k) if j != drop): r for r in frays}
        sub_rays = sorted(proj)
        _, sub_qfacets = hull.hull_structure(sub_rays + [(0,) * (k - 1)], k - 1)
        sub_facets = [(m, b) for m, b in sub_qfacets if b == 0]
        for simplex in _triangulate_cone(sub_rays, sub_facets, k - 1):
            out.append(tuple(proj[q] for q in simplex) + (r0,))
    return out


def _parallelepiped_points(ray_simplex, k):
    """Integer points of {sum mu_i s_i : 0 <= mu_i < 1} by box scan."""
    lo = tuple(sum(min(0, s[j]) for s in ray_simplex) for j in range(k))
    hi = tuple(sum(max(0, s[j]) for s in ray_simplex) for j in range(k))
    size = 1
    for a, b in zip(lo, hi):
        size *= b - a + 1
    guard(size, "parallelepiped scan")
    cols = [[Fraction(s[j]) for s in ray_simplex] for j in range(k)]
    out = []

    def coefficients(z):
        rows = [cols[i] + [Fraction(z[i])] for i in range(k)]
        for col in range(k):
            piv = next((i for i in range(col, k) if rows[i][col]), None)
            if piv is None:
                return None
            rows[col], rows[piv] = rows[piv], rows[col]
            for i in range(k):
                if i != col and rows[i][col]:
                    f = rows[i][col] / rows[col][col]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[col])]
        return [rows[i][k] / rows[i][i] for i in range(k)]

    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]

    def rec(i, point):
        if i == k:
            mu = coefficients(point)
            if mu is not None and all(0 <= m < 1 for m in mu):
                out.append(tuple(point))
            return
        for v in ranges[i]:
            rec(i + 1, point + [v])

    rec(0, [])
    return out


def is_homogeneous(C: RationalCone):
    """True iff Hilb(C) lies on an affine hyperplane missing the origin.

    Returns (flag, witness): the witness is a rational vector a with
    <a, h> = 1 for every Hilbert basis element when the flag is True.
    """
    hb = hilbert_basis(C)
    if not hb.elements:
        return True, ()
    d = C.ambient_dim
    rows = [[Fraction(a) for a in h] + [Fraction(1)] for h in hb.elements]
    r = 0
    pivots = []
    for j in range(d):
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
        if rows[i][d] != 0:
            return False, None
    witness = [Fraction(0)] * d
    for i, j in enumerate(pivots):
        witness[j] = rows[i][d] / rows[i][j]
    return True, tuple(witness)


@dataclass(frozen=True)
class MonoidMembership:
    member: bool
    coefficients: tuple[int, ...] | None
    search_bound: int


def monoid_member(z, gens) -> MonoidMembership:
    """Decide z ∈ Z_{>=0} g_1 + ... + Z_{>=0} g_m with a certificate.

    Nonnegative integer feasibility by depth-first search, bounded through a
    strictly positive rational functional on the generators; absence is
    certified by exhaustion of that bounded space.
    """
    gens = [tuple(int(a) for a in g) for g in gens]
    z = tuple(int(a) for a in z)
    if any(len(g) != len(z) for g in gens):
        raise ValueError("dimension mismatch between target and generators")
    nonzero = [g for g in gens if any(g)]
    if not any(z):
        return MonoidMembership(True, tuple(0 for _ in gens), 0)
    if not nonzero:
        return MonoidMembership(False, None, 0)
    w = positive_functional(nonzero)
    if w is None:
        raise ValueError(
            "generators are not contained in an open half-space; "
            "membership search would be unbounded"
        )
    wz = dot(w, z)
    if wz < 0:
        return MonoidMembership(False, None, 0)
    bound = int(wz)  # every unit of weight costs at least 1 under w
    order = sorted(range(len(gens)), key=lambda i: -dot(w, gens[i]))
    failed: set[tuple] = set()

    def search(res, idx):
        if all(a == 0 for a in res):
            return {}
        if idx == len(order):
            return None
        key = (res, idx)
        if key in failed:
            return None
        g = gens[order[idx]]
        if not any(g):
            result = search(res, idx + 1)
            if result is None:
                failed.add(key)
            return result
        wg = dot(w, g)
        amax = int(dot(w, res) / wg) if wg > 0 else 0
        for a in range(amax, -1, -1):
            nxt = tuple(r - a * gg for r, gg in zip(res, g))
            if dot(w, nxt) < 0:
                continue
            result = search(nxt, idx + 1)
            if result is not None:
                if a:
                    result[order[idx]] = a
                return result
        failed.add(key)
        return None

    found = search(z, 0)
    if found is None:
        return MonoidMembership(False, None, bound)
    coeffs = tuple(found.get(i, 0) for i in range(len(gens)))
    recon = tuple(
        sum(c * g[j] for c, g in zip(coeffs, gens)) for j in range(len(z))
    )
    if recon != z:
        raise AssertionError("membership certificate failed to reconstruct z")
    return MonoidMembership(True, coeffs, bound)


def is_cone_extension(D: RationalCone, C: RationalCone, x) -> bool:
    """True iff C ∩ Z^d = (D ∩ Z^d) + Z_{>=0} x, for D ⊆ C and x ∈ C \\ D.

    Sufficient and necessary to check the Hilbert basis elements of C, since
    they generate the bigger monoid and the right side is itself a monoid.
    """
    x = tuple(int(a) for a in x)
    if not all(C.contains(g) for g in D.rays):
        raise ValueError("D is not contained in C")
    if not C.contains(x):
        raise ValueError("x must lie in C")
    if D.contains(x):
        raise ValueError("x must lie outside D")
    w = positive_functional(list(C.local_rays))
    if w is None:
        raise ValueError("C must be pointed")
    wx = dot(w, C.to_local(x))
    for h in hilbert_basis(C).elements:
        wh = dot(w, C.to_local(h))
        t = 0
        ok = False
        while t * wx <= wh:
            rest = tuple(a - t * b for a, b in zip(h, x))
            if D.contains(rest):
                ok = True
                break
            t += 1
        if not ok:
            return False
    return True
