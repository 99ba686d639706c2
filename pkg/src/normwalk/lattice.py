"""Lattice polytopes with exact integer arithmetic.

A LatticePolytope is stored through a full-dimensional local model: points are
mapped into Z^k (k = affine dimension) via a basis of the *saturated* lattice
(Z^d intersected with the linear span of the polytope), so lattice point
enumeration, volumes and widths computed locally agree with the induced
lattice of the ambient space.  Full-dimensional polytopes skip the chart
entirely.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import hull
from .intlinalg import (
    dot,
    gcd_vector,
    kernel_basis,
    mat_vec,
    primitive,
    row_lattice_basis,
    saturation_basis,
    smith_normal_form,
    solve_integer,
    vec_mat,
    vec_sub,
)
from .limits import guard

Point = tuple[int, ...]


class Chart:
    """Affine chart x -> (x - base) expressed in a saturated lattice basis.

    rows is an r x d integer matrix whose rows form a basis of
    Z^d ∩ span(P - base); T is an integer right-inverse so that local
    coordinates are (x - base) @ T.
    """

    def __init__(self, base: Point, rows: list[Point]):
        self.base = base
        self.rows = [tuple(r) for r in rows]
        f = smith_normal_form(self.rows)
        r = len(self.rows)
        d = len(base)
        if f.diagonal != tuple([1] * r):
            raise ValueError("chart basis is not saturated")
        # T = V [I_r; 0] U  gives  y = (x - base) @ T  with  y @ rows = x - base
        mid = [[f.U[i][j] if i < r else 0 for j in range(r)] for i in range(d)]
        self.T = [
            tuple(sum(f.V[i][k] * mid[k][j] for k in range(d)) for j in range(r))
            for i in range(d)
        ]

    def to_local(self, x: Point) -> Point:
        return vec_mat(vec_sub(x, self.base), self.T)

    def to_ambient(self, y: Point) -> Point:
        out = list(self.base)
        for yi, row in zip(y, self.rows):
            for j, a in enumerate(row):
                out[j] += yi * a
        return tuple(out)


@dataclass(frozen=True)
class AffineSublattice:
    """Subgroup of Z^d given by a reduced (HNF) basis and its saturation index."""

    basis: tuple[Point, ...]
    index: int

    @property
    def rank(self) -> int:
        return len(self.basis)


class LatticePolytope:
    """Convex hull of finitely many points of Z^d; construct via convex_hull."""

    def __init__(self, vertices, ambient_dim, dim, chart, local_vertices, local_facets):
        self.vertices: tuple[Point, ...] = tuple(sorted(tuple(v) for v in vertices))
        self.ambient_dim: int = ambient_dim
        self.dim: int = dim
        self._chart: Chart | None = chart
        self._local_vertices: tuple[Point, ...] = tuple(sorted(local_vertices))
        self._local_facets = tuple(local_facets)

    def __eq__(self, other):
        return (
            isinstance(other, LatticePolytope)
            and self.ambient_dim == other.ambient_dim
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self):
        return f"LatticePolytope(dim={self.dim}, vertices={list(self.vertices)})"

    # -- representation ------------------------------------------------------

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @property
    def local_vertices(self) -> tuple[Point, ...]:
        return self._local_vertices

    @property
    def local_facets(self):
        """Facets of the full-dimensional local model: (normal, offset) pairs."""
        return self._local_facets

    def to_local(self, x: Point) -> Point:
        return x if self._chart is None else self._chart.to_local(x)

    def to_ambient(self, y: Point) -> Point:
        return y if self._chart is None else self._chart.to_ambient(y)

    def ambient_at_scale(self, y: Point, c: int) -> Point:
        """Lift a local point of c*P back to ambient coordinates."""
        if self._chart is None:
            return tuple(y)
        out = [c * a for a in self._chart.base]
        for yi, row in zip(y, self._chart.rows):
            for j, a in enumerate(row):
                out[j] += yi * a
        return tuple(out)

    @cached_property
    def facets(self):
        """Ambient H-representation facets (primitive normals, integer offsets)."""
        if self._chart is None:
            return self._local_facets
        lifted = []
        rows = [list(r) for r in self._chart.rows]
        for n, b in self._local_facets:
            u = solve_integer(rows, n)
            if u is None:
                raise AssertionError("saturated basis must lift facet normals")
            u = tuple(u)
            lifted.append((u, b + dot(u, self._chart.base)))
        return tuple(sorted(lifted))

    @cached_property
    def equations(self):
        """Affine-hull equations (normal, value); empty when full-dimensional."""
        if self._chart is None:
            return ()
        rows = self._chart.rows
        matrix = [list(r) for r in rows] if rows else [[0] * self.ambient_dim]
        eqs = []
        for a in kernel_basis(matrix):
            lead = next(x for x in a if x)
            if lead < 0:  # canonical sign: first nonzero coefficient positive
                a = tuple(-x for x in a)
            eqs.append((tuple(a), dot(a, self._chart.base)))
        return tuple(sorted(eqs))

    def contains(self, x) -> bool:
        """Exact membership; accepts integer or rational coordinate tuples."""
        for a, v in self.equations:
            if dot(a, x) != v:
                return False
        if self._chart is None:
            return all(dot(n, x) >= b for n, b in self._local_facets)
        y = _rational_local(self._chart, x)
        if y is None:
            return False
        return all(dot(n, y) >= b for n, b in self._local_facets)

    # -- lattice data ----------------------------------------------------------

    @cached_property
    def _local_lattice_points(self) -> tuple[Point, ...]:
        return tuple(
            scan_polytope_points(self._local_vertices, self._local_facets, self.dim)
        )

    def lattice_points(self) -> tuple[Point, ...]:
        """All points of P ∩ Z^d, lexicographically sorted."""
        if self._chart is None:
            return self._local_lattice_points
        return tuple(
            sorted(self._chart.to_ambient(y) for y in self._local_lattice_points)
        )

    @property
    def n_lattice_points(self) -> int:
        return len(self._local_lattice_points)

    @cached_property
    def normalized_volume(self) -> int:
        """dim! times the Euclidean volume w.r.t. the induced lattice."""
        if self.dim == 0:
            return 0
        total = 0
        for s in hull.triangulate(
            list(self._local_vertices), list(self._local_facets), self.dim
        ):
            total += hull.simplex_volume_times_factorial(s)
        return total

    @cached_property
    def facet_width(self) -> int:
        """Max over facets of the lattice width; lower dims use the local model."""
        if not self._local_facets:
            raise ValueError("a point has no facets to take widths over")
        return max(
            max(dot(n, v) for v in self._local_vertices) - b
            for n, b in self._local_facets
        )

    def facet_widths(self) -> tuple[int, ...]:
        return tuple(
            sorted(
                max(dot(n, v) for v in self._local_vertices) - b
                for n, b in self._local_facets
            )
        )

    def dilate(self, c: int) -> LatticePolytope:
        """The multiple cP (vertices scaled, facet offsets scaled)."""
        if c < 1:
            raise ValueError("dilation factor must be a positive integer")
        if c == 1:
            return self
        chart = None
        if self._chart is not None:
            chart = Chart(tuple(c * a for a in self._chart.base), self._chart.rows)
        return LatticePolytope(
            vertices=[tuple(c * a for a in v) for v in self.vertices],
            ambient_dim=self.ambient_dim,
            dim=self.dim,
            chart=chart,
            local_vertices=[tuple(c * a for a in v) for v in self._local_vertices],
            local_facets=[(n, c * b) for n, b in self._local_facets],
        )

    def fingerprint(self):
        """Cheap invariants for deduplication reports (not a full equivalence)."""
        return (
            self.dim,
            self.n_lattice_points,
            self.normalized_volume,
            self.facet_widths() if self._local_facets else (),
            tuple(self.dilate(c).n_lattice_points for c in (2, 3)) if self.dim else (1, 1),
        )

    def bounding_box(self):
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.ambient_dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.ambient_dim))
        return lo, hi


def _rational_local(chart: Chart, x):
    """Local coordinates of a rational ambient point, or None if off the hull."""
    diff = tuple(Fraction(a) - b for a, b in zip(x, chart.base))
    y = vec_mat(diff, chart.T)
    recon = [Fraction(a) for a in chart.base]
    for yi, row in zip(y, chart.rows):
        for j, a in enumerate(row):
            recon[j] += yi * a
    if tuple(recon) != tuple(Fraction(a) for a in x):
        return None
    return y


def convex_hull(points) -> LatticePolytope:
    """Convex hull of integer points; vertices, facets, affine hull all exact."""
    pts = [tuple(int(a) for a in p) for p in points]
    if not pts:
        raise ValueError("convex hull of an empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("dimension mismatch among input points")
    pts = list(dict.fromkeys(pts))
    base, dirs = hull.independent_directions(pts)
    k = len(dirs)
    if k == d:
        local = pts
        chart = None
    else:
        diffs = [list(vec_sub(p, base)) for p in pts if p != base]
        if diffs:
            basis, _ = saturation_basis(diffs)
        else:
            basis = []
        chart = Chart(base, basis)
        local = [chart.to_local(p) for p in pts]
        for p, y in zip(pts, local):
            if chart.to_ambient(y) != p:
                raise AssertionError("lattice chart failed to round-trip a vertex")
    lverts, lfacets = hull.hull_structure(local, k)
    if chart is None:
        vertices = lverts
    else:
        vertices = [chart.to_ambient(y) for y in lverts]
    return LatticePolytope(
        vertices=vertices,
        ambient_dim=d,
        dim=k,
        chart=chart,
        local_vertices=lverts,
        local_facets=lfacets,
    )


def scan_polytope_points(local_vertices, local_facets, k):
    """Bounding-box scan with per-axis pruning; exact facet arithmetic.

    Enumerates Z^k points satisfying every facet inequality.  Pruning: at each
    prefix depth a facet is discarded as soon as its partial sum plus the best
    achievable tail (precomputed from the vertex box) falls below the offset.
    """
    if k == 0:
        return [()]
    lo = [min(v[i] for v in local_vertices) for i in range(k)]
    hi = [max(v[i] for v in local_vertices) for i in range(k)]
    size = 1
    for a, b in zip(lo, hi):
        size *= b - a + 1
    guard(size, "lattice point scan")
    normals = [tuple(n) for n, _ in local_facets]
    offsets = [b for _, b in local_facets]
    nf = len(normals)
    # tail_max[f][depth] = max over the box of the facet terms at depth..k-1
    tail_max = []
    for n in normals:
        tails = [0] * (k + 1)
        for i in range(k - 1, -1, -1):
            tails[i] = tails[i + 1] + n[i] * (hi[i] if n[i] > 0 else lo[i])
        tail_max.append(tails)
    out: list[Point] = []
    prefix = [0] * k

    def rec(depth, partial):
        if depth == k:
            out.append(tuple(prefix))
            return
        for x in range(lo[depth], hi[depth] + 1):
            prefix[depth] = x
            nxt = [0] * nf
            ok = True
            for fi in range(nf):
                head = partial[fi] + normals[fi][depth] * x
                if head + tail_max[fi][depth + 1] < offsets[fi]:
                    ok = False
                    break
                nxt[fi] = head
            if ok:
                rec(depth + 1, nxt)

    rec(0, [0] * nf)
    return sorted(out)


def lattice_points(P: LatticePolytope) -> tuple[Point, ...]:
    return P.lattice_points()


def normalized_volume(P: LatticePolytope) -> int:
    return P.normalized_volume


def facet_width(P: LatticePolytope) -> int:
    return P.facet_width


def dilate(P: LatticePolytope, c: int) -> LatticePolytope:
    return P.dilate(c)


def lambda_subgroup(P: LatticePolytope) -> AffineSublattice:
    """Subgroup of Z^d generated by differences of the lattice points of P."""
    pts = P.lattice_points()
    if not pts:
        raise ValueError("polytope contains no lattice point")
    x0 = pts[0]
    diffs = [list(vec_sub(p, x0)) for p in pts[1:]]
    if not diffs:
        return AffineSublattice(basis=(), index=1)
    basis = row_lattice_basis(diffs)
    _, index = saturation_basis(diffs)
    return AffineSublattice(basis=tuple(basis), index=index)


def lambda_reduced(P: LatticePolytope):
    """P re-coordinatized by its lambda subgroup.

    Returns (Q, to_ambient) where Q lives full-dimensionally in Z^rank and
    to_ambient maps a pair (c, local point) back to a point of c*P.
    """
    pts = P.lattice_points()
    if not pts:
        raise ValueError("polytope contains no lattice point")
    x0 = pts[0]
    diffs = [list(vec_sub(p, x0)) for p in pts[1:]]
    basis = row_lattice_basis(diffs) if diffs else []
    rows = [tuple(r) for r in basis]
    cols = [list(col) for col in zip(*rows)] if rows else []

    def to_coords(p):
        y = solve_integer(cols, vec_sub(p, x0)) if rows else ()
        if y is None:
            raise AssertionError("lattice point outside its own lambda subgroup")
        return tuple(y)

    Q = convex_hull([to_coords(v) for v in P.vertices])

    def to_ambient(c: int, y) -> Point:
        out = [c * a for a in x0]
        for yi, row in zip(y, rows):
            for j, a in enumerate(row):
                out[j] += yi * a
        return tuple(out)

    return Q, to_ambient


def unimodular_image(P: LatticePolytope, matrix, translation) -> LatticePolytope:
    """Apply x -> x @ matrix + t to all vertices (matrix rows = images of e_i)."""
    moved = [
        tuple(a + b for a, b in zip(vec_mat(v, matrix), translation))
        for v in P.vertices
    ]
    return convex_hull(moved)


def hrep(P: LatticePolytope):
    """Ambient H-representation: (facets, equations)."""
    return P.facets, P.equations
