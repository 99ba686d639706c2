"""Exact convex hull machinery: extreme points, facets, triangulation.

Works uniformly over int and Fraction coordinates.  Facet normals are always
primitive integer vectors; offsets inherit the coordinate arithmetic.  Only
low dimensions are targeted (the whole toolkit is desk scale), so facet
enumeration is a brute-force scan over vertex subsets, with 1D/2D fast paths.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .intlinalg import det, dot, primitive, vec_sub
from .ratlp import in_convex_hull

Facet = tuple[tuple[int, ...], object]  # (primitive inward normal, offset)


def affine_rank(points) -> int:
    """Affine dimension of a point set."""
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [[Fraction(a) for a in vec_sub(p, base)] for p in points[1:]]
    return _row_reduce_rank(rows)


def _row_reduce_rank(rows) -> int:
    r = 0
    if not rows:
        return 0
    ncols = len(rows[0])
    for j in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][j]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][j]:
                f = rows[i][j] / rows[r][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def independent_directions(points):
    """A maximal affinely independent subset of difference vectors.

    Returns (base, directions) where the directions are differences
    points[i] - base in the order encountered.
    """
    base = points[0]
    directions = []
    reduced: list[list[Fraction]] = []
    for p in points[1:]:
        d = vec_sub(p, base)
        row = [Fraction(a) for a in d]
        for other in reduced:
            piv = next((j for j, a in enumerate(other) if a), None)
            if piv is not None and row[piv]:
                f = row[piv] / other[piv]
                row = [a - f * b for a, b in zip(row, other)]
        if any(row):
            reduced.append(row)
            directions.append(d)
    return base, directions


def hyperplane_normal(diffs):
    """Primitive integer normal of the hyperplane spanned by k-1 diffs in k-space.

    Returns None unless the diffs span a space of exactly codimension one.
    """
    k = len(diffs[0])
    rows = [[Fraction(a) for a in d] for d in diffs]
    # row reduce, tracking pivot columns
    pivots = []
    r = 0
    for j in range(k):
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
    if r != k - 1:
        return None
    free = next(j for j in range(k) if j not in pivots)
    sol = [Fraction(0)] * k
    sol[free] = Fraction(1)
    for i, j in enumerate(pivots):
        sol[j] = -rows[i][free] / rows[i][j]
    denom = 1
    for a in sol:
        denom = denom * a.denominator // _gcd(denom, a.denominator)
    return primitive(tuple(int(a * denom) for a in sol))


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def primitive_direction(vec):
    """Primitive integer vector parallel to a rational one, orientation kept."""
    denom = 1
    for a in vec:
        d = Fraction(a).denominator
        denom = denom * d // _gcd(denom, d)
    return primitive(tuple(int(Fraction(a) * denom) for a in vec))


def extreme_points(points):
    """The subset of points that are vertices of the convex hull."""
    pts = list(dict.fromkeys(tuple(p) for p in points))
    if len(pts) <= 1:
        return pts
    out = []
    for i, p in enumerate(pts):
        others = pts[:i] + pts[i + 1 :]
        if not in_convex_hull(p, others):
            out.append(p)
    return out


def _polygon_order(points):
    """Vertices of a full-dimensional planar hull in counterclockwise order."""
    pts = sorted(dict.fromkeys(tuple(p) for p in points))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def hull_structure(points, k):
    """Vertices and facets of the hull of full-dimensional points in k-space.

    Returns (vertices, facets): vertices sorted lexicographically; facets as
    (primitive inward normal, offset) sorted by normal, irredundant.
    """
    pts = list(dict.fromkeys(tuple(p) for p in points))
    if k == 0:
        return pts, []
    if k == 1:
        lo = min(p[0] for p in pts)
        hi = max(p[0] for p in pts)
        verts = [(lo,)] if lo == hi else [(lo,), (hi,)]
        facets = [((1,), lo), ((-1,), -hi)]
        return verts, facets
    if k == 2:
        ring = _polygon_order(pts)
        facets = []
        for a, b in zip(ring, ring[1:] + ring[:1]):
            n = primitive_direction((-(b[1] - a[1]), b[0] - a[0]))
            facets.append((n, dot(n, a)))
        return sorted(ring), sorted(facets)

    verts = extreme_points(pts)
    facets = {}
    for comb in combinations(verts, k):
        diffs = [vec_sub(p, comb[0]) for p in comb[1:]]
        n = hyperplane_normal(diffs)
        if n is None:
            continue
        b = dot(n, comb[0])
        if (n, b) in facets or (tuple(-a for a in n), -b) in facets:
            continue
        lo = hi = False
        for q in verts:
            s = dot(n, q) - b
            if s > 0:
                hi = True
            elif s < 0:
                lo = True
            if lo and hi:
                break
        if lo and hi:
            continue
        if lo:  # flip to make the normal inward
            n = tuple(-a for a in n)
            b = -b
        facets[(n, b)] = True
    return sorted(verts), sorted(facets)


def facet_vertices(vertices, facet):
    n, b = facet
    return [v for v in vertices if dot(n, v) == b]


def triangulate(vertices, facets, k):
    """Triangulation of a full-dimensional hull into k-simplices.

    vertices/facets as produced by hull_structure.  Returns tuples of k+1
    vertices each; the simplices tile the polytope.
    """
    if k == 0:
        return [tuple(vertices)]
    if k == 1:
        return [tuple(sorted(vertices))]
    if k == 2:
        ring = _polygon_order(vertices)
        v0 = ring[0]
        return [(v0, a, b) for a, b in zip(ring[1:], ring[2:])]
    v0 = vertices[0]
    simplices = []
    for facet in facets:
        n, b = facet
        if dot(n, v0) == b:
            continue
        fpts = facet_vertices(vertices, facet)
        for s in _triangulate_on_hyperplane(fpts, n, k):
            simplices.append(s + (v0,))
    return simplices


def _triangulate_on_hyperplane(points, normal, k):
    """Triangulate a (k-1)-dimensional point set lying on a hyperplane."""
    drop = max(range(k), key=lambda j: abs(normal[j]))
    proj = {tuple(p[j] for j in range(k) if j != drop): p for p in points}
    ppts = list(proj)
    verts, facets = hull_structure(ppts, k - 1)
    return [
        tuple(proj[q] for q in simplex)
        for simplex in triangulate(verts, facets, k - 1)
    ]


def simplex_volume_times_factorial(simplex):
    """|det| of the edge matrix of a full-dimensional simplex (= k! * volume)."""
    base = simplex[0]
    rows = [list(vec_sub(p, base)) for p in simplex[1:]]
    if not rows:
        return 0
    value = det(rows)
    return -value if value < 0 else value


def vertices_from_facets(facets, k):
    """Re-derive the vertex set of a full-dimensional H-representation.

    Brute-force: intersect every k-subset of facet hyperplanes, keep feasible
    unique solutions.  Used for round-trip verification at desk scale.
    """
    if k == 0:
        return []
    verts = set()
    for comb in combinations(facets, k):
        rows = [[Fraction(a) for a in n] for n, _ in comb]
        rhs = [Fraction(b) for _, b in comb]
        sol = _solve_square(rows, rhs)
        if sol is None:
            continue
        if all(dot(n, sol) >= b for n, b in facets):
            verts.add(tuple(sol))
    return sorted(verts)


def _solve_square(rows, rhs):
    k = len(rows[0])
    A = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(k):
        piv = next((i for i in range(col, len(A)) if A[i][col]), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        for i in range(len(A)):
            if i != col and A[i][col]:
                f = A[i][col] / A[col][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    if len(A) > k and any(any(row[:k]) or row[k] for row in A[k:]):
        return None
    return tuple(A[i][k] / A[i][i] for i in range(k))
