"""Rational polytopes: pyramidal extensions, quasi-pyramidal chains, defects.

All geometry is exact: distances are carried as squared rationals and only
converted to decimal enclosures for presentation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import isqrt

from . import hull
from .intlinalg import dot, primitive, vec_sub

RationalPoint = tuple[Fraction, ...]


def _frac_point(p) -> RationalPoint:
    return tuple(Fraction(a) for a in p)


class _RatChart:
    """Affine chart over Q: local = (x - base) @ T, ambient = base + y @ rows."""

    def __init__(self, base, rows):
        self.base = base
        self.rows = [tuple(r) for r in rows]
        r = len(self.rows)
        gram = [
            [dot(self.rows[i], self.rows[j]) for j in range(r)] for i in range(r)
        ]
        inv = _invert(gram)
        # T = B^T gram^{-1}
        d = len(base)
        self.T = [
            tuple(
                sum(self.rows[k][i] * inv[k][j] for k in range(r)) for j in range(r)
            )
            for i in range(d)
        ]

    def to_local(self, x):
        diff = vec_sub(_frac_point(x), self.base)
        return tuple(
            sum(diff[i] * self.T[i][j] for i in range(len(diff)))
            for j in range(len(self.rows))
        )

    def to_ambient(self, y):
        out = list(self.base)
        for yi, row in zip(y, self.rows):
            for j, a in enumerate(row):
                out[j] += yi * a
        return tuple(out)


def _invert(M):
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if A[i][col])
        A[col], A[piv] = A[piv], A[col]
        f = A[col][col]
        A[col] = [a / f for a in A[col]]
        for i in range(n):
            if i != col and A[i][col]:
                g = A[i][col]
                A[i] = [a - g * b for a, b in zip(A[i], A[col])]
    return [row[n:] for row in A]


class RationalPolytope:
    """Convex hull of rational points; construct via rational_hull."""

    def __init__(self, vertices, ambient_dim, dim, chart, local_vertices, local_facets):
        self.vertices = tuple(sorted(vertices))
        self.ambient_dim = ambient_dim
        self.dim = dim
        self._chart = chart
        self._local_vertices = tuple(sorted(local_vertices))
        self._local_facets = tuple(local_facets)

    def __eq__(self, other):
        return (
            isinstance(other, RationalPolytope)
            and self.ambient_dim == other.ambient_dim
            and self.vertices == other.vertices
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self):
        return f"RationalPolytope(dim={self.dim}, vertices={list(self.vertices)})"

    @cached_property
    def facets(self):
        """Ambient inequalities (primitive integer normal, rational offset)."""
        if self._chart is None:
            return self._local_facets
        lifted = []
        for w, b in self._local_facets:
            u = tuple(
                sum(self._chart.T[i][j] * w[j] for j in range(len(w)))
                for i in range(self.ambient_dim)
            )
            scale = _clear_denominators(u)
            pu = primitive(tuple(int(a * scale) for a in u))
            lifted.append((pu, _scaled_offset(pu, u, b, self._chart.base)))
        return tuple(sorted(lifted))

    @cached_property
    def equations(self):
        if self._chart is None:
            return ()
        rows = self._chart.rows
        d = self.ambient_dim
        mat = [[Fraction(r[j]) for j in range(d)] for r in rows]
        eqs = []
        for a in _rational_kernel(mat, d):
            eqs.append((a, dot(a, self._chart.base)))
        return tuple(sorted(eqs))

    def contains(self, x) -> bool:
        p = _frac_point(x)
        for a, v in self.equations:
            if dot(a, p) != v:
                return False
        if self._chart is None:
            return all(dot(n, p) >= b for n, b in self._local_facets)
        y = self._chart.to_local(p)
        if self._chart.to_ambient(y) != p:
            return False
        return all(dot(n, y) >= b for n, b in self._local_facets)

    def contains_polytope(self, other) -> bool:
        return all(self.contains(v) for v in other.vertices)

    @cached_property
    def volume_scaled(self) -> Fraction:
        """dim! times the Euclidean volume of the local model."""
        if self.dim == 0:
            return Fraction(0)
        total = Fraction(0)
        for s in hull.triangulate(
            list(self._local_vertices), list(self._local_facets), self.dim
        ):
            base = s[0]
            rows = [list(vec_sub(p, base)) for p in s[1:]]
            total += abs(_frac_det(rows))
        return total


def _frac_det(rows):
    n = len(rows)
    A = [[Fraction(a) for a in row] for row in rows]
    result = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            result = -result
        result *= A[col][col]
        for i in range(col + 1, n):
            f = A[i][col] / A[col][col]
            A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    return result


def _clear_denominators(vec) -> int:
    lcm = 1
    for a in vec:
        d = Fraction(a).denominator
        lcm = lcm * d // _gcd(lcm, d)
    return lcm


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _scaled_offset(pu, u, b, base):
    """Offset matching the primitivized normal: solve the rescale factor."""
    raw = b + dot(u, base)
    nz = next(i for i, a in enumerate(u) if a)
    factor = Fraction(pu[nz]) / Fraction(u[nz])
    return raw * factor


def _rational_kernel(mat, d):
    """Primitive integer basis of {a : mat @ a = 0} over Q."""
    rows = [row[:] for row in mat]
    pivots = []
    r = 0
    for j in range(d):
        piv = next((i for i in range(r, len(rows)) if rows[i][j]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [a / rows[r][j] for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][j]:
                f = rows[i][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(j)
        r += 1
    out = []
    free = [j for j in range(d) if j not in pivots]
    for j in free:
        vec = [Fraction(0)] * d
        vec[j] = Fraction(1)
        for i, pj in enumerate(pivots):
            vec[pj] = -rows[i][j]
        scale = _clear_denominators(vec)
        ivec = primitive(tuple(int(a * scale) for a in vec))
        lead = next(x for x in ivec if x)
        if lead < 0:
            ivec = tuple(-x for x in ivec)
        out.append(tuple(Fraction(a) for a in ivec))
    return out


def rational_hull(points) -> RationalPolytope:
    """Exact convex hull of rational points."""
    pts = [_frac_point(p) for p in points]
    if not pts:
        raise ValueError("convex hull of an empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("dimension mismatch among input points")
    pts = list(dict.fromkeys(pts))
    base, dirs = hull.independent_directions(pts)
    k = len(dirs)
    if k == d:
        chart = None
        local = pts
    else:
        chart = _RatChart(base, dirs)
        local = [chart.to_local(p) for p in pts]
        for p, y in zip(pts, local):
            if chart.to_ambient(y) != p:
                raise AssertionError("rational chart failed to round-trip a vertex")
    lverts, lfacets = hull.hull_structure(local, k)
    vertices = lverts if chart is None else [chart.to_ambient(y) for y in lverts]
    return RationalPolytope(
        vertices=vertices,
        ambient_dim=d,
        dim=k,
        chart=chart,
        local_vertices=lverts,
        local_facets=lfacets,
    )


def from_lattice(P) -> RationalPolytope:
    """View a lattice polytope as a rational one."""
    return rational_hull(P.vertices)


# --- Hausdorff distance -----------------------------------------------------------

@dataclass(frozen=True, order=True)
class HausdorffDistance:
    """Exact squared distance; decimal output is presentation-only."""

    squared: Fraction

    def __float__(self):
        return float(self.squared) ** 0.5

    @property
    def is_zero(self) -> bool:
        return self.squared == 0

    def sqrt_enclosure(self, digits: int = 12) -> tuple[Fraction, Fraction]:
        return sqrt_enclosure(self.squared, digits)


def sqrt_enclosure(value: Fraction, digits: int = 12) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(value) <= hi agreeing to the requested digits."""
    if value < 0:
        raise ValueError("negative squared distance")
    scale = 10 ** digits
    num = value.numerator * scale * scale
    den = value.denominator
    root = isqrt(num // den)
    lo = Fraction(root, scale)
    hi = Fraction(root + 1, scale)
    if lo * lo > value:
        lo = Fraction(root - 1, scale)
        hi = Fraction(root, scale)
    return lo, hi


def _project_onto_affine(v, equalities):
    """Orthogonal projection of v onto {x : <a_i, x> = c_i}, or None."""
    d = len(v)
    if not equalities:
        return tuple(v)
    rows = [[Fraction(a) for a in eq] + [Fraction(c)] for eq, c in equalities]
    pivots = []
    r = 0
    for j in range(d):
        piv = next((i for i in range(r, len(rows)) if rows[i][j]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [a / rows[r][j] for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][j]:
                f = rows[i][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(j)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][d] != 0:
            return None  # inconsistent equalities
    x0 = [Fraction(0)] * d
    for i, j in enumerate(pivots):
        x0[j] = rows[i][d]
    free = [j for j in range(d) if j not in pivots]
    null = []
    for j in free:
        vec = [Fraction(0)] * d
        vec[j] = Fraction(1)
        for i, pj in enumerate(pivots):
            vec[pj] = -rows[i][j]
        null.append(vec)
    if not null:
        return tuple(x0)
    diff = [Fraction(a) - b for a, b in zip(v, x0)]
    gram = [[dot(null[i], null[j]) for j in range(len(null))] for i in range(len(null))]
    rhs = [dot(n, diff) for n in null]
    inv = _invert(gram)
    t = [sum(inv[i][j] * rhs[j] for j in range(len(rhs))) for i in range(len(null))]
    out = list(x0)
    for ti, n in zip(t, null):
        for j in range(d):
            out[j] += ti * n[j]
    return tuple(out)


def point_polytope_squared_distance(v, P: RationalPolytope) -> Fraction:
    """Min squared distance from a point to a polytope, exactly.

    The nearest point lies in the relative interior of a unique face, and for
    that face it is the orthogonal projection onto the face's affine hull:
    enumerate facet subsets, project, keep feasible projections.
    """
    v = _frac_point(v)
    base_eqs = [(a, c) for a, c in P.equations]
    facets = list(P.facets)
    best = None
    for size in range(len(facets) + 1):
        for sub in combinations(facets, size):
            eqs = base_eqs + [(n, b) for n, b in sub]
            proj = _project_onto_affine(v, eqs)
            if proj is None or not P.contains(proj):
                continue
            d2 = sum((a - b) ** 2 for a, b in zip(v, proj))
            if best is None or d2 < best:
                best = d2
        if best == 0:
            break
    if best is None:
        raise AssertionError("no feasible projection onto any face")
    return best


def hausdorff_distance(X: RationalPolytope, Y: RationalPolytope) -> HausdorffDistance:
    """Hausdorff distance via vertex-to-polytope squared distances both ways."""
    if X.ambient_dim != Y.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    worst = Fraction(0)
    for v in X.vertices:
        worst = max(worst, point_polytope_squared_distance(v, Y))
    for w in Y.vertices:
        worst = max(worst, point_polytope_squared_distance(w, X))
    return HausdorffDistance(squared=worst)


# --- pyramids ------------------------------------------------------------------------

@dataclass(frozen=True)
class PyramidWitness:
    apex: RationalPoint
    base: RationalPolytope


def is_pyramid(Q: RationalPolytope):
    """Apex + base facet when Q = conv(base, apex), else None.

    A vertex incident to every facet except exactly one is an apex over the
    missed facet.
    """
    if Q.dim < 1:
        raise ValueError("pyramids need dimension at least 1")
    for v in Q._local_vertices:
        missed = [
            (n, b) for n, b in Q._local_facets if dot(n, v) != b
        ]
        if len(missed) == 1:
            n, b = missed[0]
            base_pts = [w for w in Q._local_vertices if dot(n, w) == b]
            if Q._chart is not None:
                apex = Q._chart.to_ambient(v)
                base = rational_hull([Q._chart.to_ambient(w) for w in base_pts])
            else:
                apex = tuple(v)
                base = rational_hull(base_pts)
            return PyramidWitness(apex=_frac_point(apex), base=base)
    return None


@dataclass(frozen=True)
class ExtensionResult:
    holds: bool
    apex: RationalPoint | None = None
    base_facet: tuple | None = None  # vertices of Delta ∩ P when stacking
    reason: str | None = None

    def __bool__(self):
        return self.holds


def is_pyramidal_extension(P: RationalPolytope, Q: RationalPolytope) -> ExtensionResult:
    """Decide whether closure(Q \\ P) is a pyramid meeting P in one of its facets.

    Either Q is a pyramid over P (dimension raises by one) or Q stacks a
    pyramid onto a single facet of P; a new vertex seeing two or more facets
    of P makes the difference a non-polytope, which is a definite no.
    """
    if not Q.contains_polytope(P):
        raise ValueError("P must be contained in Q")
    if P.vertices == Q.vertices:
        raise ValueError("extension needs P != Q")
    new = [v for v in Q.vertices if v not in set(P.vertices)]
    if len(new) != 1:
        return ExtensionResult(False, reason="needs exactly one new vertex")
    v = new[0]
    if Q.dim == P.dim + 1:
        # one new vertex off the affine hull: Q = conv(P, v), a pyramid over P
        off_hull = any(dot(a, v) != c for a, c in P.equations)
        if off_hull:
            return ExtensionResult(True, apex=v, base_facet=P.vertices)
        return ExtensionResult(False, reason="dimension raise without new direction")
    if Q.dim != P.dim:
        return ExtensionResult(False, reason="dimension gap is not zero or one")
    violated = [(n, b) for n, b in P.facets if dot(n, v) < b]
    if len(violated) == 1:
        n, b = violated[0]
        base = tuple(w for w in P.vertices if dot(n, w) == b)
        return ExtensionResult(True, apex=v, base_facet=base)
    return ExtensionResult(
        False,
        reason="difference not a pyramid candidate: new vertex beyond "
        f"{len(violated)} facets",
    )


# --- chains --------------------------------------------------------------------------

@dataclass
class PyramidalChain:
    chain: list[RationalPolytope]
    kind: str = "pyramidal"  # or "quasi_pyramidal"
    witnesses: list[RationalPolytope] | None = None  # P'_i for quasi chains


def verify_chain(c: PyramidalChain) -> bool:
    if c.kind not in ("pyramidal", "quasi_pyramidal"):
        raise ValueError(f"unknown chain kind {c.kind!r}")
    chain = c.chain
    if not chain:
        raise ValueError("empty chain")
    for a, b in zip(chain, chain[1:]):
        if not b.contains_polytope(a) or a.vertices == b.vertices:
            return False
    if c.kind == "pyramidal":
        return all(
            is_pyramidal_extension(a, b).holds for a, b in zip(chain, chain[1:])
        )
    if c.witnesses is None or len(c.witnesses) != len(chain) - 1:
        raise ValueError("quasi-pyramidal chains need one witness per step")
    for i, w in enumerate(c.witnesses, start=1):
        prev, cur = chain[i - 1], chain[i]
        if not is_pyramidal_extension(w, cur).holds:
            return False
        if not (w.contains_polytope(chain[0]) and prev.contains_polytope(w)):
            return False
    return True


@dataclass(frozen=True)
class DefectBound:
    """Sum of Hausdorff distances d(P'_i, P_i): an upper bound for the defect."""

    terms: tuple[HausdorffDistance, ...]

    @property
    def is_zero(self) -> bool:
        return all(t.is_zero for t in self.terms)

    def enclosure(self, digits: int = 12) -> tuple[Fraction, Fraction]:
        lo = Fraction(0)
        hi = Fraction(0)
        for t in self.terms:
            a, b = t.sqrt_enclosure(digits)
            lo += a
            hi += b
        return lo, hi

    def __float__(self):
        return sum(float(t) for t in self.terms)


def chain_defect(c: PyramidalChain) -> DefectBound:
    if c.kind != "quasi_pyramidal":
        raise ValueError("defect is defined for quasi-pyramidal chains")
    if not verify_chain(c):
        raise ValueError("chain failed verification")
    terms = tuple(
        hausdorff_distance(w, c.chain[i])
        for i, w in enumerate(c.witnesses or [], start=1)
    )
    return DefectBound(terms=terms)


# --- chain search ----------------------------------------------------------------------

def _facet_centroid(P: RationalPolytope, facet):
    n, b = facet
    pts = [v for v in P.vertices if dot(n, v) == b]
    k = len(pts)
    return tuple(sum(p[i] for p in pts) / k for i in range(P.ambient_dim))


def _clipped_candidates(current: RationalPolytope, target: RationalPolytope):
    """Apexes obtained by pulling an outside vertex back until it sees one facet."""
    out = []
    for v in target.vertices:
        if current.contains(v):
            continue
        violated = [(n, b) for n, b in current.facets if dot(n, v) < b]
        if len(violated) <= 1:
            continue
        for n, b in violated:
            x = _facet_centroid(current, (n, b))
            t_best = Fraction(1)
            for m, c0 in current.facets:
                if (m, c0) == (n, b):
                    continue
                slope = dot(m, v) - dot(m, x)
                if slope < 0:
                    t_best = min(t_best, (c0 - dot(m, x)) / slope)
            if t_best > 0:
                apex = tuple(a + t_best * (p - a) for a, p in zip(x, v))
                out.append(apex)
    return out


def _extension_steps(current: RationalPolytope, Q: RationalPolytope):
    """Pyramidal one-step extensions of current inside Q, best volume first."""
    apexes = [v for v in Q.vertices if not current.contains(v)]
    scored = []
    for v in apexes:
        T = rational_hull(list(current.vertices) + [v])
        if is_pyramidal_extension(current, T).holds:
            scored.append(((T.dim, T.volume_scaled), v, T))
    if not scored:
        for apex in _clipped_candidates(current, Q):
            T = rational_hull(list(current.vertices) + [apex])
            if is_pyramidal_extension(current, T).holds:
                scored.append(((T.dim, T.volume_scaled), apex, T))
    scored.sort(key=lambda item: (-item[0][0], -item[0][1], item[1]))
    return [T for _, _, T in scored]


def search_pyramidal_chain(P: RationalPolytope, Q: RationalPolytope, budget: int = 64):
    """Deterministic depth-first chain search, largest added volume first.

    Explores at most `budget` intermediate polytopes, backtracking out of
    dead ends; never returns an unverified chain, None when the budget runs
    out.  Success is only claimed for fixture corpora built by stacking.
    """
    if not Q.contains_polytope(P):
        raise ValueError("P must be contained in Q")
    if P.vertices == Q.vertices:
        return PyramidalChain(chain=[P], kind="pyramidal")
    visited = {P.vertices}
    nodes = [budget]

    def dfs(current, chain):
        if current.vertices == Q.vertices:
            return chain
        if nodes[0] <= 0:
            return None
        for T in _extension_steps(current, Q):
            if T.vertices in visited:
                continue
            visited.add(T.vertices)
            nodes[0] -= 1
            found = dfs(T, chain + [T])
            if found is not None:
                return found
            if nodes[0] <= 0:
                return None
        return None

    chain = dfs(P, [P])
    if chain is None:
        return None
    result = PyramidalChain(chain=chain, kind="pyramidal")
    return result if verify_chain(result) else None
