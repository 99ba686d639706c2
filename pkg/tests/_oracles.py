"""Independent brute-force oracles used to freeze expected values in tests.

Everything here deliberately avoids the library's own geometric code paths:
membership goes through barycentric determinants or Fourier-Motzkin, volumes
through explicit determinants, connectivity through union-find.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product


def det_int(rows):
    """Exact determinant by Fraction Gaussian elimination."""
    n = len(rows)
    A = [[Fraction(a) for a in row] for row in rows]
    result = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            result = -result
        result *= A[col][col]
        for i in range(col + 1, n):
            f = A[i][col] / A[col][col]
            A[i] = [a - f * b for a, b in zip(A[i], A[col])]
    assert result.denominator == 1
    return int(result)


def in_simplex(point, simplex) -> bool:
    """Barycentric membership test (any affine dimension), exact."""
    base = simplex[0]
    diffs = [tuple(a - b for a, b in zip(v, base)) for v in simplex[1:]]
    target = [Fraction(a) - b for a, b in zip(point, base)]
    # solve sum lambda_i diffs_i = target by elimination; track residual
    cols = len(diffs)
    rows = [[Fraction(diffs[j][i]) for j in range(cols)] + [target[i]]
            for i in range(len(base))]
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
    lam = [Fraction(0)] * cols
    for i, j in enumerate(pivots):
        lam[j] = rows[i][-1] / rows[i][j]
    for i in range(r, len(rows)):
        if rows[i][-1] != 0:
            return False  # point off the affine hull
    if len(pivots) < cols:
        # affinely dependent simplex input: treat leftover coords as zero and
        # verify the reconstruction below
        pass
    recon = [Fraction(b) for b in base]
    for l, dvec in zip(lam, diffs):
        for i, a in enumerate(dvec):
            recon[i] += l * a
    if any(rc != Fraction(p) for rc, p in zip(recon, point)):
        return False
    return all(l >= 0 for l in lam) and sum(lam) <= 1


def box_lattice_points(lo, hi):
    return product(*(range(a, b + 1) for a, b in zip(lo, hi)))


def simplex_lattice_points(simplex):
    """All integer points of a simplex via bounding-box scan."""
    d = len(simplex[0])
    lo = [min(v[i] for v in simplex) for i in range(d)]
    hi = [max(v[i] for v in simplex) for i in range(d)]
    return sorted(p for p in box_lattice_points(lo, hi) if in_simplex(p, simplex))


def fm_cone_inequalities(generators):
    """Project {x = sum mu_i g_i, mu >= 0} onto x by Fourier-Motzkin.

    Returns primitive integer rows a with the cone equal to {x : a . x >= 0
    for all rows}; independent of the library's hull-based facet code.
    """
    gens = [tuple(g) for g in generators]
    m = len(gens)
    d = len(gens[0])
    rows = []
    for i in range(m):
        rows.append([Fraction(int(j == i)) for j in range(m)] + [Fraction(0)] * d)
    for j in range(d):
        pos = [Fraction(-g[j]) for g in gens]
        rows.append(pos + [Fraction(int(t == j)) for t in range(d)])
        rows.append([-a for a in rows[-1]])
    for var in range(m):
        pos = [r for r in rows if r[var] > 0]
        neg = [r for r in rows if r[var] < 0]
        zero = [r for r in rows if r[var] == 0]
        combined = list(zero)
        for rp in pos:
            for rn in neg:
                combined.append(
                    [a / rp[var] - b / rn[var] for a, b in zip(rp, rn)]
                )
        rows = _dedupe_rows(combined, m)
    out = []
    seen = set()
    for r in rows:
        tail = r[m:]
        if not any(tail):
            continue
        prim = _primitive_int(tail)
        if prim not in seen:
            seen.add(prim)
            out.append(prim)
    return out


def _dedupe_rows(rows, m):
    seen = {}
    for r in rows:
        if not any(r):
            continue
        key = _primitive_int(r)
        if key not in seen:
            seen[key] = r
    return list(seen.values())


def _primitive_int(vec):
    from math import gcd

    denom = 1
    for a in vec:
        f = Fraction(a)
        denom = denom * f.denominator // gcd(denom, f.denominator)
    ints = [int(Fraction(a) * denom) for a in vec]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g > 1:
        ints = [a // g for a in ints]
    return tuple(ints)


def fm_in_cone(point, generators) -> bool:
    """Membership in a rational cone by Fourier-Motzkin on the coefficients.

    Decides whether point = sum mu_i g_i with mu_i >= 0 has a rational
    solution.  Exponential, fine for a handful of generators.
    """
    gens = list(generators)
    m = len(gens)
    if all(a == 0 for a in point):
        return True
    if not gens:
        return False
    # constraints over mu in R^m: mu_i >= 0 and equality rows as two inequalities
    # rows are (coeffs..., const) meaning coeffs . mu + const >= 0
    rows = []
    for i in range(m):
        rows.append([Fraction(1 if j == i else 0) for j in range(m)] + [Fraction(0)])
    d = len(point)
    for i in range(d):
        eq = [Fraction(g[i]) for g in gens]
        rows.append(eq + [Fraction(-point[i])])
        rows.append([-a for a in eq] + [Fraction(point[i])])
    for var in range(m):
        pos = [r for r in rows if r[var] > 0]
        neg = [r for r in rows if r[var] < 0]
        zero = [r for r in rows if r[var] == 0]
        new_rows = list(zero)
        for rp in pos:
            for rn in neg:
                combo = [a / rp[var] - b / rn[var] for a, b in zip(rp, rn)]
                new_rows.append(combo)
        rows = new_rows
    return all(r[-1] >= 0 for r in rows)


def union_find_components(n_nodes, edges) -> int:
    parent = list(range(n_nodes))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(i) for i in range(n_nodes)})


def brute_min_support(z, c, points, cap):
    """Smallest number of distinct points representing z with weights summing c.

    Exhaustive over supports of size <= cap and positive weight compositions;
    independent of the library's representation search.
    """
    d = len(z)
    for r in range(1, cap + 1):
        for support in combinations(points, r):
            for weights in _compositions(c, r):
                vec = tuple(
                    sum(w * p[i] for w, p in zip(weights, support)) for i in range(d)
                )
                if vec == tuple(z):
                    return r
    return None


def _compositions(total, parts):
    """All tuples of `parts` positive integers summing to total."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
