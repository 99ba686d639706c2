"""Exact rational linear feasibility via a phase-1 simplex with Bland's rule.

Small and slow by design: every pivot is exact Fraction arithmetic, which is
all the geometry code needs (no floating point in any predicate).
"""
from __future__ import annotations

from fractions import Fraction


def feasible_combination(columns, rhs):
    """Find lambda >= 0 with sum_i lambda_i * columns[i] = rhs, or None.

    columns: list of equal-length tuples; rhs: tuple of the same length.
    Returns a list of Fractions (one per column) or None if infeasible.
    """
    m = len(rhs)
    n = len(columns)
    # tableau rows: [a_1 ... a_n | b], artificial basis, minimize sum of artificials
    T = []
    for i in range(m):
        row = [Fraction(col[i]) for col in columns]
        b = Fraction(rhs[i])
        if b < 0:
            row = [-a for a in row]
            b = -b
        row.append(b)
        T.append(row)
    basis = list(range(n, n + m))  # artificial variable indices

    def column_of(j, i):
        if j < n:
            return T[i][j]
        return Fraction(1) if j - n == i else Fraction(0)

    # reduced cost of structural var j: -sum of rows where artificial is basic
    while True:
        entering = None
        for j in range(n):
            c = Fraction(0)
            for i in range(m):
                if basis[i] >= n:
                    c -= T[i][j]
            if c < 0:
                entering = j
                break  # Bland: first improving index
        if entering is None:
            break
        # ratio test, Bland tie-break on basis index
        leaving = None
        best = None
        for i in range(m):
            a = T[i][entering]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leaving]
                ):
                    best = ratio
                    leaving = i
        if leaving is None:
            # phase-1 objective is bounded below by 0, so this cannot happen
            raise ArithmeticError("unbounded phase-1 simplex")
        piv = T[leaving][entering]
        T[leaving] = [a / piv for a in T[leaving]]
        for i in range(m):
            if i != leaving and T[i][entering]:
                f = T[i][entering]
                T[i] = [a - f * b for a, b in zip(T[i], T[leaving])]
        basis[leaving] = entering

    residual = sum(T[i][-1] for i in range(m) if basis[i] >= n)
    if residual != 0:
        return None
    lam = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            lam[b] = T[i][-1]
    return lam


def in_convex_hull(point, points) -> bool:
    """Exact test whether point lies in the convex hull of points."""
    if not points:
        return False
    cols = [tuple(p) + (1,) for p in points]
    return feasible_combination(cols, tuple(point) + (1,)) is not None


def in_cone_span(point, generators) -> bool:
    """Exact test whether point is a nonnegative rational combination."""
    if all(a == 0 for a in point):
        return True
    if not generators:
        return False
    return feasible_combination(list(generators), tuple(point)) is not None


def positive_functional(vectors):
    """Rational w with <w, v> >= 1 for every v, or None if none exists.

    Existence is equivalent to the vectors lying in an open half-space.
    """
    vectors = list(vectors)
    if not vectors:
        return ()
    d = len(vectors[0])
    m = len(vectors)
    # encode free w = u - v plus slacks t: G(u - v) - t = 1
    cols = []
    for j in range(d):
        cols.append(tuple(vec[j] for vec in vectors))
    for j in range(d):
        cols.append(tuple(-vec[j] for vec in vectors))
    for i in range(m):
        cols.append(tuple(-1 if k == i else 0 for k in range(m)))
    lam = feasible_combination(cols, tuple(1 for _ in range(m)))
    if lam is None:
        return None
    return tuple(lam[j] - lam[d + j] for j in range(d))
