"""Exact integer linear algebra: HNF, SNF, kernels, saturation, integer solves.

Everything here works on plain Python ints (arbitrary precision), with
matrices as lists of lists.  Transformation witnesses are verified by
multiplication before they are returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

Vec = tuple[int, ...]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u):
    return tuple(c * a for a in u)


def gcd_vector(v) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def primitive(v: Vec) -> Vec:
    """Divide an integer vector by the gcd of its entries (direction kept)."""
    g = gcd_vector(v)
    if g <= 1:
        return tuple(v)
    return tuple(a // g for a in v)


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    cols = list(zip(*B))
    return [[dot(row, col) for col in cols] for row in A]


def mat_vec(A, x):
    return tuple(dot(row, x) for row in A)


def vec_mat(x, A):
    """Row vector times matrix: sum_i x_i * A[i]."""
    n = len(A[0]) if A else 0
    out = [0] * n
    for xi, row in zip(x, A):
        if xi:
            for j, a in enumerate(row):
                out[j] += xi * a
    return tuple(out)


def transpose(A):
    return [list(col) for col in zip(*A)]


def det(M) -> int:
    """Determinant of a square integer matrix via fraction-free Bareiss."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rank(M) -> int:
    """Rank of an integer (or Fraction) matrix, by rational elimination."""
    rows = [[Fraction(a) for a in row] for row in M]
    r = 0
    cols = len(rows[0]) if rows else 0
    for j in range(cols):
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


# --- Hermite normal form (row style) ---------------------------------------

def hermite_normal_form(M) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style HNF: returns (H, U) with U unimodular and U @ M = H.

    H is in row echelon form with positive pivots, entries above each pivot
    reduced into [0, pivot), zero rows at the bottom.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    H = [list(row) for row in M]
    U = identity_matrix(m)
    r = 0
    for j in range(n):
        piv = None
        for i in range(r, m):
            if H[i][j] != 0:
                piv = i
                break
        if piv is None:
            continue
        H[r], H[piv] = H[piv], H[r]
        U[r], U[piv] = U[piv], U[r]
        # clear the column below the pivot with gcd steps
        for i in range(r + 1, m):
            while H[i][j] != 0:
                q = H[r][j] // H[i][j]
                H[r] = [a - q * b for a, b in zip(H[r], H[i])]
                U[r] = [a - q * b for a, b in zip(U[r], U[i])]
                H[r], H[i] = H[i], H[r]
                U[r], U[i] = U[i], U[r]
        if H[r][j] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = H[i][j] // H[r][j]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
        if r == m:
            break
    return H, U


# --- Smith normal form ------------------------------------------------------

@dataclass(frozen=True)
class SmithForm:
    """D = U @ M @ V with U, V unimodular; inverses carried along."""

    diagonal: tuple[int, ...]
    D: list[list[int]]
    U: list[list[int]]
    V: list[list[int]]
    U_inv: list[list[int]]
    V_inv: list[list[int]]

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def smith_normal_form(M) -> SmithForm:
    """Smith normal form with transformation witnesses, verified on exit."""
    m = len(M)
    n = len(M[0]) if m else 0
    D = [list(row) for row in M]
    U, Ui = identity_matrix(m), identity_matrix(m)
    V, Vi = identity_matrix(n), identity_matrix(n)

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_add(i, j, q):  # row_i -= q * row_j
        D[i] = [a - q * b for a, b in zip(D[i], D[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]
        for row in Ui:
            row[j] += q * row[i]

    def col_add(i, j, q):  # col_i -= q * col_j
        for row in D:
            row[i] -= q * row[j]
        for row in V:
            row[i] -= q * row[j]
        Vi[j] = [a + q * b for a, b in zip(Vi[j], Vi[i])]

    def row_negate(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def eliminate_at(t):
        """Make D[t][t] the only nonzero entry in its row and column.

        Remainder steps reduce the non-pivot row/column and swap only on a
        nonzero remainder, so |pivot| strictly decreases whenever fill-in
        recurs and the loop terminates.
        """
        while True:
            for i in range(t + 1, m):
                while D[i][t] != 0:
                    q = D[i][t] // D[t][t]
                    if q:
                        row_add(i, t, q)
                    if D[i][t] != 0:
                        row_swap(t, i)
            for j in range(t + 1, n):
                while D[t][j] != 0:
                    q = D[t][j] // D[t][t]
                    if q:
                        col_add(j, t, q)
                    if D[t][j] != 0:
                        col_swap(t, j)
            if not any(D[i][t] for i in range(t + 1, m)) and not any(
                D[t][j] for j in range(t + 1, n)
            ):
                break
        if D[t][t] < 0:
            row_negate(t)

    t = 0
    while t < min(m, n):
        piv = next(
            ((i, j) for i in range(t, m) for j in range(t, n) if D[i][j] != 0),
            None,
        )
        if piv is None:
            break
        row_swap(t, piv[0])
        col_swap(t, piv[1])
        eliminate_at(t)
        t += 1

    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for i in range(t - 1):
            a, b = D[i][i], D[i + 1][i + 1]
            if a and b % a != 0:
                col_add(i, i + 1, -1)  # col_i += col_{i+1}, brings b into column i
                eliminate_at(i)
                eliminate_at(i + 1)
                changed = True

    diag = tuple(D[i][i] for i in range(min(m, n)) if D[i][i] != 0)
    form = SmithForm(diagonal=diag, D=D, U=U, V=V, U_inv=Ui, V_inv=Vi)
    _verify_smith(M, form)
    return form


def _verify_smith(M, f: SmithForm) -> None:
    m, n = len(f.U), len(f.V)
    if mat_mul(mat_mul(f.U, M), f.V) != f.D:
        raise AssertionError("smith witness failed U*M*V == D")
    if mat_mul(f.U, f.U_inv) != identity_matrix(m):
        raise AssertionError("smith witness failed U*Uinv == I")
    if mat_mul(f.V, f.V_inv) != identity_matrix(n):
        raise AssertionError("smith witness failed V*Vinv == I")
    for a, b in zip(f.diagonal, f.diagonal[1:]):
        if b % a != 0:
            raise AssertionError("smith diagonal not a divisibility chain")


@dataclass(frozen=True)
class HnfSnf:
    """Combined Hermite + Smith data for one matrix, witnesses verified."""

    hermite: list[list[int]]
    hermite_transform: list[list[int]]
    smith: SmithForm


def hnf_snf(M) -> HnfSnf:
    """Hermite and Smith normal forms with verified unimodular witnesses."""
    if not M:
        raise ValueError("empty matrix")
    H, U = hermite_normal_form(M)
    if mat_mul(U, M) != H:
        raise AssertionError("hermite witness failed U*M == H")
    if abs(det(U)) != 1:
        raise AssertionError("hermite transform not unimodular")
    return HnfSnf(hermite=H, hermite_transform=U, smith=smith_normal_form(M))


# --- derived lattice utilities ----------------------------------------------

def row_lattice_basis(M) -> list[Vec]:
    """Basis (HNF rows) of the lattice generated by the rows of M."""
    H, _ = hermite_normal_form(M)
    return [tuple(row) for row in H if any(row)]


def saturation_basis(M) -> tuple[list[Vec], int]:
    """Basis of (row span of M) ∩ Z^n, plus the index of the row lattice in it.

    Uses D = U M V: the row lattice equals the lattice spanned by d_i * w_i,
    where the w_i are the first rank rows of V^{-1}; the saturation is spanned
    by the w_i themselves.
    """
    f = smith_normal_form(M)
    r = f.rank
    basis = [tuple(f.V_inv[i]) for i in range(r)]
    index = 1
    for d in f.diagonal:
        index *= d
    return basis, index


def kernel_basis(M) -> list[Vec]:
    """Basis of the saturated lattice {x in Z^n : M x = 0} (columns of V)."""
    f = smith_normal_form(M)
    n = len(f.V)
    r = f.rank
    return [tuple(f.V[i][j] for i in range(n)) for j in range(r, n)]


def solve_integer(M, w) -> Vec | None:
    """One integer solution u of M u = w, or None if none exists."""
    f = smith_normal_form(M)
    m = len(M)
    y = mat_vec(f.U, w)
    r = f.rank
    coeffs = []
    for i in range(m):
        d = f.D[i][i] if i < len(f.D[i]) else 0
        if i < r:
            if y[i] % d != 0:
                return None
            coeffs.append(y[i] // d)
        elif y[i] != 0:
            return None
    n = len(f.V)
    coeffs += [0] * (n - len(coeffs))
    return mat_vec(f.V, coeffs)
