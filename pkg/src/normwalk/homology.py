"""Integer simplicial homology of order complexes by Smith normal form."""
from __future__ import annotations

from .intlinalg import smith_normal_form
from .limits import guard


def order_complex_chains(n_vertices: int, edges, max_simplices: int | None = None):
    """All chains of the partial order generated by covering edges.

    edges are (lower, upper) index pairs; the result is a list indexed by
    simplex dimension m, holding the m-simplices as ascending index tuples
    (chains x_0 < ... < x_m).
    """
    succ = [0] * n_vertices  # bitmask of strict successors
    adj = [[] for _ in range(n_vertices)]
    for a, b in edges:
        adj[a].append(b)
    # reachability by reverse topological DFS with memoized bitmasks
    seen = [False] * n_vertices
    order = []

    def topo(v):
        seen[v] = True
        for w in adj[v]:
            if not seen[w]:
                topo(w)
        order.append(v)

    for v in range(n_vertices):
        if not seen[v]:
            topo(v)
    for v in order:
        mask = 0
        for w in adj[v]:
            mask |= (1 << w) | succ[w]
        succ[v] = mask

    chains_by_dim: list[list[tuple[int, ...]]] = [[(v,) for v in range(n_vertices)]]
    total = n_vertices
    frontier = chains_by_dim[0]
    while frontier:
        nxt = []
        for chain in frontier:
            mask = succ[chain[-1]]
            w = 0
            while mask:
                low = mask & -mask
                w = low.bit_length() - 1
                nxt.append(chain + (w,))
                mask ^= low
        total += len(nxt)
        if max_simplices is not None:
            guard_cap(total, max_simplices)
        else:
            guard(total, "order complex")
        if not nxt:
            break
        chains_by_dim.append(sorted(nxt))
        frontier = nxt
    return chains_by_dim


def guard_cap(total, cap):
    from .limits import ResourceCapError

    if total > cap:
        raise ResourceCapError(f"order complex needs {total} simplices, cap is {cap}")


def boundary_matrix(lower, upper):
    """Boundary operator from (m)-simplices `upper` to (m-1)-simplices `lower`."""
    index = {s: i for i, s in enumerate(lower)}
    rows = len(lower)
    cols = len(upper)
    M = [[0] * cols for _ in range(rows)]
    for j, s in enumerate(upper):
        sign = 1
        for omit in range(len(s)):
            face = s[:omit] + s[omit + 1 :]
            M[index[face]][j] += sign
            sign = -sign
    return M


def betti_numbers(chains_by_dim):
    """Betti numbers (and torsion factors) of a chain complex over Z.

    Ranks are read off Smith normal forms; b_m = n_m - rank d_m - rank d_{m+1}.
    Returns (betti list, torsion list), torsion[m] listing invariant factors
    greater than one of d_{m+1}.
    """
    dims = len(chains_by_dim)
    ranks = [0] * (dims + 1)
    torsion_factors: list[tuple[int, ...]] = [()] * dims
    for m in range(1, dims):
        M = boundary_matrix(chains_by_dim[m - 1], chains_by_dim[m])
        if not M or not M[0]:
            continue
        f = smith_normal_form(M)
        ranks[m] = f.rank
        torsion_factors[m - 1] = tuple(d for d in f.diagonal if d > 1)
    betti = []
    for m in range(dims):
        betti.append(len(chains_by_dim[m]) - ranks[m] - ranks[m + 1])
    while len(betti) > 1 and betti[-1] == 0:
        betti.pop()
    return betti, torsion_factors
