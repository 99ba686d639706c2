from __future__ import annotations

import random
from fractions import Fraction

import pytest

from normwalk.continuous import (
    DefectBound,
    PyramidalChain,
    chain_defect,
    hausdorff_distance,
    is_pyramid,
    is_pyramidal_extension,
    point_polytope_squared_distance,
    rational_hull,
    search_pyramidal_chain,
    sqrt_enclosure,
    verify_chain,
)

F = Fraction


def square(side=1):
    return rational_hull([(0, 0), (side, 0), (0, side), (side, side)])


def triangle():
    return rational_hull([(0, 0), (1, 0), (0, 1)])


# --- hausdorff distance -----------------------------------------------------------

def test_hausdorff_self_is_zero():
    P = square()
    assert hausdorff_distance(P, P).is_zero


def test_hausdorff_nested_squares():
    d = hausdorff_distance(square(1), square(2))
    assert d.squared == 2  # attained at (2,2) vs (1,1)
    lo, hi = d.sqrt_enclosure(10)
    assert lo <= F(14142135623, 10 ** 10) <= hi


def test_hausdorff_point_vs_segment():
    X = rational_hull([(0,)])
    Y = rational_hull([(0,), (1,)])
    assert hausdorff_distance(X, Y).squared == 1


def test_point_distance_interior_face():
    P = square()
    assert point_polytope_squared_distance((F(1, 2), F(1, 2)), P) == 0
    assert point_polytope_squared_distance((2, F(1, 2)), P) == 1
    assert point_polytope_squared_distance((2, 2), P) == 2


def _sqrt_leq_sum(a, b, c):
    # sqrt(a) <= sqrt(b) + sqrt(c), decided in exact arithmetic
    t = a - b - c
    if t <= 0:
        return True
    return t * t <= 4 * b * c


def test_hausdorff_metric_axioms_random_triangles():
    rng = random.Random(61)
    for _ in range(12):
        tris = []
        while len(tris) < 3:
            pts = [
                (F(rng.randint(-4, 4), rng.randint(1, 3)),
                 F(rng.randint(-4, 4), rng.randint(1, 3)))
                for _ in range(3)
            ]
            T = rational_hull(pts)
            if T.dim == 2:
                tris.append(T)
        X, Y, Z = tris
        dxy = hausdorff_distance(X, Y)
        dyx = hausdorff_distance(Y, X)
        assert dxy.squared == dyx.squared  # symmetry
        assert hausdorff_distance(X, X).is_zero  # identity
        dxz = hausdorff_distance(X, Z).squared
        dzy = hausdorff_distance(Z, Y).squared
        assert _sqrt_leq_sum(dxy.squared, dxz, dzy)  # triangle inequality


def test_sqrt_enclosure_brackets():
    lo, hi = sqrt_enclosure(F(2), 6)
    assert lo * lo <= 2 <= hi * hi
    assert hi - lo == F(1, 10 ** 6)


# --- pyramid detection ----------------------------------------------------------------

def test_simplex_is_pyramid():
    T = rational_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    w = is_pyramid(T)
    assert w is not None
    assert len(w.base.vertices) == 3


def test_square_is_not_a_pyramid():
    assert is_pyramid(square()) is None


def test_square_based_pyramid():
    Q = rational_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)])
    w = is_pyramid(Q)
    assert w is not None
    assert w.apex == (F(0), F(0), F(1))
    assert len(w.base.vertices) == 4


# --- pyramidal extensions ----------------------------------------------------------------

def test_stacking_triangle_to_square():
    res = is_pyramidal_extension(triangle(), square())
    assert res.holds
    assert res.apex == (F(1), F(1))
    assert set(res.base_facet) == {(F(1), F(0)), (F(0), F(1))}


def test_pyramid_over_triangle():
    P = rational_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0)])
    Q = rational_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    res = is_pyramidal_extension(P, Q)
    assert res.holds
    assert res.apex == (F(0), F(0), F(1))


def test_vertex_beyond_two_facets_rejected():
    P = square()
    Q = rational_hull([(0, 0), (1, 0), (0, 1), (2, 2)])
    res = is_pyramidal_extension(P, Q)
    assert not res.holds
    assert "2 facets" in res.reason


def test_extension_preconditions():
    with pytest.raises(ValueError):
        is_pyramidal_extension(square(2), square(1))
    with pytest.raises(ValueError):
        is_pyramidal_extension(square(), square())


def test_extension_adds_exactly_one_vertex():
    # invariant: a holding extension differs by exactly the apex
    res = is_pyramidal_extension(triangle(), square())
    assert res.holds
    new = set(square().vertices) - set(triangle().vertices)
    assert new == {(F(1), F(1))}


# --- chains ---------------------------------------------------------------------------------

def _stacked_chain():
    p0 = triangle()
    p1 = square()
    p2 = rational_hull(list(square().vertices) + [(2, F(1, 2))])
    return [p0, p1, p2]


def test_verify_stacked_chain():
    assert verify_chain(PyramidalChain(chain=_stacked_chain()))


def test_verify_rejects_non_pyramidal_step():
    bad = PyramidalChain(
        chain=[square(), rational_hull([(0, 0), (1, 0), (0, 1), (2, 2)])]
    )
    assert not verify_chain(bad)


def test_single_element_chain_ok():
    assert verify_chain(PyramidalChain(chain=[square()]))


def test_chains_compose():
    c1 = _stacked_chain()
    extended = c1 + [rational_hull(list(c1[-1].vertices) + [(F(-1), F(1, 2))])]
    assert verify_chain(PyramidalChain(chain=extended))


def test_quasi_chain_with_pyramidal_witnesses():
    chain = _stacked_chain()
    quasi = PyramidalChain(
        chain=chain, kind="quasi_pyramidal", witnesses=[chain[0], chain[1]]
    )
    assert verify_chain(quasi)
    defect = chain_defect(quasi)
    assert not defect.is_zero
    d1 = hausdorff_distance(chain[0], chain[1]).squared
    d2 = hausdorff_distance(chain[1], chain[2]).squared
    assert [t.squared for t in defect.terms] == [d1, d2]
    lo, hi = defect.enclosure(8)
    assert lo <= hi


def test_defect_empty_chain_is_zero():
    c = PyramidalChain(chain=[square()], kind="quasi_pyramidal", witnesses=[])
    assert chain_defect(c).is_zero


def test_defect_requires_verified_quasi_chain():
    with pytest.raises(ValueError):
        chain_defect(PyramidalChain(chain=_stacked_chain()))
    bad = PyramidalChain(
        chain=[square(), square(2)], kind="quasi_pyramidal", witnesses=[square(2)]
    )
    with pytest.raises(ValueError):
        chain_defect(bad)


def test_defect_subdivided_not_larger():
    # one-step chain vs the same growth done in two stacked steps
    chain2 = _stacked_chain()
    direct = PyramidalChain(
        chain=[chain2[0], chain2[2]], kind="quasi_pyramidal", witnesses=[chain2[1]]
    )
    if verify_chain(direct):
        fine = PyramidalChain(
            chain=chain2, kind="quasi_pyramidal", witnesses=[chain2[0], chain2[1]]
        )
        assert verify_chain(fine)
        d_direct = chain_defect(direct)
        d_fine = chain_defect(fine)
        assert float(d_fine) <= float(d_direct) + 1e-9


# --- chain search -------------------------------------------------------------------------

def test_search_trivial_and_pyramid_cases():
    found = search_pyramidal_chain(square(), square())
    assert found is not None and len(found.chain) == 1
    P = rational_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0)])
    Q = rational_hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    found = search_pyramidal_chain(P, Q)
    assert found is not None
    assert len(found.chain) == 2
    assert verify_chain(found)


def test_search_nested_polygons_built_by_stacking():
    # the target is grown from the seed by stackings, so a chain exists
    P = rational_hull([(0, 0), (1, 0), (0, 1)])
    Q = rational_hull([(0, 0), (1, 0), (0, 1), (1, 1), (2, F(1, 2)), (-1, F(1, 2))])
    assert all(is_pyramidal_extension(P, Q) is not None for _ in (1,))
    found = search_pyramidal_chain(P, Q, budget=16)
    assert found is not None
    assert verify_chain(found)
    assert found.chain[-1].vertices == Q.vertices


def test_search_gives_up_within_budget():
    # the corner (-1,-1) stays beyond two facets: clipped steps cannot reach it
    P = rational_hull([(0, 0), (1, 0), (0, 1)])
    Q = rational_hull([(-1, -1), (3, 0), (0, 3)])
    assert search_pyramidal_chain(P, Q, budget=4) is None


def test_search_requires_containment():
    with pytest.raises(ValueError):
        search_pyramidal_chain(square(2), square(1))
