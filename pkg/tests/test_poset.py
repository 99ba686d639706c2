from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest
from conftest import empty_simplex_q2, unimodular_triangle, unit_cube, unit_square

from _oracles import union_find_components
from normwalk.generators import BitSource
from normwalk.intlinalg import dot
from normwalk.lattice import convex_hull
from normwalk.poset import (
    build_atlas,
    distance_strata,
    embed_map,
    enumerate_jumps_down,
    enumerate_jumps_up,
    height_bound,
    is_maximal,
    is_minimal,
    points_at_distance,
    register_embed_map,
    walk,
)


# --- distance strata -----------------------------------------------------------

def test_square_first_stratum_is_the_ring():
    pts = points_at_distance(unit_square(), 1)
    assert len(pts) == 12
    ring = {
        p for p in product(range(-1, 3), repeat=2)
        if not (0 <= p[0] <= 1 and 0 <= p[1] <= 1)
    }
    assert set(pts) == ring


def test_triangle_first_stratum():
    pts = points_at_distance(unimodular_triangle(), 1)
    assert len(pts) == 12


def test_strata_disjoint_and_cover_near_cube():
    P = unit_cube(3)
    strata = distance_strata(P, 2)
    assert set(strata[1]) & set(strata[2]) == set()
    # oracle: direct residual computation over a box
    for j in (1, 2):
        for z in strata[j]:
            assert -min(dot(n, z) - b for n, b in P.facets) == j


def test_points_at_distance_zero_rejected():
    with pytest.raises(ValueError):
        points_at_distance(unit_square(), 0)


# --- jumps up --------------------------------------------------------------------

def test_triangle_jump_to_square():
    jumps = enumerate_jumps_up(unimodular_triangle())
    match = [j for j in jumps if j.point == (1, 1)]
    assert len(match) == 1
    j = match[0]
    assert j.target.vertices == unit_square().vertices
    assert j.height == 1 and j.volume == 1


def test_square_jump_east():
    jumps = enumerate_jumps_up(unit_square())
    match = [j for j in jumps if j.point == (2, 0)]
    assert len(match) == 1
    j = match[0]
    assert j.height == 1
    assert j.volume == 1  # normalized areas 3 vs 2
    assert j.target.normalized_volume == 3


def test_jump_invariants_and_bound_on_cube():
    P = unit_cube(3)
    bound = height_bound(P)
    assert bound == 2
    jumps = enumerate_jumps_up(P)
    assert jumps
    base_count = P.n_lattice_points
    for j in jumps:
        assert j.target.n_lattice_points == base_count + 1
        assert 1 <= j.height <= bound
        assert j.volume >= 1
        assert j.target.dim == P.dim


def test_jump_candidate_enumeration_complete():
    # independent audit: scan a generous box for every point within the bound
    P = unit_square()
    bound = height_bound(P)
    strata = distance_strata(P, bound)
    listed = {z for pts in strata.values() for z in pts}
    brute = set()
    for z in product(range(-4, 6), repeat=2):
        r = min(dot(n, z) - b for n, b in P.facets)
        if -bound <= r <= -1:
            brute.add(z)
    assert listed == brute


def test_jumps_up_requires_normal_input():
    with pytest.raises(ValueError):
        enumerate_jumps_up(empty_simplex_q2())


# --- jumps down -------------------------------------------------------------------

def test_segment_shrinks_to_both_endpoints():
    seg = convex_hull([(0,), (1,)])
    downs = enumerate_jumps_down(seg)
    assert {z for _, z in downs} == {(0,), (1,)}
    assert all(P.dim == 0 for P, _ in downs)


def test_triangle_shrinks_to_edges():
    downs = enumerate_jumps_down(unimodular_triangle())
    assert len(downs) == 3
    for P, z in downs:
        assert P.dim == 1  # unimodular pyramid relation
        assert z in unimodular_triangle().vertices


def test_square_shrinks_to_triangles():
    downs = enumerate_jumps_down(unit_square())
    assert len(downs) == 4
    for P, _ in downs:
        assert P.dim == 2
        assert P.normalized_volume == 1


def test_empty_simplex_apex_not_a_pyramid_shrink():
    # conv(0,e1,e2,(1,1,2)) is not integrally closed: rejected upfront
    with pytest.raises(ValueError):
        enumerate_jumps_down(empty_simplex_q2())


def test_down_up_duality():
    for Q in (unit_square(), convex_hull([(0, 0), (2, 0), (0, 1), (2, 1)])):
        for P, z in enumerate_jumps_down(Q):
            if P.dim != Q.dim:
                continue
            ups = enumerate_jumps_up(P)
            assert any(
                j.point == z and j.target.vertices == Q.vertices for j in ups
            )


# --- minimal / maximal --------------------------------------------------------------

def test_point_is_minimal():
    assert is_minimal(convex_hull([(2, 5)]))


def test_triangle_not_minimal_square_not_maximal():
    assert not is_minimal(unimodular_triangle())
    assert not is_maximal(unit_square())


def test_lower_dimensional_never_maximal():
    assert not is_maximal(convex_hull([(0, 0), (1, 0)]))


# --- walks ---------------------------------------------------------------------------

def test_greedy_walks_deterministic():
    t1 = walk(unit_cube(3), "greedy_volume", budget=3)
    t2 = walk(unit_cube(3), "greedy_volume", budget=3)
    assert [p.vertices for p in t1.chain] == [p.vertices for p in t2.chain]
    assert t1.terminated_reason == "step_budget"


def test_greedy_first_step_maximizes_volume():
    P = unit_cube(3)
    jumps = enumerate_jumps_up(P)
    best = max(j.volume for j in jumps)
    trace = walk(P, "greedy_volume", budget=1)
    assert trace.jumps[0].volume == best
    tied = [j.point for j in jumps if j.volume == best]
    assert trace.jumps[0].point == min(tied)


def test_random_walk_replays_from_same_bits():
    data = bytes(range(64))
    t1 = walk(unit_square(), "random", budget=4, bits=BitSource(data))
    t2 = walk(unit_square(), "random", budget=4, bits=BitSource(data))
    assert [j.point for j in t1.jumps] == [j.point for j in t2.jumps]


def test_walk_zeta_partial_exact():
    trace = walk(unit_square(), "greedy_volume", budget=3)
    vols = trace.volumes()
    expected = sum((Fraction(1, v) for v in vols), Fraction(0))
    assert trace.zeta_partial(1) == expected
    assert trace.zeta_partial(2) <= trace.zeta_partial(1)
    both = trace.zeta_partial(1, include_initial=True)
    assert both == expected + Fraction(1, trace.chain[0].normalized_volume)


def test_walk_errors():
    with pytest.raises(ValueError):
        walk(unit_square(), "greedy_volume", budget=0)
    with pytest.raises(ValueError):
        walk(unit_square(), "random", budget=2)  # no bits


# --- atlas ----------------------------------------------------------------------------

def test_atlas_unit_box_has_fifteen_elements():
    atlas = build_atlas(2, 1)
    assert len(atlas.elements) == 15
    by_dim = {}
    for P in atlas.elements:
        by_dim[P.dim] = by_dim.get(P.dim, 0) + 1
    assert by_dim == {0: 4, 1: 6, 2: 5}  # 4 points, 6 segments, 4 triangles + square


def test_atlas_edges_are_elementary():
    atlas = build_atlas(2, 1)
    for a, b in atlas.hasse_edges:
        P, Q = atlas.elements[a], atlas.elements[b]
        assert Q.n_lattice_points == P.n_lattice_points + 1


def test_atlas_connected():
    atlas = build_atlas(2, 1)
    assert atlas.betti[0] == 1
    # oracle: union-find on the Hasse edges
    assert union_find_components(len(atlas.elements), atlas.hasse_edges) == 1


def test_atlas_full_dim_elements_all_have_jumps():
    # d=2 analog of the no-maximal-elements observation
    atlas = build_atlas(2, 1)
    for P in atlas.elements:
        if P.dim == 2:
            assert enumerate_jumps_up(P)


# --- embed map stub ---------------------------------------------------------------------

def test_embed_map_unimplemented_by_default():
    with pytest.raises(NotImplementedError):
        embed_map(unit_square())


def test_embed_map_pluggable():
    register_embed_map(lambda obj: (0.0,) * obj.ambient_dim)
    try:
        assert embed_map(unit_square()) == (0.0, 0.0)
    finally:
        register_embed_map(None)
        import normwalk.poset as poset_mod

        poset_mod._embed_map_impl = None
