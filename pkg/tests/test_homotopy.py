from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from cohesio.cohesion import CohesionContext, codiscrete, discrete, theta
from cohesio.errors import CohesioError
from cohesio.fincat import builtin_site
from cohesio.homotopy import (
    are_homotopic,
    check_hurewicz_laws,
    connector_paths,
    distance_report,
    homotopy_class,
    horn,
    hurewicz_compose,
    hurewicz_hom,
    is_kan,
    is_navigable,
    quintessential_check,
    standard_connector,
    verify_connector,
)
from cohesio.presheaf import identity_nat, nat_transformations, terminal, yoneda
from cohesio.samples import group_nerve, path_graph, random_presheaf, random_reflexive_graph
from oracle import graph_distance, graph_edges, naive_pieces


def rand(C, seed, **kw):
    return random_presheaf(C, random.Random(seed), **kw)


@pytest.fixture(scope="module")
def conn1(ctx1):
    return standard_connector(ctx1)


@pytest.fixture(scope="module")
def conn2(ctx2):
    return standard_connector(ctx2)


def test_connector_examples(ctx1, conn1, ctx2, conn2, delta1, delta2):
    assert verify_connector(ctx1, conn1, discrete(ctx1, 3)).coequalizer
    assert verify_connector(ctx2, conn2, yoneda(delta2, "[1]")).coequalizer
    assert verify_connector(ctx1, conn1, yoneda(delta1, "[1]")).coequalizer


def test_exponential_and_direct_paths_agree(ctx2, conn2, delta2):
    X = group_nerve(delta2, 2)
    a = connector_paths(ctx2, conn2, X)
    b = connector_paths(ctx2, conn2, X, via_exponential=True)
    assert sorted(zip(a.ev0, a.ev1)) == sorted(zip(b.ev0, b.ev1))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_path_bound_is_length(ctx1, conn1, delta1, n):
    X = path_graph(delta1, n)
    rep = distance_report(ctx1, conn1, X)
    assert rep.bound == n
    oracle = graph_distance(X.sizes[0], graph_edges(X, delta1))
    assert [list(r) for r in rep.d] == oracle


def test_discrete_bound_and_edge_bound(ctx1, conn1, delta1):
    assert distance_report(ctx1, conn1, discrete(ctx1, 3)).bound == 0
    rep = distance_report(ctx1, conn1, yoneda(delta1, "[1]"))
    assert rep.bound == 1 and rep.d[0][1] == 1


def test_navigability_examples(ctx1, conn1, ctx2, conn2, delta1, delta2):
    assert is_navigable(ctx1, conn1, codiscrete(ctx1, 2))
    nav = is_navigable(ctx1, conn1, path_graph(delta1, 2))
    assert not nav and nav.failing_pair is not None
    assert is_navigable(ctx2, conn2, group_nerve(delta2, 2))


def test_walking_edge_is_not_navigable_in_the_directed_sense(ctx1, conn1, delta1):
    # no path runs from the target vertex back to the source
    nav = is_navigable(ctx1, conn1, yoneda(delta1, "[1]"))
    assert not nav and nav.failing_pair == (1, 0)


def test_kan_examples(delta2):
    assert is_kan(terminal(delta2))
    res = is_kan(yoneda(delta2, "[1]"))
    assert not res
    assert res.failing_horn == {"m": 2, "k": 0, "faces": {"1": "[1]->[1]:00", "2": "[1]->[1]:01"}}
    assert is_kan(group_nerve(delta2, 2), 2)
    assert is_kan(group_nerve(delta2, 3))


def test_two_nondegenerate_edges_do_fill_the_outer_horn(delta2):
    # the horn with both faces equal to the nondegenerate edge is filled by (0,1,1)
    Y = yoneda(delta2, "[1]")
    two = delta2.ob("[2]")
    faces = {Y.act[delta2.mor("[1]->[2]:" + f)][Y.names[two].index("[2]->[1]:011")] for f in ("02", "01")}
    assert faces == {Y.names[1].index("[1]->[1]:01")}


def test_kan_rejects_excess_dimension(delta2):
    with pytest.raises(CohesioError):
        is_kan(terminal(delta2), 3)


def test_horn_sizes(delta2):
    H, inc = horn(delta2, 2, 1)
    # two edges glued at a vertex
    assert H.sizes[0] == 3
    assert inc.is_mono


def test_hurewicz_examples(ctx1, delta1):
    Y = rand(delta1, 2)
    assert hurewicz_hom(ctx1, terminal(delta1), Y).size == naive_pieces(Y)
    assert hurewicz_hom(ctx1, Y, terminal(delta1)).size == 1
    I = yoneda(delta1, "[1]")
    assert hurewicz_hom(ctx1, I, I).size == 1


def test_constant_maps_are_homotopic(ctx1, delta1):
    I, T = yoneda(delta1, "[1]"), terminal(delta1)
    const0, const1 = nat_transformations(T, I)
    assert are_homotopic(ctx1, const0, const1)
    assert are_homotopic(ctx1, const0, const0)


def test_quintessential_examples(ctx1, delta1):
    X = rand(delta1, 6)
    assert quintessential_check(ctx1, X, 1)
    assert quintessential_check(ctx1, discrete(ctx1, 2), 3)
    assert quintessential_check(ctx1, X, 2)


@given(st.integers(0, 10**6))
def test_reflexive_graph_distances(seed):
    C = builtin_site("delta1")
    ctx = CohesionContext(C)
    conn = standard_connector(ctx)
    X = random_reflexive_graph(C, random.Random(seed))
    rep = distance_report(ctx, conn, X)
    th = theta(ctx, X).table
    n = X.sizes[0]
    for x in range(n):
        assert rep.d[x][x] == 0
        for y in range(n):
            assert rep.d[x][y] == rep.d[y][x]
            assert (rep.d[x][y] is not None) == (th[x] == th[y])
    assert [list(r) for r in rep.d] == graph_distance(n, graph_edges(X, C))
    assert verify_connector(ctx, conn, X).coequalizer


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_hurewicz_laws(a, b, c, d):
    C = builtin_site("delta1")
    ctx = CohesionContext(C)
    X, Y, Z, W = (rand(C, s, max_per_degree=2, max_cells=2) for s in (a, b, c, d))
    laws = check_hurewicz_laws(ctx, X, Y, Z, W)
    assert laws == {"well_defined": True, "associative": True, "unital": True}


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_class_respects_composition(a, b, c):
    C = builtin_site("delta1")
    ctx = CohesionContext(C)
    X, Y, Z = (rand(C, s, max_per_degree=3, max_cells=2) for s in (a, b, c))
    HXY, HYZ, HXZ = hurewicz_hom(ctx, X, Y), hurewicz_hom(ctx, Y, Z), hurewicz_hom(ctx, X, Z)
    comp = hurewicz_compose(ctx, HYZ, HXY, HXZ)
    for f in nat_transformations(X, Y)[:3]:
        for g in nat_transformations(Y, Z)[:3]:
            gf = g.compose(f)
            assert HXZ.class_of(gf) == comp(HYZ.class_of(g), HXY.class_of(f))
    assert homotopy_class(ctx, identity_nat(X), hurewicz_hom(ctx, X, X)) == hurewicz_hom(ctx, X, X).identity
