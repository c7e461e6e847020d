from __future__ import annotations

import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from cohesio.errors import CohesioError
from cohesio.fincat import builtin_site, delta_truncated
from cohesio.presheaf import yoneda
from cohesio.realization import (
    MalformedPoint,
    RationalPoint,
    brute_force_interior,
    cube_spec,
    endpoints_spec,
    grid_agreement,
    interior_membership,
    realize_point,
    simplex_retraction,
    simplex_spec,
    span_closure_related,
    spans_related,
    surjectivity_certificate,
)
from cohesio.samples import random_simplicial_set
from oracle import random_span_relation


@pytest.fixture(scope="module")
def s2():
    return simplex_spec(2)


@pytest.fixture(scope="module")
def c2():
    return cube_spec(2)


def test_interior_examples(s2, c2):
    assert interior_membership(s2, "[2]", (Q(1, 3), Q(2, 3)))
    assert not interior_membership(s2, "[2]", (Q(0), Q(1, 2)))
    assert not interior_membership(c2, "[0,1]^2", (Q(1, 4), Q(1, 4)))
    assert interior_membership(c2, "[0,1]^2", (Q(1, 4), Q(1, 3)))
    assert interior_membership(simplex_spec(0), "[0]", ())


def test_brute_force_matches_examples(s2, c2):
    assert brute_force_interior(s2, "[2]", (Q(1, 3), Q(2, 3)))
    assert not brute_force_interior(s2, "[2]", (Q(1, 3), Q(1, 3)))
    assert not brute_force_interior(c2, "[0,1]^2", (Q(0), Q(1, 2)))
    assert not brute_force_interior(c2, "[0,1]^2", (Q(1, 2), Q(1, 2)))


def test_points_must_be_well_formed(s2):
    with pytest.raises(MalformedPoint):
        RationalPoint.parse("1/2,x")
    with pytest.raises(MalformedPoint):
        RationalPoint.parse("3/2")
    with pytest.raises(MalformedPoint):
        interior_membership(s2, "[2]", (Q(2, 3), Q(1, 3)))
    with pytest.raises(MalformedPoint):
        interior_membership(s2, "[2]", (Q(1, 3),))
    assert str(RationalPoint.parse(" 1/3, 2/3 ")) == "1/3,2/3"


def test_small_grid_agreement():
    rep = grid_agreement(simplex_spec(2), denominator=4)
    assert rep["agree"] and rep["checked"] > 0
    assert grid_agreement(cube_spec(2), denominator=3)["agree"]


def test_certificates():
    cert = surjectivity_certificate(simplex_spec(3))
    assert cert["certified"]
    assert cert["objects"][2] == {"object": "[2]", "witness": "1/3,2/3", "status": "interior"}
    assert surjectivity_certificate(cube_spec(2))["certified"]


def test_endpoints_carrier_is_not_certified():
    cert = surjectivity_certificate(endpoints_spec())
    assert not cert["certified"] and cert["failing_object"] == "[1]"
    assert cert["objects"][-1]["status"] == "empty_interior"


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_retraction(n):
    C = delta_truncated(4)
    a, b = simplex_retraction(n, C)
    ba = b.compose(a)
    assert all(ba.comps[c] == tuple(range(len(ba.comps[c]))) for c in range(C.n_objects))


def test_retraction_components_on_vertices():
    C = delta_truncated(2)
    a, _ = simplex_retraction(2, C)
    # vertex i of [2] goes to (a_1(i), a_2(i)) with a_1 = (0,1,1), a_2 = (0,0,1)
    assert a.comps[0] == (0, 2, 3)


def test_retraction_rejects_bad_degree():
    with pytest.raises(CohesioError):
        simplex_retraction(0)
    with pytest.raises(CohesioError):
        simplex_retraction(3, delta_truncated(2))


def test_canonical_forms(delta2):
    Y = yoneda(delta2, "[1]")
    edge = Y.names[1].index("[1]->[1]:01")
    assert realize_point(Y, 1, edge, (Q(1, 2),)) == (1, edge, (Q(1, 2),))
    # the degenerate edge on the target vertex collapses to that vertex
    degen = Y.names[1].index("[1]->[1]:11")
    vertex = Y.names[0].index("[0]->[1]:1")
    assert realize_point(Y, 1, degen, (Q(1, 2),)) == (0, vertex, ())
    # a rightmost 1 is the face skipping the last vertex, leaving the source
    assert realize_point(Y, 1, edge, (Q(1),)) == (0, Y.names[0].index("[0]->[1]:0"), ())
    assert realize_point(Y, 1, edge, (Q(0),)) == (0, vertex, ())


def test_oracle_confirms_boundary_classes(delta2):
    Y = yoneda(delta2, "[1]")
    degen = Y.names[1].index("[1]->[1]:11")
    vertex = Y.names[0].index("[0]->[1]:1")
    assert span_closure_related(Y, (1, degen, (Q(1, 2),)), (0, vertex, ()))
    edge = Y.names[1].index("[1]->[1]:01")
    assert spans_related(Y, (1, edge, (Q(1),)), (0, Y.names[0].index("[0]->[1]:0"), ()))
    assert not span_closure_related(Y, (1, edge, (Q(1, 2),)), (0, vertex, ()))


def test_degree_beyond_truncation(delta2):
    with pytest.raises(CohesioError):
        realize_point(yoneda(delta2, "[1]"), 3, 0, (Q(1, 4), Q(1, 2), Q(3, 4)))


@given(st.integers(0, 10**6))
def test_canonical_form_is_constant_on_span_classes(seed):
    C = builtin_site("delta:2")
    rng = random.Random(seed)
    P = random_simplicial_set(C, rng)
    left, right = random_span_relation(P, rng)
    assert spans_related(P, left, right)
    a, b = realize_point(P, *left), realize_point(P, *right)
    assert a == b
    assert realize_point(P, *a) == a
    assert span_closure_related(P, left, a)


@given(st.sampled_from(["simplex", "cube"]), st.integers(1, 2), st.data())
def test_fast_and_slow_interiors_agree(kind, dim, data):
    spec = simplex_spec(2) if kind == "simplex" else cube_spec(2)
    q = data.draw(st.integers(1, 9))
    coords = data.draw(st.lists(st.integers(0, q), min_size=dim, max_size=dim))
    p = tuple(Q(c, q) for c in coords)
    if kind == "simplex":
        p = tuple(sorted(p))
        obj = f"[{dim}]"
    else:
        obj = f"[0,1]^{dim}"
    assert interior_membership(spec, obj, p) == brute_force_interior(spec, obj, p)
