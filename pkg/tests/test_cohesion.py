from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from cohesio.cohesion import (
    CohesionContext,
    NotPreCohesive,
    beta,
    codiscrete,
    cohesion_report,
    continuity_map,
    discrete,
    is_fully_faithful_on,
    kappa,
    pieces,
    points,
    product_preserved,
    sigma,
    tau,
    theta,
    theta_composite,
    triangle_sigma_tau,
)
from cohesio.fincat import builtin_site, classify_site, validate_category
from cohesio.presheaf import coproduct, exponential, initial, subobject_classifier, terminal, yoneda
from cohesio.samples import random_presheaf
from oracle import naive_pieces


def rand(C, seed, **kw):
    return random_presheaf(C, random.Random(seed), **kw)


def test_pieces_examples(ctx1, ctx2, delta1, delta2):
    S, _, _ = coproduct(yoneda(delta1, "[0]"), yoneda(delta1, "[0]"))
    assert pieces(ctx1, S).count == 2
    assert pieces(ctx1, yoneda(delta1, "[1]")).count == 1
    assert pieces(ctx2, yoneda(delta2, "[2]")).count == 1


def test_points_examples(ctx2, delta2):
    assert len(points(ctx2, yoneda(delta2, "[1]"))) == 2
    assert len(points(ctx2, terminal(delta2))) == 1
    assert len(points(ctx2, yoneda(delta2, "[2]"))) == 3


def test_discrete_and_codiscrete(ctx1):
    assert discrete(ctx1, 0) == initial(ctx1.site)
    assert codiscrete(ctx1, 2).sizes == (2, 4)
    for n in range(4):
        assert sorted(tau(ctx1, n)) == list(range(n))


@pytest.mark.parametrize("kind", ["discrete", "codiscrete"])
def test_fully_faithful(ctx1, kind):
    for a in range(3):
        for b in range(3):
            assert is_fully_faithful_on(ctx1, kind, a, b)


def test_theta_on_walking_edge(ctx1, delta1):
    th = theta(ctx1, yoneda(delta1, "[1]"))
    assert th.table == (0, 0) and th.surjective


def test_theta_on_discrete_is_bijective(ctx2):
    th = theta(ctx2, discrete(ctx2, 3))
    assert th.surjective and th.injective


def test_kappa_examples(ctx1, delta1):
    T = terminal(delta1)
    assert kappa(ctx1, T, T).iso
    assert kappa(ctx1, discrete(ctx1, 2), yoneda(delta1, "[1]")).iso
    I = yoneda(delta1, "[1]")
    assert pieces(ctx1, exponential(I, I).presheaf).count == 1
    assert kappa(ctx1, I, I).iso


def test_not_pre_cohesive_site():
    doc = {
        "objects": ["a", "b"],
        "morphisms": [{"id": "1a", "dom": "a", "cod": "a"}, {"id": "1b", "dom": "b", "cod": "b"}],
        "identities": {"a": "1a", "b": "1b"},
        "compose": [{"g": "1a", "f": "1a", "result": "1a"}, {"g": "1b", "f": "1b", "result": "1b"}],
    }
    with pytest.raises(NotPreCohesive):
        CohesionContext(validate_category(doc))


@pytest.mark.parametrize("name", ["terminal", "delta1", "delta:2", "delta:3", "cube:2"])
def test_omega_connected_iff_sufficiently_cohesive(name):
    C = builtin_site(name)
    ctx = CohesionContext(C)
    Om = subobject_classifier(C).presheaf
    # the terminal site has a disconnected Ω (true and false) and is not sufficiently cohesive
    assert (pieces(ctx, Om).count == 1) == classify_site(C).sufficiently_cohesive


def test_report_shape(ctx1, delta1):
    rep = cohesion_report(ctx1, yoneda(delta1, "[1]"))
    assert rep["pieces"] == 1 and rep["points"] == 2
    assert rep["theta_surjective"] and rep["kappa_iso"] and rep["theta_matches_composite"]


SITES = ["delta1", "delta:2", "cube:2", "delta:3"]


@given(st.sampled_from(SITES), st.integers(0, 10**6))
def test_nullstellensatz(name, seed):
    ctx = CohesionContext(builtin_site(name))
    X = rand(ctx.site, seed)
    th = theta(ctx, X)
    assert th.surjective
    assert th.table == theta_composite(ctx, X)


@given(st.sampled_from(SITES), st.integers(0, 10**6))
def test_pieces_agree_with_oracle(name, seed):
    ctx = CohesionContext(builtin_site(name))
    X = rand(ctx.site, seed)
    assert pieces(ctx, X).count == naive_pieces(X)


@given(st.sampled_from(SITES), st.integers(0, 10**6), st.integers(0, 10**6))
def test_products_preserved(name, sx, sy):
    ctx = CohesionContext(builtin_site(name))
    assert product_preserved(ctx, rand(ctx.site, sx), rand(ctx.site, sy))


@given(st.sampled_from(SITES), st.integers(0, 10**6))
def test_triangle_and_naturality(name, seed):
    ctx = CohesionContext(builtin_site(name))
    X = rand(ctx.site, seed)
    assert triangle_sigma_tau(ctx, X)
    sigma(ctx, X).validate()
    beta(ctx, X).validate()


@given(st.sampled_from(["delta1", "delta:2"]), st.integers(0, 10**6), st.integers(0, 3))
def test_finite_continuity(name, seed, a):
    ctx = CohesionContext(builtin_site(name))
    X = rand(ctx.site, seed, max_per_degree=3)
    cd = continuity_map(ctx, X, a)
    assert cd.kappa_iso == cd.composite_iso
    assert cd.composite_iso
