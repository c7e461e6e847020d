from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from cohesio.budget import Budget
from cohesio.errors import BudgetExceeded, NaturalityError, PresheafError
from cohesio.fincat import builtin_site
from cohesio.presheaf import (
    NatTrans,
    Presheaf,
    coequalizer,
    coproduct,
    count_nat_transformations,
    equalizer,
    exponential,
    finite_limit_colimit,
    identity_nat,
    initial,
    nat_transformations,
    product,
    subobject_classifier,
    subpresheaves,
    terminal,
    to_terminal,
    yoneda,
)
from cohesio.samples import random_presheaf
from oracle import naive_exponential_sizes, naive_nat_count, naive_sieve_count

# sieve counts per object, from the bitmask oracle
OMEGA_SIZES = {"terminal": (2,), "delta1": (2, 5), "delta:2": (2, 5, 19)}


def rand(C, seed, **kw):
    return random_presheaf(C, random.Random(seed), **kw)


def test_yoneda_terminal_vertex(delta1):
    assert yoneda(delta1, "[0]").sizes == (1, 1)


def test_yoneda_walking_edge(delta1):
    I = yoneda(delta1, "[1]")
    assert I.sizes == (2, 3)
    deg = [e for e in range(3) if I.act[delta1.mor("[1]->[1]:00")][e] == e or I.act[delta1.mor("[1]->[1]:11")][e] == e]
    assert len(deg) == 2


def test_yoneda_delta2_edge(delta2):
    # hom([m],[1]) for m = 0, 1, 2
    assert yoneda(delta2, "[1]").sizes == (2, 3, 4)


def test_action_must_be_functorial(delta1):
    I = yoneda(delta1, "[1]")
    act = [list(a) for a in I.act]
    act[delta1.mor("[1]->[0]:00")] = [1]
    with pytest.raises(PresheafError):
        Presheaf(delta1, I.sizes, act)


def test_identity_must_act_trivially(delta1):
    S, _, _ = coproduct(yoneda(delta1, "[0]"), yoneda(delta1, "[0]"))
    act = [list(a) for a in S.act]
    act[delta1.identity[0]] = [1, 0]
    with pytest.raises(PresheafError):
        Presheaf(delta1, S.sizes, act)


def test_unnatural_family_is_rejected(delta1):
    I = yoneda(delta1, "[1]")
    with pytest.raises(NaturalityError):
        NatTrans.checked(I, I, ((1, 1), (0, 1, 2)))


def test_product_with_terminal(delta1):
    X = rand(delta1, 3)
    P, p, q = product(X, terminal(delta1))
    assert p.is_iso


def test_coproduct_of_vertices_is_discrete(delta1):
    S, i, j = coproduct(yoneda(delta1, "[0]"), yoneda(delta1, "[0]"))
    assert S.sizes == (2, 2)


def test_coequalizer_of_endpoints_is_a_loop(delta1):
    I = yoneda(delta1, "[1]")
    T = terminal(delta1)
    zero = NatTrans.checked(T, I, ((0,), (0,)))
    one = NatTrans.checked(T, I, ((1,), (2,)))
    Q, q = coequalizer(zero, one)
    # one node; a degenerate loop and the former edge, now a loop
    assert Q.sizes == (1, 2)


def test_equalizer_of_identity_with_itself(delta1):
    X = rand(delta1, 4)
    E, e = equalizer(identity_nat(X), identity_nat(X))
    assert e.is_iso


def test_finite_limit_colimit_dispatch(delta1):
    X = rand(delta1, 5)
    P, *_ = finite_limit_colimit("product", [X, X])
    assert P.sizes == tuple(n * n for n in X.sizes)
    with pytest.raises(PresheafError):
        finite_limit_colimit("pullback", [X])
    with pytest.raises(PresheafError):
        finite_limit_colimit("equalizer", [identity_nat(X)])


def test_nonparallel_pair_is_rejected(delta1):
    X, Y = yoneda(delta1, "[0]"), yoneda(delta1, "[1]")
    with pytest.raises(PresheafError):
        equalizer(identity_nat(X), identity_nat(Y))


def test_exponential_units(delta1):
    Y = rand(delta1, 7)
    T = terminal(delta1)
    assert exponential(T, Y).presheaf.sizes == Y.sizes
    assert exponential(Y, T).presheaf.sizes == (1, 1)
    assert exponential(initial(delta1), Y).presheaf.sizes == (1, 1)


def test_endomorphism_exponential_of_walking_edge(delta1):
    I = yoneda(delta1, "[1]")
    E = exponential(I, I)
    assert E.presheaf.sizes == (3, 6) == naive_exponential_sizes(I, I)


def test_points_of_interval(delta2):
    assert count_nat_transformations(terminal(delta2), yoneda(delta2, "[1]")) == 2


def test_maps_to_terminal(delta2):
    assert count_nat_transformations(rand(delta2, 1), terminal(delta2)) == 1


def test_enumeration_is_sorted_and_natural(delta1):
    X, Y = rand(delta1, 8), rand(delta1, 9)
    fs = nat_transformations(X, Y)
    assert [f.comps for f in fs] == sorted({f.comps for f in fs})
    for f in fs:
        f.validate()
    assert len(fs) == naive_nat_count(X, Y)


def test_budget_aborts_enumeration(delta2):
    X = yoneda(delta2, "[2]")
    with pytest.raises(BudgetExceeded):
        exponential(X, X, Budget(5))


@pytest.mark.parametrize("name", sorted(OMEGA_SIZES))
def test_subobject_classifier_sizes(name):
    C = builtin_site(name)
    Om = subobject_classifier(C)
    assert Om.presheaf.sizes == OMEGA_SIZES[name]
    assert Om.presheaf.sizes == tuple(naive_sieve_count(C, c) for c in range(C.n_objects))


SITES = ["delta1", "delta:2", "cube:2"]


@given(st.sampled_from(SITES), st.integers(0, 10**6), st.data())
def test_yoneda_bijection(name, seed, data):
    C = builtin_site(name)
    X = rand(C, seed)
    c = data.draw(st.integers(0, C.n_objects - 1))
    assert count_nat_transformations(yoneda(C, c), X) == X.sizes[c]


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_exponential_universal_property(sz, sx, sy):
    C = builtin_site("delta1")
    Z = rand(C, sz, max_per_degree=3, max_cells=2)
    X = rand(C, sx, max_per_degree=3, max_cells=2)
    Y = rand(C, sy, max_per_degree=3, max_cells=2)
    E = exponential(X, Y)
    P, _, _ = product(Z, X)
    assert count_nat_transformations(Z, E.presheaf) == count_nat_transformations(P, Y)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_transpose_then_evaluate_recovers_map(sx, sy):
    C = builtin_site("delta1")
    X, Y = rand(C, sx, max_per_degree=3), rand(C, sy, max_per_degree=3)
    E = exponential(X, Y)
    for f in nat_transformations(X, Y)[:4]:
        t = E.name(f)
        assert E.as_map(t) == f


@given(st.sampled_from(["delta1", "delta:2"]), st.integers(0, 10**6))
def test_classifier_classifies_subpresheaves(name, seed):
    C = builtin_site(name)
    X = rand(C, seed, max_per_degree=3, max_cells=2)
    if X.total > 14:
        return
    Om = subobject_classifier(C)
    subs = subpresheaves(X)
    chars = {Om.characteristic(X, s).comps for s in subs}
    assert len(chars) == len(subs) == count_nat_transformations(X, Om.presheaf)


@given(st.sampled_from(SITES), st.integers(0, 10**6))
def test_random_presheaves_are_valid(name, seed):
    C = builtin_site(name)
    X = rand(C, seed)
    Presheaf(C, X.sizes, X.act)
    assert max(X.sizes) <= 4
    assert to_terminal(X).target == terminal(C)
