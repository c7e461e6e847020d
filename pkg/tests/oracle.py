"""Naive reference computations used to derive frozen test values.

Nothing here shares code with the package beyond reading ``sizes``,
``act`` and the site tables.  Everything is exhaustive and slow on purpose.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from collections import deque


def order_preserving_maps(m: int, k: int) -> list[tuple[int, ...]]:
    """Monotone maps {0..m} -> {0..k}."""
    return [t for t in itertools.product(range(k + 1), repeat=m + 1)
            if all(a <= b for a, b in zip(t, t[1:]))]


def cube_maps(s: int, t: int) -> list[tuple]:
    """Maps [0,1]^s -> [0,1]^t built from projections and the constants 0, 1."""
    comps = ["0", "1"] + [f"p{i}" for i in range(s)]
    return list(itertools.product(comps, repeat=t))


def all_functions(n: int, m: int):
    return itertools.product(range(m), repeat=n)


def naive_is_natural(X, Y, comps) -> bool:
    C = X.site
    for u in range(C.n_morphisms):
        c, d = C.cod[u], C.dom[u]
        for x in range(X.sizes[c]):
            if comps[d][X.act[u][x]] != Y.act[u][comps[c][x]]:
                return False
    return True


def naive_nat_count(X, Y) -> int:
    """Count natural transformations by trying every family of functions."""
    C = X.site
    spaces = [list(all_functions(X.sizes[c], Y.sizes[c])) for c in range(C.n_objects)]
    return sum(1 for comps in itertools.product(*spaces) if naive_is_natural(X, Y, comps))


def naive_pieces(X) -> int:
    """Connected components of the category of elements, by breadth-first search."""
    C = X.site
    nodes = [(c, x) for c in range(C.n_objects) for x in range(X.sizes[c])]
    adj = {n: set() for n in nodes}
    for u in range(C.n_morphisms):
        c, d = C.cod[u], C.dom[u]
        for x in range(X.sizes[c]):
            a, b = (c, x), (d, X.act[u][x])
            adj[a].add(b)
            adj[b].add(a)
    seen, count = set(), 0
    for n in nodes:
        if n in seen:
            continue
        count += 1
        q = deque([n])
        seen.add(n)
        while q:
            v = q.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    q.append(w)
    return count


def naive_product(X, Y):
    """Pointwise product with pairs as elements; returns (sizes, act) only."""
    C = X.site
    pairs = [list(itertools.product(range(X.sizes[c]), range(Y.sizes[c]))) for c in range(C.n_objects)]
    index = [{p: i for i, p in enumerate(ps)} for ps in pairs]
    act = []
    for u in range(C.n_morphisms):
        c, d = C.cod[u], C.dom[u]
        act.append(tuple(index[d][(X.act[u][a], Y.act[u][b])] for a, b in pairs[c]))
    return _Raw(C, [len(p) for p in pairs], act)


class _Raw:
    def __init__(self, site, sizes, act):
        self.site, self.sizes, self.act = site, tuple(sizes), tuple(act)


def naive_representable(C, c):
    homs = [[u for u in range(C.n_morphisms) if C.dom[u] == d and C.cod[u] == c] for d in range(C.n_objects)]
    pos = [{u: i for i, u in enumerate(h)} for h in homs]
    act = []
    for u in range(C.n_morphisms):
        e, d = C.cod[u], C.dom[u]
        act.append(tuple(pos[d][C.compose(v, u)] for v in homs[e]))
    return _Raw(C, [len(h) for h in homs], act)


def naive_exponential_sizes(X, Y) -> tuple[int, ...]:
    C = X.site
    return tuple(naive_nat_count(naive_product(naive_representable(C, c), X), Y) for c in range(C.n_objects))


def naive_sieve_count(C, c) -> int:
    """Sets of morphisms into ``c`` closed under precomposition."""
    into = [u for u in range(C.n_morphisms) if C.cod[u] == c]
    count = 0
    for r in range(len(into) + 1):
        for S in itertools.combinations(into, r):
            s = set(S)
            if all(C.compose(u, v) in s for u in s for v in range(C.n_morphisms) if C.cod[v] == C.dom[u]):
                count += 1
    return count


def graph_distance(n_nodes: int, edges) -> list[list[int | None]]:
    """Floyd-Warshall over the symmetric closure of ``edges``."""
    INF = None
    d = [[0 if i == j else INF for j in range(n_nodes)] for i in range(n_nodes)]
    for a, b in edges:
        if a != b:
            d[a][b] = d[b][a] = 1
    for k in range(n_nodes):
        for i in range(n_nodes):
            for j in range(n_nodes):
                if d[i][k] is not None and d[k][j] is not None:
                    v = d[i][k] + d[k][j]
                    if d[i][j] is None or v < d[i][j]:
                        d[i][j] = v
    return d


def graph_edges(X, C):
    """(source, target) of every element of degree 1 of a reflexive graph."""
    src = C.mor_pos["[0]->[1]:0"]
    tgt = C.mor_pos["[0]->[1]:1"]
    one = C.obj_pos["[1]"]
    return [(X.act[src][e], X.act[tgt][e]) for e in range(X.sizes[one])]


def random_span_relation(P, rng, denominator=5):
    """A pair ``(x·u, s) ~ (x, A(u)s)`` related by one span, with ``s`` of bounded denominator."""
    from cohesio.fincat import delta_map
    from cohesio.realization import simplex_act

    C = P.site
    while True:
        e = rng.randrange(C.n_objects)
        k = rng.randrange(C.n_objects)
        if P.sizes[k] and C.hom[(e, k)]:
            break
    m = int(C.objects[e].strip("[]"))
    n = int(C.objects[k].strip("[]"))
    q = rng.randint(1, denominator)
    s = tuple(sorted(Fraction(rng.randint(0, q), q) for _ in range(m)))
    u = rng.choice(C.hom[(e, k)])
    x = rng.randrange(P.sizes[k])
    image = simplex_act(delta_map(C, u)[2], n, s)
    return (m, P.act[u][x], s), (n, x, image)
