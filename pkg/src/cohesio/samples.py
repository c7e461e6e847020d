"""Random and named presheaves used by the checks, tests and demos."""

from __future__ import annotations

import random
from typing import Sequence

from .errors import PresheafError
from .fincat import FinCat, delta_morphism
from .presheaf import Presheaf, coproduct_many, glue, quotient, yoneda


def random_presheaf(C: FinCat, rng: random.Random, max_per_degree: int = 4,
                    max_cells: int = 3) -> Presheaf:
    """A random quotient of a small coproduct of representables.

    Cells are picked at random objects; random identifications are merged
    (and closed into a congruence) until every degree has at most
    ``max_per_degree`` elements, highest objects first.  A few extra merges
    are sometimes added so that small shapes also show up.
    """
    ncells = rng.randint(1, max_cells)
    cells = [rng.randrange(C.n_objects) for _ in range(ncells)]
    X, _ = coproduct_many([yoneda(C, c) for c in cells])
    order = sorted(range(C.n_objects), key=lambda c: -len(C.into[c]))
    while True:
        over = [c for c in order if X.sizes[c] > max_per_degree]
        if over:
            c = over[0]
            k = X.sizes[c] - max_per_degree
            pairs = [(c, *rng.sample(range(X.sizes[c]), 2)) for _ in range(k)]
        else:
            spare = [c for c in order if X.sizes[c] >= 2]
            if not spare or rng.random() < 0.6:
                return X
            c = rng.choice(spare)
            pairs = [(c, *rng.sample(range(X.sizes[c]), 2))]
        X, _ = quotient(X, pairs)


def random_presheaves(C: FinCat, count: int, seed: int = 0, max_per_degree: int = 4) -> list[Presheaf]:
    rng = random.Random(seed)
    return [random_presheaf(C, rng, max_per_degree) for _ in range(count)]


def path_graph(C: FinCat, n: int) -> Presheaf:
    """Reflexive path ``0 -> 1 -> ... -> n`` on a site containing ``[0]`` and ``[1]``."""
    if n < 0:
        raise PresheafError("path length must be non-negative")
    if n == 0:
        return yoneda(C, "[0]")
    src = delta_morphism(0, 1, (0,))
    tgt = delta_morphism(0, 1, (1,))
    cells = ["[1]"] * n
    ident = [((i, tgt), (i + 1, src)) for i in range(n - 1)]
    X = glue(C, cells, ident)
    return X.with_names(None)


def random_reflexive_graph(C: FinCat, rng: random.Random, max_nodes: int = 4, max_edges: int = 4) -> Presheaf:
    """Random reflexive graph as a gluing of edges and loose vertices."""
    nodes = rng.randint(1, max_nodes)
    edges = rng.randint(0, max_edges)
    src = delta_morphism(0, 1, (0,))
    tgt = delta_morphism(0, 1, (1,))
    cells = ["[0]"] * nodes + ["[1]"] * edges
    vid = delta_morphism(0, 0, (0,))
    ident = []
    for e in range(edges):
        a, b = rng.randrange(nodes), rng.randrange(nodes)
        ident.append(((nodes + e, src), (a, vid)))
        ident.append(((nodes + e, tgt), (b, vid)))
    return glue(C, cells, ident)


def random_simplicial_set(C: FinCat, rng: random.Random, max_nondeg: int = 3) -> Presheaf:
    """Random 2-truncated simplicial set with few nondegenerate simplices per degree.

    Vertices, edges and triangles are chosen first, faces of edges at random,
    and faces of each triangle drawn among edges whose endpoints fit.  A
    triangle with no compatible boundary uses degenerate edges where needed.
    """
    nv = rng.randint(1, max_nondeg)
    ne = rng.randint(0, max_nondeg)
    nt = rng.randint(0, max_nondeg)
    ends = [(rng.randrange(nv), rng.randrange(nv)) for _ in range(ne)]
    cells = ["[0]"] * nv + ["[1]"] * ne + ["[2]"] * nt
    vid = delta_morphism(0, 0, (0,))
    ident = []
    for e, (a, b) in enumerate(ends):
        ident.append(((nv + e, delta_morphism(0, 1, (0,))), (a, vid)))
        ident.append(((nv + e, delta_morphism(0, 1, (1,))), (b, vid)))
    # triangle vertices p0, p1, p2; the edge opposite i has endpoints (p_j, p_k), j < k
    for t in range(nt):
        cell = nv + ne + t
        p = [rng.randrange(nv) for _ in range(3)]
        for i, (j, k) in enumerate([(1, 2), (0, 2), (0, 1)]):
            face = delta_morphism(1, 2, (j, k))
            fits = [e for e, ab in enumerate(ends) if ab == (p[j], p[k])]
            if fits and rng.random() < 0.8:
                e = rng.choice(fits)
                ident.append(((cell, face), (nv + e, delta_morphism(1, 1, (0, 1)))))
            elif p[j] == p[k]:
                ident.append(((cell, face), (p[j], delta_morphism(1, 0, (0, 0)))))
            else:
                # free edge of the triangle; only the vertices are glued
                pass
        for i in range(3):
            ident.append(((cell, delta_morphism(0, 2, (i,))), (p[i], vid)))
    return glue(C, cells, ident)


def group_nerve(C: FinCat, n: int, max_dim: int = 2) -> Presheaf:
    """Truncated nerve of the cyclic group of order ``n``.

    An m-simplex is a tuple ``(g_1, ..., g_m)``; restricting along ``θ``
    gives the tuple whose j-th entry is ``g_{θ(j-1)+1} + ... + g_{θ(j)}``.
    """
    import itertools

    if n < 1:
        raise PresheafError("group order must be positive")
    dims = [int(o.strip("[]")) for o in C.objects]
    simplices = [list(itertools.product(range(n), repeat=m)) for m in dims]
    index = [{s: i for i, s in enumerate(ss)} for ss in simplices]
    act = []
    for u in range(C.n_morphisms):
        head, vals = C.mor_ids[u].split(":")
        c, d = C.cod[u], C.dom[u]
        theta = [int(v) for v in vals] if "," not in vals else [int(v) for v in vals.split(",")]
        row = []
        for s in simplices[c]:
            out = tuple(sum(s[theta[j - 1]:theta[j]]) % n for j in range(1, len(theta)))
            row.append(index[d][out])
        act.append(tuple(row))
    names = [["(" + ",".join(map(str, s)) + ")" for s in ss] for ss in simplices]
    return Presheaf(C, [len(s) for s in simplices], act, names, label=f"N(Z/{n})")


def discrete_graph(C: FinCat, n: int) -> Presheaf:
    return glue(C, ["[0]"] * n)


def representables(C: FinCat) -> list[Presheaf]:
    return [yoneda(C, c) for c in range(C.n_objects)]


def corpus(C: FinCat, seeds: Sequence[int]) -> list[Presheaf]:
    return [random_presheaf(C, random.Random(s)) for s in seeds]
