"""Finite presheaves and natural transformations on a :class:`FinCat`.

Elements of ``X(c)`` are the integers ``0 .. |X(c)|-1``.  The action of a
morphism ``u: c' -> c`` is a tuple sending ``X(c)`` to ``X(c')``.  Every
constructor validates functoriality eagerly, against a generating set of
the site, which suffices by induction on word length.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from .budget import Budget, as_budget
from .errors import NaturalityError, PresheafError
from .fincat import FinCat


class Presheaf:
    """A contravariant functor ``C^op -> FinSet``."""

    def __init__(
        self,
        site: FinCat,
        sizes: Sequence[int],
        act: Sequence[Sequence[int]],
        names: Sequence[Sequence[str]] | None = None,
        label: str | None = None,
        check: bool = True,
    ):
        self.site = site
        self.sizes = tuple(int(s) for s in sizes)
        self.act = tuple(tuple(a) for a in act)
        self.names = tuple(tuple(n) for n in names) if names is not None else None
        self.label = label
        if check:
            self._validate()
        self._hash = hash((self.sizes, self.act))

    def _validate(self) -> None:
        C = self.site
        if len(self.sizes) != C.n_objects:
            raise PresheafError("one section count per object is required")
        if len(self.act) != C.n_morphisms:
            raise PresheafError("one action table per morphism is required")
        if self.names is not None:
            for c, ns in enumerate(self.names):
                if len(ns) != self.sizes[c] or len(set(ns)) != len(ns):
                    raise PresheafError(f"element names at {C.objects[c]!r} do not match the sections")
        for u in range(C.n_morphisms):
            a = self.act[u]
            src, dst = self.sizes[C.cod[u]], self.sizes[C.dom[u]]
            if len(a) != src:
                raise PresheafError(f"action of {C.mor_ids[u]!r} has the wrong length")
            if any(not 0 <= y < dst for y in a):
                raise PresheafError(f"action of {C.mor_ids[u]!r} leaves the sections")
        for c in range(C.n_objects):
            if self.act[C.identity[c]] != tuple(range(self.sizes[c])):
                raise PresheafError(f"identity at {C.objects[c]!r} acts non-trivially")
        rows = C._rows
        for f in C.generators:
            af = self.act[f]
            for g in C.out[C.cod[f]]:
                ag, agf = self.act[g], self.act[rows[g][f]]
                for x in range(len(ag)):
                    if agf[x] != af[ag[x]]:
                        ids = (C.mor_ids[g], C.mor_ids[f])
                        raise PresheafError(f"action is not functorial on the composite {ids}")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Presheaf)
            and self.sizes == other.sizes
            and self.act == other.act
            and self.site == other.site
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        label = self.label or "Presheaf"
        return f"<{label} on {self.site.name or 'site'}: sizes {self.sizes}>"

    def restrict(self, x: int, u: int) -> int:
        """``x·u`` for ``x`` in ``X(cod u)``."""
        return self.act[u][x]

    def name_of(self, c: int, x: int) -> str:
        return self.names[c][x] if self.names is not None else str(x)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for s in self.sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    def elements(self) -> Iterator[tuple[int, int]]:
        for c, n in enumerate(self.sizes):
            for x in range(n):
                yield c, x

    def section_count(self, c: str | int) -> int:
        return self.sizes[self.site.ob(c)]

    def with_names(self, names: Sequence[Sequence[str]] | None) -> Presheaf:
        return Presheaf(self.site, self.sizes, self.act, names, self.label, check=False)


@dataclass(frozen=True, eq=False)
class NatTrans:
    """A natural transformation, one component tuple per object."""

    source: Presheaf
    target: Presheaf
    comps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "comps", tuple(tuple(c) for c in self.comps))

    @classmethod
    def checked(cls, source: Presheaf, target: Presheaf, comps) -> NatTrans:
        t = cls(source, target, comps)
        t.validate()
        return t

    def validate(self) -> None:
        X, Y = self.source, self.target
        C = X.site
        if Y.site != C:
            raise NaturalityError("source and target live on different sites")
        if len(self.comps) != C.n_objects:
            raise NaturalityError("one component per object is required")
        for c in range(C.n_objects):
            comp = self.comps[c]
            if len(comp) != X.sizes[c] or any(not 0 <= y < Y.sizes[c] for y in comp):
                raise NaturalityError(f"component at {C.objects[c]!r} is not a function X(c) -> Y(c)")
        for u in C.generators:
            c, d = C.cod[u], C.dom[u]
            ax, ay = X.act[u], Y.act[u]
            pc, pd = self.comps[c], self.comps[d]
            for x in range(X.sizes[c]):
                if pd[ax[x]] != ay[pc[x]]:
                    raise NaturalityError(
                        f"naturality fails at {C.mor_ids[u]!r} on element {X.name_of(c, x)!r}"
                    )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NatTrans) and self.comps == other.comps and \
            self.source == other.source and self.target == other.target

    def __hash__(self) -> int:
        return hash(self.comps)

    def __call__(self, c: int, x: int) -> int:
        return self.comps[c][x]

    def compose(self, first: NatTrans) -> NatTrans:
        """``self ∘ first``."""
        if first.target != self.source:
            raise NaturalityError("natural transformations are not composable")
        comps = tuple(tuple(b[y] for y in a) for a, b in zip(first.comps, self.comps))
        return NatTrans(first.source, self.target, comps)

    @property
    def is_iso(self) -> bool:
        return all(sorted(c) == list(range(n)) for c, n in zip(self.comps, self.target.sizes)) and \
            self.source.sizes == self.target.sizes

    @property
    def is_mono(self) -> bool:
        return all(len(set(c)) == len(c) for c in self.comps)


def identity_nat(X: Presheaf) -> NatTrans:
    return NatTrans(X, X, tuple(tuple(range(n)) for n in X.sizes))


# -- basic presheaves --------------------------------------------------


def yoneda(C: FinCat, c: str | int) -> Presheaf:
    """The representable ``C(-, c)``; element ``i`` of degree ``d`` is the i-th morphism of hom(d, c)."""
    return _yoneda(C, C.ob(c))


@lru_cache(maxsize=256)
def _yoneda(C: FinCat, c: int) -> Presheaf:
    sizes = [len(C.hom[(d, c)]) for d in range(C.n_objects)]
    rows = C._rows
    act = []
    for u in range(C.n_morphisms):
        act.append(tuple(C.hom_pos[rows[v][u]] for v in C.hom[(C.cod[u], c)]))
    names = [[C.mor_ids[v] for v in C.hom[(d, c)]] for d in range(C.n_objects)]
    return Presheaf(C, sizes, act, names, label=f"y({C.objects[c]})")


def terminal(C: FinCat) -> Presheaf:
    return Presheaf(C, [1] * C.n_objects, [(0,)] * C.n_morphisms, label="1", check=False)


def initial(C: FinCat) -> Presheaf:
    return Presheaf(C, [0] * C.n_objects, [()] * C.n_morphisms, label="0", check=False)


def to_terminal(X: Presheaf) -> NatTrans:
    return NatTrans(X, terminal(X.site), tuple((0,) * n for n in X.sizes))


def _same_site(*Xs: Presheaf) -> FinCat:
    C = Xs[0].site
    for X in Xs[1:]:
        if X.site != C:
            raise PresheafError("operands live on different sites")
    return C


# -- finite limits and colimits --------------------------------------


def product_many(factors: Sequence[Presheaf]) -> tuple[Presheaf, list[NatTrans]]:
    """Pointwise product; the first factor is the most significant digit."""
    if not factors:
        raise PresheafError("product of no factors: use terminal()")
    C = _same_site(*factors)
    k = len(factors)
    sizes = []
    for c in range(C.n_objects):
        n = 1
        for X in factors:
            n *= X.sizes[c]
        sizes.append(n)
    tuples = [list(itertools.product(*(range(X.sizes[c]) for X in factors))) for c in range(C.n_objects)]

    def index(c: int, tup: Sequence[int]) -> int:
        i = 0
        for X, x in zip(factors, tup):
            i = i * X.sizes[c] + x
        return i

    act = []
    for u in range(C.n_morphisms):
        c, d = C.cod[u], C.dom[u]
        acts = [X.act[u] for X in factors]
        act.append(tuple(index(d, [a[x] for a, x in zip(acts, tup)]) for tup in tuples[c]))
    P = Presheaf(C, sizes, act, check=False, label=" × ".join(X.label or "X" for X in factors))
    projs = [
        NatTrans(P, factors[i], tuple(tuple(t[i] for t in tuples[c]) for c in range(C.n_objects)))
        for i in range(k)
    ]
    return P, projs


def product(X: Presheaf, Y: Presheaf) -> tuple[Presheaf, NatTrans, NatTrans]:
    P, (p, q) = product_many([X, Y])
    return P, p, q


def pair(f: NatTrans, g: NatTrans, P: Presheaf | None = None) -> NatTrans:
    """``<f, g>: Z -> X × Y``."""
    if P is None:
        P, _, _ = product(f.target, g.target)
    Y = g.target
    comps = tuple(
        tuple(fx * Y.sizes[c] + gx for fx, gx in zip(f.comps[c], g.comps[c]))
        for c in range(len(f.comps))
    )
    return NatTrans(f.source, P, comps)


def coproduct_many(summands: Sequence[Presheaf]) -> tuple[Presheaf, list[NatTrans]]:
    C = _same_site(*summands) if summands else None
    if C is None:
        raise PresheafError("coproduct of no summands: use initial()")
    offs = [[0] * len(summands) for _ in range(C.n_objects)]
    sizes = []
    for c in range(C.n_objects):
        acc = 0
        for i, X in enumerate(summands):
            offs[c][i] = acc
            acc += X.sizes[c]
        sizes.append(acc)
    act = []
    for u in range(C.n_morphisms):
        c, d = C.cod[u], C.dom[u]
        row = []
        for i, X in enumerate(summands):
            row.extend(offs[d][i] + y for y in X.act[u])
        act.append(tuple(row))
    S = Presheaf(C, sizes, act, check=False, label=" + ".join(X.label or "X" for X in summands))
    injs = [
        NatTrans(X, S, tuple(tuple(offs[c][i] + x for x in range(X.sizes[c])) for c in range(C.n_objects)))
        for i, X in enumerate(summands)
    ]
    return S, injs


def coproduct(X: Presheaf, Y: Presheaf) -> tuple[Presheaf, NatTrans, NatTrans]:
    S, (i, j) = coproduct_many([X, Y])
    return S, i, j


def _parallel(f: NatTrans, g: NatTrans) -> None:
    if f.source != g.source or f.target != g.target:
        raise PresheafError("equalizer/coequalizer needs a parallel pair")


def subpresheaf(X: Presheaf, keep: Sequence[Iterable[int]]) -> tuple[Presheaf, NatTrans]:
    """The subpresheaf on the given element sets, which must be closed under the action."""
    C = X.site
    kept = [sorted(set(k)) for k in keep]
    pos = [{x: i for i, x in enumerate(k)} for k in kept]
    act = []
    for u in range(C.n_morphisms):
        c, d = C.cod[u], C.dom[u]
        try:
            act.append(tuple(pos[d][X.act[u][x]] for x in kept[c]))
        except KeyError:
            raise PresheafError("element sets are not closed under the action") from None
    names = None
    if X.names is not None:
        names = [[X.names[c][x] for x in kept[c]] for c in range(C.n_objects)]
    S = Presheaf(C, [len(k) for k in kept], act, names, check=False)
    return S, NatTrans(S, X, tuple(tuple(k) for k in kept))


def generated_subpresheaf(X: Presheaf, gens: Iterable[tuple[int, int]]) -> tuple[Presheaf, NatTrans]:
    """Smallest subpresheaf containing the given ``(object, element)`` pairs."""
    C = X.site
    keep = [set() for _ in range(C.n_objects)]
    for c, x in gens:
        for u in C.into[c]:
            keep[C.dom[u]].add(X.act[u][x])
    return subpresheaf(X, keep)


def equalizer(f: NatTrans, g: NatTrans) -> tuple[Presheaf, NatTrans]:
    _parallel(f, g)
    X = f.source
    keep = [[x for x in range(n) if f.comps[c][x] == g.comps[c][x]] for c, n in enumerate(X.sizes)]
    return subpresheaf(X, keep)


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def quotient(X: Presheaf, pairs: Iterable[tuple[int, int, int]]) -> tuple[Presheaf, NatTrans]:
    """Quotient by the smallest congruence identifying each ``(object, x, y)``.

    Classes are numbered in order of their least element.
    """
    C = X.site
    ufs = [_UnionFind(n) for n in X.sizes]
    work = list(pairs)
    while work:
        c, a, b = work.pop()
        if ufs[c].union(a, b):
            for u in C.generators_into[c]:
                act = X.act[u]
                work.append((C.dom[u], act[a], act[b]))
    maps, sizes = [], []
    for c, n in enumerate(X.sizes):
        roots, m = {}, []
        for x in range(n):
            r = ufs[c].find(x)
            if r not in roots:
                roots[r] = len(roots)
            m.append(roots[r])
        maps.append(tuple(m))
        sizes.append(len(roots))
    act = []
    for u in range(C.n_morphisms):
        c, d = C.cod[u], C.dom[u]
        row = [0] * sizes[c]
        for x in range(X.sizes[c]):
            row[maps[c][x]] = maps[d][X.act[u][x]]
        act.append(tuple(row))
    Q = Presheaf(C, sizes, act)
    return Q, NatTrans(X, Q, tuple(maps))


def coequalizer(f: NatTrans, g: NatTrans) -> tuple[Presheaf, NatTrans]:
    _parallel(f, g)
    X = f.source
    pairs = [(c, f.comps[c][x], g.comps[c][x]) for c, x in X.elements()]
    return quotient(f.target, pairs)


def finite_limit_colimit(kind: str, operands: Sequence):
    """Dispatch to the pointwise (co)limit named by ``kind``.

    ``product``/``coproduct`` take presheaves; ``equalizer``/``coequalizer``
    take a parallel pair of natural transformations.  The result is the
    object followed by its structure maps.
    """
    if kind == "product":
        P, projs = product_many(list(operands))
        return (P, *projs)
    if kind == "coproduct":
        S, injs = coproduct_many(list(operands))
        return (S, *injs)
    if kind in ("equalizer", "coequalizer"):
        if len(operands) != 2:
            raise PresheafError(f"{kind} takes exactly two natural transformations")
        return (equalizer if kind == "equalizer" else coequalizer)(*operands)
    raise PresheafError(f"unknown (co)limit kind {kind!r}")


def glue(C: FinCat, cells: Sequence[str | int],
         identify: Iterable[tuple[tuple[int, str | int], tuple[int, str | int]]] = ()) -> Presheaf:
    """Glue representables along faces.

    ``cells`` lists the object of each free cell; ``((i, u), (j, v))`` identifies
    the restriction of cell ``i`` along ``u`` with that of cell ``j`` along ``v``.
    """
    reps = [yoneda(C, C.ob(c)) for c in cells]
    S, injs = coproduct_many(reps)
    pairs = []
    for (i, u), (j, v) in identify:
        u, v = C.mor(u), C.mor(v)
        if C.dom[u] != C.dom[v] or C.cod[u] != C.ob(cells[i]) or C.cod[v] != C.ob(cells[j]):
            raise PresheafError("glued faces have mismatched types")
        d = C.dom[u]
        pairs.append((d, injs[i].comps[d][C.hom_pos[u]], injs[j].comps[d][C.hom_pos[v]]))
    Q, _ = quotient(S, pairs)
    return Q


# -- enumeration of natural transformations ---------------------------


def _search_order(C: FinCat) -> list[int]:
    return sorted(range(C.n_objects), key=lambda c: (-len(C.into[c]), c))


def iter_nat_transformations(X: Presheaf, Y: Presheaf, budget: Budget | int | None = None,
                             fixed: Mapping[tuple[int, int], int] | None = None) -> Iterator[tuple]:
    """Yield component tables of every natural transformation ``X -> Y``.

    Backtracking over elements, highest objects first; choosing the image of
    ``x`` forces the image of every restriction of ``x``, so conflicts are
    detected as soon as they arise.  ``fixed`` pre-assigns some images.
    """
    C = _same_site(X, Y)
    budget = as_budget(budget, "natural transformations")
    into = C.into
    dom = C.dom
    Xa, Ya = X.act, Y.act
    assign = [[-1] * n for n in X.sizes]
    trail: list[tuple[int, int]] = []

    def propagate(c: int, x: int, y: int) -> bool:
        for u in into[c]:
            d = dom[u]
            xx, yy = Xa[u][x], Ya[u][y]
            cur = assign[d][xx]
            if cur < 0:
                assign[d][xx] = yy
                trail.append((d, xx))
            elif cur != yy:
                return False
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            d, xx = trail.pop()
            assign[d][xx] = -1

    if fixed:
        for (c, x), y in sorted(fixed.items()):
            if assign[c][x] >= 0 and assign[c][x] != y:
                return
            if not propagate(c, x, y):
                return
    slots = [(c, x) for c in _search_order(C) for x in range(X.sizes[c])]
    n = len(slots)

    def rec(i: int):
        while i < n and assign[slots[i][0]][slots[i][1]] >= 0:
            i += 1
        if i == n:
            yield tuple(tuple(a) for a in assign)
            return
        c, x = slots[i]
        for y in range(Y.sizes[c]):
            budget.charge()
            mark = len(trail)
            if propagate(c, x, y):
                yield from rec(i + 1)
            undo(mark)

    yield from rec(0)


def nat_transformations(X: Presheaf, Y: Presheaf, budget: Budget | int | None = None) -> list[NatTrans]:
    """All natural transformations ``X -> Y``, sorted by component table."""
    tables = sorted(iter_nat_transformations(X, Y, budget))
    return [NatTrans(X, Y, t) for t in tables]


def count_nat_transformations(X: Presheaf, Y: Presheaf, budget: Budget | int | None = None) -> int:
    return sum(1 for _ in iter_nat_transformations(X, Y, budget))


# -- exponentials -----------------------------------------------------


@dataclass(eq=False)
class Exponential:
    """``Y^X`` with its elements materialized as component tables.

    An element of degree ``c`` is a natural transformation
    ``y(c) × X -> Y``; its component at ``d`` is indexed by
    ``pos(v) * |X(d)| + x`` for ``v: d -> c``.
    """

    presheaf: Presheaf
    base: Presheaf
    target: Presheaf
    elements: list[list[tuple]]
    index: list[dict]
    reps: list[Presheaf]

    @property
    def site(self) -> FinCat:
        return self.base.site

    def evaluate(self, c: int, t: int, x: int) -> int:
        """``ev_c(t, x) = t_c(id_c, x)``."""
        C = self.site
        pos = C.hom_pos[C.identity[c]]
        return self.elements[c][t][c][pos * self.base.sizes[c] + x]

    @cached_property
    def ev(self) -> NatTrans:
        P, _, _ = product(self.presheaf, self.base)
        comps = []
        for c in range(self.site.n_objects):
            nx = self.base.sizes[c]
            comps.append(tuple(self.evaluate(c, t, x) for t in range(self.presheaf.sizes[c]) for x in range(nx)))
        return NatTrans(P, self.target, tuple(comps))

    def transpose(self, h: NatTrans, Z: Presheaf) -> NatTrans:
        """The map ``Z -> Y^X`` corresponding to ``h: Z × X -> Y``."""
        C = self.site
        X = self.base
        comps = []
        for c in range(C.n_objects):
            comp = []
            for z in range(Z.sizes[c]):
                table = []
                for d in range(C.n_objects):
                    nx = X.sizes[d]
                    row = []
                    for v in C.hom[(d, c)]:
                        zv = Z.act[v][z]
                        row.extend(h.comps[d][zv * nx + x] for x in range(nx))
                    table.append(tuple(row))
                comp.append(self.index[c][tuple(table)])
            comps.append(tuple(comp))
        return NatTrans(Z, self.presheaf, tuple(comps))

    def name(self, f: NatTrans) -> int:
        """The point of ``Y^X`` naming ``f: X -> Y`` (an element at the terminal object)."""
        C = self.site
        t = C.terminal
        if t is None:
            raise PresheafError("names of maps need a terminal object")
        table = []
        for d in range(C.n_objects):
            # y(t)(d) is a singleton, so the component is f_d itself
            table.append(tuple(f.comps[d]))
        return self.index[t][tuple(table)]

    def as_map(self, t: int) -> NatTrans:
        """The map ``X -> Y`` named by the point ``t`` at the terminal object."""
        C = self.site
        term = C.terminal
        return NatTrans(self.base, self.target, self.elements[term][t])


def exponential(X: Presheaf, Y: Presheaf, budget: Budget | int | None = None) -> Exponential:
    """``Y^X`` with ``(Y^X)(c) = Nat(y(c) × X, Y)``."""
    C = _same_site(X, Y)
    budget = as_budget(budget, "exponential")
    reps = [yoneda(C, c) for c in range(C.n_objects)]
    elements, index = [], []
    for c in range(C.n_objects):
        P, _, _ = product(reps[c], X)
        tables = sorted(iter_nat_transformations(P, Y, budget))
        elements.append(tables)
        index.append({t: i for i, t in enumerate(tables)})
    rows = C._rows
    act = []
    for u in range(C.n_morphisms):
        c, c2 = C.cod[u], C.dom[u]
        row = []
        for t in elements[c]:
            # (t·u)_d(v, x) = t_d(u∘v, x)
            table = []
            for d in range(C.n_objects):
                nx = X.sizes[d]
                td = t[d]
                out = []
                for v in C.hom[(d, c2)]:
                    base = C.hom_pos[rows[u][v]] * nx
                    out.extend(td[base:base + nx])
                table.append(tuple(out))
            row.append(index[c2][tuple(table)])
        act.append(tuple(row))
    E = Presheaf(C, [len(e) for e in elements], act, label=f"{Y.label or 'Y'}^{X.label or 'X'}")
    return Exponential(E, X, Y, elements, index, reps)


# -- subobject classifier ---------------------------------------------


@dataclass(eq=False)
class Classifier:
    """``Ω`` with sieves stored as bitmasks over ``C.into[c]`` positions."""

    presheaf: Presheaf
    sieves: list[list[int]]
    true: NatTrans

    def characteristic(self, X: Presheaf, keep: Sequence[Iterable[int]]) -> NatTrans:
        C = X.site
        keep = [set(k) for k in keep]
        index = [{s: i for i, s in enumerate(ss)} for ss in self.sieves]
        comps = []
        for c in range(C.n_objects):
            comp = []
            for x in range(X.sizes[c]):
                mask = 0
                for i, u in enumerate(C.into[c]):
                    if X.act[u][x] in keep[C.dom[u]]:
                        mask |= 1 << i
                comp.append(index[c][mask])
            comps.append(tuple(comp))
        return NatTrans(X, self.presheaf, tuple(comps))


def _sieves_on(C: FinCat, c: int, budget: Budget) -> list[int]:
    into = C.into[c]
    pos = {u: i for i, u in enumerate(into)}
    rows = C._rows
    principal = []
    for u in into:
        mask = 0
        for v in C.into[C.dom[u]]:
            mask |= 1 << pos[rows[u][v]]
        principal.append(mask)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for s in frontier:
            for i, p in enumerate(principal):
                if s >> i & 1:
                    continue
                t = s | p
                if t not in seen:
                    budget.charge()
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return sorted(seen, key=lambda m: (bin(m).count("1"), m))


def subobject_classifier(C: FinCat, budget: Budget | int | None = None) -> Classifier:
    """Sieves on each object, acting by pullback."""
    budget = as_budget(budget, "subobject classifier")
    sieves = [_sieves_on(C, c, budget) for c in range(C.n_objects)]
    index = [{s: i for i, s in enumerate(ss)} for ss in sieves]
    pos = [{u: i for i, u in enumerate(C.into[c])} for c in range(C.n_objects)]
    rows = C._rows
    act = []
    for u in range(C.n_morphisms):
        c, d = C.cod[u], C.dom[u]
        row = []
        for s in sieves[c]:
            mask = 0
            for i, v in enumerate(C.into[d]):
                if s >> pos[c][rows[u][v]] & 1:
                    mask |= 1 << i
            row.append(index[d][mask])
        act.append(tuple(row))
    Om = Presheaf(C, [len(s) for s in sieves], act, label="Ω")
    full = tuple((index[c][(1 << len(C.into[c])) - 1],) for c in range(C.n_objects))
    return Classifier(Om, sieves, NatTrans(terminal(C), Om, full))


def subpresheaves(X: Presheaf, budget: Budget | int | None = None) -> list[tuple[frozenset, ...]]:
    """Every subpresheaf of ``X`` as a tuple of element sets (brute force)."""
    budget = as_budget(budget, "subpresheaves")
    C = X.site
    elems = list(X.elements())
    budget.require(2 ** len(elems), "subsets of a presheaf")
    out = []
    for bits in range(2 ** len(elems)):
        budget.charge()
        keep = [set() for _ in range(C.n_objects)]
        for i, (c, x) in enumerate(elems):
            if bits >> i & 1:
                keep[c].add(x)
        if all(X.act[u][x] in keep[C.dom[u]] for u in C.generators for x in keep[C.cod[u]]):
            out.append(tuple(frozenset(k) for k in keep))
    return out
