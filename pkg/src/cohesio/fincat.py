"""Finite categories given by explicit tables.

A :class:`FinCat` stores objects and morphisms as opaque string ids and a
dense composition table over morphism indices.  Hom-sets, the lists of
morphisms into and out of every object, and a generating set are
precomputed, so downstream enumeration is table lookups.

Builders for the standard sites (truncated simplex categories, the cube
category and the opposite of strictly bipointed finite sets) name their
ids deterministically, so every report built on them is reproducible.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .budget import Budget, as_budget
from .errors import BudgetExceeded, CategoryError

log = logging.getLogger(__name__)

MAX_CUBE_DIM = 3


class FinCat:
    """A validated finite category.

    Instances are immutable; equality and hashing are by content.
    """

    def __init__(
        self,
        objects: Sequence[str],
        morphisms: Sequence[tuple[str, str, str]],
        identities: Mapping[str, str],
        compose: Iterable[tuple[str, str, str]],
        name: str | None = None,
    ):
        self.name = name
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            dup = [o for o in self.objects if self.objects.count(o) > 1][0]
            raise CategoryError(f"duplicate object {dup!r}", (dup,))
        self.obj_pos = {o: i for i, o in enumerate(self.objects)}

        ids, dom, cod = [], [], []
        for m in morphisms:
            mid, d, c = m
            if d not in self.obj_pos or c not in self.obj_pos:
                raise CategoryError(f"morphism {mid!r} has unknown endpoint", (mid,))
            ids.append(mid)
            dom.append(self.obj_pos[d])
            cod.append(self.obj_pos[c])
        self.mor_ids = tuple(ids)
        if len(set(ids)) != len(ids):
            dup = [m for m in ids if ids.count(m) > 1][0]
            raise CategoryError(f"duplicate morphism id {dup!r}", (dup,))
        self.mor_pos = {m: i for i, m in enumerate(ids)}
        self.dom = tuple(dom)
        self.cod = tuple(cod)

        ident = []
        for o in self.objects:
            mid = identities.get(o)
            if mid is None:
                raise CategoryError(f"object {o!r} has no identity", (o,))
            if mid not in self.mor_pos:
                raise CategoryError(f"identity {mid!r} of {o!r} is not a morphism", (mid,))
            k = self.mor_pos[mid]
            if self.dom[k] != self.obj_pos[o] or self.cod[k] != self.obj_pos[o]:
                raise CategoryError(f"identity {mid!r} is not an endomorphism of {o!r}", (mid,))
            ident.append(k)
        self.identity = tuple(ident)

        n = len(ids)
        table = np.full((n, n), -1, dtype=np.int64)
        for g, f, r in compose:
            for x in (g, f, r):
                if x not in self.mor_pos:
                    raise CategoryError(f"composite entry names unknown morphism {x!r}", (g, f))
            gi, fi, ri = self.mor_pos[g], self.mor_pos[f], self.mor_pos[r]
            if self.dom[gi] != self.cod[fi]:
                raise CategoryError(f"{g!r} and {f!r} are not composable", (g, f))
            if self.dom[ri] != self.dom[fi] or self.cod[ri] != self.cod[gi]:
                raise CategoryError(
                    f"composite of ({g!r}, {f!r}) is {r!r}, which has the wrong type", (g, f)
                )
            if table[gi, fi] >= 0 and table[gi, fi] != ri:
                raise CategoryError(f"composite of ({g!r}, {f!r}) given twice", (g, f))
            table[gi, fi] = ri
        self.comp = table
        self._check_laws()
        self._rows = table.tolist()

        hom: dict[tuple[int, int], list[int]] = {
            (a, b): [] for a in range(len(self.objects)) for b in range(len(self.objects))
        }
        for k in range(n):
            hom[(self.dom[k], self.cod[k])].append(k)
        self.hom = {key: tuple(v) for key, v in hom.items()}
        pos = [0] * n
        for ms in self.hom.values():
            for i, k in enumerate(ms):
                pos[k] = i
        self.hom_pos = tuple(pos)
        no = len(self.objects)
        self.into = tuple(
            tuple(k for a in range(no) for k in self.hom[(a, c)]) for c in range(no)
        )
        self.out = tuple(
            tuple(k for b in range(no) for k in self.hom[(c, b)]) for c in range(no)
        )
        self._key = (self.objects, self.mor_ids, self.dom, self.cod, self.identity, table.tobytes())
        self._hash = hash(self._key)

    # -- validation -------------------------------------------------

    def _check_laws(self) -> None:
        t = self.comp
        dom = np.asarray(self.dom)
        cod = np.asarray(self.cod)
        composable = dom[:, None] == cod[None, :]
        missing = np.argwhere(composable & (t < 0))
        if len(missing):
            g, f = missing[0]
            raise CategoryError(
                f"composite of composable pair ({self.mor_ids[g]!r}, {self.mor_ids[f]!r}) is missing",
                (self.mor_ids[g], self.mor_ids[f]),
            )
        extra = np.argwhere(~composable & (t >= 0))
        if len(extra):
            g, f = extra[0]
            raise CategoryError(
                f"({self.mor_ids[g]!r}, {self.mor_ids[f]!r}) are not composable",
                (self.mor_ids[g], self.mor_ids[f]),
            )
        n = len(self.mor_ids)
        idx = np.arange(n)
        ident = np.asarray(self.identity)
        left = t[ident[cod], idx]
        bad = np.nonzero(left != idx)[0]
        if len(bad):
            f = bad[0]
            raise CategoryError(f"id∘f != f for f = {self.mor_ids[f]!r}", (self.mor_ids[f],))
        right = t[idx, ident[dom]]
        bad = np.nonzero(right != idx)[0]
        if len(bad):
            g = bad[0]
            raise CategoryError(f"g∘id != g for g = {self.mor_ids[g]!r}", (self.mor_ids[g],))
        # (h∘g)∘f == h∘(g∘f) over composable triples, one middle morphism g at a time
        by_dom = [np.nonzero(dom == c)[0] for c in range(len(self.objects))]
        by_cod = [np.nonzero(cod == c)[0] for c in range(len(self.objects))]
        for g in range(n):
            hs, fs = by_dom[cod[g]], by_cod[dom[g]]
            lhs = t[np.ix_(t[hs, g], fs)]
            rhs = t[np.ix_(hs, t[g, fs])]
            viol = np.argwhere(lhs != rhs)
            if len(viol):
                hi, fi = viol[0]
                ids = (self.mor_ids[hs[hi]], self.mor_ids[g], self.mor_ids[fs[fi]])
                raise CategoryError(f"composition is not associative on {ids}", ids)

    # -- basic queries ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FinCat) and (self is other or self._key == other._key)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        label = self.name or "FinCat"
        return f"<{label}: {len(self.objects)} objects, {len(self.mor_ids)} morphisms>"

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.mor_ids)

    def ob(self, o: str | int) -> int:
        return o if isinstance(o, int) else self.obj_pos[o]

    def mor(self, m: str | int) -> int:
        return m if isinstance(m, int) else self.mor_pos[m]

    def compose(self, g: int, f: int) -> int:
        """Index of ``g∘f``; raises if the pair is not composable."""
        r = self._rows[g][f]
        if r < 0:
            raise CategoryError(
                f"{self.mor_ids[g]!r} and {self.mor_ids[f]!r} are not composable",
                (self.mor_ids[g], self.mor_ids[f]),
            )
        return r

    def homset(self, a: str | int, b: str | int) -> tuple[int, ...]:
        return self.hom[(self.ob(a), self.ob(b))]

    def is_identity(self, u: int) -> bool:
        return self.identity[self.dom[u]] == u

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A set of non-identity morphisms whose composites give every morphism."""
        rows = self._rows
        n = self.n_morphisms
        nonid = [u for u in range(n) if not self.is_identity(u)]
        composites = set()
        for g in nonid:
            for f in nonid:
                r = rows[g][f]
                if r >= 0:
                    composites.add(r)
        order = [u for u in nonid if u not in composites] + [u for u in nonid if u in composites]
        reached = set(self.identity)
        gens: list[int] = []
        for u in order:
            if u in reached:
                continue
            gens.append(u)
            queue = [u]
            reached.add(u)
            while queue:
                a = queue.pop()
                for b in list(reached):
                    for r in (rows[a][b], rows[b][a]):
                        if r >= 0 and r not in reached:
                            reached.add(r)
                            queue.append(r)
            if len(reached) == n:
                break
        return tuple(sorted(gens))

    @cached_property
    def generators_into(self) -> tuple[tuple[int, ...], ...]:
        gens = self.generators
        return tuple(tuple(u for u in gens if self.cod[u] == c) for c in range(self.n_objects))

    @cached_property
    def terminal(self) -> int | None:
        """Least-index terminal object, or ``None``."""
        for t in range(self.n_objects):
            if all(len(self.hom[(c, t)]) == 1 for c in range(self.n_objects)):
                return t
        return None

    def is_mono(self, u: int) -> bool:
        a = self.dom[u]
        rows = self._rows
        for d in range(self.n_objects):
            seen: dict[int, int] = {}
            for v in self.hom[(d, a)]:
                r = rows[u][v]
                if r in seen:
                    return False
                seen[r] = v
        return True

    @cached_property
    def monos(self) -> tuple[bool, ...]:
        return tuple(self.is_mono(u) for u in range(self.n_morphisms))

    @cached_property
    def split_epis(self) -> tuple[bool, ...]:
        return tuple(is_split_epi(self, u)[0] for u in range(self.n_morphisms))

    def to_tables(self) -> dict:
        """The site interchange document (see ``docs/formats.md``)."""
        ids = self.mor_ids
        compose = []
        for g in range(self.n_morphisms):
            for f in self.hom_into_dom(g):
                compose.append({"g": ids[g], "f": ids[f], "result": ids[self._rows[g][f]]})
        return {
            "name": self.name,
            "objects": list(self.objects),
            "morphisms": [
                {"id": ids[k], "dom": self.objects[self.dom[k]], "cod": self.objects[self.cod[k]]}
                for k in range(self.n_morphisms)
            ],
            "identities": {self.objects[c]: ids[self.identity[c]] for c in range(self.n_objects)},
            "compose": compose,
        }

    def hom_into_dom(self, g: int) -> tuple[int, ...]:
        return self.into[self.dom[g]]


def validate_category(raw: Mapping) -> FinCat:
    """Build a :class:`FinCat` from raw tables, checking every law.

    ``raw`` has keys ``objects``, ``morphisms`` (``{id, dom, cod}`` records or
    triples), ``identities`` and ``compose`` (``{g, f, result}`` records or
    triples).  The first violated law is reported as a
    :class:`~cohesio.errors.CategoryError` naming the morphism ids involved.
    """
    morphisms = []
    for m in raw["morphisms"]:
        if isinstance(m, Mapping):
            morphisms.append((m["id"], m["dom"], m["cod"]))
        else:
            morphisms.append(tuple(m))
    compose = []
    for e in raw["compose"]:
        if isinstance(e, Mapping):
            compose.append((e["g"], e["f"], e["result"]))
        else:
            compose.append(tuple(e))
    return FinCat(raw["objects"], morphisms, dict(raw["identities"]), compose, raw.get("name"))


# -- classification ---------------------------------------------------


@dataclass(frozen=True)
class SiteReport:
    has_terminal: bool
    terminal: str | None
    all_objects_pointed: bool
    points: dict[str, str | None] = field(default_factory=dict)
    idempotents_split: bool = True
    failing_idempotent: str | None = None
    sufficiently_cohesive: bool = False
    quality_type: bool = False

    @property
    def pre_cohesive(self) -> bool:
        return self.has_terminal and self.all_objects_pointed

    def as_dict(self) -> dict:
        return {
            "pre_cohesive": self.pre_cohesive,
            "has_terminal": self.has_terminal,
            "terminal": self.terminal,
            "all_objects_pointed": self.all_objects_pointed,
            "points": self.points,
            "idempotents_split": self.idempotents_split,
            "failing_idempotent": self.failing_idempotent,
            "sufficiently_cohesive": self.sufficiently_cohesive,
            "quality_type": self.quality_type,
        }


def _split_idempotent(C: FinCat, e: int) -> bool:
    c = C.dom[e]
    rows = C._rows
    for d in range(C.n_objects):
        ident = C.identity[d]
        for s in C.hom[(d, c)]:
            for r in C.hom[(c, d)]:
                if rows[r][s] == ident and rows[s][r] == e:
                    return True
    return False


def classify_site(C: FinCat) -> SiteReport:
    """Pre-cohesion flags of the presheaf topos on ``C`` over Set."""
    t = C.terminal
    n = C.n_objects
    points: dict[str, str | None] = {}
    pointed = t is not None
    if t is not None:
        for c in range(n):
            hs = C.hom[(t, c)]
            points[C.objects[c]] = C.mor_ids[hs[0]] if hs else None
            if not hs:
                pointed = False
    failing = None
    rows = C._rows
    for e in range(C.n_morphisms):
        if C.dom[e] == C.cod[e] and rows[e][e] == e and not C.is_identity(e):
            if not _split_idempotent(C, e):
                failing = C.mor_ids[e]
                log.warning("idempotent %s does not split", failing)
                break
    pre = t is not None and pointed
    sufficient = pre and any(len(C.hom[(t, c)]) >= 2 for c in range(n))
    quality = pre and all(len(C.hom[(t, c)]) == 1 for c in range(n))
    return SiteReport(
        has_terminal=t is not None,
        terminal=C.objects[t] if t is not None else None,
        all_objects_pointed=pointed,
        points=points,
        idempotents_split=failing is None,
        failing_idempotent=failing,
        sufficiently_cohesive=sufficient,
        quality_type=quality,
    )


def is_split_epi(C: FinCat, u: int | str) -> tuple[bool, int | None]:
    """Whether ``u`` has a section; returns the least-index section if so."""
    u = C.mor(u)
    target = C.identity[C.cod[u]]
    rows = C._rows
    for s in C.hom[(C.cod[u], C.dom[u])]:
        if rows[u][s] == target:
            return True, s
    return False, None


def has_split_epi_mono_factorization(C: FinCat) -> bool:
    """Every morphism is a mono after a split epi."""
    rows = C._rows
    epi, mono = C.split_epis, C.monos
    for u in range(C.n_morphisms):
        a, b = C.dom[u], C.cod[u]
        found = False
        for d in range(C.n_objects):
            for e in C.hom[(a, d)]:
                if not epi[e]:
                    continue
                for m in C.hom[(d, b)]:
                    if mono[m] and rows[m][e] == u:
                        found = True
                        break
                if found:
                    break
            if found:
                break
        if not found:
            return False
    return True


# -- functors ----------------------------------------------------------


@dataclass(frozen=True)
class FunctorData:
    """A functor between finite categories, stored by index."""

    source: FinCat
    target: FinCat
    object_map: tuple[int, ...]
    morphism_map: tuple[int, ...]

    def __post_init__(self):
        S, T = self.source, self.target
        if len(self.object_map) != S.n_objects or len(self.morphism_map) != S.n_morphisms:
            raise CategoryError("functor tables have the wrong length")
        for u in range(S.n_morphisms):
            v = self.morphism_map[u]
            if T.dom[v] != self.object_map[S.dom[u]] or T.cod[v] != self.object_map[S.cod[u]]:
                raise CategoryError(f"functor sends {S.mor_ids[u]!r} to a morphism of the wrong type", (S.mor_ids[u],))
        for c in range(S.n_objects):
            if self.morphism_map[S.identity[c]] != T.identity[self.object_map[c]]:
                raise CategoryError(f"functor does not preserve the identity of {S.objects[c]!r}")
        Srows = S._rows
        for g in range(S.n_morphisms):
            for f in S.into[S.dom[g]]:
                if self.morphism_map[Srows[g][f]] != T.compose(self.morphism_map[g], self.morphism_map[f]):
                    ids = (S.mor_ids[g], S.mor_ids[f])
                    raise CategoryError(f"functor does not preserve the composite of {ids}", ids)

    @classmethod
    def from_names(cls, source: FinCat, target: FinCat, object_map: Mapping[str, str],
                   morphism_map: Mapping[str, str]) -> FunctorData:
        try:
            om = tuple(target.obj_pos[object_map[o]] for o in source.objects)
            mm = tuple(target.mor_pos[morphism_map[m]] for m in source.mor_ids)
        except KeyError as exc:
            raise CategoryError(f"functor table is missing or names unknown id {exc.args[0]!r}") from None
        return cls(source, target, om, mm)

    @classmethod
    def identity(cls, C: FinCat) -> FunctorData:
        return cls(C, C, tuple(range(C.n_objects)), tuple(range(C.n_morphisms)))

    def is_isomorphism(self) -> bool:
        return (
            sorted(self.object_map) == list(range(self.target.n_objects))
            and sorted(self.morphism_map) == list(range(self.target.n_morphisms))
        )

    def as_dict(self) -> dict:
        S, T = self.source, self.target
        return {
            "object_map": {S.objects[c]: T.objects[self.object_map[c]] for c in range(S.n_objects)},
            "morphism_map": {S.mor_ids[u]: T.mor_ids[self.morphism_map[u]] for u in range(S.n_morphisms)},
        }


# -- standard sites ----------------------------------------------------


def _check_size(n_morphisms: int, budget: Budget | int | None, what: str) -> None:
    as_budget(budget, what).require(n_morphisms * n_morphisms, f"composition table of {what}")


def delta_object(m: int) -> str:
    return f"[{m}]"


def delta_morphism(m: int, k: int, values: Sequence[int]) -> str:
    sep = "" if k < 10 else ","
    return f"[{m}]->[{k}]:" + sep.join(str(v) for v in values)


@lru_cache(maxsize=None)
def _delta(n: int) -> FinCat:
    maps = []
    for m in range(n + 1):
        for k in range(n + 1):
            for vals in itertools.combinations_with_replacement(range(k + 1), m + 1):
                maps.append((m, k, vals))
    ids = {key: delta_morphism(*key) for key in maps}
    morphisms = [(ids[key], delta_object(key[0]), delta_object(key[1])) for key in maps]
    identities = {delta_object(m): ids[(m, m, tuple(range(m + 1)))] for m in range(n + 1)}
    by_dom: dict[int, list] = {}
    for key in maps:
        by_dom.setdefault(key[0], []).append(key)
    compose = []
    for f in maps:
        for g in by_dom.get(f[1], ()):
            r = (f[0], g[1], tuple(g[2][i] for i in f[2]))
            compose.append((ids[g], ids[f], ids[r]))
    name = "delta1" if n == 1 else f"delta:{n}"
    return FinCat([delta_object(m) for m in range(n + 1)], morphisms, identities, compose, name)


def delta_truncated(n: int, budget: Budget | int | None = None) -> FinCat:
    """The full subcategory of the simplex category on ``[0] .. [n]``."""
    if n < 0:
        raise CategoryError("truncation level must be non-negative")
    from math import comb

    count = sum(comb(m + k + 1, m + 1) for m in range(n + 1) for k in range(n + 1))
    _check_size(count, budget, f"delta:{n}")
    return _delta(n)


def cube_object(k: int) -> str:
    return f"[0,1]^{k}"


def _cube_symbol(v: int) -> str:
    return str(v) if v < 2 else f"p{v - 2}"


def cube_morphism(s: int, t: int, comps: Sequence[int]) -> str:
    return f"[0,1]^{s}->[0,1]^{t}:(" + ",".join(_cube_symbol(v) for v in comps) + ")"


def _cube_count(cap: int) -> int:
    return sum((s + 2) ** t for s in range(cap + 1) for t in range(cap + 1))


@lru_cache(maxsize=None)
def _cube(cap: int) -> FinCat:
    # component codes: 0, 1 are the constants, 2 + i is the projection onto coordinate i
    maps = []
    for s in range(cap + 1):
        for t in range(cap + 1):
            for comps in itertools.product(range(s + 2), repeat=t):
                maps.append((s, t, comps))
    ids = {key: cube_morphism(*key) for key in maps}
    morphisms = [(ids[key], cube_object(key[0]), cube_object(key[1])) for key in maps]
    identities = {cube_object(k): ids[(k, k, tuple(range(2, k + 2)))] for k in range(cap + 1)}
    by_dom: dict[int, list] = {}
    for key in maps:
        by_dom.setdefault(key[0], []).append(key)
    compose = []
    for f in maps:
        for g in by_dom.get(f[1], ()):
            comps = tuple(c if c < 2 else f[2][c - 2] for c in g[2])
            compose.append((ids[g], ids[f], ids[(f[0], g[1], comps)]))
    return FinCat([cube_object(k) for k in range(cap + 1)], morphisms, identities, compose, f"cube:{cap}")


def cube(cap: int, budget: Budget | int | None = None, max_dim: int = MAX_CUBE_DIM) -> FinCat:
    """Cubes ``[0,1]^k`` (k ≤ cap) with maps built from projections and the constants 0, 1."""
    if cap < 0:
        raise CategoryError("cube cap must be non-negative")
    if cap > max_dim:
        raise BudgetExceeded(f"cube cap {cap} exceeds the configured maximum dimension {max_dim}")
    _check_size(_cube_count(cap), budget, f"cube:{cap}")
    return _cube(cap)


def bipointed_object(n: int) -> str:
    return f"F{n}"


@lru_cache(maxsize=None)
def _bipointed_op(cap: int) -> FinCat:
    # A morphism F_s -> F_t of the opposite category is a bipointed map
    # F_t -> F_s, stored as the full function on {bot, top, g_0, ..., g_{t-1}}.
    BOT, TOP = "bot", "top"

    def elements(n):
        return [BOT, TOP] + [f"g{i}" for i in range(n)]

    maps = {}
    for s in range(cap + 1):
        for t in range(cap + 1):
            for images in itertools.product(elements(s), repeat=t):
                fn = {BOT: BOT, TOP: TOP}
                fn.update({f"g{i}": images[i] for i in range(t)})
                mid = f"F{t}=>F{s}:{{" + ",".join(f"g{i}:{images[i]}" for i in range(t)) + "}"
                maps[mid] = (s, t, fn)
    morphisms = [(mid, bipointed_object(s), bipointed_object(t)) for mid, (s, t, _) in maps.items()]
    identities = {}
    for mid, (s, t, fn) in maps.items():
        if s == t and all(fn[f"g{i}"] == f"g{i}" for i in range(t)):
            identities[bipointed_object(s)] = mid
    lookup = {(s, t, tuple(sorted(fn.items()))): mid for mid, (s, t, fn) in maps.items()}
    by_dom: dict[int, list] = {}
    for mid, (s, t, fn) in maps.items():
        by_dom.setdefault(s, []).append(mid)
    compose = []
    for f, (s, t, fa) in maps.items():
        for g in by_dom.get(t, ()):
            _, r, ga = maps[g]
            # opposite composition: g∘f corresponds to fa ∘ ga as bipointed maps F_r -> F_s
            fn = {x: fa[ga[x]] for x in ga}
            compose.append((g, f, lookup[(s, r, tuple(sorted(fn.items())))]))
    return FinCat([bipointed_object(k) for k in range(cap + 1)], morphisms, identities, compose,
                  f"bipointed:{cap}")


def bipointed_op(cap: int, budget: Budget | int | None = None, max_dim: int = MAX_CUBE_DIM) -> FinCat:
    """Opposite of strictly bipointed finite sets, free on at most ``cap`` generators."""
    if cap < 0:
        raise CategoryError("bipointed cap must be non-negative")
    if cap > max_dim:
        raise BudgetExceeded(f"bipointed cap {cap} exceeds the configured maximum dimension {max_dim}")
    _check_size(_cube_count(cap), budget, f"bipointed:{cap}")
    return _bipointed_op(cap)


@lru_cache(maxsize=None)
def terminal_category() -> FinCat:
    return FinCat(["*"], [("id_*", "*", "*")], {"*": "id_*"}, [("id_*", "id_*", "id_*")], "terminal")


def cube_bipointed_isomorphism(cap: int) -> FunctorData:
    """The canonical functor ``cube(cap) -> bipointed_op(cap)``.

    A cube map with components ``<f_t>`` goes to the bipointed map sending
    generator ``t`` to ``g_s`` when ``f_t`` projects onto ``s`` and to the
    corresponding distinguished point when ``f_t`` is constant.  Raises if
    the assignment is not a functor.
    """
    Cu, Bi = cube(cap), bipointed_op(cap)
    sym = {0: "bot", 1: "top"}
    mm = []
    for mid in Cu.mor_ids:
        head, comps = mid.split(":", 1)
        s = int(head.split("->")[0].split("^")[1])
        t = int(head.split("->")[1].split("^")[1])
        codes = [c for c in comps.strip("()").split(",") if c]
        images = [sym[int(c)] if c in ("0", "1") else f"g{c[1:]}" for c in codes]
        bid = f"F{t}=>F{s}:{{" + ",".join(f"g{i}:{images[i]}" for i in range(t)) + "}"
        mm.append(Bi.mor_pos[bid])
    om = tuple(Bi.obj_pos[bipointed_object(k)] for k in range(cap + 1))
    return FunctorData(Cu, Bi, om, tuple(mm))


SITE_KINDS = ("delta_truncated", "delta_one", "bipointed_op", "cube", "terminal")


def build_standard_site(kind: str, size: int = 0, budget: Budget | int | None = None,
                        max_dim: int = MAX_CUBE_DIM) -> FinCat:
    if kind == "delta_truncated":
        return delta_truncated(size, budget)
    if kind == "delta_one":
        return delta_truncated(1, budget)
    if kind == "cube":
        return cube(size, budget, max_dim)
    if kind == "bipointed_op":
        return bipointed_op(size, budget, max_dim)
    if kind == "terminal":
        return terminal_category()
    raise CategoryError(f"unknown site kind {kind!r}; expected one of {SITE_KINDS}")


def builtin_site(spec: str, budget: Budget | int | None = None, max_dim: int = MAX_CUBE_DIM) -> FinCat:
    """Resolve names like ``delta1``, ``delta:2``, ``cube:3``, ``bipointed:2``, ``terminal``."""
    if spec in ("delta1", "delta_one"):
        return delta_truncated(1, budget)
    if spec == "terminal":
        return terminal_category()
    kind, _, arg = spec.partition(":")
    if not arg.isdigit():
        raise CategoryError(f"unknown builtin site {spec!r}")
    size = int(arg)
    table = {"delta": "delta_truncated", "cube": "cube", "bipointed": "bipointed_op"}
    if kind not in table:
        raise CategoryError(f"unknown builtin site {spec!r}")
    return build_standard_site(table[kind], size, budget, max_dim)


def delta_map(C: FinCat, u: int) -> tuple[int, int, tuple[int, ...]]:
    """``(m, k, values)`` of a morphism of a truncated simplex site."""
    head, vals = C.mor_ids[u].split(":")
    m, k = (int(p.strip("[]")) for p in head.split("->"))
    values = tuple(int(v) for v in (vals.split(",") if "," in vals else vals))
    return m, k, values


def cube_map(C: FinCat, u: int) -> tuple[int, int, tuple[int, ...]]:
    """``(s, t, codes)`` of a cube morphism: code 0/1 is a constant, ``2 + i`` projects onto ``i``."""
    head, comps = C.mor_ids[u].split(":", 1)
    s, t = (int(p.split("^")[1]) for p in head.split("->"))
    codes = tuple(int(c) if c in ("0", "1") else 2 + int(c[1:]) for c in comps.strip("()").split(",") if c)
    return s, t, codes
