"""The adjoint string ``pieces ⊣ discrete ⊣ points ⊣ codiscrete`` for a presheaf topos.

Pieces are connected components of the category of elements, found by
union-find; the representative of a piece is its least element in the
order ``(object index, element)``.  Points are the sections at the
terminal object.  Every comparison map is materialized as a table so
identities between composites are plain equality tests.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .budget import Budget, as_budget
from .errors import CohesioError
from .fincat import FinCat, classify_site
from .presheaf import (
    Exponential,
    NatTrans,
    Presheaf,
    _UnionFind,
    exponential,
    product,
)


class NotPreCohesive(CohesioError):
    code = "not_pre_cohesive"


@dataclass(frozen=True)
class PiecesData:
    """Connected components of the elements of a presheaf.

    ``quotient[c][x]`` is the piece of ``x ∈ X(c)``; ``reps[k]`` is the least
    element ``(c, x)`` of piece ``k``; pieces are numbered in order of reps.
    """

    count: int
    quotient: tuple[tuple[int, ...], ...]
    reps: tuple[tuple[int, int], ...]

    def of(self, c: int, x: int) -> int:
        return self.quotient[c][x]


def compute_pieces(X: Presheaf) -> PiecesData:
    C = X.site
    offs = X.offsets
    uf = _UnionFind(X.total)
    for u in C.generators:
        oc, od = offs[C.cod[u]], offs[C.dom[u]]
        for x, y in enumerate(X.act[u]):
            uf.union(oc + x, od + y)
    number: dict[int, int] = {}
    reps = []
    quotient = []
    for c, n in enumerate(X.sizes):
        row = []
        for x in range(n):
            r = uf.find(offs[c] + x)
            if r not in number:
                number[r] = len(number)
                reps.append((c, x))
            row.append(number[r])
        quotient.append(tuple(row))
    return PiecesData(len(number), tuple(quotient), tuple(reps))


@dataclass(frozen=True)
class SetMaps:
    """All functions ``range(n) -> range(m)`` as tuples, in lexicographic order."""

    n: int
    m: int

    def __len__(self) -> int:
        return self.m ** self.n

    def index(self, f: Sequence[int]) -> int:
        i = 0
        for v in f:
            i = i * self.m + v
        return i

    def __iter__(self):
        return itertools.product(range(self.m), repeat=self.n)


@dataclass(frozen=True)
class ThetaData:
    table: tuple[int, ...]
    n_points: int
    n_pieces: int

    @property
    def surjective(self) -> bool:
        return len(set(self.table)) == self.n_pieces

    @property
    def injective(self) -> bool:
        return len(set(self.table)) == len(self.table)


@dataclass(frozen=True)
class KappaData:
    """``κ: pieces(Y^X) -> pieces(Y)^pieces(X)`` as a table of function indices."""

    table: tuple[int, ...]
    functions: tuple[tuple[int, ...], ...]
    codomain: SetMaps
    well_defined: bool
    product_iso: bool
    exponential: Exponential = field(repr=False)

    @property
    def iso(self) -> bool:
        return self.well_defined and sorted(self.table) == list(range(len(self.codomain)))


class CohesionContext:
    """Pre-cohesive structure of presheaves on a site with memoized pieces."""

    def __init__(self, site: FinCat, budget: Budget | int | None = None):
        report = classify_site(site)
        if not report.pre_cohesive:
            raise NotPreCohesive(
                "site needs a terminal object and a point of every object"
            )
        self.site = site
        self.report = report
        self.t = site.terminal
        self.budget = as_budget(budget, "cohesion")
        self._pieces: dict[Presheaf, PiecesData] = {}
        self._lock = threading.Lock()
        # the unique map c -> t, and the points of each object
        self.bang = tuple(site.hom[(c, self.t)][0] for c in range(site.n_objects))
        self.points_of = tuple(site.hom[(self.t, c)] for c in range(site.n_objects))

    def pieces(self, X: Presheaf) -> PiecesData:
        got = self._pieces.get(X)
        if got is None:
            got = compute_pieces(X)
            with self._lock:
                self._pieces.setdefault(X, got)
        return got


def pieces(ctx: CohesionContext, X: Presheaf) -> PiecesData:
    return ctx.pieces(X)


def points(ctx: CohesionContext, X: Presheaf) -> tuple[int, ...]:
    """Points as elements of ``X(t)``, the sections at the terminal object."""
    return tuple(range(X.sizes[ctx.t]))


def point_as_nat(ctx: CohesionContext, X: Presheaf, x: int) -> NatTrans:
    """The compatible family ``c ↦ x·!_c`` of a point."""
    from .presheaf import terminal

    C = ctx.site
    comps = tuple((X.act[ctx.bang[c]][x],) for c in range(C.n_objects))
    return NatTrans(terminal(C), X, comps)


def pieces_map(ctx: CohesionContext, f: NatTrans) -> tuple[int, ...]:
    """``p_!f`` as a table on pieces."""
    PX, PY = ctx.pieces(f.source), ctx.pieces(f.target)
    return tuple(PY.of(c, f.comps[c][x]) for c, x in PX.reps)


def points_map(ctx: CohesionContext, f: NatTrans) -> tuple[int, ...]:
    return f.comps[ctx.t]


def discrete(ctx: CohesionContext, A: int | Sequence[str]) -> Presheaf:
    """The constant presheaf on ``A`` (a size or a list of names)."""
    C = ctx.site
    names = [str(a) for a in A] if not isinstance(A, int) else None
    n = A if isinstance(A, int) else len(names)
    act = [tuple(range(n))] * C.n_morphisms
    return Presheaf(C, [n] * C.n_objects, act, [names] * C.n_objects if names else None,
                    label="p^*A", check=False)


def discrete_map(ctx: CohesionContext, f: Sequence[int], m: int) -> NatTrans:
    A, B = discrete(ctx, len(f)), discrete(ctx, m)
    return NatTrans(A, B, tuple(tuple(f) for _ in range(ctx.site.n_objects)))


def codiscrete(ctx: CohesionContext, A: int) -> Presheaf:
    """``c ↦ A^{points of c}`` acting by precomposition with ``u∘-``."""
    C = ctx.site
    rows = C._rows
    dims = [len(ctx.points_of[c]) for c in range(C.n_objects)]
    funcs = [SetMaps(dims[c], A) for c in range(C.n_objects)]
    act = []
    for u in range(C.n_morphisms):
        c, d = C.cod[u], C.dom[u]
        # point p of d goes to u∘p, a point of c
        pull = [C.hom_pos[rows[u][p]] for p in ctx.points_of[d]]
        act.append(tuple(funcs[d].index([f[i] for i in pull]) for f in funcs[c]))
    return Presheaf(C, [len(f) for f in funcs], act, label="p^!A", check=False)


def codiscrete_map(ctx: CohesionContext, f: Sequence[int], m: int) -> NatTrans:
    C = ctx.site
    A, B = codiscrete(ctx, len(f)), codiscrete(ctx, m)
    comps = []
    for c in range(C.n_objects):
        dom, cod = SetMaps(len(ctx.points_of[c]), len(f)), SetMaps(len(ctx.points_of[c]), m)
        comps.append(tuple(cod.index([f[v] for v in g]) for g in dom))
    return NatTrans(A, B, tuple(comps))


def sigma(ctx: CohesionContext, X: Presheaf) -> NatTrans:
    """Unit ``X -> p^*p_!X``: each element goes to its piece."""
    P = ctx.pieces(X)
    return NatTrans(X, discrete(ctx, P.count), P.quotient)


def tau(ctx: CohesionContext, A: int) -> tuple[int, ...]:
    """Counit ``p_!p^*A -> A`` as a table on pieces."""
    D = discrete(ctx, A)
    P = ctx.pieces(D)
    return tuple(x for _, x in P.reps)


def beta(ctx: CohesionContext, X: Presheaf) -> NatTrans:
    """Counit ``p^*p_*X -> X``: a point goes to its restriction."""
    n = X.sizes[ctx.t]
    comps = tuple(tuple(X.act[ctx.bang[c]][x] for x in range(n)) for c in range(ctx.site.n_objects))
    return NatTrans(discrete(ctx, n), X, comps)


def alpha(ctx: CohesionContext, A: int) -> tuple[int, ...]:
    """Unit ``A -> p_*p^*A``, the identity on ``A``."""
    return tuple(range(A))


def theta(ctx: CohesionContext, X: Presheaf) -> ThetaData:
    """Each point goes to the piece it lies in."""
    P = ctx.pieces(X)
    t = ctx.t
    return ThetaData(tuple(P.of(t, x) for x in range(X.sizes[t])), X.sizes[t], P.count)


def theta_composite(ctx: CohesionContext, X: Presheaf) -> tuple[int, ...]:
    """``θ`` as ``p_!β ∘ τ^{-1}``, computed through the tables."""
    n = X.sizes[ctx.t]
    tau_inv = {a: k for k, a in enumerate(tau(ctx, n))}
    pb = pieces_map(ctx, beta(ctx, X))
    return tuple(pb[tau_inv[a]] for a in range(n))


def triangle_sigma_tau(ctx: CohesionContext, X: Presheaf) -> bool:
    """``τ_{p_!X} ∘ p_!σ_X = id``."""
    n = ctx.pieces(X).count
    ps = pieces_map(ctx, sigma(ctx, X))
    tt = tau(ctx, n)
    return tuple(tt[k] for k in ps) == tuple(range(n))


def product_comparison(ctx: CohesionContext, X: Presheaf, Y: Presheaf) -> tuple[int, ...]:
    """``pieces(X × Y) -> pieces(X) × pieces(Y)``, pairs encoded as ``i * |p_!Y| + j``."""
    P, p, q = product(X, Y)
    PP = ctx.pieces(P)
    ny = ctx.pieces(Y).count
    px, py = pieces_map(ctx, p), pieces_map(ctx, q)
    return tuple(px[k] * ny + py[k] for k in range(PP.count))


def product_preserved(ctx: CohesionContext, X: Presheaf, Y: Presheaf) -> bool:
    table = product_comparison(ctx, X, Y)
    n = ctx.pieces(X).count * ctx.pieces(Y).count
    return sorted(table) == list(range(n))


def kappa(ctx: CohesionContext, X: Presheaf, Y: Presheaf,
          E: Exponential | None = None, budget: Budget | int | None = None) -> KappaData:
    """Transpose of ``p_!(Y^X) × p_!X ≅ p_!(Y^X × X) -> p_!Y``."""
    if E is None:
        E = exponential(X, Y, budget if budget is not None else ctx.budget)
    W = E.presheaf
    P, p, q = product(W, X)
    PW, PX, PY, PP = ctx.pieces(W), ctx.pieces(X), ctx.pieces(Y), ctx.pieces(P)
    comparison = product_comparison(ctx, W, X)
    product_iso = sorted(comparison) == list(range(PW.count * PX.count))
    ev_pieces = pieces_map(ctx, E.ev)
    # κ(e)(ξ) = p_!ev(k) for any piece k of the product over (e, ξ)
    value: dict[int, int] = {}
    well_defined = True
    for k in range(PP.count):
        key = comparison[k]
        v = ev_pieces[k]
        if value.setdefault(key, v) != v:
            well_defined = False
    cod = SetMaps(PX.count, PY.count)
    functions = []
    for e in range(PW.count):
        functions.append(tuple(value.get(e * PX.count + xi, 0) for xi in range(PX.count)))
    if len(value) != PW.count * PX.count:
        well_defined = False
    table = tuple(cod.index(f) for f in functions)
    return KappaData(table, tuple(functions), cod, well_defined, product_iso, E)


@dataclass(frozen=True)
class ContinuityData:
    """``p_!(X^{p^*A}) -> (p_!X)^{p_!p^*A} -> (p_!X)^A``."""

    kappa: KappaData
    composite: tuple[int, ...]
    codomain: SetMaps

    @property
    def kappa_iso(self) -> bool:
        return self.kappa.iso

    @property
    def composite_iso(self) -> bool:
        return self.kappa.well_defined and sorted(self.composite) == list(range(len(self.codomain)))


def continuity_map(ctx: CohesionContext, X: Presheaf, A: int,
                   budget: Budget | int | None = None) -> ContinuityData:
    D = discrete(ctx, A)
    K = kappa(ctx, D, X, budget=budget)
    tt = tau(ctx, A)
    tau_inv = [0] * A
    for k, a in enumerate(tt):
        tau_inv[a] = k
    n = ctx.pieces(X).count
    cod = SetMaps(A, n)
    comp = tuple(cod.index([f[tau_inv[a]] for a in range(A)]) for f in K.functions)
    return ContinuityData(K, comp, cod)


def is_fully_faithful_on(ctx: CohesionContext, kind: str, a: int, b: int) -> bool:
    """Maps ``A -> B`` biject with maps between their discrete or codiscrete images."""
    from .presheaf import count_nat_transformations

    make = discrete if kind == "discrete" else codiscrete
    A, B = make(ctx, a), make(ctx, b)
    mapper = discrete_map if kind == "discrete" else codiscrete_map
    images = {mapper(ctx, f, b).comps for f in itertools.product(range(b), repeat=a)}
    return len(images) == b ** a == count_nat_transformations(A, B, ctx.budget)


def cohesion_report(ctx: CohesionContext, X: Presheaf, budget: Budget | int | None = None) -> dict:
    """Summary used by the command line."""
    th = theta(ctx, X)
    K = kappa(ctx, X, X, budget=budget)
    return {
        "pieces": ctx.pieces(X).count,
        "points": th.n_points,
        "theta_surjective": th.surjective,
        "theta_matches_composite": th.table == theta_composite(ctx, X),
        "kappa_iso": K.iso,
        "witnesses": {
            "piece_representatives": [[ctx.site.objects[c], X.name_of(c, x)] for c, x in ctx.pieces(X).reps],
            "theta": list(th.table),
        },
    }

