"""Connectors, distances between points, navigability, horn fillers, Hurewicz homs.

The points of ``X^I`` are computed as natural transformations ``I -> X``
(the canonical identification of global sections of an exponential with
maps out of its base); ``via_exponential=True`` goes through the full
exponential instead, which is slower but literal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .budget import Budget
from .cohesion import CohesionContext, continuity_map, pieces_map, product_comparison, theta
from .errors import CohesioError, PresheafError
from .fincat import FinCat, cube_morphism, delta_morphism
from .presheaf import (
    Exponential,
    NatTrans,
    Presheaf,
    _UnionFind,
    exponential,
    generated_subpresheaf,
    identity_nat,
    iter_nat_transformations,
    product,
    yoneda,
)


@dataclass(frozen=True)
class Connector:
    """A bipointed presheaf ``zero, one: 1 -> I``; points are elements of ``I(t)``."""

    I: Presheaf
    zero: int
    one: int


def standard_connector(ctx: CohesionContext) -> Connector:
    """``y[1]`` with its two vertices on simplex sites, the unit interval on cube sites."""
    C = ctx.site
    if "[1]" in C.obj_pos:
        I = yoneda(C, "[1]")
        zero, one = delta_morphism(0, 1, (0,)), delta_morphism(0, 1, (1,))
    elif "[0,1]^1" in C.obj_pos:
        I = yoneda(C, "[0,1]^1")
        zero, one = cube_morphism(0, 1, (0,)), cube_morphism(0, 1, (1,))
    else:
        raise CohesioError("no standard connector on this site")
    names = I.names[ctx.t]
    return Connector(I, names.index(zero), names.index(one))


@dataclass(frozen=True)
class PathData:
    """Each point of ``X^I`` with its two endpoints."""

    paths: tuple[tuple, ...]
    ev0: tuple[int, ...]
    ev1: tuple[int, ...]


def connector_paths(ctx: CohesionContext, conn: Connector, X: Presheaf,
                    budget: Budget | int | None = None, via_exponential: bool = False) -> PathData:
    t = ctx.t
    b = budget if budget is not None else ctx.budget
    if via_exponential:
        E = exponential(conn.I, X, b)
        n = E.presheaf.sizes[t]
        ev0 = tuple(E.evaluate(t, k, conn.zero) for k in range(n))
        ev1 = tuple(E.evaluate(t, k, conn.one) for k in range(n))
        return PathData(tuple(E.elements[t]), ev0, ev1)
    tables = sorted(iter_nat_transformations(conn.I, X, b))
    return PathData(
        tuple(tables),
        tuple(tb[t][conn.zero] for tb in tables),
        tuple(tb[t][conn.one] for tb in tables),
    )


@dataclass(frozen=True)
class ConnectorCheck:
    coequalizer: bool
    theta_surjective: bool
    kernel_matches: bool
    failing_pair: tuple[int, int] | None
    paths: PathData = field(repr=False)


def verify_connector(ctx: CohesionContext, conn: Connector, X: Presheaf,
                     budget: Budget | int | None = None, via_exponential: bool = False) -> ConnectorCheck:
    """Is ``points(X^I) ⇉ points(X) -> pieces(X)`` a coequalizer of sets?"""
    P = connector_paths(ctx, conn, X, budget, via_exponential)
    th = theta(ctx, X)
    uf = _UnionFind(th.n_points)
    for a, b in zip(P.ev0, P.ev1):
        uf.union(a, b)
    failing = None
    for x in range(th.n_points):
        for y in range(x + 1, th.n_points):
            if (th.table[x] == th.table[y]) != (uf.find(x) == uf.find(y)):
                failing = (x, y)
                break
        if failing:
            break
    ok_kernel = failing is None
    return ConnectorCheck(th.surjective and ok_kernel, th.surjective, ok_kernel, failing, P)


@dataclass(frozen=True)
class DistanceReport:
    squiggle: frozenset
    sim: frozenset
    d: tuple[tuple[int | None, ...], ...]
    bound: int

    def as_dict(self) -> dict:
        return {
            "squiggle": sorted(list(p) for p in self.squiggle),
            "distance": [list(r) for r in self.d],
            "weakly_kan_bound": self.bound,
        }


def distance_report(ctx: CohesionContext, conn: Connector, X: Presheaf,
                    budget: Budget | int | None = None, paths: PathData | None = None) -> DistanceReport:
    """Breadth-first distances over the reflexive-symmetric closure of ``⇝``.

    ``None`` stands for infinite distance.
    """
    if paths is None:
        paths = connector_paths(ctx, conn, X, budget)
    n = X.sizes[ctx.t]
    squiggle = frozenset(zip(paths.ev0, paths.ev1))
    sim = set((x, x) for x in range(n))
    for a, b in squiggle:
        sim.add((a, b))
        sim.add((b, a))
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in sorted(sim):
        if a != b:
            adj[a].append(b)
    rows = []
    bound = 0
    for s in range(n):
        dist: list[int | None] = [None] * n
        dist[s] = 0
        q = deque([s])
        while q:
            a = q.popleft()
            for b in adj[a]:
                if dist[b] is None:
                    dist[b] = dist[a] + 1
                    q.append(b)
        bound = max([bound] + [v for v in dist if v is not None])
        rows.append(tuple(dist))
    return DistanceReport(squiggle, frozenset(sim), tuple(rows), bound)


@dataclass(frozen=True)
class NavigabilityResult:
    navigable: bool
    failing_pair: tuple[int, int] | None

    def __bool__(self) -> bool:
        return self.navigable


def is_navigable(ctx: CohesionContext, conn: Connector, X: Presheaf,
                 budget: Budget | int | None = None, paths: PathData | None = None) -> NavigabilityResult:
    """Every ordered pair of points in one piece is joined by a single path ``x ⇝ y``."""
    if paths is None:
        paths = connector_paths(ctx, conn, X, budget)
    th = theta(ctx, X)
    rel = set(zip(paths.ev0, paths.ev1))
    for x in range(th.n_points):
        for y in range(th.n_points):
            if th.table[x] == th.table[y] and (x, y) not in rel:
                return NavigabilityResult(False, (x, y))
    return NavigabilityResult(True, None)


# -- horn fillers -----------------------------------------------------


def _simplex_dims(C: FinCat) -> list[int]:
    try:
        dims = [int(o.strip("[]")) for o in C.objects]
    except ValueError:
        raise CohesioError("horn fillers need a truncated simplex site") from None
    if dims != list(range(len(dims))):
        raise CohesioError("horn fillers need a truncated simplex site")
    return dims


def face(m: int, i: int) -> str:
    """The coface ``[m-1] -> [m]`` that skips ``i``."""
    return delta_morphism(m - 1, m, tuple(j for j in range(m + 1) if j != i))


def horn(C: FinCat, m: int, k: int) -> tuple[Presheaf, NatTrans]:
    """``Λᵏ[m]``: the subpresheaf of ``y[m]`` generated by the faces other than the k-th."""
    Y = yoneda(C, f"[{m}]")
    d = C.obj_pos[f"[{m - 1}]"]
    gens = [(d, Y.names[d].index(face(m, i))) for i in range(m + 1) if i != k]
    return generated_subpresheaf(Y, gens)


@dataclass(frozen=True)
class KanResult:
    kan: bool
    checked_up_to: int
    failing_horn: dict | None = None

    def __bool__(self) -> bool:
        return self.kan


def is_kan(X: Presheaf, max_dim: int | None = None, budget: Budget | int | None = None) -> KanResult:
    """Every horn ``Λᵏ[m] -> X`` with ``m ≤ max_dim`` extends over ``y[m]``."""
    C = X.site
    dims = _simplex_dims(C)
    top = dims[-1]
    if max_dim is None:
        max_dim = top
    if max_dim > top:
        raise CohesioError(f"max_dim {max_dim} exceeds the truncation level {top}")
    for m in range(1, max_dim + 1):
        cm, cd = C.obj_pos[f"[{m}]"], C.obj_pos[f"[{m - 1}]"]
        faces = [C.mor_pos[face(m, i)] for i in range(m + 1)]
        # the boundary of each m-simplex, for filler lookup
        boundary = [tuple(X.act[u][y] for u in faces) for y in range(X.sizes[cm])]
        for k in range(m + 1):
            H, inc = horn(C, m, k)
            # position in H of each face δ_i, i != k
            face_pos = {}
            for i in range(m + 1):
                if i == k:
                    continue
                hom_index = C.hom_pos[faces[i]]
                face_pos[i] = inc.comps[cd].index(hom_index)
            fillable = {tuple(b[i] for i in range(m + 1) if i != k) for b in boundary}
            for table in iter_nat_transformations(H, X, budget):
                key = tuple(table[cd][face_pos[i]] for i in range(m + 1) if i != k)
                if key not in fillable:
                    faces_named = {
                        str(i): X.name_of(cd, table[cd][face_pos[i]]) for i in range(m + 1) if i != k
                    }
                    return KanResult(False, m, {"m": m, "k": k, "faces": faces_named})
    return KanResult(True, max_dim, None)


# -- Hurewicz category ------------------------------------------------


@dataclass(eq=False)
class HurewiczHom:
    """``H(X, Y)``: the pieces of ``Y^X``."""

    ctx: CohesionContext
    exp: Exponential

    @property
    def X(self) -> Presheaf:
        return self.exp.base

    @property
    def Y(self) -> Presheaf:
        return self.exp.target

    @property
    def pieces(self):
        return self.ctx.pieces(self.exp.presheaf)

    @property
    def size(self) -> int:
        return self.pieces.count

    def class_of(self, f: NatTrans) -> int:
        return self.pieces.of(self.ctx.t, self.exp.name(f))

    def class_of_point(self, k: int) -> int:
        return self.pieces.of(self.ctx.t, k)

    @property
    def identity(self) -> int:
        if self.X != self.Y:
            raise PresheafError("identity class needs X = Y")
        return self.class_of(identity_nat(self.X))


def hurewicz_hom(ctx: CohesionContext, X: Presheaf, Y: Presheaf,
                 budget: Budget | int | None = None) -> HurewiczHom:
    return HurewiczHom(ctx, exponential(X, Y, budget if budget is not None else ctx.budget))


def internal_composition(second: Exponential, first: Exponential, Z: Exponential) -> NatTrans:
    """``Z^Y × Y^X -> Z^X``, ``(s, t) ↦ (v, x) ↦ s(v, t(v, x))``."""
    C = first.site
    X, Y = first.base, first.target
    P, _, _ = product(second.presheaf, first.presheaf)
    comps = []
    for d in range(C.n_objects):
        comp = []
        hs = [(e, len(C.hom[(e, d)])) for e in range(C.n_objects)]
        for s in second.elements[d]:
            for t in first.elements[d]:
                table = []
                for e, nh in hs:
                    nx, ny = X.sizes[e], Y.sizes[e]
                    se, te = s[e], t[e]
                    table.append(tuple(
                        se[p * ny + te[p * nx + x]] for p in range(nh) for x in range(nx)
                    ))
                comp.append(Z.index[d][tuple(table)])
        comps.append(tuple(comp))
    return NatTrans(P, Z.presheaf, tuple(comps))


@dataclass(frozen=True)
class CompositionTable:
    table: tuple[tuple[int, ...], ...]
    well_defined: bool

    def __call__(self, g: int, f: int) -> int:
        return self.table[g][f]


def hurewicz_compose(ctx: CohesionContext, HYZ: HurewiczHom, HXY: HurewiczHom,
                     HXZ: HurewiczHom) -> CompositionTable:
    """Composition ``H(Y,Z) × H(X,Y) -> H(X,Z)`` through the pieces of the product."""
    comp = internal_composition(HYZ.exp, HXY.exp, HXZ.exp)
    P = comp.source
    cmp = product_comparison(ctx, HYZ.exp.presheaf, HXY.exp.presheaf)
    pc = pieces_map(ctx, comp)
    nb = HXY.size
    value: dict[int, int] = {}
    ok = True
    for k in range(ctx.pieces(P).count):
        if value.setdefault(cmp[k], pc[k]) != pc[k]:
            ok = False
    if len(value) != HYZ.size * nb:
        ok = False
    table = tuple(tuple(value.get(a * nb + b, -1) for b in range(nb)) for a in range(HYZ.size))
    return CompositionTable(table, ok)


def homotopy_class(ctx: CohesionContext, f: NatTrans, H: HurewiczHom | None = None) -> int:
    if H is None:
        H = hurewicz_hom(ctx, f.source, f.target)
    return H.class_of(f)


def are_homotopic(ctx: CohesionContext, f: NatTrans, g: NatTrans, H: HurewiczHom | None = None) -> bool:
    if H is None:
        H = hurewicz_hom(ctx, f.source, f.target)
    return H.class_of(f) == H.class_of(g)


def check_hurewicz_laws(ctx: CohesionContext, X: Presheaf, Y: Presheaf, Z: Presheaf,
                        W: Presheaf, budget: Budget | int | None = None) -> dict:
    """Associativity and unit laws of Hurewicz composition on ``X -> Y -> Z -> W``."""
    H = {}
    objs = {"X": X, "Y": Y, "Z": Z, "W": W}
    for a in objs:
        for b in objs:
            H[a, b] = hurewicz_hom(ctx, objs[a], objs[b], budget)
    comp = {}
    for a, b, c in [("X", "Y", "Z"), ("Y", "Z", "W"), ("X", "Z", "W"), ("X", "Y", "W"),
                    ("X", "X", "Y"), ("X", "Y", "Y")]:
        comp[a, b, c] = hurewicz_compose(ctx, H[b, c], H[a, b], H[a, c])
    defined = all(t.well_defined for t in comp.values())
    assoc = True
    for h in range(H["Z", "W"].size):
        for g in range(H["Y", "Z"].size):
            for f in range(H["X", "Y"].size):
                lhs = comp["X", "Z", "W"](h, comp["X", "Y", "Z"](g, f))
                rhs = comp["X", "Y", "W"](comp["Y", "Z", "W"](h, g), f)
                if lhs != rhs:
                    assoc = False
    idx, idy = H["X", "X"].identity, H["Y", "Y"].identity
    unit = all(
        comp["X", "X", "Y"](f, idx) == f and comp["X", "Y", "Y"](idy, f) == f
        for f in range(H["X", "Y"].size)
    )
    return {"well_defined": defined, "associative": assoc, "unital": unit}


def quintessential_check(ctx: CohesionContext, X: Presheaf, A: int,
                         budget: Budget | int | None = None) -> bool:
    """Bijectivity of ``p_!(X^{p^*A}) -> (p_!X)^A``."""
    return continuity_map(ctx, X, A, budget).composite_iso


def homotopy_report(ctx: CohesionContext, conn: Connector, X: Presheaf,
                    max_dim: int | None = None, budget: Budget | int | None = None) -> dict:
    paths = connector_paths(ctx, conn, X, budget)
    check = verify_connector(ctx, conn, X, budget)
    dist = distance_report(ctx, conn, X, paths=paths)
    nav = is_navigable(ctx, conn, X, paths=paths)
    out = {
        "connector_coequalizer": check.coequalizer,
        "weakly_kan_bound": dist.bound,
        "navigable": nav.navigable,
        "navigability_failure": list(nav.failing_pair) if nav.failing_pair else None,
    }
    try:
        _simplex_dims(ctx.site)
        simplex = True
    except CohesioError:
        simplex = False
    if simplex:
        k = is_kan(X, max_dim, budget)
        out["kan"] = k.kan
        out["kan_up_to"] = k.checked_up_to
        out["failing_horn"] = k.failing_horn
    out["hurewicz_hom_size"] = hurewicz_hom(ctx, X, X, budget).size
    return out


def hom_classes_via_points(ctx: CohesionContext, X: Presheaf, Y: Presheaf,
                           budget: Budget | int | None = None) -> Sequence[int]:
    """Class of every map ``X -> Y``, in the sorted order of the maps."""
    H = hurewicz_hom(ctx, X, Y, budget)
    t = ctx.t
    return [H.class_of_point(k) for k in range(H.exp.presheaf.sizes[t])]
