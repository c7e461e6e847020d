"""Geometric morphisms between presheaf toposes induced by a site functor.

For ``F: C -> D`` the morphism ``g: Psh(C) -> Psh(D)`` has inverse image
``g^*`` (restriction along ``F``), direct image ``g_*`` (right Kan
extension, ``(g_*X)(d) = Nat(g^*y(d), X)``) and extra left adjoint ``g_!``
(left Kan extension, a coend quotient of pairs ``(v: d -> Fc, x ∈ X(c))``).
Pieces and points of ``Psh(C)`` are written ``f_!`` and ``f_*``; those of
``Psh(D)`` are ``p_!`` and ``p_*``.

Every transformation in the pieces-preservation calculus is materialized
as a table, so each commuting diagram becomes an equality of tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .budget import Budget, as_budget
from .cohesion import (
    CohesionContext,
    discrete,
    kappa,
    pieces_map,
    sigma,
    tau,
    theta,
)
from .errors import CohesioError
from .fincat import FinCat, FunctorData
from .homotopy import Connector, distance_report
from .presheaf import (
    Exponential,
    NatTrans,
    Presheaf,
    _UnionFind,
    exponential,
    identity_nat,
    iter_nat_transformations,
    product,
    yoneda,
)


def inclusion_functor(C: FinCat, D: FinCat) -> FunctorData:
    """The functor that is the identity on shared ids (e.g. ``delta:1 -> delta:2``)."""
    om = {o: o for o in C.objects}
    mm = {m: m for m in C.mor_ids}
    return FunctorData.from_names(C, D, om, mm)


def collapse_functor(C: FinCat, T: FinCat) -> FunctorData:
    """The unique functor to a one-object, one-morphism category."""
    if T.n_objects != 1 or T.n_morphisms != 1:
        raise CohesioError("collapse target must be the terminal category")
    return FunctorData(C, T, (0,) * C.n_objects, (0,) * C.n_morphisms)


@dataclass(eq=False)
class DirectImage:
    """``g_*X`` with element ``k`` of degree ``d`` stored as a family ``c ↦ (v ↦ x)``."""

    presheaf: Presheaf
    elements: list[list[tuple]]
    index: list[dict]


@dataclass(eq=False)
class ShriekImage:
    """``g_!X``; ``classes[d][(c, v_pos, x)]`` is the class of the pair."""

    presheaf: Presheaf
    classes: list[dict]
    reps: list[list[tuple[int, int, int]]]


class InducedGM:
    """The adjoint triple ``g_! ⊣ g^* ⊣ g_*`` induced by a site functor."""

    def __init__(self, F: FunctorData, budget: Budget | int | None = None):
        self.F = F
        self.C, self.D = F.source, F.target
        self.budget = as_budget(budget, "induced geometric morphism")
        self.ctx_C = CohesionContext(self.C, self.budget)
        self.ctx_D = CohesionContext(self.D, self.budget)
        self._direct: dict[Presheaf, DirectImage] = {}
        self._shriek: dict[Presheaf, ShriekImage] = {}
        self._comma = [self.inverse(yoneda(self.D, d)) for d in range(self.D.n_objects)]

    # -- the three functors --------------------------------------------

    def inverse(self, Y: Presheaf) -> Presheaf:
        """``g^*Y = Y∘F``."""
        F, C = self.F, self.C
        sizes = [Y.sizes[F.object_map[c]] for c in range(C.n_objects)]
        act = [Y.act[F.morphism_map[u]] for u in range(C.n_morphisms)]
        return Presheaf(C, sizes, act, None, label=f"g^*{Y.label or 'Y'}", check=False)

    def inverse_map(self, phi: NatTrans) -> NatTrans:
        F = self.F
        comps = tuple(phi.comps[F.object_map[c]] for c in range(self.C.n_objects))
        return NatTrans(self.inverse(phi.source), self.inverse(phi.target), comps)

    def comma(self, d: int) -> Presheaf:
        """``g^*y(d)``: its elements are the objects ``(c, v: Fc -> d)`` of the comma category."""
        return self._comma[d]

    def direct(self, X: Presheaf) -> DirectImage:
        got = self._direct.get(X)
        if got is not None:
            return got
        D = self.D
        elements, index = [], []
        for d in range(D.n_objects):
            tables = sorted(iter_nat_transformations(self.comma(d), X, self.budget))
            elements.append(tables)
            index.append({t: i for i, t in enumerate(tables)})
        rows = D._rows
        Fo = self.F.object_map
        act = []
        for w in range(D.n_morphisms):
            d, d2 = D.cod[w], D.dom[w]
            row = []
            for phi in elements[d]:
                # (φ·w)_c(v) = φ_c(w∘v)
                table = tuple(
                    tuple(phi[c][D.hom_pos[rows[w][v]]] for v in D.hom[(Fo[c], d2)])
                    for c in range(self.C.n_objects)
                )
                row.append(index[d2][table])
            act.append(tuple(row))
        G = Presheaf(D, [len(e) for e in elements], act, label=f"g_*{X.label or 'X'}")
        got = DirectImage(G, elements, index)
        self._direct[X] = got
        return got

    def direct_map(self, f: NatTrans) -> NatTrans:
        A, B = self.direct(f.source), self.direct(f.target)
        comps = []
        for d in range(self.D.n_objects):
            comps.append(tuple(
                B.index[d][tuple(tuple(f.comps[c][x] for x in phi[c]) for c in range(self.C.n_objects))]
                for phi in A.elements[d]
            ))
        return NatTrans(A.presheaf, B.presheaf, tuple(comps))

    def shriek(self, X: Presheaf) -> ShriekImage:
        got = self._shriek.get(X)
        if got is not None:
            return got
        C, D, F = self.C, self.D, self.F
        Fo, Fm = F.object_map, F.morphism_map
        rows = D._rows
        classes, reps, sizes = [], [], []
        pairs_by_d = []
        for d in range(D.n_objects):
            pairs = [(c, i, x) for c in range(C.n_objects)
                     for i in range(len(D.hom[(d, Fo[c])])) for x in range(X.sizes[c])]
            pos = {p: k for k, p in enumerate(pairs)}
            uf = _UnionFind(len(pairs))
            self.budget.require(len(pairs), "left Kan extension pairs")
            for u in C.generators:
                c2, c = C.dom[u], C.cod[u]
                Fu = Fm[u]
                for v in D.hom[(d, Fo[c2])]:
                    j = D.hom_pos[rows[Fu][v]]
                    for x in range(X.sizes[c]):
                        uf.union(pos[(c, j, x)], pos[(c2, D.hom_pos[v], X.act[u][x])])
            number: dict[int, int] = {}
            cls, rp = {}, []
            for k, p in enumerate(pairs):
                r = uf.find(k)
                if r not in number:
                    number[r] = len(number)
                    rp.append(p)
                cls[p] = number[r]
            classes.append(cls)
            reps.append(rp)
            sizes.append(len(number))
            pairs_by_d.append(pairs)
        act = []
        for w in range(D.n_morphisms):
            d, d2 = D.cod[w], D.dom[w]
            row = []
            for c, i, x in reps[d]:
                v = D.hom[(d, Fo[c])][i]
                row.append(classes[d2][(c, D.hom_pos[rows[v][w]], x)])
            act.append(tuple(row))
        S = Presheaf(D, sizes, act, label=f"g_!{X.label or 'X'}")
        got = ShriekImage(S, classes, reps)
        self._shriek[X] = got
        return got

    def shriek_map(self, f: NatTrans) -> NatTrans:
        A, B = self.shriek(f.source), self.shriek(f.target)
        comps = tuple(
            tuple(B.classes[d][(c, i, f.comps[c][x])] for c, i, x in A.reps[d])
            for d in range(self.D.n_objects)
        )
        return NatTrans(A.presheaf, B.presheaf, comps)

    # -- units and counits -----------------------------------------------

    def nu(self, Y: Presheaf) -> NatTrans:
        """Unit ``Y -> g_*g^*Y``: ``y ↦ ((c, v) ↦ y·v)``."""
        D, Fo = self.D, self.F.object_map
        GY = self.direct(self.inverse(Y))
        comps = []
        for d in range(D.n_objects):
            comps.append(tuple(
                GY.index[d][tuple(tuple(Y.act[v][y] for v in D.hom[(Fo[c], d)]) for c in range(self.C.n_objects))]
                for y in range(Y.sizes[d])
            ))
        return NatTrans(Y, GY.presheaf, tuple(comps))

    def xi(self, X: Presheaf) -> NatTrans:
        """Counit ``g^*g_*X -> X``: a family goes to its value at ``(c, id)``."""
        D, Fo = self.D, self.F.object_map
        G = self.direct(X)
        comps = []
        for c in range(self.C.n_objects):
            d = Fo[c]
            pid = D.hom_pos[D.identity[d]]
            comps.append(tuple(phi[c][pid] for phi in G.elements[d]))
        return NatTrans(self.inverse(G.presheaf), X, tuple(comps))

    def eta(self, X: Presheaf) -> NatTrans:
        """Unit ``X -> g^*g_!X``: ``x ↦ [(id, x)]``."""
        D, Fo = self.D, self.F.object_map
        S = self.shriek(X)
        comps = []
        for c in range(self.C.n_objects):
            d = Fo[c]
            pid = D.hom_pos[D.identity[d]]
            comps.append(tuple(S.classes[d][(c, pid, x)] for x in range(X.sizes[c])))
        return NatTrans(X, self.inverse(S.presheaf), tuple(comps))

    def epsilon(self, Y: Presheaf) -> NatTrans:
        """Counit ``g_!g^*Y -> Y``: ``[(v, y)] ↦ y·v``."""
        D, Fo = self.D, self.F.object_map
        S = self.shriek(self.inverse(Y))
        comps = []
        for d in range(D.n_objects):
            comps.append(tuple(Y.act[D.hom[(d, Fo[c])][i]][y] for c, i, y in S.reps[d]))
        return NatTrans(S.presheaf, Y, tuple(comps))

    def triangle_identities(self, X: Presheaf, Y: Presheaf) -> dict:
        """Both triangle identities of ``g_! ⊣ g^*`` and ``g^* ⊣ g_*`` at ``X`` (on C) and ``Y`` (on D)."""
        gY = self.inverse(Y)
        out = {}
        out["inverse_direct_at_Y"] = self.xi(gY).compose(self.inverse_map(self.nu(Y))) == identity_nat(gY)
        GX = self.direct(X).presheaf
        out["inverse_direct_at_X"] = self.direct_map(self.xi(X)).compose(self.nu(GX)) == identity_nat(GX)
        SX = self.shriek(X).presheaf
        out["shriek_inverse_at_X"] = self.epsilon(SX).compose(self.shriek_map(self.eta(X))) == identity_nat(SX)
        out["shriek_inverse_at_Y"] = self.inverse_map(self.epsilon(Y)).compose(self.eta(gY)) == identity_nat(gY)
        return out


def induce_gm(F: FunctorData, budget: Budget | int | None = None) -> InducedGM:
    return InducedGM(F, budget)


# -- the pieces-preservation calculus ----------------------------------


def _inverse_table(table: Sequence[int]) -> dict[int, int]:
    return {v: k for k, v in enumerate(table)}


def rho(gm: InducedGM, Y: Presheaf) -> tuple[tuple[int, ...], bool]:
    """``ρ: p_!Y -> f_!g^*Y``, ``[d, y] ↦ [c, y·v]`` for any ``v: Fc -> d``.

    Returns the table and whether every choice of ``(c, v)`` agreed.
    """
    C, D, Fo = gm.C, gm.D, gm.F.object_map
    PY = gm.ctx_D.pieces(Y)
    gY = gm.inverse(Y)
    PgY = gm.ctx_C.pieces(gY)
    table: list[int | None] = [None] * PY.count
    ok = True
    for d in range(D.n_objects):
        for y in range(Y.sizes[d]):
            k = PY.of(d, y)
            for c in range(C.n_objects):
                for v in D.hom[(Fo[c], d)]:
                    val = PgY.of(c, Y.act[v][y])
                    if table[k] is None:
                        table[k] = val
                    elif table[k] != val:
                        ok = False
    if any(v is None for v in table):
        ok = False
    return tuple(v if v is not None else -1 for v in table), ok


def varrho(gm: InducedGM, Y: Presheaf) -> tuple[int, ...]:
    """``ϱ = τ̄_{p_!} ∘ f_!(g^*σ)``: ``f_!g^*Y -> p_!Y``."""
    s = sigma(gm.ctx_D, Y)
    gs = gm.inverse_map(s)
    n = gm.ctx_D.pieces(Y).count
    target = discrete(gm.ctx_C, n)
    if gs.target != target:
        raise CohesioError("restriction of a discrete presheaf is not discrete")
    gs = NatTrans(gs.source, target, gs.comps)
    fs = pieces_map(gm.ctx_C, gs)
    tt = tau(gm.ctx_C, n)
    return tuple(tt[k] for k in fs)


def lam(gm: InducedGM, X: Presheaf) -> tuple[tuple[int, ...], bool]:
    """``λ = f_!ξ ∘ ρ_{g_*X}``: ``p_!g_*X -> f_!X``."""
    G = gm.direct(X).presheaf
    r, ok = rho(gm, G)
    fx = pieces_map(gm.ctx_C, gm.xi(X))
    return tuple(fx[k] if k >= 0 else -1 for k in r), ok


def indecomposable_representables(gm: InducedGM) -> dict[str, bool]:
    return {gm.D.objects[d]: gm.ctx_C.pieces(gm.comma(d)).count == 1 for d in range(gm.D.n_objects)}


def _bijective(table: Sequence[int], n: int) -> bool:
    return sorted(table) == list(range(n))


def nu_discrete_iso(gm: InducedGM, A: int) -> bool:
    """``ν_{p^*A}: p^*A -> g_*f^*A`` is an iso (preservation of A-indexed coproducts)."""
    return gm.nu(discrete(gm.ctx_D, A)).is_iso


def points_nu_discrete_iso(gm: InducedGM, A: int) -> bool:
    """``p_*ν_{p^*}`` at ``A``."""
    n = gm.nu(discrete(gm.ctx_D, A))
    t = gm.ctx_D.t
    return _bijective(n.comps[t], n.target.sizes[t])


def lambda_object_report(gm: InducedGM, X: Presheaf) -> dict:
    """λ and every table identity around it at one object of ``Psh(C)``."""
    C, D, Fo = gm.C, gm.D, gm.F.object_map
    Gd = gm.direct(X)
    G = Gd.presheaf
    PG = gm.ctx_D.pieces(G)
    PX = gm.ctx_C.pieces(X)
    lt, rho_ok = lam(gm, X)
    out = {"lambda": list(lt), "lambda_iso": rho_ok and _bijective(lt, PX.count)}
    # θ square: points of g_*X are families; the point of X is the value at (t_C, !)
    tC, tD = gm.ctx_C.t, gm.ctx_D.t
    bang = D.hom[(Fo[tC], tD)]
    ok = len(bang) == 1
    thD = theta(gm.ctx_D, G).table
    thC = theta(gm.ctx_C, X).table
    if ok:
        pb = D.hom_pos[bang[0]]
        ok = all(lt[thD[k]] == thC[phi[tC][pb]] for k, phi in enumerate(Gd.elements[tD]))
    out["theta_square_commutes"] = ok
    # λ∘ϱ_{g_*} = f_!ξ
    vr = varrho(gm, G)
    fx = pieces_map(gm.ctx_C, gm.xi(X))
    out["lambda_varrho_triangle"] = tuple(lt[k] for k in vr) == fx
    # left mate: f^*λ∘g^*σ_{g_*} = σ̄∘ξ on g^*g_*X
    left = True
    for c in range(C.n_objects):
        d = Fo[c]
        pid = D.hom_pos[D.identity[d]]
        for k, phi in enumerate(Gd.elements[d]):
            if lt[PG.of(d, k)] != PX.of(c, phi[c][pid]):
                left = False
    out["left_mate"] = left
    # right mate: ν_{p^*f_!}∘p^*λ∘σ_{g_*} = g_*σ̄ on g_*X
    right = True
    for d in range(D.n_objects):
        for k, phi in enumerate(Gd.elements[d]):
            target = lt[PG.of(d, k)]
            if any(PX.of(c, x) != target for c in range(C.n_objects) for x in phi[c]):
                right = False
    out["right_mate"] = right
    return out


def rho_object_report(gm: InducedGM, Y: Presheaf) -> dict:
    """ρ, ϱ and the two defining diagrams of ρ at one object of ``Psh(D)``."""
    C, Fo = gm.C, gm.F.object_map
    r, ok = rho(gm, Y)
    vr = varrho(gm, Y)
    PY = gm.ctx_D.pieces(Y)
    PgY = gm.ctx_C.pieces(gm.inverse(Y))
    out = {"rho_well_defined": ok, "rho": list(r), "varrho": list(vr)}
    out["varrho_after_rho"] = ok and tuple(vr[k] for k in r) == tuple(range(PY.count))
    out["rho_after_varrho"] = ok and tuple(r[k] for k in vr) == tuple(range(PgY.count))
    # f^*ρ∘g^*σ = σ̄_{g^*}
    out["sigma_diagram"] = ok and all(
        r[PY.of(Fo[c], y)] == PgY.of(c, y) for c in range(C.n_objects) for y in range(Y.sizes[Fo[c]])
    )
    # p_!ν_Y bijective
    nu = gm.nu(Y)
    out["pieces_invert_unit"] = _bijective(pieces_map(gm.ctx_D, nu), gm.ctx_D.pieces(nu.target).count)
    return out


def tau_diagram(gm: InducedGM, A: int) -> bool:
    """``τ̄∘ρ_{p^*A} = τ``."""
    DA = discrete(gm.ctx_D, A)
    r, ok = rho(gm, DA)
    tt, tbar = tau(gm.ctx_D, A), tau(gm.ctx_C, A)
    return ok and tuple(tbar[k] for k in r) == tt


@dataclass
class PiecesPreservationReport:
    indexed_coproducts_preserved: bool
    indecomposable: dict[str, bool]
    lambda_iso: bool
    theta_square_commutes: bool
    rho_varrho_inverse: bool
    mates_commute: bool
    pieces_invert_unit: bool
    tau_diagram: bool
    nu_discrete_iso: bool
    points_nu_discrete_iso: bool
    test_family: list[str] = field(default_factory=list)
    objects: list[dict] = field(default_factory=list)
    codomain_objects: list[dict] = field(default_factory=list)

    @property
    def preserves_pieces(self) -> bool:
        return self.indexed_coproducts_preserved and self.lambda_iso

    def as_dict(self) -> dict:
        return {
            "preserves_pieces": self.preserves_pieces,
            "indexed_coproducts_preserved": self.indexed_coproducts_preserved,
            "indecomposable": self.indecomposable,
            "lambda_iso": self.lambda_iso,
            "theta_square_commutes": self.theta_square_commutes,
            "rho_varrho_inverse": self.rho_varrho_inverse,
            "mates_commute": self.mates_commute,
            "pieces_invert_unit": self.pieces_invert_unit,
            "tau_diagram": self.tau_diagram,
            "nu_discrete_iso": self.nu_discrete_iso,
            "points_nu_discrete_iso": self.points_nu_discrete_iso,
            "test_family": self.test_family,
            "objects": self.objects,
            "codomain_objects": self.codomain_objects,
        }


def pieces_preservation_report(gm: InducedGM, test_objects: Sequence[Presheaf],
                               codomain_objects: Sequence[Presheaf] | None = None,
                               labels: Sequence[str] | None = None) -> PiecesPreservationReport:
    """Certify pieces preservation over a declared finite family of test objects.

    ``test_objects`` live on the source site; ``codomain_objects`` (default:
    the representables and the direct images of the test objects) on the target.
    """
    indec = indecomposable_representables(gm)
    if codomain_objects is None:
        codomain_objects = [yoneda(gm.D, d) for d in range(gm.D.n_objects)]
        codomain_objects += [gm.direct(X).presheaf for X in test_objects]
    objs = [lambda_object_report(gm, X) for X in test_objects]
    cods = [rho_object_report(gm, Y) for Y in codomain_objects]
    lam_iso = all(o["lambda_iso"] for o in objs)
    return PiecesPreservationReport(
        indexed_coproducts_preserved=all(indec.values()),
        indecomposable=indec,
        lambda_iso=lam_iso,
        theta_square_commutes=all(o["theta_square_commutes"] for o in objs),
        rho_varrho_inverse=all(o["varrho_after_rho"] and o["rho_after_varrho"] for o in cods),
        mates_commute=all(o["left_mate"] and o["right_mate"] and o["lambda_varrho_triangle"] for o in objs),
        pieces_invert_unit=all(o["pieces_invert_unit"] for o in cods),
        tau_diagram=all(tau_diagram(gm, a) for a in (0, 1, 2)),
        nu_discrete_iso=all(nu_discrete_iso(gm, a) for a in (0, 1, 2)),
        points_nu_discrete_iso=all(points_nu_discrete_iso(gm, a) for a in (0, 1, 2)),
        test_family=list(labels) if labels is not None else [X.label or f"object {i}" for i, X in enumerate(test_objects)],
        objects=objs,
        codomain_objects=cods,
    )


def coproduct_indecomposable_check(gm: InducedGM, connected: Sequence[Presheaf]) -> dict:
    """Coproduct preservation (on small discrete objects) versus connectedness of restrictions."""
    preserved = all(nu_discrete_iso(gm, a) for a in (0, 1, 2, 3))
    keeps = all(gm.ctx_C.pieces(gm.inverse(Y)).count == 1 for Y in connected
                if gm.ctx_D.pieces(Y).count == 1)
    return {"coproducts_preserved": preserved, "indecomposables_preserved": keeps,
            "implication_holds": (not preserved) or keeps}


# -- exponentials across g ------------------------------------------------


def gamma(gm: InducedGM, X: Presheaf, E: Presheaf,
          W: Exponential | None = None, V: Exponential | None = None) -> tuple[NatTrans, Exponential, Exponential]:
    """``γ: g^*((g_*X)^E) -> X^{g^*E}``, ``γ(t)(v, e) = ξ(t(Fv, e))``.

    Returns ``γ`` with the two exponentials ``(g_*X)^E`` (on D) and ``X^{g^*E}`` (on C).
    """
    C, D = gm.C, gm.D
    Fo, Fm = gm.F.object_map, gm.F.morphism_map
    Gd = gm.direct(X)
    if W is None:
        W = exponential(E, Gd.presheaf, gm.budget)
    gE = gm.inverse(E)
    if V is None:
        V = exponential(gE, X, gm.budget)
    xi = gm.xi(X)
    comps = []
    for c in range(C.n_objects):
        d = Fo[c]
        comp = []
        for t in W.elements[d]:
            table = []
            for c2 in range(C.n_objects):
                d2 = Fo[c2]
                ne = E.sizes[d2]
                row = []
                for v in C.hom[(c2, c)]:
                    base = D.hom_pos[Fm[v]] * ne
                    row.extend(xi.comps[c2][t[d2][base + e]] for e in range(ne))
                table.append(tuple(row))
            comp.append(V.index[c][tuple(table)])
        comps.append(tuple(comp))
    g = NatTrans(gm.inverse(W.presheaf), V.presheaf, tuple(comps))
    return g, W, V


def kappa_square(gm: InducedGM, X: Presheaf, E: Presheaf) -> dict:
    """``κ̄ ∘ f_!γ ∘ ρ = λ^ϱ ∘ κ`` on ``p_!((g_*X)^E)``, with ``λ^ϱ(h) = λ∘h∘ϱ_E``."""
    g, W, V = gamma(gm, X, E)
    r, r_ok = rho(gm, W.presheaf)
    fg = pieces_map(gm.ctx_C, g)
    kb = kappa(gm.ctx_C, gm.inverse(E), X, E=V)
    k = kappa(gm.ctx_D, E, gm.direct(X).presheaf, E=W)
    lt, l_ok = lam(gm, X)
    vr = varrho(gm, E)
    top = [kb.table[fg[r[e]]] for e in range(len(r))]
    bottom = [kb.codomain.index([lt[h[vr[i]]] for i in range(len(vr))]) for h in k.functions]
    nW = gm.ctx_D.pieces(W.presheaf).count
    nV = gm.ctx_C.pieces(V.presheaf).count
    return {
        "commutes": r_ok and l_ok and top == bottom,
        "rho_bijective": r_ok and _bijective(r, gm.ctx_C.pieces(g.source).count),
        "gamma_pieces_bijective": _bijective(fg, nV),
        "kappa_iso": k.iso,
        "kappa_bar_iso": kb.iso,
        "sizes": {"pieces_W": nW, "pieces_V": nV},
    }


def wk_preservation_check(gm: InducedGM, conn_domain: Connector, conn_codomain: Connector,
                          X: Presheaf, E: Presheaf | None = None) -> dict:
    """Distance bounds of ``X`` and ``g_*X`` with the κ-square at ``(X, E)``."""
    if E is None:
        E = conn_codomain.I
    G = gm.direct(X).presheaf
    dX = distance_report(gm.ctx_C, conn_domain, X)
    dG = distance_report(gm.ctx_D, conn_codomain, G)
    sq = kappa_square(gm, X, E)
    lt, ok = lam(gm, X)
    return {
        "bound_domain": dX.bound,
        "bound_direct_image": dG.bound,
        "lambda_iso": ok and _bijective(lt, gm.ctx_C.pieces(X).count),
        "kappa_square": sq,
    }


def exp_postcompose(src: Exponential, dst: Exponential, h: NatTrans) -> NatTrans:
    """``Y^E -> Y'^E`` induced by ``h: Y -> Y'``."""
    comps = []
    for d in range(src.site.n_objects):
        comps.append(tuple(
            dst.index[d][tuple(tuple(h.comps[e][y] for y in t[e]) for e in range(len(t)))]
            for t in src.elements[d]
        ))
    return NatTrans(src.presheaf, dst.presheaf, tuple(comps))


def exp_precompose(src: Exponential, dst: Exponential, k: NatTrans) -> NatTrans:
    """``Y^E -> Y^{E'}`` induced by ``k: E' -> E``."""
    C = src.site
    comps = []
    for d in range(C.n_objects):
        comp = []
        for t in src.elements[d]:
            table = []
            for e in range(C.n_objects):
                ne, ne2 = src.base.sizes[e], dst.base.sizes[e]
                row = []
                for p in range(len(C.hom[(e, d)])):
                    row.extend(t[e][p * ne + k.comps[e][x]] for x in range(ne2))
                table.append(tuple(row))
            comp.append(dst.index[d][tuple(table)])
        comps.append(tuple(comp))
    return NatTrans(src.presheaf, dst.presheaf, tuple(comps))


def _adjunction_chain(gm: InducedGM, X: Presheaf, E: Presheaf):
    g, W, V = gamma(gm, X, E)
    nu = gm.nu(W.presheaf)
    link1 = pieces_map(gm.ctx_D, nu)
    gg = gm.direct_map(g)
    link2 = pieces_map(gm.ctx_D, gg)
    link3, ok3 = lam(gm, V.presheaf)
    chain = tuple(link3[link2[link1[k]]] for k in range(len(link1)))
    r, ok_r = rho(gm, W.presheaf)
    fg = pieces_map(gm.ctx_C, g)
    direct = tuple(fg[k] for k in r)
    return W, V, (link1, link2, link3), chain, direct, ok3 and ok_r


def hurewicz_adjunction_check(gm: InducedGM, E: Presheaf, X: Presheaf,
                              naturality: Sequence[tuple[str, NatTrans]] = ()) -> dict:
    """``H(g^*E, X) = f_!(X^{g^*E}) ≅ p_!((g_*X)^E) = H(E, g_*X)`` link by link.

    ``naturality`` holds ``("X", h: X -> X')`` or ``("E", k: E' -> E)`` maps
    along which the composite bijection is checked to be natural.
    """
    W, V, links, chain, direct, ok = _adjunction_chain(gm, X, E)
    nW = gm.ctx_D.pieces(W.presheaf).count
    nV = gm.ctx_C.pieces(V.presheaf).count
    sizes = [nW, gm.ctx_D.pieces(gm.nu(W.presheaf).target).count,
             gm.ctx_D.pieces(gm.direct(V.presheaf).presheaf).count, nV]
    link_ok = [_bijective(links[i], sizes[i + 1]) and len(links[i]) == sizes[i] for i in range(3)]
    out = {
        "size_codomain_side": nW,
        "size_domain_side": nV,
        "links_bijective": link_ok,
        "well_defined": ok,
        "composite_matches_rho_gamma": chain == direct,
        "bijection": ok and all(link_ok),
    }
    nat = []
    for kind, m in naturality:
        if kind == "X":
            X2 = m.target
            W2, V2, _, chain2, _, _ = _adjunction_chain(gm, X2, E)
            post_W = exp_postcompose(W, W2, gm.direct_map(m))
            post_V = exp_postcompose(V, V2, m)
            a = pieces_map(gm.ctx_D, post_W)
            b = pieces_map(gm.ctx_C, post_V)
            nat.append(tuple(chain2[a[k]] for k in range(nW)) == tuple(b[chain[k]] for k in range(nW)))
        elif kind == "E":
            E2 = m.source
            W2, V2, _, chain2, _, _ = _adjunction_chain(gm, X, E2)
            pre_W = exp_precompose(W, W2, m)
            pre_V = exp_precompose(V, V2, gm.inverse_map(m))
            a = pieces_map(gm.ctx_D, pre_W)
            b = pieces_map(gm.ctx_C, pre_V)
            nat.append(tuple(chain2[a[k]] for k in range(nW)) == tuple(b[chain[k]] for k in range(nW)))
        else:
            raise CohesioError(f"unknown naturality variable {kind!r}")
    out["natural"] = all(nat)
    out["naturality_checks"] = len(nat)
    return out


def restriction_kappa(gm: InducedGM, U: Presheaf, Vp: Presheaf,
                      src: Exponential | None = None, dst: Exponential | None = None) -> NatTrans:
    """``κ^{g^*}: g^*(V^U) -> (g^*V)^{g^*U}``, ``t ↦ ((v, x) ↦ t(Fv, x))``."""
    C, D = gm.C, gm.D
    Fo, Fm = gm.F.object_map, gm.F.morphism_map
    if src is None:
        src = exponential(U, Vp, gm.budget)
    if dst is None:
        dst = exponential(gm.inverse(U), gm.inverse(Vp), gm.budget)
    comps = []
    for c in range(C.n_objects):
        comp = []
        for t in src.elements[Fo[c]]:
            table = []
            for c2 in range(C.n_objects):
                nx = U.sizes[Fo[c2]]
                row = []
                for v in C.hom[(c2, c)]:
                    base = D.hom_pos[Fm[v]] * nx
                    row.extend(t[Fo[c2]][base:base + nx])
                table.append(tuple(row))
            comp.append(dst.index[c][tuple(table)])
        comps.append(tuple(comp))
    return NatTrans(gm.inverse(src.presheaf), dst.presheaf, tuple(comps))


def kappa_coherence(gm: InducedGM, U: Presheaf, Vp: Presheaf) -> bool:
    """``κ^{f_! g^*} = κ^{f_!} ∘ f_!(κ^{g^*})`` for the product-preserving pair ``g^*``, ``f_!``."""
    src = exponential(U, Vp, gm.budget)
    dst = exponential(gm.inverse(U), gm.inverse(Vp), gm.budget)
    rk = restriction_kappa(gm, U, Vp, src, dst)
    kb = kappa(gm.ctx_C, gm.inverse(U), gm.inverse(Vp), E=dst)
    composite = [kb.table[k] for k in pieces_map(gm.ctx_C, rk)]
    # direct: transpose of f_!g^*(V^U) × f_!g^*U ≅ f_!g^*(V^U × U) -> f_!g^*V
    P, p, q = product(src.presheaf, U)
    gP = gm.inverse(P)
    gp, gq = gm.inverse_map(p), gm.inverse_map(q)
    ev = gm.inverse_map(src.ev)
    ctx = gm.ctx_C
    a, b, e = pieces_map(ctx, gp), pieces_map(ctx, gq), pieces_map(ctx, ev)
    nb = ctx.pieces(gm.inverse(U)).count
    value: dict[int, int] = {}
    ok = True
    for k in range(ctx.pieces(gP).count):
        key = a[k] * nb + b[k]
        if value.setdefault(key, e[k]) != e[k]:
            ok = False
    na = ctx.pieces(gm.inverse(src.presheaf)).count
    direct = [kb.codomain.index([value.get(i * nb + j, 0) for j in range(nb)]) for i in range(na)]
    return ok and len(value) == na * nb and composite == direct


def morphism_report(gm: InducedGM, test_objects: Sequence[Presheaf], labels: Sequence[str] | None = None) -> dict:
    rep = pieces_preservation_report(gm, test_objects, labels=labels)
    tri = [gm.triangle_identities(X, yoneda(gm.D, d)) for X in test_objects for d in range(gm.D.n_objects)]
    out = rep.as_dict()
    out["triangle_identities"] = all(all(t.values()) for t in tri)
    return out
