"""Filtering functors into Set: interiors, surjectivity certificates, realized points.

Two geometric carriers are built in.  On a truncated simplex site ``[n]``
goes to ``{0 ≤ t_1 ≤ ... ≤ t_n ≤ 1}`` and ``θ: [m] -> [n]`` acts by
``s ↦ (s_{r_1}, ..., s_{r_n})`` with ``r_j = #{i : θ(i) < j}``, ``s_0 = 0`` and
``s_{m+1} = 1``; so the face skipping 0 adds a leading 0, the face skipping
``n`` adds a trailing 1 and inner faces duplicate a coordinate.  On a cube
site ``[0,1]^k`` goes to itself and maps act componentwise.  All arithmetic
is exact.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .budget import Budget, as_budget
from .errors import CohesioError, SchemaError
from .fincat import (
    FinCat,
    cube,
    cube_map,
    delta_map,
    delta_morphism,
    delta_truncated,
    has_split_epi_mono_factorization,
    is_split_epi,
)
from .presheaf import NatTrans, Presheaf, product_many, yoneda

MAX_DIM = 3


class MalformedPoint(CohesioError):
    code = "malformed_point"


@dataclass(frozen=True)
class RationalPoint:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(Fraction(c) for c in self.coords)
        object.__setattr__(self, "coords", cs)
        for c in cs:
            if not 0 <= c <= 1:
                raise MalformedPoint(f"coordinate {c} lies outside [0,1]")

    @classmethod
    def parse(cls, text: str) -> RationalPoint:
        text = text.strip()
        if not text:
            return cls(())
        try:
            return cls(tuple(Fraction(p.strip()) for p in text.split(",")))
        except (ValueError, ZeroDivisionError):
            raise MalformedPoint(f"cannot read {text!r} as exact fractions") from None

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.coords, self.coords[1:]))

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coords)


def _point(x) -> RationalPoint:
    return x if isinstance(x, RationalPoint) else RationalPoint(tuple(x))


# -- the geometric carriers -------------------------------------------


def simplex_act(theta: Sequence[int], n: int, s: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Image of ``s ∈ Δ^m`` under ``θ: [m] -> [n]``."""
    ext = (Fraction(0), *s, Fraction(1))
    out = []
    for j in range(1, n + 1):
        r = sum(1 for v in theta if v < j)
        out.append(ext[r])
    return tuple(out)


def cube_act(codes: Sequence[int], s: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) if c < 2 else s[c - 2] for c in codes)


def simplex_vertex(n: int, i: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(0) if j <= i else Fraction(1) for j in range(1, n + 1))


@dataclass(frozen=True)
class FilteringSpec:
    """A filtering functor ``site -> Set``: geometric (simplex, cube) or tabular.

    Tabular carriers list element names per object and, for every morphism
    ``u: c -> d``, the function ``A(c) -> A(d)`` as a tuple.
    """

    site: FinCat
    kind: str
    sizes: tuple[int, ...] = ()
    act: tuple[tuple[int, ...], ...] = ()
    names: tuple[tuple[str, ...], ...] = ()
    dims: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind not in ("simplex", "cube", "tabular"):
            raise CohesioError(f"unknown carrier kind {self.kind!r}")
        C = self.site
        if self.kind == "simplex":
            object.__setattr__(self, "dims", tuple(int(o.strip("[]")) for o in C.objects))
        elif self.kind == "cube":
            object.__setattr__(self, "dims", tuple(int(o.split("^")[1]) for o in C.objects))
        else:
            self._validate_tabular()

    def _validate_tabular(self) -> None:
        C = self.site
        if len(self.sizes) != C.n_objects or len(self.act) != C.n_morphisms:
            raise CohesioError("tabular carrier needs a set per object and a map per morphism")
        for u in range(C.n_morphisms):
            a = self.act[u]
            if len(a) != self.sizes[C.dom[u]] or any(not 0 <= y < self.sizes[C.cod[u]] for y in a):
                raise CohesioError(f"carrier map of {C.mor_ids[u]!r} is not a function")
        for c in range(C.n_objects):
            if self.act[C.identity[c]] != tuple(range(self.sizes[c])):
                raise CohesioError(f"identity at {C.objects[c]!r} acts non-trivially")
        rows = C._rows
        for g in range(C.n_morphisms):
            for f in C.into[C.dom[g]]:
                ag, af, agf = self.act[g], self.act[f], self.act[rows[g][f]]
                if any(agf[x] != ag[af[x]] for x in range(len(af))):
                    raise CohesioError("carrier is not functorial")

    @property
    def geometric(self) -> bool:
        return self.kind != "tabular"

    def apply(self, u: int, x):
        """``A(u)(x)``."""
        C = self.site
        if self.kind == "simplex":
            _, k, vals = delta_map(C, u)
            return simplex_act(vals, k, _point(x).coords)
        if self.kind == "cube":
            _, _, codes = cube_map(C, u)
            return cube_act(codes, _point(x).coords)
        return self.act[u][x]

    def element(self, c: int, label: str):
        if self.geometric:
            return RationalPoint.parse(label)
        try:
            return self.names[c].index(label)
        except ValueError:
            raise CohesioError(f"{label!r} is not an element of A({self.site.objects[c]})") from None


def simplex_spec(n: int, budget: Budget | int | None = None) -> FilteringSpec:
    return FilteringSpec(delta_truncated(n, budget), "simplex")


def cube_spec(cap: int, budget: Budget | int | None = None, max_dim: int = MAX_DIM) -> FilteringSpec:
    return FilteringSpec(cube(cap, budget, max_dim), "cube")


def tabular_spec(site: FinCat, names: Sequence[Sequence[str]], maps) -> FilteringSpec:
    """``maps`` sends morphism ids to ``{element: element}`` dicts."""
    names = tuple(tuple(ns) for ns in names)
    act = []
    for u in range(site.n_morphisms):
        m = maps[site.mor_ids[u]]
        src, dst = names[site.dom[u]], names[site.cod[u]]
        act.append(tuple(dst.index(m[x]) for x in src))
    return FilteringSpec(site, "tabular", tuple(len(n) for n in names), tuple(act), names)


def endpoints_spec() -> FilteringSpec:
    """The reflexive-graph carrier with ``A[0] = {*}`` and ``A[1] = {0, 1}`` only."""
    C = delta_truncated(1)
    maps = {}
    for u in range(C.n_morphisms):
        m, k, vals = delta_map(C, u)
        if k == 0:
            src = ["*"] if m == 0 else ["0", "1"]
            maps[C.mor_ids[u]] = {x: "*" for x in src}
        elif m == 0:
            maps[C.mor_ids[u]] = {"*": str(simplex_vertex(1, vals[0])[0])}
        else:
            maps[C.mor_ids[u]] = {x: str(simplex_act(vals, 1, (Fraction(x),))[0]) for x in ("0", "1")}
    return tabular_spec(C, [["*"], ["0", "1"]], maps)


def filtering_report(spec: FilteringSpec) -> dict:
    """The finite filtering conditions, checked on the given data only."""
    C = spec.site
    if spec.geometric:
        return {"nonempty": True, "spans": True, "equalizers": True, "checked_on_finite_data": False}
    rows = C._rows
    elems = [(c, x) for c in range(C.n_objects) for x in range(spec.sizes[c])]
    nonempty = bool(elems)
    spans = True
    for (c, a), (d, b) in itertools.combinations_with_replacement(elems, 2):
        found = any(
            spec.act[u][z] == a and spec.act[v][z] == b
            for e in range(C.n_objects)
            for z in range(spec.sizes[e])
            for u in C.hom[(e, c)]
            for v in C.hom[(e, d)]
        )
        if not found:
            spans = False
            break
    equal = True
    for c, a in elems:
        for d in range(C.n_objects):
            for u, v in itertools.combinations(C.hom[(c, d)], 2):
                if spec.act[u][a] != spec.act[v][a]:
                    continue
                ok = any(
                    spec.act[w][z] == a and rows[u][w] == rows[v][w]
                    for e in range(C.n_objects)
                    for w in C.hom[(e, c)]
                    for z in range(spec.sizes[e])
                )
                if not ok:
                    equal = False
    return {"nonempty": nonempty, "spans": spans, "equalizers": equal, "checked_on_finite_data": True}


# -- interiors --------------------------------------------------------


def _check_member(spec: FilteringSpec, c: int, x) -> None:
    if not spec.geometric:
        if not 0 <= x < spec.sizes[c]:
            raise CohesioError("element out of range")
        return
    p = _point(x)
    if p.dim != spec.dims[c]:
        raise MalformedPoint(f"point has {p.dim} coordinates, A({spec.site.objects[c]}) needs {spec.dims[c]}")
    if spec.kind == "simplex" and not p.is_monotone():
        raise MalformedPoint("simplex coordinates must be non-decreasing")


def interior_membership(spec: FilteringSpec, c: str | int, x) -> bool:
    """Is ``x ∈ A(c)`` hit only through split epimorphisms?"""
    C = spec.site
    c = C.ob(c)
    _check_member(spec, c, x)
    if spec.kind == "simplex":
        t = _point(x).coords
        ext = (Fraction(0), *t, Fraction(1))
        return all(a < b for a, b in zip(ext, ext[1:]))
    if spec.kind == "cube":
        t = _point(x).coords
        return all(0 < v < 1 for v in t) and len(set(t)) == len(t)
    if has_split_epi_mono_factorization(C):
        candidates = [u for u in C.into[c] if C.monos[u]]
    else:
        candidates = list(C.into[c])
    for u in candidates:
        if not C.split_epis[u] and x in spec.act[u]:
            return False
    return True


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a consistent system with independent columns, else ``None``."""
    m = [r[:] + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    piv_row = 0
    pivots = []
    for col in range(ncols):
        pr = next((r for r in range(piv_row, len(m)) if m[r][col] != 0), None)
        if pr is None:
            return None
        m[piv_row], m[pr] = m[pr], m[piv_row]
        pv = m[piv_row][col]
        m[piv_row] = [v / pv for v in m[piv_row]]
        for r in range(len(m)):
            if r != piv_row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[piv_row])]
        pivots.append(col)
        piv_row += 1
    for r in range(piv_row, len(m)):
        if m[r][-1] != 0:
            return None
    return [m[i][-1] for i in range(ncols)]


def _in_simplex_image(theta: Sequence[int], n: int, t: Sequence[Fraction]) -> bool:
    # image of A(θ) is the convex hull of the vertices θ(i)
    verts = [simplex_vertex(n, v) for v in sorted(set(theta))]
    rows = [[Fraction(1)] * len(verts)]
    rhs = [Fraction(1)]
    for j in range(n):
        rows.append([v[j] for v in verts])
        rhs.append(Fraction(t[j]))
    lam = _solve_exact(rows, rhs)
    return lam is not None and all(v >= 0 for v in lam)


def _in_cube_image(codes: Sequence[int], t: Sequence[Fraction]) -> bool:
    seen: dict[int, Fraction] = {}
    for code, v in zip(codes, t):
        if code < 2:
            if v != code:
                return False
        elif seen.setdefault(code, v) != v:
            return False
    return True


def brute_force_interior(spec: FilteringSpec, c: str | int, x, max_dim: int = MAX_DIM) -> bool:
    """Interior test from the definition: every morphism whose image contains ``x`` must split."""
    C = spec.site
    c = C.ob(c)
    if not spec.geometric:
        raise CohesioError("brute-force interiors are for geometric carriers")
    if spec.dims[c] > max_dim:
        raise CohesioError(f"dimension {spec.dims[c]} exceeds the cap {max_dim}")
    _check_member(spec, c, x)
    t = _point(x).coords
    for u in C.into[c]:
        if spec.kind == "simplex":
            _, n, vals = delta_map(C, u)
            hit = _in_simplex_image(vals, n, t)
        else:
            _, _, codes = cube_map(C, u)
            hit = _in_cube_image(codes, t)
        if hit and not is_split_epi(C, u)[0]:
            return False
    return True


def rational_grid(dim: int, denominator: int, monotone: bool) -> Iterable[tuple[Fraction, ...]]:
    """All points with coordinates ``i/q``, ``q ≤ denominator``."""
    vals = sorted({Fraction(i, q) for q in range(1, denominator + 1) for i in range(q + 1)})
    if monotone:
        return itertools.combinations_with_replacement(vals, dim)
    return itertools.product(vals, repeat=dim)


def grid_agreement(spec: FilteringSpec, denominator: int = 7, max_dim: int = MAX_DIM) -> dict:
    """Compare the closed-form and brute-force interiors over a rational grid."""
    C = spec.site
    checked = 0
    mismatches = []
    for c in range(C.n_objects):
        if spec.dims[c] > max_dim:
            continue
        for p in rational_grid(spec.dims[c], denominator, spec.kind == "simplex"):
            checked += 1
            fast = interior_membership(spec, c, p)
            slow = brute_force_interior(spec, c, p, max_dim)
            if fast != slow:
                mismatches.append((C.objects[c], [str(v) for v in p], fast, slow))
    return {"checked": checked, "mismatches": mismatches, "agree": not mismatches}


def surjectivity_certificate(spec: FilteringSpec) -> dict:
    """A nonempty interior at every object certifies surjectivity."""
    C = spec.site
    witnesses = []
    for c in range(C.n_objects):
        if spec.geometric:
            n = spec.dims[c]
            w = RationalPoint(tuple(Fraction(i, n + 1) for i in range(1, n + 1)))
            ok = interior_membership(spec, c, w)
            entry = {"object": C.objects[c], "witness": str(w), "status": "interior" if ok else "failed"}
        else:
            found = [x for x in range(spec.sizes[c]) if interior_membership(spec, c, x)]
            ok = bool(found)
            entry = {
                "object": C.objects[c],
                "witness": spec.names[c][found[0]] if found else None,
                "status": "interior" if ok else "empty_interior",
            }
        witnesses.append(entry)
        if not ok:
            return {"certified": False, "failing_object": C.objects[c], "objects": witnesses}
    out = {"certified": True, "failing_object": None, "objects": witnesses}
    if not spec.geometric:
        out["filtering"] = filtering_report(spec)
    return out


# -- the simplex retraction ---------------------------------------------


def simplex_retraction(n: int, site: FinCat | None = None) -> tuple[NatTrans, NatTrans]:
    """``a: y[n] -> y[1]^n`` and ``b: y[1]^n -> y[n]`` with ``b∘a = id``.

    ``a_j(i) = 0`` for ``i < j`` and ``1`` otherwise; ``b(<h_j>)(i) = Σ_j h_j(i)``.
    """
    if n < 1:
        raise CohesioError("the retraction needs n ≥ 1")
    C = site if site is not None else delta_truncated(n)
    if f"[{n}]" not in C.obj_pos:
        raise CohesioError(f"[{n}] exceeds the truncation of the site")
    Yn, Y1 = yoneda(C, f"[{n}]"), yoneda(C, "[1]")
    P, _ = product_many([Y1] * n)
    a_maps = [tuple(0 if i < j else 1 for i in range(n + 1)) for j in range(1, n + 1)]
    a_comps, b_comps = [], []
    for c in range(C.n_objects):
        m = int(C.objects[c].strip("[]"))
        h1 = {delta_map(C, v)[2]: C.hom_pos[v] for v in C.hom[(c, C.obj_pos["[1]"])]}
        hn = {delta_map(C, v)[2]: C.hom_pos[v] for v in C.hom[(c, C.obj_pos[f"[{n}]"])]}
        n1 = len(h1)
        comp = []
        for v in C.hom[(c, C.obj_pos[f"[{n}]"])]:
            theta = delta_map(C, v)[2]
            idx = 0
            for aj in a_maps:
                idx = idx * n1 + h1[tuple(aj[x] for x in theta)]
            comp.append(idx)
        a_comps.append(tuple(comp))
        inv1 = {pos: vals for vals, pos in h1.items()}
        comp = []
        for tup in itertools.product(range(n1), repeat=n):
            hs = [inv1[p] for p in tup]
            comp.append(hn[tuple(sum(h[i] for h in hs) for i in range(m + 1))])
        b_comps.append(tuple(comp))
    a = NatTrans.checked(Yn, P, tuple(a_comps))
    b = NatTrans.checked(P, Yn, tuple(b_comps))
    return a, b


# -- canonical representatives ------------------------------------------


def _coface(m: int, skip: int) -> str:
    return delta_morphism(m - 1, m, tuple(j for j in range(m + 1) if j != skip))


def _codegeneracy(m: int, j: int) -> str:
    return delta_morphism(m, m - 1, tuple(i if i <= j else i - 1 for i in range(m + 1)))


def _validate_simplex_point(k: int, a) -> tuple[Fraction, ...]:
    p = _point(a)
    if p.dim != k:
        raise MalformedPoint(f"a point of Δ^{k} needs {k} coordinates")
    if not p.is_monotone():
        raise MalformedPoint("simplex coordinates must be non-decreasing")
    return p.coords


def realize_point(P: Presheaf, k: int, x: int, a) -> tuple[int, int, tuple[Fraction, ...]]:
    """Canonical ``(degree, nondegenerate simplex, interior point)`` of the class of ``(x, a)``."""
    C = P.site
    t = _validate_simplex_point(k, a)
    if f"[{k}]" not in C.obj_pos:
        raise CohesioError(f"degree {k} exceeds the truncation of the site")
    while True:
        if k > 0 and t[0] == 0:
            x, t, k = P.act[C.mor_pos[_coface(k, 0)]][x], t[1:], k - 1
            continue
        if k > 0 and t[-1] == 1:
            x, t, k = P.act[C.mor_pos[_coface(k, k)]][x], t[:-1], k - 1
            continue
        j = next((j for j in range(k - 1) if t[j] == t[j + 1]), None)
        if j is not None:
            # coordinates j+1 and j+2 (1-based) coincide: inner face skipping j+1
            x, t, k = P.act[C.mor_pos[_coface(k, j + 1)]][x], t[:j + 1] + t[j + 2:], k - 1
            continue
        for j in range(k):
            d = P.act[C.mor_pos[_coface(k, j)]][x]
            if P.act[C.mor_pos[_codegeneracy(k, j)]][d] == x:
                # x = x'·σ_j: A(σ_j) drops coordinate j+1
                x, t, k = d, t[:j] + t[j + 1:], k - 1
                break
        else:
            return k, x, t


def spans_related(P: Presheaf, left: tuple[int, int, Sequence], right: tuple[int, int, Sequence]) -> bool:
    """Is there one span ``[m] -> [k], [m] -> [k']`` and ``s ∈ Δ^m`` relating the two pairs?"""
    C = P.site
    (k, x, a), (k2, x2, a2) = left, right
    a = _validate_simplex_point(k, a)
    a2 = _validate_simplex_point(k2, a2)
    ck, ck2 = C.obj_pos[f"[{k}]"], C.obj_pos[f"[{k2}]"]
    for e in range(C.n_objects):
        m = int(C.objects[e].strip("[]"))
        for u in C.hom[(e, ck)]:
            xu = P.act[u][x]
            th = delta_map(C, u)[2]
            for v in C.hom[(e, ck2)]:
                if P.act[v][x2] != xu:
                    continue
                th2 = delta_map(C, v)[2]
                if _span_point_exists(m, [(th, k, a), (th2, k2, a2)]):
                    return True
    return False


def _span_point_exists(m: int, constraints) -> bool:
    """Some ``s ∈ Δ^m`` with ``A(θ)(s) = target`` for every constraint."""
    fixed: dict[int, Fraction] = {0: Fraction(0), m + 1: Fraction(1)}
    for theta, n, target in constraints:
        for j in range(1, n + 1):
            r = sum(1 for v in theta if v < j)
            if fixed.setdefault(r, target[j - 1]) != target[j - 1]:
                return False
    keys = sorted(fixed)
    return all(fixed[p] <= fixed[q] for p, q in zip(keys, keys[1:]))


def span_neighbors(P: Presheaf, k: int, x: int, a: Sequence[Fraction], values: Sequence[Fraction]):
    """Pairs one span away from ``(x, a)`` through points with coordinates in ``values``."""
    C = P.site
    ck = C.obj_pos[f"[{k}]"]
    out = set()
    for e in range(C.n_objects):
        m = int(C.objects[e].strip("[]"))
        for s in itertools.combinations_with_replacement(values, m):
            for u in C.hom[(e, ck)]:
                th = delta_map(C, u)[2]
                if simplex_act(th, k, s) != tuple(a):
                    continue
                xu = P.act[u][x]
                for c2 in range(C.n_objects):
                    for v in C.hom[(e, c2)]:
                        th2 = delta_map(C, v)[2]
                        n2 = int(C.objects[c2].strip("[]"))
                        image = simplex_act(th2, n2, s)
                        for x2 in range(P.sizes[c2]):
                            if P.act[v][x2] == xu:
                                out.add((n2, x2, image))
    return out


def span_closure_related(P: Presheaf, left, right, depth: int = 3,
                         budget: Budget | int | None = None) -> bool:
    """Breadth-first search over chains of at most ``depth`` spans.

    Intermediate points use only coordinates already present, plus 0 and 1,
    which keeps the search finite; a positive answer is always correct.
    """
    budget = as_budget(budget, "span closure")
    (k, x, a), (k2, x2, a2) = left, right
    a = tuple(Fraction(v) for v in a)
    a2 = tuple(Fraction(v) for v in a2)
    values = sorted({Fraction(0), Fraction(1), *a, *a2})
    start, goal = (k, x, a), (k2, x2, a2)
    seen = {start}
    q = deque([(start, 0)])
    while q:
        node, dist = q.popleft()
        if node == goal:
            return True
        if dist == depth:
            continue
        for nb in span_neighbors(P, *node, values):
            budget.charge()
            if nb not in seen:
                seen.add(nb)
                q.append((nb, dist + 1))
    return False


def realize_report(P: Presheaf, k: int, x: int, a) -> dict:
    deg, y, t = realize_point(P, k, x, a)
    C = P.site
    return {
        "degree": deg,
        "simplex": P.name_of(C.obj_pos[f"[{deg}]"], y),
        "point": [str(v) for v in t],
    }


def parse_point_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(p) for p in text.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"cannot read {text!r} as fractions") from None
