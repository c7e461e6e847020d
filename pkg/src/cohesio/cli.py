"""``cohesio`` command line.

Every command prints one canonical JSON report (or writes it with
``--out``).  Exit status: 0 on success, 2 when the requested check fails,
1 on error, with ``{"error": {"code", "message"}}`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .budget import ENV_VAR, Budget, default_budget
from .cohesion import CohesionContext, cohesion_report, continuity_map
from .errors import CohesioError, SchemaError
from .fincat import FinCat, builtin_site, classify_site, is_split_epi
from .formats import (
    canonical_dumps,
    functor_from_doc,
    load_objects_dir,
    presheaf_from_doc,
    presheaf_to_doc,
    read_json,
    site_from_doc,
    site_to_doc,
)
from .homotopy import (
    Connector,
    distance_report,
    homotopy_report,
    hurewicz_hom,
    is_kan,
    is_navigable,
    standard_connector,
)
from .presheaf import Presheaf, subobject_classifier, yoneda

CHECK_FAILED = 2
ERROR = 1


class UsageError(CohesioError):
    code = "usage_error"


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with status 1 and a JSON error, like every other error."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": {"code": "usage_error", "message": message}}, sort_keys=True) + "\n")
        raise SystemExit(ERROR)


# -- input resolution --------------------------------------------------


def _site_arg(value: str, budget: int | None = None) -> FinCat:
    p = Path(value)
    if p.suffix == ".json" or p.exists():
        return site_from_doc(read_json(p))
    return builtin_site(value, budget)


def _resolve_site(args, required: bool = True) -> FinCat | None:
    if getattr(args, "site", None) and getattr(args, "builtin", None):
        raise UsageError("give either --site or --builtin, not both")
    if getattr(args, "site", None):
        return _site_arg(args.site, args.budget)
    if getattr(args, "builtin", None):
        return builtin_site(args.builtin, args.budget)
    if required:
        raise UsageError("a site is required (--site or --builtin)")
    return None


def _load_object(args, site: FinCat | None) -> Presheaf:
    if not getattr(args, "object", None):
        raise UsageError("--object is required")
    return presheaf_from_doc(read_json(args.object), site)


def _site_and_object(args) -> tuple[FinCat, Presheaf]:
    site = _resolve_site(args, required=False)
    X = _load_object(args, site)
    return X.site, X


def _budget(args) -> Budget:
    return Budget(args.budget if args.budget is not None else default_budget(), "cli")


def _connector(args, ctx: CohesionContext) -> Connector:
    if not getattr(args, "connector", None):
        return standard_connector(ctx)
    doc = read_json(args.connector)
    if not isinstance(doc, dict) or "object" not in doc:
        raise SchemaError("missing required key 'object'", "/object")
    I = presheaf_from_doc(doc["object"], ctx.site, "/object")
    names = [I.name_of(ctx.t, x) for x in range(I.sizes[ctx.t])]
    ends = []
    for key in ("zero", "one"):
        if key not in doc:
            raise SchemaError(f"missing required key {key!r}", f"/{key}")
        if doc[key] not in names:
            raise SchemaError(f"{doc[key]!r} is not a point of the connector", f"/{key}")
        ends.append(names.index(doc[key]))
    return Connector(I, ends[0], ends[1])


def _options(args) -> dict:
    skip = {"func", "command", "action", "out"}
    out = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    out["budget"] = args.budget if args.budget is not None else default_budget()
    return out


# -- site ----------------------------------------------------------------


def cmd_site_classify(args):
    C = _resolve_site(args)
    rep = classify_site(C).as_dict()
    rep["site"] = C.name
    rep["objects"] = C.n_objects
    rep["morphisms"] = C.n_morphisms
    return rep, 0


def cmd_site_build(args):
    C = _resolve_site(args)
    return site_to_doc(C), 0


def cmd_site_split_epi(args):
    C = _resolve_site(args)
    ok, s = is_split_epi(C, args.morphism)
    return {"morphism": args.morphism, "split_epi": ok, "section": C.mor_ids[s] if ok else None}, 0


# -- presheaf -------------------------------------------------------------


def cmd_presheaf_info(args):
    C, X = _site_and_object(args)
    return {
        "site": C.name,
        "label": X.label,
        "sections": {C.objects[c]: X.sizes[c] for c in range(C.n_objects)},
        "valid": True,
    }, 0


def cmd_presheaf_yoneda(args):
    C = _resolve_site(args)
    if not args.at:
        raise UsageError("--at names the representing object")
    return presheaf_to_doc(yoneda(C, args.at)), 0


def cmd_presheaf_omega(args):
    C = _resolve_site(args)
    budget = _budget(args)
    Om = subobject_classifier(C, budget)
    ctx = CohesionContext(C, budget)
    return {
        "sections": {C.objects[c]: Om.presheaf.sizes[c] for c in range(C.n_objects)},
        "pieces": ctx.pieces(Om.presheaf).count,
    }, 0


# -- cohesion -------------------------------------------------------------


def cmd_cohesion_report(args):
    C, X = _site_and_object(args)
    budget = _budget(args)
    ctx = CohesionContext(C, budget)
    rep = cohesion_report(ctx, X, budget)
    return rep, 0 if rep["theta_surjective"] else CHECK_FAILED


def cmd_cohesion_continuity(args):
    C, X = _site_and_object(args)
    budget = _budget(args)
    ctx = CohesionContext(C, budget)
    rows = []
    for a in range(args.index + 1):
        cd = continuity_map(ctx, X, a, budget)
        rows.append({"A": a, "kappa_iso": cd.kappa_iso, "bijective": cd.composite_iso})
    ok = all(r["bijective"] for r in rows)
    return {"continuity": rows, "bijective": ok}, 0 if ok else CHECK_FAILED


# -- homotopy -------------------------------------------------------------


def _homotopy_setup(args):
    C, X = _site_and_object(args)
    budget = _budget(args)
    ctx = CohesionContext(C, budget)
    return ctx, _connector(args, ctx), X, budget


def cmd_homotopy_bound(args):
    ctx, conn, X, budget = _homotopy_setup(args)
    rep = distance_report(ctx, conn, X, budget)
    return {"weakly_kan_bound": rep.bound, "distance": [list(r) for r in rep.d]}, 0


def cmd_homotopy_navigable(args):
    ctx, conn, X, budget = _homotopy_setup(args)
    nav = is_navigable(ctx, conn, X, budget)
    return {
        "navigable": nav.navigable,
        "failing_pair": list(nav.failing_pair) if nav.failing_pair else None,
    }, 0 if nav.navigable else CHECK_FAILED


def cmd_homotopy_kan(args):
    C, X = _site_and_object(args)
    res = is_kan(X, args.max_dim, _budget(args))
    return {
        "kan": res.kan,
        "kan_up_to": res.checked_up_to,
        "failing_horn": res.failing_horn,
    }, 0 if res.kan else CHECK_FAILED


def cmd_homotopy_report(args):
    ctx, conn, X, budget = _homotopy_setup(args)
    return homotopy_report(ctx, conn, X, args.max_dim, budget), 0


def cmd_homotopy_hom(args):
    C, X = _site_and_object(args)
    budget = _budget(args)
    if not args.target:
        raise UsageError("--target is required")
    Y = presheaf_from_doc(read_json(args.target), C)
    ctx = CohesionContext(C, budget)
    return {"hurewicz_hom_size": hurewicz_hom(ctx, X, Y, budget).size}, 0


# -- realize ----------------------------------------------------------------


def _carrier(args):
    from .realization import cube_spec, endpoints_spec, simplex_spec, tabular_spec

    chosen = [k for k in ("simplex", "cube") if getattr(args, k, None) is not None]
    chosen += [k for k in ("endpoints",) if getattr(args, k, False)]
    chosen += [k for k in ("carrier",) if getattr(args, k, None)]
    if len(chosen) != 1:
        raise UsageError("choose exactly one of --simplex, --cube, --endpoints, --carrier")
    kind = chosen[0]
    if kind == "simplex":
        return simplex_spec(args.simplex), f"[{args.simplex}]"
    if kind == "cube":
        return cube_spec(args.cube, max_dim=max(args.cube, args.max_dim or 0)), f"[0,1]^{args.cube}"
    if kind == "endpoints":
        return endpoints_spec(), None
    doc = read_json(args.carrier)
    C = site_from_doc(doc.get("site"), "/site") if isinstance(doc, dict) and "site" in doc else None
    if C is None:
        raise SchemaError("missing required key 'site'", "/site")
    for key in ("sets", "maps"):
        if key not in doc:
            raise SchemaError(f"missing required key {key!r}", f"/{key}")
    try:
        names = [doc["sets"][o] for o in C.objects]
    except KeyError as exc:
        raise SchemaError(f"no set for object {exc.args[0]!r}", "/sets") from None
    try:
        return tabular_spec(C, names, doc["maps"]), None
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"carrier map is incomplete: {exc}", "/maps") from None


def cmd_realize_interior(args):
    from .realization import RationalPoint, interior_membership

    spec, obj = _carrier(args)
    if args.object_name:
        obj = args.object_name
    if obj is None:
        raise UsageError("--at names the object of a tabular carrier")
    c = spec.site.ob(obj)
    x = spec.element(c, args.point or "")
    if spec.geometric and RationalPoint(tuple(x.coords)).dim != spec.dims[c]:
        raise SchemaError(f"point needs {spec.dims[c]} coordinates", "/point")
    ok = interior_membership(spec, c, x)
    return {"object": spec.site.objects[c], "point": args.point, "interior": ok}, 0


def cmd_realize_certify(args):
    from .realization import surjectivity_certificate

    spec, _ = _carrier(args)
    cert = surjectivity_certificate(spec)
    return cert, 0 if cert["certified"] else CHECK_FAILED


def _grid_one(kind: str, n: int, c: int, denominator: int, max_dim: int) -> dict:
    from .realization import brute_force_interior, cube_spec, interior_membership, rational_grid, simplex_spec

    spec = simplex_spec(n) if kind == "simplex" else cube_spec(n, max_dim=max_dim)
    checked, bad = 0, []
    for p in rational_grid(spec.dims[c], denominator, kind == "simplex"):
        checked += 1
        fast = interior_membership(spec, c, p)
        if fast != brute_force_interior(spec, c, p, max_dim):
            bad.append([spec.site.objects[c], [str(v) for v in p], fast])
    return {"object": spec.site.objects[c], "checked": checked, "mismatches": bad}


def cmd_realize_grid(args):
    if (args.simplex is None) == (args.cube is None):
        raise UsageError("choose exactly one of --simplex or --cube")
    kind = "simplex" if args.simplex is not None else "cube"
    n = args.simplex if kind == "simplex" else args.cube
    max_dim = max(n, args.max_dim or 0)
    if not 1 <= args.grid_step <= 12:
        raise UsageError("--grid-step must lie in 1..12")
    jobs = [(kind, n, c, args.grid_step, max_dim) for c in range(n + 1)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_grid_one, *zip(*jobs)))
    else:
        rows = [_grid_one(*j) for j in jobs]
    agree = not any(r["mismatches"] for r in rows)
    return {"objects": rows, "checked": sum(r["checked"] for r in rows), "agree": agree}, 0 if agree else CHECK_FAILED


def cmd_realize_point(args):
    from .realization import realize_report

    C, X = _site_and_object(args)
    if args.degree is None or args.element is None:
        raise UsageError("--degree and --element are required")
    c = C.ob(f"[{args.degree}]")
    names = [X.name_of(c, x) for x in range(X.sizes[c])]
    if args.element not in names:
        raise SchemaError(f"{args.element!r} is not an element of degree {args.degree}", "/element")
    coords = [Fraction(v) for v in (args.point or "").split(",") if v.strip()]
    return realize_report(X, args.degree, names.index(args.element), coords), 0


# -- morphism --------------------------------------------------------------


def cmd_morphism_analyze(args):
    from .morphisms import induce_gm, morphism_report

    if not args.functor:
        raise UsageError("--functor is required")
    F = functor_from_doc(read_json(args.functor))
    gm = induce_gm(F, _budget(args))
    if args.tests:
        named = load_objects_dir(args.tests, F.source)
    else:
        named = [(f"y({o})", yoneda(F.source, o)) for o in F.source.objects]
    if not named:
        raise UsageError("the test directory holds no presheaves")
    labels = [n for n, _ in named]
    rep = morphism_report(gm, [X for _, X in named], labels)
    rep["source"] = F.source.name
    rep["target"] = F.target.name
    return rep, 0 if rep["preserves_pieces"] else CHECK_FAILED


# -- parser ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=int, default=None,
                   help=f"enumeration budget (default: ${ENV_VAR} or 10^7)")
    p.add_argument("--out", "--report", dest="out", default=None, help="write the report here")


def _site_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--builtin", help="builtin site: delta1, delta:N, cube:N, bipointed:N, terminal")
    p.add_argument("--site", help="site document, or a builtin site name")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cohesio", description="Pre-cohesive presheaf toposes over finite sites.")
    top = parser.add_subparsers(dest="command", required=True)

    def group(name: str, help: str):
        g = top.add_parser(name, help=help)
        return g.add_subparsers(dest="action", required=True)

    def leaf(sub, name, func, help, site=True, obj=False, connector=False, max_dim=False):
        p = sub.add_parser(name, help=help)
        _common(p)
        if site:
            _site_flags(p)
        if obj:
            p.add_argument("--object", help="presheaf document")
        if connector:
            p.add_argument("--connector", help="connector document (default: the standard interval)")
        if max_dim:
            p.add_argument("--max-dim", dest="max_dim", type=int, default=None)
        p.set_defaults(func=func)
        return p

    s = group("site", "finite sites")
    leaf(s, "classify", cmd_site_classify, "pre-cohesion flags")
    leaf(s, "build", cmd_site_build, "emit a site document")
    p = leaf(s, "split-epi", cmd_site_split_epi, "section of a morphism")
    p.add_argument("--morphism", required=True)

    s = group("presheaf", "finite presheaves")
    leaf(s, "info", cmd_presheaf_info, "validate and summarize", obj=True)
    p = leaf(s, "yoneda", cmd_presheaf_yoneda, "emit a representable presheaf")
    p.add_argument("--at", help="representing object")
    leaf(s, "omega", cmd_presheaf_omega, "subobject classifier summary")

    s = group("cohesion", "pieces, points and comparison maps")
    leaf(s, "report", cmd_cohesion_report, "pieces, points, theta, kappa", obj=True)
    p = leaf(s, "continuity", cmd_cohesion_continuity, "finite continuity maps", obj=True)
    p.add_argument("--index", type=int, default=3, help="largest discrete index set (default 3)")

    s = group("homotopy", "connectors, distances, horn fillers")
    leaf(s, "bound", cmd_homotopy_bound, "distance bound", obj=True, connector=True)
    leaf(s, "navigable", cmd_homotopy_navigable, "single-path connectivity", obj=True, connector=True)
    leaf(s, "kan", cmd_homotopy_kan, "horn fillers", obj=True, max_dim=True)
    leaf(s, "report", cmd_homotopy_report, "all homotopy checks", obj=True, connector=True, max_dim=True)
    p = leaf(s, "hom", cmd_homotopy_hom, "Hurewicz hom-set size", obj=True)
    p.add_argument("--target", help="codomain presheaf document")

    s = group("realize", "geometric carriers and realization")
    for name, func, help in (("interior", cmd_realize_interior, "interior membership"),
                             ("certify", cmd_realize_certify, "surjectivity certificate")):
        p = leaf(s, name, func, help, site=False, max_dim=True)
        p.add_argument("--simplex", type=int)
        p.add_argument("--cube", type=int)
        p.add_argument("--endpoints", action="store_true")
        p.add_argument("--carrier", help="tabular carrier document")
        if name == "interior":
            p.add_argument("--point", help="exact coordinates, e.g. 1/3,2/3, or an element name")
            p.add_argument("--at", dest="object_name", help="object of the carrier")
    p = leaf(s, "grid", cmd_realize_grid, "closed form vs brute force on a rational grid", site=False, max_dim=True)
    p.add_argument("--simplex", type=int)
    p.add_argument("--cube", type=int)
    p.add_argument("--grid-step", dest="grid_step", type=int, default=7, help="largest denominator (default 7)")
    p.add_argument("--jobs", type=int, default=1)
    p = leaf(s, "point", cmd_realize_point, "canonical form of a point", obj=True)
    p.add_argument("--degree", type=int)
    p.add_argument("--element")
    p.add_argument("--point", help="exact coordinates")

    s = group("morphism", "geometric morphisms induced by site functors")
    p = leaf(s, "analyze", cmd_morphism_analyze, "pieces preservation report", site=False)
    p.add_argument("--functor", help="functor document")
    p.add_argument("--tests", help="directory of presheaf documents on the source site")
    return parser


def _emit_error(exc: Exception, code: str) -> int:
    err = {"code": code, "message": str(exc)}
    pointer = getattr(exc, "pointer", None)
    if pointer is not None:
        err["pointer"] = pointer
    sys.stderr.write(json.dumps({"error": err}, sort_keys=True) + "\n")
    return ERROR


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, status = args.func(args)
        doc = dict(report)
        doc["options"] = _options(args)
        text = canonical_dumps(doc)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return status
    except CohesioError as exc:
        return _emit_error(exc, exc.code)
    except (KeyError, ValueError) as exc:
        return _emit_error(exc, "invalid_input")


if __name__ == "__main__":
    sys.exit(main())
