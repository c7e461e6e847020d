"""JSON interchange for sites, presheaves and site functors.

Documents are validated by hand so every fault carries a JSON pointer.
Saving always produces the canonical form (sorted keys, two-space indent,
trailing newline), so ``save(load(doc))`` is byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .errors import CategoryError, CohesioError, SchemaError
from .fincat import FinCat, FunctorData, builtin_site, validate_category
from .presheaf import Presheaf


def _escape(token: str) -> str:
    return str(token).replace("~", "~0").replace("/", "~1")


def _ptr(base: str, *tokens: Any) -> str:
    return base + "".join("/" + _escape(t) for t in tokens)


def _expect(value: Any, kind: type | tuple, pointer: str, what: str) -> Any:
    if not isinstance(value, kind):
        raise SchemaError(f"expected {what}", pointer)
    return value


def _require(doc: Mapping, key: str, kind: type | tuple, base: str, what: str) -> Any:
    if key not in doc:
        raise SchemaError(f"missing required key {key!r}", _ptr(base, key))
    return _expect(doc[key], kind, _ptr(base, key), what)


def canonical_dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise CohesioError(f"cannot read {p}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {p}: {exc.msg} at line {exc.lineno}", "") from None


def write_json(path: str | Path, doc: Any) -> None:
    Path(path).write_text(canonical_dumps(doc), encoding="utf-8")


# -- sites ---------------------------------------------------------------


def site_from_doc(doc: Any, base: str = "") -> FinCat:
    """A site document, or the name of a builtin site."""
    if isinstance(doc, str):
        try:
            return builtin_site(doc)
        except CategoryError as exc:
            raise SchemaError(str(exc), base or "/") from None
    _expect(doc, dict, base or "/", "an object or a builtin site name")
    objects = _require(doc, "objects", list, base, "an array of object names")
    for i, o in enumerate(objects):
        _expect(o, str, _ptr(base, "objects", i), "a string")
    morphisms = _require(doc, "morphisms", list, base, "an array of morphisms")
    for i, m in enumerate(morphisms):
        where = _ptr(base, "morphisms", i)
        _expect(m, dict, where, "an object with id, dom and cod")
        for key in ("id", "dom", "cod"):
            _require(m, key, str, where, "a string")
    identities = _require(doc, "identities", dict, base, "an object mapping objects to morphism ids")
    for o in objects:
        if o not in identities:
            raise SchemaError(f"object {o!r} has no identity", _ptr(base, "identities"))
        _expect(identities[o], str, _ptr(base, "identities", o), "a morphism id")
    compose = _require(doc, "compose", list, base, "an array of composites")
    for i, e in enumerate(compose):
        where = _ptr(base, "compose", i)
        _expect(e, dict, where, "an object with g, f and result")
        for key in ("g", "f", "result"):
            _require(e, key, str, where, "a morphism id")
    name = doc.get("name")
    if name is not None:
        _expect(name, str, _ptr(base, "name"), "a string")
    return validate_category(doc)


def site_to_doc(C: FinCat) -> dict:
    doc = C.to_tables()
    if doc.get("name") is None:
        doc.pop("name", None)
    return doc


def _site_ref(C: FinCat) -> Any:
    """The builtin name when it rebuilds exactly this site, else the inline document."""
    if C.name:
        try:
            if builtin_site(C.name) == C:
                return C.name
        except CohesioError:
            pass
    return site_to_doc(C)


def load_site(path: str | Path) -> FinCat:
    return site_from_doc(read_json(path))


def save_site(path: str | Path, C: FinCat) -> None:
    write_json(path, site_to_doc(C))


# -- presheaves ------------------------------------------------------------


def presheaf_from_doc(doc: Any, site: FinCat | None = None, base: str = "") -> Presheaf:
    """Load a presheaf; ``site`` overrides a missing ``site`` key."""
    _expect(doc, dict, base or "/", "an object")
    if "site" in doc:
        C = site_from_doc(doc["site"], _ptr(base, "site"))
        if site is not None and C != site:
            raise SchemaError("presheaf lives on a different site", _ptr(base, "site"))
    elif site is not None:
        C = site
    else:
        raise SchemaError("missing required key 'site'", _ptr(base, "site"))
    sections = _require(doc, "sections", dict, base, "an object mapping objects to element names")
    names, index = [], []
    for o in C.objects:
        where = _ptr(base, "sections", o)
        if o not in sections:
            raise SchemaError(f"no sections for object {o!r}", where)
        elems = _expect(sections[o], list, where, "an array of element names")
        for i, e in enumerate(elems):
            _expect(e, str, _ptr(base, "sections", o, i), "a string")
        if len(set(elems)) != len(elems):
            raise SchemaError("duplicate element names", where)
        names.append(list(elems))
        index.append({e: i for i, e in enumerate(elems)})
    for o in sections:
        if o not in C.obj_pos:
            raise SchemaError(f"unknown object {o!r}", _ptr(base, "sections", o))
    action = _require(doc, "action", dict, base, "an object mapping morphism ids to element maps")
    for m in action:
        if m not in C.mor_pos:
            raise SchemaError(f"unknown morphism {m!r}", _ptr(base, "action", m))
    act = []
    for u, m in enumerate(C.mor_ids):
        src, dst = C.cod[u], C.dom[u]
        where = _ptr(base, "action", m)
        if m not in action:
            if C.identity[src] == u:
                act.append(tuple(range(len(names[src]))))
                continue
            raise SchemaError(f"no action for morphism {m!r}", where)
        table = _expect(action[m], dict, where, "an object mapping elements to elements")
        row = []
        for e in names[src]:
            if e not in table:
                raise SchemaError(f"element {e!r} has no image", _ptr(base, "action", m, e))
            img = _expect(table[e], str, _ptr(base, "action", m, e), "an element name")
            if img not in index[dst]:
                raise SchemaError(f"{img!r} is not an element of {C.objects[dst]!r}", _ptr(base, "action", m, e))
            row.append(index[dst][img])
        extra = set(table) - set(names[src])
        if extra:
            raise SchemaError(f"unknown element {sorted(extra)[0]!r}", _ptr(base, "action", m, sorted(extra)[0]))
        act.append(tuple(row))
    label = doc.get("label")
    if label is not None:
        _expect(label, str, _ptr(base, "label"), "a string")
    return Presheaf(C, [len(n) for n in names], act, names, label=label)


def presheaf_to_doc(X: Presheaf, inline_site: bool = False) -> dict:
    C = X.site
    names = [[X.name_of(c, x) for x in range(X.sizes[c])] for c in range(C.n_objects)]
    doc = {
        "site": site_to_doc(C) if inline_site else _site_ref(C),
        "sections": {C.objects[c]: names[c] for c in range(C.n_objects)},
        "action": {
            C.mor_ids[u]: {names[C.cod[u]][x]: names[C.dom[u]][y] for x, y in enumerate(X.act[u])}
            for u in range(C.n_morphisms)
        },
    }
    if X.label:
        doc["label"] = X.label
    return doc


def load_presheaf(path: str | Path, site: FinCat | None = None) -> Presheaf:
    return presheaf_from_doc(read_json(path), site)


def save_presheaf(path: str | Path, X: Presheaf) -> None:
    write_json(path, presheaf_to_doc(X))


# -- site functors ----------------------------------------------------------


def functor_from_doc(doc: Any, base: str = "") -> FunctorData:
    """``{source, target, kind}`` with kind ``inclusion``, ``collapse`` or ``explicit``.

    Explicit functors list ``objects`` and ``morphisms`` maps by name.
    """
    from .morphisms import collapse_functor, inclusion_functor

    _expect(doc, dict, base or "/", "an object")
    if "source" not in doc:
        raise SchemaError("missing required key 'source'", _ptr(base, "source"))
    if "target" not in doc:
        raise SchemaError("missing required key 'target'", _ptr(base, "target"))
    S = site_from_doc(doc["source"], _ptr(base, "source"))
    T = site_from_doc(doc["target"], _ptr(base, "target"))
    kind = doc.get("kind", "explicit")
    _expect(kind, str, _ptr(base, "kind"), "a string")
    try:
        if kind == "inclusion":
            return inclusion_functor(S, T)
        if kind == "collapse":
            return collapse_functor(S, T)
        if kind == "identity":
            if S != T:
                raise SchemaError("identity functor needs equal sites", _ptr(base, "target"))
            return FunctorData.identity(S)
        if kind != "explicit":
            raise SchemaError(f"unknown functor kind {kind!r}", _ptr(base, "kind"))
        om = _require(doc, "objects", dict, base, "an object map")
        mm = _require(doc, "morphisms", dict, base, "a morphism map")
        return FunctorData.from_names(S, T, om, mm)
    except SchemaError:
        raise
    except CohesioError as exc:
        raise SchemaError(str(exc), base or "/") from None


def functor_to_doc(F: FunctorData) -> dict:
    maps = F.as_dict()
    return {
        "kind": "explicit",
        "source": _site_ref(F.source),
        "target": _site_ref(F.target),
        "objects": maps["object_map"],
        "morphisms": maps["morphism_map"],
    }


def load_functor(path: str | Path) -> FunctorData:
    return functor_from_doc(read_json(path))


def load_objects_dir(path: str | Path, site: FinCat) -> list[tuple[str, Presheaf]]:
    """Every ``*.json`` presheaf in a directory, sorted by file name."""
    p = Path(path)
    if not p.is_dir():
        raise CohesioError(f"{p} is not a directory")
    return [(f.name, load_presheaf(f, site)) for f in sorted(p.glob("*.json"))]
