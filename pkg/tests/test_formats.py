from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, strategies as st

from cohesio.errors import SchemaError
from cohesio.fincat import FunctorData, builtin_site, delta_truncated
from cohesio.formats import (
    canonical_dumps,
    functor_from_doc,
    functor_to_doc,
    load_objects_dir,
    load_presheaf,
    load_site,
    presheaf_from_doc,
    presheaf_to_doc,
    read_json,
    save_presheaf,
    save_site,
    site_from_doc,
    site_to_doc,
)
from cohesio.morphisms import inclusion_functor
from cohesio.presheaf import yoneda
from cohesio.samples import random_presheaf


def test_site_round_trip(tmp_path):
    C = delta_truncated(1)
    path = tmp_path / "d1.json"
    save_site(path, C)
    assert load_site(path) == C
    first = path.read_bytes()
    save_site(path, load_site(path))
    assert path.read_bytes() == first


def test_builtin_site_by_name():
    assert site_from_doc("delta:2") == builtin_site("delta:2")
    with pytest.raises(SchemaError):
        site_from_doc("nonsense")


def test_missing_identity_points_at_identities():
    doc = site_to_doc(delta_truncated(1))
    del doc["identities"]["[1]"]
    with pytest.raises(SchemaError) as err:
        site_from_doc(doc)
    assert err.value.pointer == "/identities"
    del doc["identities"]
    with pytest.raises(SchemaError) as err:
        site_from_doc(doc)
    assert err.value.pointer == "/identities"


def test_bad_morphism_entry_pointer():
    doc = site_to_doc(delta_truncated(1))
    doc["morphisms"][2] = {"id": "x", "dom": 3}
    with pytest.raises(SchemaError) as err:
        site_from_doc(doc)
    assert err.value.pointer.startswith("/morphisms/2")


def test_presheaf_schema_errors():
    doc = presheaf_to_doc(yoneda(delta_truncated(1), "[1]"))
    bad = json.loads(json.dumps(doc))
    bad["action"]["[1]->[0]:00"] = {}
    with pytest.raises(SchemaError) as err:
        presheaf_from_doc(bad)
    assert err.value.pointer.startswith("/action/[1]->[0]:00/")
    bad = json.loads(json.dumps(doc))
    bad["sections"]["[0]"].append(bad["sections"]["[0]"][0])
    with pytest.raises(SchemaError) as err:
        presheaf_from_doc(bad)
    assert err.value.pointer == "/sections/[0]"
    bad = json.loads(json.dumps(doc))
    del bad["site"]
    with pytest.raises(SchemaError) as err:
        presheaf_from_doc(bad)
    assert err.value.pointer == "/site"
    with pytest.raises(SchemaError):
        presheaf_from_doc(doc, site=builtin_site("delta:2"))


def test_identity_action_may_be_omitted():
    C = delta_truncated(1)
    doc = presheaf_to_doc(yoneda(C, "[1]"))
    for o in C.objects:
        del doc["action"][C.mor_ids[C.identity[C.ob(o)]]]
    assert presheaf_from_doc(doc) == yoneda(C, "[1]")


def test_invalid_json_is_a_schema_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{", encoding="utf-8")
    with pytest.raises(SchemaError):
        read_json(p)


def test_functor_documents():
    C, D = builtin_site("delta1"), builtin_site("delta:2")
    F = inclusion_functor(C, D)
    assert functor_from_doc({"source": "delta1", "target": "delta:2", "kind": "inclusion"}) == F
    assert functor_from_doc(functor_to_doc(F)) == F
    assert functor_from_doc({"source": "delta1", "target": "delta1", "kind": "identity"}) == FunctorData.identity(C)
    with pytest.raises(SchemaError) as err:
        functor_from_doc({"source": "delta1", "target": "delta:2", "kind": "weird"})
    assert err.value.pointer == "/kind"
    with pytest.raises(SchemaError):
        functor_from_doc({"source": "delta1", "target": "delta:2", "kind": "collapse"})


def test_objects_directory_is_sorted(tmp_path):
    C = builtin_site("delta1")
    save_presheaf(tmp_path / "b.json", yoneda(C, "[1]"))
    save_presheaf(tmp_path / "a.json", yoneda(C, "[0]"))
    names = [n for n, _ in load_objects_dir(tmp_path, C)]
    assert names == ["a.json", "b.json"]


@given(st.sampled_from(["delta1", "delta:2", "cube:2"]), st.integers(0, 10**6))
def test_presheaf_round_trip_is_byte_stable(name, seed):
    C = builtin_site(name)
    X = random_presheaf(C, random.Random(seed))
    text = canonical_dumps(presheaf_to_doc(X))
    Y = presheaf_from_doc(json.loads(text))
    assert Y == X
    assert canonical_dumps(presheaf_to_doc(Y)) == text
    assert text.endswith("}\n")


def test_saved_file_round_trip(tmp_path):
    X = random_presheaf(builtin_site("delta:2"), random.Random(4))
    p = tmp_path / "x.json"
    save_presheaf(p, X)
    first = p.read_bytes()
    save_presheaf(p, load_presheaf(p))
    assert p.read_bytes() == first
