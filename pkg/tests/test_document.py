import json

import numpy as np
import pytest

from conftest import SX, SZ
from spectra_lab.document import (BUILTINS, builtin_document, dump_document, load_document, load_system,
                                  parse_system, system_document)
from spectra_lab.errors import DocumentError
from spectra_lab.groups import preset_group
from spectra_lab.numeric import Relation, compare, mat_to_json
from spectra_lab.spectra import arveson_spectra


def z2_doc(**over):
    doc = {"group": {"preset": "Z2"}, "algebra": {"blocks": [2]},
           "action": {"type": "inner", "unitaries": {"g1": mat_to_json(SZ)}}}
    doc.update(over)
    return doc


def error_path(doc):
    with pytest.raises(DocumentError) as info:
        parse_system(doc)
    return info.value.path


def test_parse_examples():
    s = parse_system(z2_doc(name="diag"))
    assert s.name == "diag" and s.fixed.dim == 2
    # real entries are accepted as well as [re, im] pairs
    s = parse_system(z2_doc(action={"unitaries": {"g1": [[0, 1], [1, 0]]}}))
    assert s.fixed.dim == 2
    s = parse_system({"group": "S3", "algebra": {"blocks": [1, 2]}})
    assert s.fixed.dim == s.algebra.dim == 5


def test_located_errors():
    assert error_path({"algebra": {"blocks": [2]}}) == "group"
    assert error_path(z2_doc(group={"preset": "Z9"})) == "group.preset"
    assert error_path(z2_doc(algebra={"blocks": [0]})) == "algebra.blocks"
    assert error_path(z2_doc(algebra={"basis": [[[1, 0], [0, 0]]], "unit": [[1, 0], [0, 1]]})) == "algebra"
    assert error_path(z2_doc(algebra={"basis": [[[1, 0, 0]]], "unit": [[1, 0], [0, 1]]})) == "algebra.basis[0]"
    assert error_path(z2_doc(action={"type": "outer"})) == "action.type"
    assert error_path(z2_doc(action={"unitaries": {"g7": mat_to_json(SZ)}})) == "action.unitaries.g7"
    assert error_path(z2_doc(action={"unitaries": {"gx": mat_to_json(SZ)}})) == "action.unitaries.gx"
    assert error_path(z2_doc(tolerances={"bogus": 1})) == "tolerances"


def test_not_unitary_is_reported_at_the_element():
    with pytest.raises(DocumentError) as info:
        parse_system(z2_doc(action={"unitaries": {"g1": [[2, 0], [0, 2]]}}))
    assert info.value.path == "action.unitaries.g1"
    assert "NotUnitary" in str(info.value)


def test_action_errors_are_located():
    hadamard = (np.array([[1, 1], [1, -1]]) / np.sqrt(2)).tolist()
    doc = z2_doc(algebra={"blocks": [1, 1]}, action={"unitaries": {"g1": hadamard}})
    with pytest.raises(DocumentError) as info:
        parse_system(doc)
    assert info.value.path == "action.unitaries" and "NotPreserving" in str(info.value)


def custom_z2_group(irreps=None):
    return {"mult": [[0, 1], [1, 0]], "generators": [1], "name": "flip",
            "irreps": irreps if irreps is not None else
            [{"label": "even", "matrices": [[[1]], [[1]]]}, {"label": "odd", "matrices": [[[1]], [[-1]]]}]}


def test_custom_group():
    s = parse_system(z2_doc(group=custom_z2_group()))
    assert s.table.labels == ("even", "odd")
    assert arveson_spectra(s).sp.labels == {"even", "odd"}


def test_custom_group_errors():
    bad = custom_z2_group([{"label": "even", "matrices": [[[1]], [[1]]]}])
    assert error_path(z2_doc(group=bad)) == "group.irreps"
    bad = custom_z2_group()
    bad["mult"] = [[0, 1], [0, 1]]
    assert error_path(z2_doc(group=bad)) == "group.mult"
    bad = custom_z2_group([{"label": "even", "matrices": [[[1]], "x"]}])
    assert error_path(z2_doc(group=bad)).startswith("group.irreps[0]")
    bad = custom_z2_group()
    del bad["irreps"]
    assert error_path(z2_doc(group=bad)) == "group.irreps"


def test_basis_form_algebra():
    doc = z2_doc(algebra={"basis": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], "unit": [[1, 0], [0, 1]]},
                 action={"unitaries": {"g1": mat_to_json(SX)}})
    s = parse_system(doc)
    assert s.algebra.dim == 2 and s.fixed.dim == 1


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_round_trip(name):
    s = parse_system(builtin_document(name))
    back = parse_system(json.loads(dump_document(system_document(s))))
    assert back.name == s.name and back.group.name == s.group.name
    assert compare(back.algebra.span, s.algebra.span) is Relation.EQUAL
    assert compare(back.fixed.span, s.fixed.span) is Relation.EQUAL
    assert arveson_spectra(back).sp.labels == arveson_spectra(s).sp.labels


def test_round_trip_custom_group_and_basis():
    doc = z2_doc(group=custom_z2_group(),
                 algebra={"basis": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], "unit": [[1, 0], [0, 1]]},
                 action={"unitaries": {"g1": mat_to_json(SX)}},
                 tolerances={"membership": 1e-7})
    s = parse_system(doc)
    out = system_document(s)
    assert "mult" in out["group"] and out["tolerances"]["membership"] == 1e-7
    back = parse_system(out)
    assert back.table.labels == ("even", "odd") and back.fixed.dim == 1


def test_system_document_falls_back_to_a_basis():
    s = parse_system(z2_doc())
    from spectra_lab.dynamics import restrict
    corner = restrict(s, np.diag([1, 0]).astype(complex))
    out = system_document(corner)
    assert "basis" in out["algebra"]
    assert parse_system(out).algebra.dim == 1


def test_files(tmp_path):
    path = tmp_path / "sys.json"
    path.write_text(dump_document(builtin_document("s3-m2")))
    assert load_system(path).fixed.dim == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"group": "Z2",\n "algebra": }')
    with pytest.raises(DocumentError, match="line 2"):
        load_document(bad)
    with pytest.raises(DocumentError, match="cannot read"):
        load_document(tmp_path / "missing.json")


def test_unknown_builtin():
    with pytest.raises(DocumentError):
        builtin_document("nope")


def test_builtin_matrices_match_the_preset():
    doc = builtin_document("s3-m2")
    std = preset_group("S3")["std"].matrices
    assert np.allclose(parse_system(doc).action.implementers, std)
