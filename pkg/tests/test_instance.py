import json

import pytest

from effsum.errors import ParseError, ValidationError
from effsum.fixtures import fixture_path, list_fixtures, load_fixture
from effsum.generate import FAMILIES, generate_instance, generate_multi_summand
from effsum.groups import FiniteSet, IntVecGroup
from effsum.instance import instance_from_dict, parse_instance, parse_instance_text


def _write(tmp_path, data, name="inst.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data, encoding="utf-8")
    return p


def test_intvec_instance(tmp_path):
    p = _write(tmp_path, {"group": {"kind": "intvec", "dim": 2}, "relation": {"kind": "product_order"},
                          "A": [[1, 0], [0, 1]], "B": [[0, 0]]})
    inst = parse_instance(p)
    assert inst.group == IntVecGroup(2) and inst.A == FiniteSet([(1, 0), (0, 1)])


def test_bad_permutation_rejected(tmp_path):
    p = _write(tmp_path, {"group": {"kind": "perm", "n": 3}, "relation": {"kind": "fixed_points"},
                          "A": [[1, 1, 3]], "B": [[1, 2, 3]]})
    with pytest.raises(ValidationError, match="bijection"):
        parse_instance(p)


def test_residue_out_of_range_rejected():
    with pytest.raises(ValidationError):
        instance_from_dict({"group": {"kind": "cyclic", "n": 5}, "relation": {"kind": "equality"},
                            "A": [5], "B": [1]})


def test_zmod5_fixture():
    inst = load_fixture("zmod5_identity")
    assert len(inst.A) == 5 and len(inst.B) == 1


def test_duplicates_dropped_with_warning(caplog):
    inst = parse_instance_text(json.dumps({
        "group": {"kind": "intvec", "dim": 1}, "relation": {"kind": "product_order"},
        "A": [[1], [1], [2]], "B": [[0]]}))
    assert len(inst.A) == 2
    assert "duplicate" in caplog.text


@pytest.mark.parametrize("bad, err", [
    ("{not json", ParseError),
    ('{"format": 2}', ValidationError),
    ('{"group": {"kind": "intvec", "dim": 2}, "relation": {"kind": "product_order"}, "A": [], "B": [[0,0]]}',
     ValidationError),
    ('{"group": {"kind": "intvec", "dim": 2}, "relation": {"kind": "product_order"}, "A": [[0,0]]}',
     ValidationError),
    ('[1, 2]', ValidationError),
    ('{"group": {"kind": "intvec", "dim": 2}, "relation": {"kind": "product_order"}, '
     '"A": [[0,0]], "B": [[0,0]], "audit": {"depth": "deep"}}', ValidationError),
    ('{"system": {"kind": "S9", "n": 1, "rows": []}}', ValidationError),
])
def test_malformed_inputs(bad, err):
    with pytest.raises(err):
        parse_instance_text(bad)


def test_missing_and_non_utf8_files(tmp_path):
    with pytest.raises(ParseError):
        parse_instance(tmp_path / "absent.json")
    p = tmp_path / "latin.json"
    p.write_bytes(b"\xff\xfe{")
    with pytest.raises(ParseError):
        parse_instance(p)


def test_fixture_listing():
    names = list_fixtures()
    assert {"s3_transpositions", "zmod5_identity", "yu_ehrgott_orthant", "example7_incomparable",
            "truncated_line", "truncated_powerset", "example4_system", "example5_system",
            "example6_system"} <= set(names)
    with pytest.raises(ValidationError):
        fixture_path("no_such_fixture")


@pytest.mark.parametrize("name", list_fixtures())
def test_fixture_round_trip(name):
    inst = load_fixture(name)
    again = parse_instance_text(inst.to_json())
    assert again.to_json() == inst.to_json()


@pytest.mark.parametrize("family", FAMILIES)
def test_generated_instances_round_trip(family):
    for seed in range(1000):
        inst = generate_instance(seed, family, size_a=1 + seed % 8, size_b=1 + seed % 4)
        text = inst.to_json()
        assert parse_instance_text(text).to_json() == text


def test_multi_summand_round_trip():
    inst = generate_multi_summand(3, 4)
    again = parse_instance_text(inst.to_json())
    assert again.B_list == inst.B_list and again.effective_B() == inst.effective_B()
