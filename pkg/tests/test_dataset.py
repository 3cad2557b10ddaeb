import json
from fractions import Fraction

import pytest

import untwist


def dump(*records):
    return json.dumps(list(records)).encode("utf-8")


# Parsing


def test_load_minimal_record():
    (record,) = untwist.load_dataset(
        dump({"name": "K", "signature": -2, "arf": 0, "genus": 1})
    )
    assert record.name == "K"
    assert record.signature == -2
    assert record.v_seq is None
    assert record.known_indices == frozenset()


def test_load_from_text_and_streams(tmp_path):
    path = tmp_path / "knots.json"
    path.write_bytes(dump({"name": "K", "signature": 0, "arf": 0, "genus": 0}))
    with path.open("rb") as stream:
        assert [r.name for r in untwist.load_dataset(stream)] == ["K"]
    assert [r.name for r in untwist.load_dataset(path.read_text())] == ["K"]


def test_rationals_and_indices_are_decoded():
    (record,) = untwist.load_dataset(
        dump(
            {
                "name": "K",
                "signature": 0,
                "arf": 0,
                "genus": 1,
                "signature_samples": {"1/3": -2},
                "d_spin_double_cover": "-4",
                "known_indices": ["0+", "2-"],
                "branched_ranks": {"2": 1},
            }
        )
    )
    assert record.signature_samples == {Fraction(1, 3): -2}
    assert record.d_spin_double_cover == -4
    assert record.known_indices == {
        untwist.TwistIndex(0, "+"),
        untwist.TwistIndex(2, "-"),
    }
    assert record.branched_ranks == {2: 1}


def test_alternating_records_derive_v_sequences():
    (record,) = untwist.load_dataset(
        dump(
            {
                "name": "K",
                "signature": -4,
                "arf": 0,
                "genus": 2,
                "alternating": True,
            }
        )
    )
    assert record.v_seq == untwist.alternating_v(-4)
    assert record.v_seq_mirror == untwist.alternating_v(4)
    assert record.v_seq.values == (1, 1, 0)


def test_construction_records():
    records = untwist.load_dataset(
        dump(
            {"name": "3_1", "construction": "T(2,3)", "known_indices": ["2-"]},
            {"name": "sum", "construction": "3_1 # -3_1"},
        )
    )
    trefoil, total = records
    assert trefoil.name == "3_1"
    assert trefoil.torus == untwist.TorusData(2, 3)
    assert trefoil.genus == 1
    assert trefoil.known_indices == {untwist.TwistIndex(2, "-")}
    assert total.signature == 0
    assert total.genus == 2


def test_two_bridge_orientations_load():
    # L(21,8) and L(21,13) are the same space with opposite orientations.
    for q in (8, 13):
        (record,) = untwist.load_dataset(
            dump(
                {
                    "name": "7_7",
                    "signature": 0,
                    "determinant": 21,
                    "arf": 1,
                    "genus": 2,
                    "alternating": True,
                    "two_bridge": [21, q],
                }
            )
        )
        assert record.two_bridge == (21, q)


# Errors


def test_invalid_json():
    with pytest.raises(untwist.DatasetParseError) as exc_info:
        untwist.load_dataset(b"[{")
    message = str(exc_info.value)
    assert message.startswith("Invalid dataset document at line 1, column 3")


def test_document_must_be_an_array():
    with pytest.raises(untwist.DatasetParseError) as exc_info:
        untwist.load_dataset(b"{}")
    assert str(exc_info.value) == "A dataset document must be a JSON array."


def test_missing_field():
    with pytest.raises(untwist.DatasetParseError) as exc_info:
        untwist.load_dataset(dump({"name": "x", "signature": 0, "arf": 0}))
    assert str(exc_info.value) == "Knot 'x': missing field 'genus'."


def test_unknown_field():
    with pytest.raises(untwist.DatasetParseError) as exc_info:
        untwist.load_dataset(
            dump({"name": "x", "signature": 0, "arf": 0, "genus": 0, "f": 1})
        )
    assert str(exc_info.value) == "Knot 'x': unknown field 'f'."


def test_wrong_field_type():
    with pytest.raises(untwist.DatasetParseError) as exc_info:
        untwist.load_dataset(
            dump({"name": "x", "signature": "0", "arf": 0, "genus": 0})
        )
    assert (
        str(exc_info.value)
        == "Knot 'x': field 'signature' must be an integer, but got str."
    )


def test_duplicate_names():
    record = {"name": "x", "signature": 0, "arf": 0, "genus": 0}
    with pytest.raises(untwist.DatasetParseError) as exc_info:
        untwist.load_dataset(dump(record, record))
    assert str(exc_info.value) == "Knot 'x' appears twice."


def test_inconsistent_record():
    with pytest.raises(untwist.ConsistencyError) as exc_info:
        untwist.load_dataset(
            dump({"name": "x", "signature": 4, "arf": 0, "genus": 1})
        )
    assert str(exc_info.value) == (
        "Knot 'x': |signature| <= 2 * genus fails (signature 4, genus 1)."
    )


def test_arf_disagrees_with_determinant():
    with pytest.raises(untwist.ConsistencyError):
        untwist.load_dataset(
            dump({"name": "x", "signature": 0, "arf": 0, "genus": 1, "determinant": 5})
        )


def test_unresolved_construction():
    with pytest.raises(untwist.DatasetParseError) as exc_info:
        untwist.load_dataset(dump({"name": "x", "construction": "9_99"}))
    assert str(exc_info.value) == "Knot 'x': construction: Unknown knot '9_99'."


def test_dataset_errors_share_a_base_class():
    assert issubclass(untwist.DatasetParseError, untwist.DatasetError)
    assert issubclass(untwist.ConsistencyError, untwist.DatasetError)
    assert issubclass(untwist.UnknownKnotError, untwist.DatasetError)
    assert issubclass(untwist.DatasetError, untwist.UntwistError)


# Constructions


def test_parse_construction():
    trefoil = untwist.parse_construction("T(2,3)", {})
    assert trefoil.torus == untwist.TorusData(2, 3)

    triple = untwist.parse_construction("3T(2,3)", {})
    assert triple.signature == -6
    assert triple.genus == 3
    assert len(triple.summands) == 3

    assert untwist.parse_construction("-T(2,3)", {}).signature == 2
    assert untwist.parse_construction("mirror(T(2,3))", {}).signature == 2
    assert untwist.parse_construction("-(T(2,3) # T(2,5))", {}).signature == 6


def test_parse_construction_by_name():
    lookup = {"K": untwist.KnotRecord(name="K", signature=-2, arf=1, genus=1)}
    knot = untwist.parse_construction("K # T(2,3)", lookup)
    assert knot.signature == -4
    assert [s.name for s in knot.summands] == ["K", "T(2,3)"]


def test_parse_construction_errors():
    with pytest.raises(untwist.UnknownKnotError) as exc_info:
        untwist.parse_construction("T(2,3) # Q", {})
    assert str(exc_info.value) == "Unknown knot 'Q'."

    with pytest.raises(untwist.UnknownKnotError):
        untwist.parse_construction("(T(2,3)", {})

    with pytest.raises(untwist.UnknownKnotError):
        untwist.parse_construction("T(2,4)", {})


# Bundled data


def test_bundled_dataset():
    records = untwist.load_bundled()
    names = [record.name for record in records]
    assert len(names) == len(set(names))
    assert "7_7" in names
    assert "T(2,25) # -T(3,8)" in names

    by_name = {record.name: record for record in records}
    assert by_name["7_7"].two_bridge == (21, 8)
    assert by_name["8_19"].torus == untwist.TorusData(3, 4)
    assert by_name["T(2,25) # -T(3,8)"].genus4 == 7


def test_find_knot():
    records = untwist.load_bundled()
    assert untwist.find_knot(records, "5_2").name == "5_2"

    knot = untwist.find_knot(records, "5_2 # T(2,3)")
    assert knot.name == "5_2 # T(2,3)"
    assert knot.construction == "5_2 # T(2,3)"
    assert knot.signature == -4

    with pytest.raises(untwist.UnknownKnotError):
        untwist.find_knot(records, "10_200")
