import logging

import pytest

import untwist


def indices(*names):
    return [untwist.TwistVerdict(name, untwist.Status.POSSIBLE).index for name in names]


@pytest.fixture(scope="module")
def knots():
    return {record.name: record for record in untwist.load_bundled()}


# Candidates


def test_candidates():
    knot = untwist.torus_knot(7, 8)
    assert untwist.candidates(knot) == indices("0-", "0+", "1-", "1+", "2+", "7-", "8-")

    capped = untwist.candidates(knot, untwist.AnalysisConfig(max_l=7))
    assert untwist.TwistIndex(8, "-") not in capped
    assert untwist.TwistIndex(7, "-") in capped


def test_candidates_always_include_small_indices():
    knot = untwist.KnotRecord(name="K", signature=0, arf=0, genus=9)
    found = untwist.candidates(knot)
    for name in ("0-", "0+", "1-", "1+"):
        assert indices(name)[0] in found


# Analysis


def test_analyze_trefoil(knots):
    report = untwist.analyze(knots["3_1"])
    assert report.known == indices("0+", "2-", "3-")
    assert report.possible == []
    assert report.convention_note == untwist.CONVENTION_NOTE
    assert repr(report) == "<AnalysisReport [3_1: known {0+, 2-, 3-}, possible {}]>"


def test_analyze_table_rows(knots):
    report = untwist.analyze(knots["5_2"])
    assert report.known == indices("0+", "2-")
    assert report.possible == indices("1+")

    report = untwist.analyze(knots["8_19"])
    assert report.known == indices("3-", "4-")
    assert report.possible == []

    report = untwist.analyze(knots["12a_369"])
    assert report.known == []
    assert report.possible == []


def test_obstructed_verdicts_carry_reasons(knots):
    report = untwist.analyze(knots["5_2"])
    verdict = report.verdict("1-")
    assert verdict.status is untwist.Status.OBSTRUCTED
    assert verdict.reasons

    with pytest.raises(KeyError):
        report.verdict("9-")


def test_upsilon_obstructs_sum(knots):
    report = untwist.analyze(knots["T(2,25) # -T(3,8)"])
    for name in ("4-", "5-"):
        verdict = report.verdict(name)
        assert verdict.status is untwist.Status.OBSTRUCTED
        assert "upsilon" in dict(verdict.reasons)


def test_d_invariants_obstruct_9_5(knots):
    verdict = untwist.analyze(knots["9_5"]).verdict("2-")
    assert verdict.status is untwist.Status.OBSTRUCTED
    assert "d_invariant" in dict(verdict.reasons)


def test_mirror_duality(knots):
    for name in ("3_1", "5_2"):
        report = untwist.analyze(knots[name])
        mirrored = untwist.analyze(untwist.mirror(knots[name]))
        assert mirrored.known == sorted(index.mirror() for index in report.known)
        assert mirrored.possible == sorted(
            index.mirror() for index in report.possible
        )


def test_max_l_note():
    report = untwist.analyze(
        untwist.torus_knot(7, 8), untwist.AnalysisConfig(max_l=7)
    )
    assert "linking numbers above max_l = 7 not examined (up to 8)" in report.notes
    with pytest.raises(KeyError):
        report.verdict("8-")


def test_analysis_as_dict(knots):
    document = untwist.analyze(knots["5_2"]).as_dict()
    assert document["knot"] == "5_2"
    assert document["known"] == ["0+", "2-"]
    assert document["possible"] == ["1+"]
    statuses = {verdict["index"]: verdict["status"] for verdict in document["verdicts"]}
    assert statuses["1+"] == "possible"
    assert statuses["1-"] == "obstructed"


# Conventions


def test_obstructed_known_index_is_a_convention_error(knots):
    knot = knots["5_2"]
    bad = knot.replace(known_indices=knot.known_indices | {untwist.TwistIndex(1, "-")})
    with pytest.raises(untwist.ConventionError) as exc_info:
        untwist.analyze(bad)
    assert str(exc_info.value).startswith("5_2: known index 1- is obstructed by ")


def test_lenient_analysis_records_a_note(knots):
    knot = knots["5_2"]
    bad = knot.replace(known_indices=knot.known_indices | {untwist.TwistIndex(1, "-")})
    report = untwist.analyze(bad, untwist.AnalysisConfig(strict=False))
    assert untwist.TwistIndex(1, "-") in report.known
    assert any(
        note.startswith("5_2: known index 1- is obstructed by ")
        for note in report.notes
    )


def test_run_checks_respects_config():
    knot = untwist.torus_knot(2, 3)
    config = untwist.AnalysisConfig(checks=["arf", "signature"])
    results = untwist.run_checks(knot, untwist.TwistIndex(1, "-"), config)
    assert [name for name, _ in results] == ["arf", "signature"]
    assert results[0][1].obstructed
    assert not results[1][1].applicable


# Configuration


def test_config_validation():
    with pytest.raises(ValueError) as exc_info:
        untwist.AnalysisConfig(max_l=0)
    assert str(exc_info.value) == "max_l must be positive, but got 0."

    with pytest.raises(TypeError) as exc_info:
        untwist.AnalysisConfig(max_workers="4")  # type: ignore
    assert str(exc_info.value) == "max_workers must be int, but got str."

    with pytest.raises(ValueError) as exc_info:
        untwist.AnalysisConfig(checks=["arf", "magic"])
    assert str(exc_info.value).startswith("Unknown check 'magic'.")


def test_config_replace():
    config = untwist.AnalysisConfig(max_l=5, checks=["arf"])
    changed = config.replace(strict=False)
    assert changed.max_l == 5
    assert not changed.strict
    assert changed.checks == {"arf"}
    assert changed.enabled("arf") and not changed.enabled("upsilon")
    assert repr(changed) == "<AnalysisConfig [max_l=5, max_workers=4, strict=False]>"


# Tracing


def test_trace_analysis():
    called = []

    def trace(name, kwargs):
        called.append(name)

    config = untwist.AnalysisConfig(trace=trace, checks=["arf"])
    untwist.analyze(untwist.torus_knot(2, 3), config)

    assert called[0] == "engine.analyze.started"
    assert called[1] == "engine.check.started"
    assert called[2] == "engine.check.complete"
    assert called[-1] == "engine.analyze.complete"


def test_trace_rejects_async_callback_in_sync_analysis():
    async def trace(name, kwargs):
        pass  # pragma: nocover

    with pytest.raises(TypeError):
        untwist.analyze(untwist.torus_knot(2, 3), untwist.AnalysisConfig(trace=trace))


def test_debug_analysis(caplog):
    caplog.set_level(logging.DEBUG)
    untwist.analyze(untwist.torus_knot(2, 3))

    assert caplog.record_tuples[0] == (
        "untwist.engine",
        logging.DEBUG,
        "analyze.started knot='T(2,3)'",
    )
    assert caplog.record_tuples[-1] == (
        "untwist.engine",
        logging.DEBUG,
        "analyze.complete return_value="
        "<AnalysisReport [T(2,3): known {}, possible {0+, 2-, 3-}]>",
    )


# Many knots


def test_analyze_many_preserves_order(knots):
    names = ["8_19", "3_1", "5_2", "T(7,8)"]
    reports = untwist.analyze_many(
        [knots[name] for name in names], untwist.AnalysisConfig(max_workers=2)
    )
    assert [report.knot for report in reports] == names
    assert reports[1] == untwist.analyze(knots["3_1"])


def test_analyze_many_raises_first_error(knots):
    knot = knots["5_2"]
    bad = knot.replace(known_indices=knot.known_indices | {untwist.TwistIndex(1, "-")})
    with pytest.raises(untwist.ConventionError):
        untwist.analyze_many([knots["3_1"], bad])


@pytest.mark.anyio
async def test_analyze_many_async(knots):
    called = []

    async def trace(name, kwargs):
        called.append((name, kwargs.get("knot")))

    config = untwist.AnalysisConfig(trace=trace, max_workers=1)
    reports = await untwist.analyze_many_async([knots["3_1"], knots["5_2"]], config)

    assert [report.knot for report in reports] == ["3_1", "5_2"]
    assert [name for name, _ in called].count("engine.knot.started") == 2
    assert [name for name, _ in called].count("engine.knot.complete") == 2
    assert ("engine.knot.started", "3_1") in called


# Table


def test_bundled_table_is_reproduced():
    diff = untwist.reproduce_table(untwist.load_bundled(), untwist.load_bundled_table())
    assert diff.ok, [row.describe() for row in diff.mismatches]
    assert len(diff.rows) == 35


def test_eight_seven_leaves_one_minus_open(knots):
    row = {row.knot: row for row in untwist.load_bundled_table()}["8_7"]
    assert row.known == indices("0-", "2+")
    assert row.unknown == indices("1-")
    assert "3+" in row.note

    knot = knots["8_7"]
    assert (knot.determinant, knot.arf) == (23, 0)
    result = untwist.arf_check(knot, untwist.TwistIndex(3, "+"))
    assert result.obstructed
    assert result.detail == "Arf = 0 needs l = ±1 mod 8, but l = 3 mod 8"

    report = untwist.analyze(knot)
    assert report.possible == indices("1-")
    assert untwist.TwistIndex(3, "+") not in report.surviving


def test_table_mismatch_is_described(knots, caplog):
    expected = untwist.load_expected_table(
        b'[{"knot": "5_2", "known": ["2-", "0+"], "unknown": []},'
        b' {"knot": "99_1", "known": [], "unknown": []}]'
    )
    diff = untwist.reproduce_table(list(knots.values()), expected)
    assert not diff.ok
    assert [row.describe() for row in diff.mismatches] == [
        "5_2: unknown has extra 1+",
        "99_1: not in the dataset",
    ]
    assert repr(diff) == "<TableDiff [2 rows, 2 mismatched]>"
    assert (
        "untwist.engine",
        logging.WARNING,
        "table mismatch: 5_2: unknown has extra 1+",
    ) in caplog.record_tuples


def test_table_document_errors():
    with pytest.raises(untwist.DatasetParseError) as exc_info:
        untwist.load_expected_table(b'[{"knot": "3_1", "known": ["three"]}]')
    assert str(exc_info.value) == "known must look like '2-' or '0+', got 'three'."

    with pytest.raises(untwist.DatasetParseError) as exc_info:
        untwist.load_expected_table(b'[{"knot": "3_1", "done": true}]')
    assert str(exc_info.value) == "Table row '3_1': unknown field 'done'."
