import pytest

import untwist

# TwistIndex


def test_twist_index():
    index = untwist.TwistIndex(2, "-")
    assert index.l == 2
    assert index.s == -1
    assert index.negative
    assert str(index) == "2-"
    assert index.pretty() == "2⁻"
    assert repr(index) == "<TwistIndex [2-]>"
    assert index.mirror() == untwist.TwistIndex(2, "+")


def test_twist_index_ordering():
    indices = [untwist.TwistIndex(*args) for args in [(2, "+"), (0, "-"), (2, "-")]]
    indices.append(untwist.TwistIndex(0, "+"))
    assert [str(index) for index in sorted(indices)] == ["0-", "0+", "2-", "2+"]


def test_twist_index_from_string():
    report = untwist.AnalysisReport(
        "K", [untwist.TwistVerdict("3⁻", untwist.Status.POSSIBLE)]
    )
    assert report.possible == [untwist.TwistIndex(3, "-")]
    assert report.verdict(" 3- ").index == untwist.TwistIndex(3, "-")


def test_twist_index_with_invalid_arguments():
    with pytest.raises(ValueError) as exc_info:
        untwist.TwistIndex(-1, "-")
    assert str(exc_info.value) == "Linking number must be nonnegative, but got -1."

    with pytest.raises(ValueError) as exc_info:
        untwist.TwistIndex(1, "*")
    assert str(exc_info.value) == "Sign must be '-' or '+', but got '*'."

    with pytest.raises(TypeError) as exc_info:
        untwist.TwistVerdict(3, untwist.Status.POSSIBLE)  # type: ignore
    assert str(exc_info.value) == "index must be a TwistIndex or str, but got int."

    with pytest.raises(ValueError) as exc_info:
        untwist.TwistVerdict("three", untwist.Status.POSSIBLE)
    assert str(exc_info.value) == "index must look like '2-' or '0+', got 'three'."


# ObstructionResult


def test_obstruction_results():
    passed = untwist.ObstructionResult.passes("fine")
    assert passed.applicable and passed.passed and passed.conclusive
    assert not passed.obstructed
    assert repr(passed) == "<ObstructionResult [passed]>"

    obstructed = untwist.ObstructionResult.obstructs("σ too large")
    assert obstructed.obstructed
    assert obstructed.detail == "σ too large"
    assert repr(obstructed) == "<ObstructionResult [obstructed]>"

    skipped = untwist.ObstructionResult.not_applicable()
    assert not skipped.applicable and skipped.passed
    assert repr(skipped) == "<ObstructionResult [not applicable]>"

    pending = untwist.ObstructionResult.inconclusive("V_3 unknown")
    assert pending.passed and not pending.conclusive
    assert repr(pending) == "<ObstructionResult [inconclusive]>"


def test_obstruction_result_states_are_consistent():
    with pytest.raises(ValueError):
        untwist.ObstructionResult(False, False)
    with pytest.raises(ValueError):
        untwist.ObstructionResult(True, False, conclusive=False)


# TwistVerdict


def test_twist_verdict():
    verdict = untwist.TwistVerdict(
        "1+", untwist.Status.OBSTRUCTED, [("arf", "l = 1 mod 8")]
    )
    assert verdict.index == untwist.TwistIndex(1, "+")
    assert verdict.reasons == [("arf", "l = 1 mod 8")]
    assert verdict.notes == []
    assert repr(verdict) == "<TwistVerdict [1+ obstructed]>"


def test_obstructed_verdict_needs_a_reason():
    with pytest.raises(ValueError) as exc_info:
        untwist.TwistVerdict("1+", untwist.Status.OBSTRUCTED)
    assert str(exc_info.value) == "An obstructed verdict needs at least one reason."
