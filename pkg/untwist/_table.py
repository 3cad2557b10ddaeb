import json
import logging
from typing import Any, Dict, List, Optional, Sequence

from ._concurrency import analyze_many
from ._config import AnalysisConfig
from ._dataset import Source, read_bundled
from ._exceptions import DatasetParseError, map_exceptions
from ._knots import KnotRecord
from ._models import TwistIndex, enforce_index

logger = logging.getLogger("untwist.engine")


class ExpectedRow:
    """
    One row of a table of known and unknown twist indices.

    Parameters:
        knot: The knot's name.
        known: Indices known to unknot the knot.
        unknown: Indices not yet ruled out.
        note: Why the row departs from its source, if it does.
    """

    def __init__(
        self,
        knot: str,
        known: Sequence[TwistIndex],
        unknown: Sequence[TwistIndex],
        note: Optional[str] = None,
    ) -> None:
        self.knot = knot
        self.known = sorted(known)
        self.unknown = sorted(unknown)
        self.note = note

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} [{self.knot}]>"


def load_expected_table(source: Source) -> List[ExpectedRow]:
    data = source if isinstance(source, (bytes, str)) else source.read()
    try:
        document = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DatasetParseError(
            f"Invalid table document at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}."
        ) from exc
    if not isinstance(document, list):
        raise DatasetParseError("A table document must be a JSON array.")

    rows = []
    for raw in document:
        if not isinstance(raw, dict) or not isinstance(raw.get("knot"), str):
            raise DatasetParseError("Every table row needs a string 'knot'.")
        unknown_fields = sorted(set(raw) - {"knot", "known", "unknown", "note"})
        if unknown_fields:
            raise DatasetParseError(
                f"Table row {raw['knot']!r}: unknown field {unknown_fields[0]!r}."
            )
        exc_map = {ValueError: DatasetParseError, TypeError: DatasetParseError}
        with map_exceptions(exc_map):
            known = [enforce_index(i, name="known") for i in raw.get("known", [])]
            unknown = [
                enforce_index(i, name="unknown") for i in raw.get("unknown", [])
            ]
        rows.append(ExpectedRow(raw["knot"], known, unknown, raw.get("note")))
    return rows


def load_bundled_table() -> List[ExpectedRow]:
    return load_expected_table(read_bundled("table.json"))


class TableRow:
    """
    The computed and expected columns for one knot.
    """

    def __init__(
        self,
        expected: ExpectedRow,
        known: Optional[List[TwistIndex]],
        unknown: Optional[List[TwistIndex]],
    ) -> None:
        self.expected = expected
        self.known = known
        self.unknown = unknown

    @property
    def knot(self) -> str:
        return self.expected.knot

    @property
    def missing(self) -> bool:
        return self.known is None

    @property
    def matches(self) -> bool:
        return (
            not self.missing
            and self.known == self.expected.known
            and self.unknown == self.expected.unknown
        )

    def describe(self) -> str:
        if self.missing:
            return f"{self.knot}: not in the dataset"
        if self.matches:
            return f"{self.knot}: ok"
        parts = []
        assert self.known is not None and self.unknown is not None
        for label, got, want in (
            ("known", self.known, self.expected.known),
            ("unknown", self.unknown, self.expected.unknown),
        ):
            extra = sorted(set(got) - set(want))
            lacking = sorted(set(want) - set(got))
            if extra:
                parts.append(f"{label} has extra {', '.join(map(str, extra))}")
            if lacking:
                parts.append(f"{label} lacks {', '.join(map(str, lacking))}")
        return f"{self.knot}: " + "; ".join(parts)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "knot": self.knot,
            "known": None if self.known is None else [str(i) for i in self.known],
            "unknown": (
                None if self.unknown is None else [str(i) for i in self.unknown]
            ),
            "expected_known": [str(i) for i in self.expected.known],
            "expected_unknown": [str(i) for i in self.expected.unknown],
            "matches": self.matches,
            "note": self.expected.note,
        }


class TableDiff:
    def __init__(self, rows: List[TableRow]) -> None:
        self.rows = rows

    @property
    def mismatches(self) -> List[TableRow]:
        return [row for row in self.rows if not row.matches]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __repr__(self) -> str:
        return (
            f"<{self.__class__.__name__} [{len(self.rows)} rows, "
            f"{len(self.mismatches)} mismatched]>"
        )


def reproduce_table(
    records: Sequence[KnotRecord],
    expected: Sequence[ExpectedRow],
    config: Optional[AnalysisConfig] = None,
) -> TableDiff:
    """
    Analyse every knot the expected table names and compare the KNOWN and
    POSSIBLE sets with its two columns.
    """
    by_name = {record.name: record for record in records}
    present = [row for row in expected if row.knot in by_name]
    reports = analyze_many([by_name[row.knot] for row in present], config)
    computed = {report.knot: report for report in reports}

    rows = []
    for row in expected:
        report = computed.get(row.knot)
        if report is None:
            rows.append(TableRow(row, None, None))
        else:
            rows.append(TableRow(row, report.known, report.possible))
    diff = TableDiff(rows)
    for mismatch in diff.mismatches:
        logger.warning("table mismatch: %s", mismatch.describe())
    return diff
