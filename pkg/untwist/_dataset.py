import json
import logging
import re
from fractions import Fraction
from importlib import resources
from typing import (
    IO,
    Any,
    Dict,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from ._exceptions import (
    ConsistencyError,
    DatasetParseError,
    DomainError,
    UnknownKnotError,
    map_exceptions,
)
from ._floer import alternating_v
from ._knots import KnotRecord, VSequence, connected_sum, mirror, torus_knot
from ._models import enforce_index
from ._numeric import PLFunction, enforce_rational

logger = logging.getLogger("untwist.dataset")

Source = Union[bytes, str, IO[bytes]]

REQUIRED = ("name", "signature", "arf", "genus")

# `torus` and `summands` only ever come from a construction.
DOCUMENT_FIELDS = tuple(
    field for field in KnotRecord.FIELDS if field not in ("torus", "summands")
)


# Construction expressions...


_TORUS = re.compile(r"^T\(\s*(\d+)\s*,\s*(\d+)\s*\)$")
_MULTIPLE = re.compile(r"^(\d+)\s*\*?\s*(T\(|-|\(|mirror\().*$")


def _split_sum(text: str) -> List[str]:
    depth = 0
    terms, current = [], []
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
            if depth < 0:
                raise UnknownKnotError(f"Unbalanced parentheses in {text!r}.")
        if char == "#" and depth == 0:
            terms.append("".join(current).strip())
            current = []
        else:
            current.append(char)
    if depth:
        raise UnknownKnotError(f"Unbalanced parentheses in {text!r}.")
    terms.append("".join(current).strip())
    if not all(terms):
        raise UnknownKnotError(f"Empty summand in {text!r}.")
    return terms


def _wrapped(text: str, opening: str) -> Optional[str]:
    if not (text.startswith(opening) and text.endswith(")")):
        return None
    inner = text[len(opening) : -1]
    depth = 0
    for char in inner:
        depth += {"(": 1, ")": -1}.get(char, 0)
        if depth < 0:
            return None
    return inner if depth == 0 else None


def parse_construction(
    text: str, lookup: Mapping[str, KnotRecord]
) -> KnotRecord:
    """
    Build a knot from an expression such as `"T(2,25) # -T(3,8)"`.

    Terms are torus knots `T(p,q)`, names from `lookup`, mirrors written `-X` or
    `mirror(X)`, parenthesised expressions, and repeated sums `3T(2,3)`.
    """
    summands = [_parse_term(term, lookup) for term in _split_sum(text.strip())]
    return connected_sum(*summands)


def _parse_term(term: str, lookup: Mapping[str, KnotRecord]) -> KnotRecord:
    if term in lookup:
        return lookup[term]
    if term.startswith("-"):
        return mirror(_parse_term(term[1:].strip(), lookup))
    match = _TORUS.match(term)
    if match is not None:
        try:
            return torus_knot(int(match.group(1)), int(match.group(2)))
        except DomainError as exc:
            raise UnknownKnotError(str(exc)) from exc
    for opening, transform in (("mirror(", mirror), ("(", None)):
        inner = _wrapped(term, opening)
        if inner is not None:
            knot = parse_construction(inner, lookup)
            return knot if transform is None else transform(knot)
    match = _MULTIPLE.match(term)
    if match is not None:
        count = int(match.group(1))
        if count < 1:
            raise UnknownKnotError(f"Repeat count must be positive in {term!r}.")
        rest = term[len(match.group(1)) :].lstrip(" *")
        return connected_sum(*[_parse_term(rest, lookup)] * count)
    raise UnknownKnotError(f"Unknown knot {term!r}.")


# Field decoding...


class _Decoder:
    def __init__(self, name: str) -> None:
        self.name = name

    def fail(self, field: str, message: str) -> DatasetParseError:
        return DatasetParseError(f"Knot {self.name!r}: field {field!r} {message}.")

    def integer(self, field: str, value: Any) -> int:
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        raise self.fail(field, f"must be an integer, but got {type(value).__name__}")

    def boolean(self, field: str, value: Any) -> bool:
        if isinstance(value, bool):
            return value
        raise self.fail(field, f"must be a boolean, but got {type(value).__name__}")

    def text(self, field: str, value: Any) -> str:
        if isinstance(value, str):
            return value
        raise self.fail(field, f"must be a string, but got {type(value).__name__}")

    def rational(self, field: str, value: Any) -> Fraction:
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise self.fail(
                field, f"must be a 'num/den' string, but got {type(value).__name__}"
            )
        try:
            return enforce_rational(value, name=field)
        except TypeError as exc:
            raise self.fail(field, f"is not a rational: {value!r}") from exc

    def sequence(
        self, field: str, value: Any, length: Optional[int] = None
    ) -> List[Any]:
        if not isinstance(value, list):
            raise self.fail(field, f"must be a list, but got {type(value).__name__}")
        if length is not None and len(value) != length:
            raise self.fail(field, f"must have {length} entries, but got {len(value)}")
        return value

    def mapping(self, field: str, value: Any) -> Dict[str, Any]:
        if not isinstance(value, dict):
            raise self.fail(field, f"must be an object, but got {type(value).__name__}")
        return value

    def index(self, field: str, value: Any) -> Any:
        try:
            return enforce_index(self.text(field, value), name=field)
        except ValueError as exc:
            raise self.fail(field, f"holds a bad twist index {value!r}") from exc

    def v_sequence(self, field: str, value: Any) -> VSequence:
        values = [self.integer(field, v) for v in self.sequence(field, value)]
        try:
            return VSequence(values)
        except DomainError as exc:
            raise ConsistencyError(f"Knot {self.name!r}: {field}: {exc}") from exc

    def pair(self, field: str, value: Any) -> Tuple[int, int]:
        first, second = self.sequence(field, value, length=2)
        return self.integer(field, first), self.integer(field, second)

    def upsilon(self, field: str, value: Any) -> PLFunction:
        points = [
            tuple(self.rational(field, v) for v in self.sequence(field, point, 2))
            for point in self.sequence(field, value)
        ]
        try:
            return PLFunction(points)  # type: ignore[arg-type]
        except DomainError as exc:
            raise ConsistencyError(f"Knot {self.name!r}: {field}: {exc}") from exc


def _decode_fields(raw: Mapping[str, Any], decoder: _Decoder) -> Dict[str, Any]:
    fields: Dict[str, Any] = {}
    for field, value in raw.items():
        if value is None:
            continue
        if field in ("name", "construction"):
            fields[field] = decoder.text(field, value)
        elif field in ("signature", "arf", "genus", "determinant", "genus4", "tau"):
            fields[field] = decoder.integer(field, value)
        elif field in ("alternating", "thin", "e1_trivial"):
            fields[field] = decoder.boolean(field, value)
        elif field in ("v_seq", "v_seq_mirror"):
            fields[field] = decoder.v_sequence(field, value)
        elif field == "signature_samples":
            fields[field] = {
                decoder.rational(field, x): decoder.integer(field, sigma)
                for x, sigma in decoder.mapping(field, value).items()
            }
        elif field in ("signature_range", "two_bridge"):
            fields[field] = decoder.pair(field, value)
        elif field == "branched_ranks":
            ranks = {}
            for q, rank in decoder.mapping(field, value).items():
                if not q.isdigit():
                    raise decoder.fail(field, f"has a non-integer cover degree {q!r}")
                ranks[int(q)] = decoder.integer(field, rank)
            fields[field] = ranks
        elif field == "d_spin_double_cover":
            fields[field] = decoder.rational(field, value)
        elif field == "known_indices":
            fields[field] = [
                decoder.index(field, v) for v in decoder.sequence(field, value)
            ]
        elif field == "upsilon":
            fields[field] = decoder.upsilon(field, value)
        elif field == "external_obstructions":
            fields[field] = {
                decoder.index(field, index): decoder.text(field, cite)
                for index, cite in decoder.mapping(field, value).items()
            }
    return fields


def _derive(record: KnotRecord) -> KnotRecord:
    # Alternating and thin knots have V-sequences determined by σ.
    if (record.alternating or record.thin) and record.torus is None:
        changes = {}
        if record.v_seq is None:
            changes["v_seq"] = alternating_v(record.signature)
        if record.v_seq_mirror is None:
            changes["v_seq_mirror"] = alternating_v(-record.signature)
        if changes:
            record = record.replace(**changes)
    return record


def build_record(raw: Mapping[str, Any], known: Mapping[str, KnotRecord]) -> KnotRecord:
    """
    Decode and validate one dataset object, resolving its `construction` against
    the records already in `known`.
    """
    if not isinstance(raw, dict):
        raise DatasetParseError(
            f"Dataset entries must be objects, but got {type(raw).__name__}."
        )
    name = raw.get("name")
    if not isinstance(name, str):
        raise DatasetParseError("Every dataset entry needs a string 'name'.")
    unknown = sorted(set(raw) - set(DOCUMENT_FIELDS))
    if unknown:
        raise DatasetParseError(f"Knot {name!r}: unknown field {unknown[0]!r}.")

    fields = _decode_fields(raw, _Decoder(name))
    construction = fields.get("construction")
    if construction is not None:
        try:
            base = parse_construction(construction, known)
        except UnknownKnotError as exc:
            raise DatasetParseError(f"Knot {name!r}: construction: {exc}") from exc
        record = base.replace(**fields)
    else:
        for field in REQUIRED:
            if fields.get(field) is None:
                raise DatasetParseError(f"Knot {name!r}: missing field {field!r}.")
        record = KnotRecord(**fields)

    try:
        return _derive(record).validate()
    except DomainError as exc:
        raise ConsistencyError(f"Knot {name!r}: {exc}") from exc


def load_dataset(source: Source) -> List[KnotRecord]:
    """
    Read a dataset document: a JSON array of knot objects using the
    `KnotRecord` field names, rationals written as "num/den" and twist indices
    as "2-" or "0+".
    """
    data = source if isinstance(source, (bytes, str)) else source.read()
    with map_exceptions({UnicodeDecodeError: DatasetParseError}):
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DatasetParseError(
            f"Invalid dataset document at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}."
        ) from exc
    if not isinstance(document, list):
        raise DatasetParseError("A dataset document must be a JSON array.")

    records: Dict[str, KnotRecord] = {}
    for raw in document:
        record = build_record(raw, records)
        if record.name in records:
            raise DatasetParseError(f"Knot {record.name!r} appears twice.")
        records[record.name] = record
    logger.debug("loaded %d knots", len(records))
    return list(records.values())


def read_bundled(filename: str) -> bytes:
    return resources.files("untwist").joinpath("data").joinpath(filename).read_bytes()


def load_bundled() -> List[KnotRecord]:
    return load_dataset(read_bundled("knots.json"))


def find_knot(records: Sequence[KnotRecord], name: str) -> KnotRecord:
    """
    Look a knot up by name, falling back to reading `name` as a construction
    expression over the dataset.
    """
    by_name = {record.name: record for record in records}
    if name in by_name:
        return by_name[name]
    knot = parse_construction(name, by_name)
    return knot.replace(name=name.strip(), construction=name.strip())

