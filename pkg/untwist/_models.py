import enum
import re
from typing import Any, Iterable, List, Optional, Tuple, Union

from ._numeric import enforce_int

# Functions for typechecking...


IndexTypes = Union["TwistIndex", str]

Reason = Tuple[str, str]

SIGNS = ("-", "+")

_INDEX_PATTERN = re.compile(r"^\s*(\d+)\s*([-+⁻⁺])\s*$")
_SUPERSCRIPTS = {"⁻": "-", "⁺": "+"}


def enforce_index(value: IndexTypes, *, name: str) -> "TwistIndex":
    """
    Twist indices may be given as `TwistIndex` instances or as strings such as
    `"2-"` or `"0+"`. The superscript forms `"2⁻"` and `"0⁺"` are accepted too.
    """
    if isinstance(value, TwistIndex):
        return value
    elif isinstance(value, str):
        match = _INDEX_PATTERN.match(value)
        if match is None:
            raise ValueError(f"{name} must look like '2-' or '0+', got {value!r}.")
        sign = _SUPERSCRIPTS.get(match.group(2), match.group(2))
        return TwistIndex(int(match.group(1)), sign)

    seen_type = type(value).__name__
    raise TypeError(f"{name} must be a TwistIndex or str, but got {seen_type}.")


def enforce_indices(values: Iterable[IndexTypes], *, name: str) -> List["TwistIndex"]:
    return sorted({enforce_index(value, name=name) for value in values})


class TwistIndex:
    """
    A candidate unknotting twist: a full twist of the given sign whose disk meets
    the knot with linking number `l`.

    Parameters:
        l: The linking number, nonnegative by convention.
        sign: `"-"` for a negative (left-handed) twist, `"+"` for a positive one.
    """

    def __init__(self, l: int, sign: str) -> None:  # noqa: E741
        l = enforce_int(l, name="l")  # noqa: E741
        if l < 0:
            raise ValueError(f"Linking number must be nonnegative, but got {l}.")
        if sign not in SIGNS:
            raise ValueError(f"Sign must be '-' or '+', but got {sign!r}.")
        self.l = l
        self.sign = sign

    @property
    def s(self) -> int:
        return 1 if self.sign == "+" else -1

    @property
    def negative(self) -> bool:
        return self.sign == "-"

    def mirror(self) -> "TwistIndex":
        return TwistIndex(self.l, "+" if self.negative else "-")

    def sort_key(self) -> Tuple[int, int]:
        return (self.l, SIGNS.index(self.sign))

    def pretty(self) -> str:
        return f"{self.l}{'⁻' if self.negative else '⁺'}"

    def __lt__(self, other: "TwistIndex") -> bool:
        return self.sort_key() < other.sort_key()

    def __eq__(self, other: Any) -> bool:
        return (
            isinstance(other, TwistIndex)
            and self.l == other.l
            and self.sign == other.sign
        )

    def __hash__(self) -> int:
        return hash((self.l, self.sign))

    def __str__(self) -> str:
        return f"{self.l}{self.sign}"

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} [{self}]>"


class Status(enum.Enum):
    KNOWN = "known"
    POSSIBLE = "possible"
    OBSTRUCTED = "obstructed"


class ObstructionResult:
    """
    The outcome of running one obstruction against one candidate index.

    Parameters:
        applicable: Whether the obstruction says anything about this index.
        passed: `False` only when the index is ruled out.
        detail: A human readable account of the computation.
        conclusive: `False` when the check applied but lacked data to decide.
    """

    def __init__(
        self,
        applicable: bool,
        passed: bool,
        detail: str = "",
        *,
        conclusive: bool = True,
    ) -> None:
        if not applicable and not passed:
            raise ValueError("An obstruction that does not apply must pass.")
        if not conclusive and not passed:
            raise ValueError("An inconclusive obstruction must pass.")
        self.applicable = applicable
        self.passed = passed
        self.detail = detail
        self.conclusive = conclusive

    @classmethod
    def passes(cls, detail: str = "") -> "ObstructionResult":
        return cls(True, True, detail)

    @classmethod
    def obstructs(cls, detail: str) -> "ObstructionResult":
        return cls(True, False, detail)

    @classmethod
    def not_applicable(cls, detail: str = "") -> "ObstructionResult":
        return cls(False, True, detail)

    @classmethod
    def inconclusive(cls, detail: str) -> "ObstructionResult":
        return cls(True, True, detail, conclusive=False)

    @property
    def obstructed(self) -> bool:
        return not self.passed

    def __eq__(self, other: Any) -> bool:
        return (
            isinstance(other, ObstructionResult)
            and self.applicable == other.applicable
            and self.passed == other.passed
            and self.conclusive == other.conclusive
        )

    def __repr__(self) -> str:
        if not self.applicable:
            state = "not applicable"
        elif not self.passed:
            state = "obstructed"
        elif not self.conclusive:
            state = "inconclusive"
        else:
            state = "passed"
        return f"<{self.__class__.__name__} [{state}]>"


class TwistVerdict:
    """
    The classification of one candidate index.

    Parameters:
        index: The candidate.
        status: KNOWN, POSSIBLE or OBSTRUCTED.
        reasons: `(obstruction name, detail)` for every obstruction that failed.
        notes: `(obstruction name, detail)` for inconclusive checks.
    """

    def __init__(
        self,
        index: IndexTypes,
        status: Status,
        reasons: Optional[List[Reason]] = None,
        notes: Optional[List[Reason]] = None,
    ) -> None:
        self.index = enforce_index(index, name="index")
        self.status = status
        self.reasons = list(reasons or [])
        self.notes = list(notes or [])
        if status is Status.OBSTRUCTED and not self.reasons:
            raise ValueError("An obstructed verdict needs at least one reason.")

    def __eq__(self, other: Any) -> bool:
        return (
            isinstance(other, TwistVerdict)
            and self.index == other.index
            and self.status == other.status
            and self.reasons == other.reasons
        )

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} [{self.index} {self.status.value}]>"
