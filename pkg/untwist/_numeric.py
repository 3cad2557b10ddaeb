import math
from fractions import Fraction
from typing import (
    Any,
    FrozenSet,
    Iterable,
    List,
    Literal,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from ._exceptions import DomainError

# Functions for typechecking...


RationalTypes = Union[int, Fraction, str]

Parity = Literal["even", "odd"]
Definiteness = Literal["positive", "negative", "indefinite"]
CombineMode = Literal["add", "max", "negate"]


def enforce_rational(value: RationalTypes, *, name: str) -> Fraction:
    """
    Rational arguments may be given as ints, Fractions or "num/den" strings.

    Floats are refused: mod-2 congruences of d-invariants are meaningless once a
    value has been rounded.
    """
    if isinstance(value, bool):
        pass
    elif isinstance(value, (int, Fraction)):
        return Fraction(value)
    elif isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise TypeError(f"{name} strings must look like 'num/den', got {value!r}.")

    seen_type = type(value).__name__
    raise TypeError(f"{name} must be int, Fraction or str, but got {seen_type}.")


def enforce_int(value: Any, *, name: str) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    seen_type = type(value).__name__
    raise TypeError(f"{name} must be int, but got {seen_type}.")


def format_rational(value: Fraction) -> str:
    """
    Encode a rational the way the dataset does: "num/den", or "num" when integral.
    """
    return str(value)


def residue(a: RationalTypes, n: int) -> Fraction:
    """
    The least nonnegative value congruent to `a` modulo `n`.

    Rational inputs are allowed, in which case the result is the unique value in
    `[0, n)` that differs from `a` by an integer multiple of `n`.
    """
    value = enforce_rational(a, name="a")
    if n < 2:
        raise DomainError(f"Modulus must be at least 2, but got {n}.")
    return value - n * math.floor(value / n)


def bracket(a: RationalTypes, n: int) -> Fraction:
    """
    The folded residue `|(a + (n-1)/2)_n - (n-1)/2|`.

    For even `n` the shift `(n-1)/2` is a half-integer, so the computation is
    carried out over the rationals throughout.
    """
    half = Fraction(n - 1, 2)
    return abs(residue(enforce_rational(a, name="a") + half, n) - half)


# Piecewise linear functions...


Breakpoint = Tuple[Fraction, Fraction]
Piece = Tuple[Fraction, Fraction, Fraction, Fraction]

DOMAIN_START = Fraction(0)
DOMAIN_END = Fraction(2)


class PLFunction:
    """
    An exact piecewise linear function on `[0, 2]`.

    Parameters:
        breakpoints: `(t, value)` pairs with strictly increasing `t`, starting at 0
            and ending at 2. Values are linearly interpolated in between.
    """

    def __init__(self, breakpoints: Iterable[Tuple[RationalTypes, RationalTypes]]):
        points = [
            (enforce_rational(t, name="t"), enforce_rational(v, name="value"))
            for t, v in breakpoints
        ]
        if len(points) < 2:
            raise DomainError("A piecewise linear function needs two breakpoints.")
        if points[0][0] != DOMAIN_START or points[-1][0] != DOMAIN_END:
            raise DomainError("Breakpoints must start at t=0 and end at t=2.")
        for (t0, _), (t1, _) in zip(points, points[1:]):
            if t1 <= t0:
                raise DomainError(
                    f"Breakpoints must increase strictly, got {t0}, {t1}."
                )
        self._points: Tuple[Breakpoint, ...] = tuple(_drop_collinear(points))

    @classmethod
    def line(cls, slope: RationalTypes, intercept: RationalTypes = 0) -> "PLFunction":
        m = enforce_rational(slope, name="slope")
        c = enforce_rational(intercept, name="intercept")
        return cls([(DOMAIN_START, c), (DOMAIN_END, 2 * m + c)])

    @classmethod
    def zero(cls) -> "PLFunction":
        return cls.line(0)

    @classmethod
    def symmetric(
        cls, half: Iterable[Tuple[RationalTypes, RationalTypes]]
    ) -> "PLFunction":
        """
        Build a function on `[0, 2]` from its breakpoints on `[0, 1]`, extended by
        the reflection `f(2 - t) = f(t)`.
        """
        points = [
            (enforce_rational(t, name="t"), enforce_rational(v, name="value"))
            for t, v in half
        ]
        if points[-1][0] != 1:
            raise DomainError("Half breakpoints must end at t=1.")
        mirrored = [(2 - t, v) for t, v in reversed(points[:-1])]
        return cls(points + mirrored)

    @property
    def breakpoints(self) -> Tuple[Breakpoint, ...]:
        return self._points

    def __call__(self, t: RationalTypes) -> Fraction:
        x = enforce_rational(t, name="t")
        if not DOMAIN_START <= x <= DOMAIN_END:
            raise DomainError(f"t must lie in [0, 2], but got {x}.")
        for (t0, v0), (t1, v1) in zip(self._points, self._points[1:]):
            if t0 <= x <= t1:
                return v0 + (v1 - v0) * (x - t0) / (t1 - t0)
        raise AssertionError("unreachable")  # pragma: nocover

    def pieces(self) -> List[Piece]:
        """
        Return `(start, end, slope, intercept)` for each maximal linear piece.
        """
        result = []
        for (t0, v0), (t1, v1) in zip(self._points, self._points[1:]):
            slope = (v1 - v0) / (t1 - t0)
            result.append((t0, t1, slope, v0 - slope * t0))
        return result

    def slopes(self) -> List[Fraction]:
        return [slope for _, _, slope, _ in self.pieces()]

    def __add__(self, other: "PLFunction") -> "PLFunction":
        return pl_combine(self, other, "add")

    def __neg__(self) -> "PLFunction":
        return pl_combine(self, None, "negate")

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, PLFunction) and self._points == other._points

    def __hash__(self) -> int:
        return hash(self._points)

    def __repr__(self) -> str:
        points = ", ".join(f"({t}, {v})" for t, v in self._points)
        return f"<{self.__class__.__name__} [{points}]>"


def _drop_collinear(points: Sequence[Breakpoint]) -> List[Breakpoint]:
    kept = [points[0]]
    for index in range(1, len(points) - 1):
        (t0, v0), (t1, v1), (t2, v2) = kept[-1], points[index], points[index + 1]
        if (v1 - v0) * (t2 - t1) != (v2 - v1) * (t1 - t0):
            kept.append(points[index])
    kept.append(points[-1])
    return kept


def pl_combine(
    f: PLFunction, g: Optional[PLFunction], mode: CombineMode
) -> PLFunction:
    """
    Combine piecewise linear functions exactly.

    Arguments:

    * `f` - The first operand.
    * `g` - The second operand. Ignored, and may be `None`, for `"negate"`.
    * `mode` - One of `"add"`, `"max"` or `"negate"` (negates `f`).

    The breakpoint set of the result is the union of both breakpoint sets, plus
    the crossing points of `f` and `g` when taking the maximum.
    """
    if mode == "negate":
        return PLFunction([(t, -v) for t, v in f.breakpoints])
    if g is None:
        raise DomainError(f"Mode {mode!r} needs two functions.")

    ts = sorted({t for t, _ in f.breakpoints} | {t for t, _ in g.breakpoints})
    if mode == "add":
        return PLFunction([(t, f(t) + g(t)) for t in ts])
    if mode == "max":
        refined: List[Fraction] = []
        for t0, t1 in zip(ts, ts[1:]):
            refined.append(t0)
            d0, d1 = f(t0) - g(t0), f(t1) - g(t1)
            if d0 * d1 < 0:
                refined.append(t0 + d0 * (t1 - t0) / (d0 - d1))
        refined.append(ts[-1])
        return PLFunction([(t, max(f(t), g(t))) for t in refined])
    raise DomainError(f"Unknown combine mode {mode!r}.")


def pl_max(functions: Iterable[PLFunction]) -> PLFunction:
    result: Optional[PLFunction] = None
    for function in functions:
        result = function if result is None else pl_combine(result, function, "max")
    if result is None:
        raise DomainError("Need at least one function.")
    return result


# Binary quadratic forms...


class Form2(NamedTuple):
    """
    The symmetric integer form `[[a, b], [b, a]]`.
    """

    a: int
    b: int

    @property
    def determinant(self) -> int:
        return self.a * self.a - self.b * self.b

    @property
    def definiteness(self) -> Definiteness:
        if self.determinant > 0:
            return "positive" if self.a > 0 else "negative"
        return "indefinite"

    def inverse_norm(self, x: int, y: int) -> Fraction:
        """
        Evaluate `v^T Q^-1 v` at `v = (x, y)`.
        """
        return Fraction(
            self.a * x * x - 2 * self.b * x * y + self.a * y * y, self.determinant
        )

    def __repr__(self) -> str:
        return f"Form2({self.a}, {self.b})"


def _factor_pairs(n: int) -> List[Tuple[int, int]]:
    return [(u, n // u) for u in range(1, math.isqrt(n) + 1) if n % u == 0]


def enumerate_forms(
    D: int, parity_a: Parity, definiteness: Definiteness
) -> FrozenSet[Form2]:
    """
    One representative `[[a, b], [b, a]]` per change-of-basis class with
    `|a^2 - b^2| = D`, the given parity of `a` and the given definiteness.

    `b` and `-b` are identified, so `b >= 0` always. Indefinite forms are
    additionally taken with `a >= 0`.
    """
    if D < 1:
        raise DomainError(f"Determinant must be positive, but got {D}.")
    if parity_a not in ("even", "odd"):
        raise DomainError(f"Unknown parity {parity_a!r}.")

    forms = set()
    for u, v in _factor_pairs(D):
        if (u + v) % 2:
            continue
        large, small = (u + v) // 2, (v - u) // 2
        if definiteness == "positive":
            form = Form2(large, small)
        elif definiteness == "negative":
            form = Form2(-large, small)
        elif definiteness == "indefinite":
            form = Form2(small, large)
        else:
            raise DomainError(f"Unknown definiteness {definiteness!r}.")
        if form.a % 2 == (0 if parity_a == "even" else 1):
            forms.add(form)
    return frozenset(forms)
