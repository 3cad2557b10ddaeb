import logging
import math
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, Optional, Tuple

from ._exceptions import DomainError, JumpPointError
from ._numeric import RationalTypes, enforce_rational

if TYPE_CHECKING:  # pragma: nocover
    from ._knots import KnotRecord

logger = logging.getLogger("untwist.signatures")


def _check_torus(p: int, q: int) -> None:
    if p < 2 or q < 2 or math.gcd(p, q) != 1:
        raise DomainError(f"T({p},{q}) is not a torus knot.")


def _check_open_unit(x: Fraction) -> None:
    if not 0 < x < 1:
        raise DomainError(f"Signature argument must lie in (0, 1), but got {x}.")


def torus_signature(p: int, q: int, x: RationalTypes) -> int:
    """
    The Tristram-Levine signature `σ_x(T(p, q))` at `ω = e^{2πix}`, counted
    exactly.

    With `σ̄ = (p-1)(q-1) - 2(#C1 + #C2)`, where `C1` holds the interior lattice
    points `(i, j)` with `ip + jq < pqx` and `C2` those with `ip + jq > pq(1+x)`,
    the signature is `-σ̄`.

    Raises `JumpPointError` when `x * pq` is an integer divisible by neither `p`
    nor `q`. A lattice point sits on a boundary line there, so the value depends
    on which side of the jump is meant.
    """
    _check_torus(p, q)
    x = enforce_rational(x, name="x")
    _check_open_unit(x)
    k = x * p * q
    if k.denominator == 1 and k % p and k % q:
        raise JumpPointError(f"x = {x} is a jump point of T({p},{q}).")

    lower, upper = p * q * x, p * q * (1 + x)
    c1 = c2 = 0
    for i in range(1, q):
        for j in range(1, p):
            height = i * p + j * q
            if height < lower:
                c1 += 1
            elif height > upper:
                c2 += 1
    return -((p - 1) * (q - 1) - 2 * (c1 + c2))


def torus_signature_bounds(
    p: int, q: int, x: RationalTypes
) -> Tuple[Fraction, Fraction]:
    """
    Return `(approx, lower)` for `σ̄_x(T(p, q))`: the area estimate
    `2pqx(1-x)` and the strict lower bound `(p-1)(q-1) - pqx^2 - pq(1-x)^2`.
    """
    _check_torus(p, q)
    x = enforce_rational(x, name="x")
    if not 0 <= x <= 1:
        raise DomainError(f"Signature argument must lie in [0, 1], but got {x}.")
    approx = 2 * p * q * x * (1 - x)
    lower = (p - 1) * (q - 1) - p * q * x * x - p * q * (1 - x) * (1 - x)
    return approx, lower


def torus_signature_at(p: int, q: int, x: RationalTypes) -> Optional[int]:
    """
    As `torus_signature`, but stepping off jump points by `±1/(4p²q²)`.

    When both sides agree their common value is returned, otherwise `None`.
    """
    x = enforce_rational(x, name="x")
    _check_open_unit(x)
    try:
        return torus_signature(p, q, x)
    except JumpPointError:
        pass

    epsilon = Fraction(1, 4 * p * p * q * q)
    left = torus_signature(p, q, x - epsilon)
    right = torus_signature(p, q, x + epsilon)
    if left == right:
        return left
    logger.info(
        "jump of T(%d,%d) at x=%s: left limit %d, right limit %d; value unknown",
        p,
        q,
        x,
        left,
        right,
    )
    return None


def torus_signature_samples(
    p: int, q: int, max_denominator: int
) -> Dict[Fraction, int]:
    """
    `σ_{r/l}(T(p, q))` at every reduced `r/l` with `l <= max_denominator`, leaving
    out values that sit on a genuine jump.
    """
    samples = {}
    for denominator in range(2, max_denominator + 1):
        for numerator in range(1, denominator):
            if math.gcd(numerator, denominator) != 1:
                continue
            x = Fraction(numerator, denominator)
            value = torus_signature_at(p, q, x)
            if value is not None:
                samples[x] = value
    return dict(sorted(samples.items()))


def signature_at(knot: "KnotRecord", x: RationalTypes) -> Optional[int]:
    """
    The Tristram-Levine signature of a knot at `x`, or `None` when unknown.

    Torus knots are counted exactly and connected sums add their summands.
    Otherwise a stored sample at `x` (or at `1 - x`) is used, with the classical
    signature standing in for `x = 1/2`.
    """
    x = enforce_rational(x, name="x")
    _check_open_unit(x)

    if knot.torus is not None:
        value = torus_signature_at(knot.torus.p, knot.torus.q, x)
        if value is None:
            return None
        return -value if knot.torus.mirrored else value

    if knot.is_sum:
        total = 0
        for summand in knot.summands:
            value = signature_at(summand, x)
            if value is None:
                return None
            total += value
        return total

    for key in (x, 1 - x):
        if key in knot.signature_samples:
            return knot.signature_samples[key]
    if x == Fraction(1, 2):
        return knot.signature
    if knot.signature_range is not None:
        low, high = knot.signature_range
        if low == high:
            return low
    return None
