import itertools
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Set, Tuple

from ._exceptions import DomainError
from ._knots import KnotRecord
from ._models import IndexTypes, ObstructionResult, TwistIndex, enforce_indices
from ._signatures import signature_at

# Torus knots and sums of them are sampled at every r/l with l up to this bound.
LATTICE_DENOMINATOR = 8


def arf_check(knot: KnotRecord, index: TwistIndex) -> ObstructionResult:
    """
    An odd linking number `l` requires `l = ±1 mod 8` when `Arf(K) = 0`, and
    `l = ±3 mod 8` when `Arf(K) = 1`.
    """
    if index.l % 2 == 0:
        return ObstructionResult.not_applicable("even linking number")
    residue = index.l % 8
    allowed = (1, 7) if knot.arf == 0 else (3, 5)
    if residue in allowed:
        return ObstructionResult.passes(f"Arf = {knot.arf}, l = {residue} mod 8")
    return ObstructionResult.obstructs(
        f"Arf = {knot.arf} needs l = ±{allowed[0]} mod 8, but l = {residue} mod 8"
    )


def torus_arf_allowed(p: int, q: int, l: int) -> bool:  # noqa: E741
    """
    For `T(p, q)` with `p` even an odd linking number must be `±q mod 8`.
    """
    if p % 2:
        p, q = q, p
    if p % 2 or q % 2 == 0:
        raise DomainError(f"T({p},{q}) needs exactly one even parameter.")
    return l % 2 == 0 or l % 8 in (q % 8, -q % 8)


# Casson-Gordon signatures...


def allowed_signatures(index: TwistIndex, r: int) -> Tuple[int, int]:
    """
    The two values `σ_{r/l}(K)` may take when `K` unknots with `index`:
    `{-2r(l-r), -2r(l-r) + 2}` for a negative twist, negated for a positive one.
    """
    if not 0 < r < index.l:
        raise DomainError(f"Need 0 < r < {index.l}, but got r = {r}.")
    base = -2 * r * (index.l - r)
    if index.negative:
        return (base, base + 2)
    return (-base - 2, -base)


def _known_signatures(knot: KnotRecord) -> List[Tuple[str, int]]:
    values = [("σ", knot.signature)]
    samples = dict(knot.signature_samples)
    if knot.torus is not None or knot.is_sum:
        for x in _sample_points(LATTICE_DENOMINATOR):
            value = signature_at(knot, x)
            if value is not None:
                samples.setdefault(x, value)
    values.extend((f"σ({x})", value) for x, value in sorted(samples.items()))
    if knot.signature_range is not None:
        low, high = knot.signature_range
        values.extend([("min σ", low), ("max σ", high)])
    return values


def _sample_points(max_denominator: int) -> List[Fraction]:
    return sorted(
        {
            Fraction(numerator, denominator)
            for denominator in range(2, max_denominator + 1)
            for numerator in range(1, denominator)
        }
    )


def signature_twist_check(knot: KnotRecord, index: TwistIndex) -> ObstructionResult:
    """
    For `l >= 2` every known `σ_{r/l}(K)` must lie in `allowed_signatures`.

    For `l = 0` a positive twist needs all known signatures in `{-2, 0}` and a
    negative one in `{0, 2}`. Values that cannot be determined leave the
    check inconclusive at that `r`.
    """
    if index.l == 1:
        return ObstructionResult.not_applicable("no signature condition for l = 1")

    if index.l == 0:
        allowed = (-2, 0) if not index.negative else (0, 2)
        for label, value in _known_signatures(knot):
            if not allowed[0] <= value <= allowed[1]:
                return ObstructionResult.obstructs(
                    f"{label} = {value} outside {{{allowed[0]}, {allowed[1]}}}"
                )
        return ObstructionResult.passes(
            f"known signatures within {{{allowed[0]}, {allowed[1]}}}"
        )

    unknown = []
    for r in range(1, index.l):
        x = Fraction(r, index.l)
        value = signature_at(knot, x)
        if value is None:
            unknown.append(str(x))
            continue
        low, high = allowed_signatures(index, r)
        if value not in (low, high):
            return ObstructionResult.obstructs(
                f"σ({x}) = {value} not in {{{low}, {high}}}"
            )
    if unknown:
        return ObstructionResult.inconclusive(f"σ unknown at {', '.join(unknown)}")
    return ObstructionResult.passes(f"σ(r/{index.l}) allowed for every r")


# Pairs of indices...


def gcd_conflicts(
    indices: Iterable[IndexTypes],
) -> List[Tuple[TwistIndex, TwistIndex]]:
    """
    Pairs with `l >= 2` that cannot unknot the same knot: linking numbers with a
    common factor, other than `{2-, 2+}`.
    """
    relevant = [i for i in enforce_indices(indices, name="indices") if i.l >= 2]
    conflicts = []
    for first, second in itertools.combinations(relevant, 2):
        if math.gcd(first.l, second.l) == 1:
            continue
        if first.l == second.l == 2:
            continue
        conflicts.append((first, second))
    return conflicts


def gcd_pair_check(indices: Iterable[IndexTypes]) -> bool:
    return not gcd_conflicts(indices)


def genus_pair_bound(k: int) -> int:
    """
    `(2k³ + 3k² - 11k + 6) / 6`, the least genus of a knot unknotted by both
    `k-` and `(k+1)+`.
    """
    if k < 1:
        raise DomainError(f"k must be positive, but got {k}.")
    numerator = 2 * k**3 + 3 * k**2 - 11 * k + 6
    assert numerator % 6 == 0
    return numerator // 6


def genus_pair_check(knot: KnotRecord, indices: Iterable[IndexTypes]) -> List[str]:
    """
    Notes for every pair `{k-, (k+1)+}` (or its mirror `{k+, (k+1)-}`) among
    `indices` that the genus of `knot` cannot support.
    """
    present: Set[TwistIndex] = set(enforce_indices(indices, name="indices"))
    notes = []
    for index in sorted(present):
        if index.l < 1:
            continue
        partner = TwistIndex(index.l + 1, "+" if index.negative else "-")
        if partner not in present:
            continue
        bound = genus_pair_bound(index.l)
        if knot.genus < bound:
            notes.append(
                f"{index} and {partner} together need genus >= {bound}, "
                f"but g = {knot.genus}"
            )
    return notes


# Branched covers...


def branched_rank_check(
    knot: KnotRecord, index: TwistIndex, q: int
) -> ObstructionResult:
    """
    When `q` divides `l`, `H_1(M_q(K))` is generated by `q` elements. For
    `l = 0` the Alexander module must also be cyclic, that is `E_1(K)` trivial.
    """
    if q < 2:
        raise DomainError(f"Cover degree must be at least 2, but got {q}.")
    if index.l == 0 and knot.e1_trivial is False:
        return ObstructionResult.obstructs(
            "E_1(K) is not trivial, so the Alexander module is not cyclic"
        )
    if index.l % q:
        return ObstructionResult.not_applicable(f"{q} does not divide l = {index.l}")
    rank: Optional[int] = knot.branched_ranks.get(q)
    if rank is None:
        return ObstructionResult.not_applicable(f"rank of H_1(M_{q}) unknown")
    if rank > q:
        return ObstructionResult.obstructs(
            f"H_1(M_{q}) needs {rank} generators, more than {q}"
        )
    return ObstructionResult.passes(f"H_1(M_{q}) has rank {rank} <= {q}")


def branched_cover_check(knot: KnotRecord, index: TwistIndex) -> ObstructionResult:
    """
    `branched_rank_check` over every recorded cover degree, or the `E_1`
    condition alone when no ranks are recorded.
    """
    degrees = sorted(knot.branched_ranks) or [2]
    results = [branched_rank_check(knot, index, q) for q in degrees]
    for result in results:
        if result.obstructed:
            return result
    applicable = [result for result in results if result.applicable]
    if applicable:
        return ObstructionResult.passes("; ".join(r.detail for r in applicable))
    return ObstructionResult.not_applicable(results[0].detail)
