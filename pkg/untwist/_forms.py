import functools
import logging
import math
from fractions import Fraction
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Tuple,
)

import networkx as nx
import sympy

from ._exceptions import DomainError
from ._knots import KnotRecord, VSequence
from ._models import ObstructionResult, TwistIndex
from ._numeric import Form2, Parity, enumerate_forms

logger = logging.getLogger("untwist.forms")

Coset = Tuple[int, int]

SPIN_COSET: Coset = (0, 0)


class LinkingSet(NamedTuple):
    """
    The self-linking numbers `a * i² mod D` of all generators of a cyclic
    linking form of order `D`.
    """

    order: int
    selflinks: FrozenSet[int]


def selflink_set(a: int, D: int) -> LinkingSet:
    if D < 1:
        raise DomainError(f"Order must be positive, but got {D}.")
    if math.gcd(a, D) != 1:
        raise DomainError(f"Self-linking {a} does not generate a form of order {D}.")
    units = [i for i in range(D) if math.gcd(i, D) == 1]
    return LinkingSet(D, frozenset(a * i * i % D for i in units))


# d-invariants of lens spaces...


class DSpectrum:
    """
    A multiset of d-invariants, one per Spin^c structure.
    """

    def __init__(self, values: Iterable[Fraction]) -> None:
        self._values: Tuple[Fraction, ...] = tuple(sorted(values))

    @property
    def values(self) -> Tuple[Fraction, ...]:
        return self._values

    def negate(self) -> "DSpectrum":
        return DSpectrum(-value for value in self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._values)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, DSpectrum) and self._values == other._values

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} [{len(self)} values]>"


@functools.lru_cache(maxsize=None)
def _lens_recursion(p: int, q: int, i: int) -> Fraction:
    if p == 1:
        return Fraction(0)
    return Fraction((2 * i + 1 - p - q) ** 2 - p * q, 4 * p * q) - _lens_recursion(
        q, p % q, i % q
    )


def _check_lens(p: int, q: int) -> int:
    if p < 1:
        raise DomainError(f"Lens space order must be positive, but got {p}.")
    if math.gcd(p, q) != 1:
        raise DomainError(f"L({p},{q}) needs gcd({p}, {q}) = 1.")
    return q % p if p > 1 else 0


def lens_d(p: int, q: int, i: int) -> Fraction:
    """
    `d(L(p, q), i)`, by the recursion

        R(p, q, i) = ((2i + 1 - p - q)² - pq) / 4pq - R(q, p mod q, i mod q)

    with `R(1, 0, 0) = 0`. The orientation reversed space has `d(-L(p, q), i) =
    -R(p, q, i)`.
    """
    q = _check_lens(p, q)
    if not 0 <= i < p:
        raise DomainError(f"Spin^c index must lie in [0, {p}), but got {i}.")
    return _lens_recursion(p, q, i)


def lens_spectrum(p: int, q: int) -> DSpectrum:
    q = _check_lens(p, q)
    return DSpectrum(_lens_recursion(p, q, i) for i in range(p))


def lens_spin_d(p: int, q: int) -> Fraction:
    """
    The d-invariant of the unique spin structure on `L(p, q)`, `p` odd: the index
    fixed by the conjugation `i -> q - 1 - i mod p`.
    """
    q = _check_lens(p, q)
    if p % 2 == 0:
        raise DomainError(f"L({p},{q}) has more than one spin structure.")
    if p == 1:
        return Fraction(0)
    i = (q - 1) * pow(2, -1, p) % p
    return _lens_recursion(p, q, i)


def surgery_d(v_seq: VSequence, n: int, i: int) -> Fraction:
    """
    `d(S³_n(K), i) = ((2i - n)² - n) / 4n - 2 V_i` for `0 <= i <= n/2`.

    Indices above `n/2` are read through the conjugation symmetry `i -> n - i`.
    """
    if n < 1:
        raise DomainError(f"Surgery coefficient must be positive, but got {n}.")
    if not 0 <= i < max(n, 1):
        raise DomainError(f"Spin^c index must lie in [0, {n}), but got {i}.")
    folded = min(i, n - i) if i else 0
    return Fraction((2 * i - n) ** 2 - n, 4 * n) - 2 * v_seq[folded]


def spin_d_double_cover(knot: KnotRecord) -> Optional[Fraction]:
    """
    The spin d-invariant of the double branched cover, when it is recorded, the
    cover is a lens space, or every summand of a connected sum provides it.
    """
    if knot.d_spin_double_cover is not None:
        return knot.d_spin_double_cover
    if knot.two_bridge is not None:
        return lens_spin_d(*knot.two_bridge)
    if knot.is_sum:
        total = Fraction(0)
        for summand in knot.summands:
            value = spin_d_double_cover(summand)
            if value is None:
                return None
            total += value
        return total
    return None


# Characteristic covectors...


def coset_labeller(Q: Form2) -> Tuple[int, int, int]:
    """
    Return `(g, c, h)` such that the lattice `Q Z²` has basis `(g, c), (0, h)`.

    The coset of `(x, y)` is then `(x mod g, (y - (x div g) c) mod h)`.
    """
    a, b = Q
    s, t, g = (int(value) for value in sympy.gcdex(a, b))
    if g < 0:
        s, t, g = -s, -t, -g
    return g, s * b + t * a, Q.determinant // g


def m_q(Q: Form2, *, extra: int = 0) -> Dict[Coset, Fraction]:
    """
    For each coset of `Z² / Q Z²`, the minimum of `(ξ^T Q^-1 ξ - 2) / 4` over
    characteristic covectors `ξ` (`ξ_i = a mod 2`) in the coset.

    When `det Q` is even the characteristic covectors only meet part of
    `Z² / Q Z²`, so the coset is taken of `(ξ - ξ₀) / 2` with
    `ξ₀ = (a, a) mod 2`.
    Either way there is one coset per Spin^c structure on the boundary.

    The search box is `-a <= ξ_i <= a - 2`, widened by `extra` on both sides. If
    some coset is still not met the box keeps widening by `2a`.
    """
    if Q.definiteness != "positive":
        raise DomainError(f"{Q!r} is not positive definite.")
    if extra % 2:
        raise DomainError(f"Box extension must be even, but got {extra}.")
    a = Q.a
    g, c, h = coset_labeller(Q)
    halved = Q.determinant % 2 == 0
    x0 = a % 2

    def label(x: int, y: int) -> Coset:
        if halved:
            x, y = (x - x0) // 2, (y - x0) // 2
        k = x // g
        return (x - k * g, (y - k * c) % h)

    result: Dict[Coset, Fraction] = {}
    while True:
        values = range(-a - extra, a - 1 + extra, 2)
        for x in values:
            for y in values:
                value = (Q.inverse_norm(x, y) - 2) / 4
                coset = label(x, y)
                if coset not in result or value < result[coset]:
                    result[coset] = value
        if len(result) == Q.determinant:
            return dict(sorted(result.items()))
        logger.debug("widening covector box for %r beyond %d", Q, a + extra)
        extra += 2 * a


def d_match_check(spectrum: DSpectrum, mq: Dict[Coset, Fraction]) -> ObstructionResult:
    """
    Test whether some bijection `φ` from cosets to the spectrum satisfies
    `d(φ(g)) <= m_Q(g)` and `d(φ(g)) = m_Q(g) mod 2`.

    First every coset needs a candidate value, then the candidates must admit a
    perfect matching.
    """
    if len(spectrum) != len(mq):
        raise DomainError(
            f"Spectrum has {len(spectrum)} values but the form has {len(mq)} cosets."
        )
    values = spectrum.values
    candidates: Dict[Coset, List[int]] = {}
    for coset, bound in mq.items():
        candidates[coset] = [
            position
            for position, d in enumerate(values)
            if d <= bound and ((bound - d) / 2).denominator == 1
        ]
        if not candidates[coset]:
            congruent = sorted(
                {str(d) for d in values if ((bound - d) / 2).denominator == 1}
            )
            return ObstructionResult.obstructs(
                f"no d-invariant fits coset {coset}: m_Q = {bound}, "
                f"congruent values {{{', '.join(congruent)}}} all exceed it"
            )

    graph: "nx.Graph[Any]" = nx.Graph()
    top = [("coset", coset) for coset in candidates]
    graph.add_nodes_from(top)
    graph.add_nodes_from(("d", position) for position in range(len(values)))
    for coset, positions in candidates.items():
        graph.add_edges_from((("coset", coset), ("d", p)) for p in positions)
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=top)
    matched = sum(1 for node in top if node in matching)
    if matched < len(top):
        return ObstructionResult.obstructs(
            f"no matching of cosets to d-invariants ({matched} of {len(top)} matched)"
        )
    return ObstructionResult.passes("d-invariants match m_Q")


# Knot level checks...


def bounding_side(knot: KnotRecord, index: TwistIndex) -> Optional[int]:
    """
    For even `l = 2k`, `σ(N) = σ(K) + 2s(1 - k²)` decides which of `M_2(K)`
    (+1) or `-M_2(K)` (-1) bounds a positive definite form; `None` when
    neither is forced.
    """
    if index.l % 2:
        return None
    k = index.l // 2
    sigma_n = knot.signature + 2 * index.s * (1 - k * k)
    return {2: 1, -2: -1}.get(sigma_n)


def _form_parity(index: TwistIndex) -> Parity:
    return "even" if (1 - index.l // 2) % 2 == 0 else "odd"


def candidate_forms(knot: KnotRecord, index: TwistIndex) -> List[Form2]:
    assert knot.determinant is not None
    forms = enumerate_forms(knot.determinant, _form_parity(index), "positive")
    if knot.two_bridge is not None:
        # The cover is a lens space, so only forms with cyclic cokernel remain.
        forms = frozenset(form for form in forms if math.gcd(form.a, form.b) == 1)
    return sorted(forms)


def _target_linking(knot: KnotRecord, side: int) -> LinkingSet:
    assert knot.two_bridge is not None
    p, q = knot.two_bridge
    return selflink_set(side * q % p if p > 1 else 0, p)


def surviving_forms(knot: KnotRecord, index: TwistIndex) -> List[Form2]:
    """
    Candidate forms whose linking form agrees with the double branched cover.
    """
    side = bounding_side(knot, index)
    if side is None or knot.determinant is None:
        return []
    forms = candidate_forms(knot, index)
    if knot.two_bridge is None:
        return forms
    target = _target_linking(knot, side)
    return [form for form in forms if selflink_set(form.a, form.determinant) == target]


def _describe(values: FrozenSet[int]) -> str:
    return "{" + ", ".join(str(v) for v in sorted(values)) + "}"


def linking_form_check(knot: KnotRecord, index: TwistIndex) -> ObstructionResult:
    """
    For even linking number and a definite bounding form, some form
    `[[a, b], [b, a]]` of determinant `det(K)` with the forced parity of `a` must
    reproduce the self-linking numbers of the double branched cover.
    """
    if index.l % 2:
        return ObstructionResult.not_applicable("odd linking number")
    if knot.two_bridge is None:
        return ObstructionResult.not_applicable("no two-bridge data")
    side = bounding_side(knot, index)
    if side is None:
        return ObstructionResult.not_applicable("bounding form is not definite")

    target = _target_linking(knot, side)
    forms = candidate_forms(knot, index)
    survivors = surviving_forms(knot, index)
    space = "M_2(K)" if side > 0 else "-M_2(K)"
    if survivors:
        names = ", ".join(repr(form) for form in survivors)
        return ObstructionResult.passes(f"{names} bounds {space}")
    if not forms:
        return ObstructionResult.obstructs(
            f"no {_form_parity(index)} positive form has determinant "
            f"{knot.determinant}"
        )
    tried = "; ".join(
        f"{form!r}: {_describe(selflink_set(form.a, form.determinant).selflinks)}"
        for form in forms
    )
    return ObstructionResult.obstructs(
        f"{space} has self-linkings {_describe(target.selflinks)}, forms give {tried}"
    )


def d_invariant_check(knot: KnotRecord, index: TwistIndex) -> ObstructionResult:
    """
    Compare the d-invariants of the bounding side of `M_2(K)` with `m_Q` of
    each surviving form. Lens space covers are matched in full, other covers
    through their spin structure only.
    """
    side = bounding_side(knot, index)
    if side is None:
        return ObstructionResult.not_applicable("bounding form is not definite")
    if knot.determinant is None:
        return ObstructionResult.inconclusive("determinant unknown")
    forms = surviving_forms(knot, index)
    if not forms:
        return ObstructionResult.not_applicable("no surviving form")

    if knot.two_bridge is not None:
        p, q = knot.two_bridge
        spectrum = lens_spectrum(p, q)
        if side < 0:
            spectrum = spectrum.negate()
        failures = []
        for form in forms:
            result = d_match_check(spectrum, m_q(form))
            if result.passed:
                return ObstructionResult.passes(f"{form!r}: {result.detail}")
            failures.append(f"{form!r}: {result.detail}")
        return ObstructionResult.obstructs("; ".join(failures))

    d_spin = spin_d_double_cover(knot)
    if d_spin is None:
        return ObstructionResult.inconclusive("d-invariants of M_2(K) unknown")
    d_spin *= side
    failures = []
    for form in forms:
        bound = m_q(form)[SPIN_COSET]
        if d_spin <= bound and ((bound - d_spin) / 2).denominator == 1:
            return ObstructionResult.passes(f"{form!r}: d(spin) = {d_spin} <= {bound}")
        failures.append(f"{form!r}: m_Q(spin) = {bound}")
    return ObstructionResult.obstructs(
        f"d(spin) = {d_spin} fails every form: " + "; ".join(failures)
    )
