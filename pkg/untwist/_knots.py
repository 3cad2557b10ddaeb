import functools
import math
import operator
from fractions import Fraction
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import sympy

from ._exceptions import ConsistencyError, DomainError
from ._models import TwistIndex
from ._numeric import PLFunction, enforce_int
from ._signatures import torus_signature_at

_t = sympy.Symbol("t")


class VSequence:
    """
    The nonincreasing sequence `V_0, V_1, ...` of nonnegative integers, with
    steps of at most one, that is eventually zero.

    Only the values up to and including the first zero are stored; every later
    index reads as zero.
    """

    def __init__(self, values: Iterable[int]) -> None:
        stored = [enforce_int(value, name="V") for value in values]
        for k, value in enumerate(stored):
            if value < 0:
                raise DomainError(f"V_{k} = {value} is negative.")
            if k and not stored[k - 1] - 1 <= value <= stored[k - 1]:
                raise DomainError(
                    f"V_{k - 1} = {stored[k - 1]} and V_{k} = {value} violate "
                    "V_k >= V_k+1 >= V_k - 1."
                )
        if stored and stored[-1] != 0:
            raise DomainError("A V-sequence must end in zero.")
        while len(stored) > 1 and stored[-2] == 0:
            stored.pop()
        self._values: Tuple[int, ...] = tuple(stored) or (0,)

    @classmethod
    def zero(cls) -> "VSequence":
        return cls([0])

    @property
    def values(self) -> Tuple[int, ...]:
        return self._values

    @property
    def nu_plus(self) -> int:
        """
        The first index at which the sequence vanishes.
        """
        return len(self._values) - 1

    @property
    def is_zero(self) -> bool:
        return self._values == (0,)

    def __getitem__(self, k: int) -> int:
        if k < 0:
            raise DomainError(f"V-sequence index must be nonnegative, got {k}.")
        return self._values[k] if k < len(self._values) else 0

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, VSequence) and self._values == other._values

    def __hash__(self) -> int:
        return hash(self._values)

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self._values}>"


class TorusData(NamedTuple):
    p: int
    q: int
    mirrored: bool = False


def arf_from_determinant(determinant: int) -> int:
    """
    The Arf invariant is 0 exactly when the determinant is `±1 mod 8`.
    """
    return 0 if determinant % 8 in (1, 7) else 1


def two_bridge_signature(p: int, q: int) -> int:
    """
    Signature of the two-bridge knot whose double branched cover is `L(p, q)`,
    normalised so that `(3, 1)` gives the trefoil value -2.
    """
    q_odd = q if q % 2 else q + p
    return -sum((-1) ** ((i * q_odd) // p) for i in range(1, p))


class KnotRecord:
    """
    All invariants of one knot that any obstruction may consult.

    Parameters:
        name: The knot's name, eg. `"7_7"` or `"T(7,8)"`.
        signature: `σ(K)`, with the trefoil `T(2,3)` at -2.
        arf: The Arf invariant, 0 or 1.
        genus: The Seifert genus.
        determinant: `|Δ(-1)|`, or `None` if not recorded.
        alternating: Whether the knot is alternating.
        thin: Whether the knot Floer homology is thin.
        genus4: The smooth four-genus, if known.
        tau: The Ozsváth-Szabó tau invariant, if known.
        v_seq: The V-sequence of `K`, if known.
        v_seq_mirror: The V-sequence of `-K`, if known.
        signature_samples: Tristram-Levine signatures keyed by `x` in `(0, 1)`.
        signature_range: `(min, max)` of the signature function, if known.
        two_bridge: `(p, q)` when the double branched cover is `L(p, q)`.
        branched_ranks: Minimal number of generators of `H_1(M_q)`, keyed by `q`.
        e1_trivial: Whether the first elementary ideal is trivial.
        d_spin_double_cover: d-invariant of the spin structure on `M_2(K)`.
        known_indices: Twist indices known to unknot the knot.
        torus: `(p, q, mirrored)` for torus knots.
        summands: The prime summands of a connected sum.
        upsilon: The Upsilon function, when supplied directly.
        external_obstructions: Indices ruled out elsewhere, with a citation.
        construction: The expression the record was built from, if any.
    """

    def __init__(
        self,
        *,
        name: str,
        signature: int,
        arf: int,
        genus: int,
        determinant: Optional[int] = None,
        alternating: bool = False,
        thin: bool = False,
        genus4: Optional[int] = None,
        tau: Optional[int] = None,
        v_seq: Optional[VSequence] = None,
        v_seq_mirror: Optional[VSequence] = None,
        signature_samples: Optional[Mapping[Fraction, int]] = None,
        signature_range: Optional[Tuple[int, int]] = None,
        two_bridge: Optional[Tuple[int, int]] = None,
        branched_ranks: Optional[Mapping[int, int]] = None,
        e1_trivial: Optional[bool] = None,
        d_spin_double_cover: Optional[Fraction] = None,
        known_indices: Iterable[TwistIndex] = (),
        torus: Optional[TorusData] = None,
        summands: Sequence["KnotRecord"] = (),
        upsilon: Optional[PLFunction] = None,
        external_obstructions: Optional[Mapping[TwistIndex, str]] = None,
        construction: Optional[str] = None,
    ) -> None:
        self.name = name
        self.signature = signature
        self.arf = arf
        self.genus = genus
        self.determinant = determinant
        self.alternating = alternating
        self.thin = thin
        self.genus4 = genus4
        self.tau = tau
        self.v_seq = v_seq
        self.v_seq_mirror = v_seq_mirror
        self.signature_samples: Dict[Fraction, int] = dict(signature_samples or {})
        self.signature_range = signature_range
        self.two_bridge = two_bridge
        self.branched_ranks: Dict[int, int] = dict(branched_ranks or {})
        self.e1_trivial = e1_trivial
        self.d_spin_double_cover = d_spin_double_cover
        self.known_indices: FrozenSet[TwistIndex] = frozenset(known_indices)
        self.torus = torus
        self.summands: Tuple[KnotRecord, ...] = tuple(summands)
        self.upsilon = upsilon
        self.external_obstructions: Dict[TwistIndex, str] = dict(
            external_obstructions or {}
        )
        self.construction = construction

    FIELDS = (
        "name",
        "signature",
        "arf",
        "genus",
        "determinant",
        "alternating",
        "thin",
        "genus4",
        "tau",
        "v_seq",
        "v_seq_mirror",
        "signature_samples",
        "signature_range",
        "two_bridge",
        "branched_ranks",
        "e1_trivial",
        "d_spin_double_cover",
        "known_indices",
        "torus",
        "summands",
        "upsilon",
        "external_obstructions",
        "construction",
    )

    def replace(self, **changes: Any) -> "KnotRecord":
        fields = {field: getattr(self, field) for field in self.FIELDS}
        fields.update(changes)
        return KnotRecord(**fields)

    def validate(self) -> "KnotRecord":
        """
        Check the relations between invariants, raising `ConsistencyError` naming
        the first one that fails.
        """
        prefix = f"Knot {self.name!r}:"
        if self.signature % 2:
            raise ConsistencyError(f"{prefix} signature {self.signature} is odd.")
        if self.arf not in (0, 1):
            raise ConsistencyError(f"{prefix} Arf invariant must be 0 or 1.")
        if self.genus < 0:
            raise ConsistencyError(f"{prefix} genus must be nonnegative.")
        if abs(self.signature) > 2 * self.genus:
            raise ConsistencyError(
                f"{prefix} |signature| <= 2 * genus fails "
                f"(signature {self.signature}, genus {self.genus})."
            )
        if self.determinant is not None:
            if self.determinant < 1 or self.determinant % 2 == 0:
                raise ConsistencyError(
                    f"{prefix} determinant {self.determinant} is not a positive "
                    "odd integer."
                )
            if arf_from_determinant(self.determinant) != self.arf:
                raise ConsistencyError(
                    f"{prefix} Arf invariant {self.arf} is inconsistent with "
                    f"determinant {self.determinant} "
                    "(arf = 0 iff det = ±1 mod 8)."
                )
        if self.two_bridge is not None:
            p, q = self.two_bridge
            if math.gcd(p, q) != 1:
                raise ConsistencyError(f"{prefix} two-bridge ({p}, {q}) not coprime.")
            if self.determinant != p:
                raise ConsistencyError(
                    f"{prefix} two-bridge ({p}, {q}) requires determinant {p}, "
                    f"but got {self.determinant}."
                )
            if two_bridge_signature(p, q) != self.signature:
                raise ConsistencyError(
                    f"{prefix} two-bridge ({p}, {q}) has signature "
                    f"{two_bridge_signature(p, q)}, but got {self.signature}."
                )
        if self.genus4 is not None and self.genus4 > self.genus:
            raise ConsistencyError(f"{prefix} genus4 exceeds genus.")
        if self.tau is not None:
            bound = self.genus if self.genus4 is None else self.genus4
            if abs(self.tau) > bound:
                raise ConsistencyError(f"{prefix} |tau| exceeds the four-genus bound.")
        for label, seq in (("v_seq", self.v_seq), ("v_seq_mirror", self.v_seq_mirror)):
            if seq is not None and seq.nu_plus > self.genus:
                raise ConsistencyError(
                    f"{prefix} {label} must vanish from index genus = {self.genus}."
                )
        for x, value in self.signature_samples.items():
            if not 0 < x < 1:
                raise ConsistencyError(
                    f"{prefix} signature sample at {x} not in (0, 1)."
                )
            if value % 2:
                raise ConsistencyError(f"{prefix} signature sample at {x} is odd.")
        clash = self.known_indices & set(self.external_obstructions)
        if clash:
            raise ConsistencyError(
                f"{prefix} index {min(clash)} is both known and externally obstructed."
            )
        return self

    @property
    def is_sum(self) -> bool:
        return len(self.summands) > 1

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, KnotRecord) and all(
            getattr(self, field) == getattr(other, field)
            for field in self.FIELDS
            if field != "summands"
        )

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} [{self.name}]>"


# Torus knots...


def _check_coprime(p: int, q: int) -> None:
    if p < 2 or q < 2:
        raise DomainError(f"Torus knot parameters must be at least 2, got ({p}, {q}).")
    if math.gcd(p, q) != 1:
        raise DomainError(f"T({p},{q}) is not a knot: gcd({p}, {q}) != 1.")


def torus_alexander(p: int, q: int) -> List[int]:
    """
    Coefficients `a_0 .. a_g` of the symmetrised Alexander polynomial of
    `T(p, q)`, so that `Δ(t) = a_0 + Σ a_j (t^j + t^-j)`.
    """
    _check_coprime(p, q)
    numerator = sympy.Poly((_t ** (p * q) - 1) * (_t - 1), _t)
    denominator = sympy.Poly((_t**p - 1) * (_t**q - 1), _t)
    quotient, remainder = sympy.div(numerator, denominator)
    if not remainder.is_zero:  # pragma: nocover
        raise AssertionError(f"Alexander polynomial of T({p},{q}) is not exact.")
    coefficients = [int(c) for c in reversed(quotient.all_coeffs())]
    genus = (p - 1) * (q - 1) // 2
    return coefficients[genus:]


def torsion_v(p: int, q: int) -> VSequence:
    """
    The V-sequence of `T(p, q)` from its Alexander torsion coefficients
    `t_j = Σ_{i > 0} i * a_{j+i}`.
    """
    coefficients = torus_alexander(p, q)
    top = len(coefficients) - 1
    values = [
        sum(i * coefficients[j + i] for i in range(1, top - j + 1))
        for j in range(top + 1)
    ]
    return VSequence(values)


def torus_knot(p: int, q: int) -> KnotRecord:
    """
    The torus knot `T(p, q)` with every invariant filled in.

    Signature samples are not stored: `signature_at` counts lattice points on
    demand.
    """
    _check_coprime(p, q)
    p, q = min(p, q), max(p, q)
    genus = (p - 1) * (q - 1) // 2
    if p % 2 and q % 2:
        determinant = 1
    else:
        determinant = q if p % 2 == 0 else p
    signature = torus_signature_at(p, q, Fraction(1, 2))
    assert signature is not None
    return KnotRecord(
        name=f"T({p},{q})",
        signature=signature,
        arf=arf_from_determinant(determinant),
        genus=genus,
        determinant=determinant,
        alternating=p == 2,
        thin=p == 2,
        genus4=genus,
        tau=genus,
        v_seq=torsion_v(p, q),
        v_seq_mirror=VSequence.zero(),
        two_bridge=(q, 1) if p == 2 else None,
        torus=TorusData(p, q),
    )


# Combinators...


def mirror(knot: KnotRecord) -> KnotRecord:
    """
    The mirror image `-K`: signatures, tau and Upsilon change sign, the two
    V-sequences and the signs of all twist indices swap.
    """
    if knot.name.startswith("-"):
        name = knot.name[1:]
    elif knot.is_sum:
        name = f"-({knot.name})"
    else:
        name = f"-{knot.name}"
    low_high = knot.signature_range
    return knot.replace(
        name=name,
        signature=-knot.signature,
        tau=None if knot.tau is None else -knot.tau,
        v_seq=knot.v_seq_mirror,
        v_seq_mirror=knot.v_seq,
        signature_samples={x: -v for x, v in knot.signature_samples.items()},
        signature_range=None if low_high is None else (-low_high[1], -low_high[0]),
        two_bridge=None
        if knot.two_bridge is None
        else (knot.two_bridge[0], -knot.two_bridge[1] % knot.two_bridge[0]),
        d_spin_double_cover=None
        if knot.d_spin_double_cover is None
        else -knot.d_spin_double_cover,
        known_indices=[index.mirror() for index in knot.known_indices],
        torus=None
        if knot.torus is None
        else knot.torus._replace(mirrored=not knot.torus.mirrored),
        summands=[mirror(summand) for summand in knot.summands],
        upsilon=None if knot.upsilon is None else -knot.upsilon,
        external_obstructions={
            index.mirror(): cite for index, cite in knot.external_obstructions.items()
        },
        construction=None if knot.construction is None else f"-({knot.construction})",
    )


def _optional_sum(values: Sequence[Optional[Any]]) -> Optional[Any]:
    if any(value is None for value in values):
        return None
    return sum(values)


def connected_sum(*knots: KnotRecord) -> KnotRecord:
    """
    The connected sum `K_1 # K_2 # ...`.

    Signatures, tau, genera and Upsilon add, determinants multiply, Arf
    invariants add mod 2. V-sequences are not additive, so they are only carried
    over when every other summand is trivial. The four-genus and the branched
    cover ranks are left unknown.
    """
    from ._floer import upsilon_of  # _floer imports this module

    if not knots:
        raise DomainError("A connected sum needs at least one summand.")
    if len(knots) == 1:
        return knots[0]

    primes: List[KnotRecord] = []
    for knot in knots:
        primes.extend(knot.summands if knot.is_sum else [knot])
    nontrivial = [knot for knot in primes if knot.genus > 0]

    v_seq = v_seq_mirror = None
    if len(nontrivial) <= 1:
        carrier = nontrivial[0] if nontrivial else primes[0]
        v_seq, v_seq_mirror = carrier.v_seq, carrier.v_seq_mirror

    determinants = [knot.determinant for knot in primes]
    samples: Dict[Fraction, int] = {}
    shared = set.intersection(*(set(knot.signature_samples) for knot in primes))
    for x in sorted(shared):
        samples[x] = sum(knot.signature_samples[x] for knot in primes)

    upsilon: Optional[PLFunction] = None
    parts = [upsilon_of(knot) for knot in primes]
    if all(part is not None for part in parts):
        upsilon = functools.reduce(operator.add, parts)

    return KnotRecord(
        name=" # ".join(knot.name for knot in primes),
        signature=sum(knot.signature for knot in primes),
        arf=sum(knot.arf for knot in primes) % 2,
        genus=sum(knot.genus for knot in primes),
        determinant=None
        if any(d is None for d in determinants)
        else math.prod(d for d in determinants if d is not None),
        alternating=False,
        thin=False,
        genus4=None,
        branched_ranks=None,
        tau=_optional_sum([knot.tau for knot in primes]),
        v_seq=v_seq,
        v_seq_mirror=v_seq_mirror,
        signature_samples=samples,
        e1_trivial=None,
        d_spin_double_cover=_optional_sum(
            [knot.d_spin_double_cover for knot in primes]
        ),
        summands=primes,
        upsilon=upsilon,
    )
