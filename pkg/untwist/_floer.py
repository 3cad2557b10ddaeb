import logging
from fractions import Fraction
from typing import (
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import networkx as nx

from ._exceptions import DomainError
from ._knots import KnotRecord, VSequence
from ._models import ObstructionResult, TwistIndex
from ._numeric import PLFunction, bracket, pl_combine, pl_max

logger = logging.getLogger("untwist.floer")

DiffBound = Tuple[int, int, int, int]


def alternating_v(sigma: int) -> VSequence:
    """
    `V_k = max(floor((-σ + 2(1 - k)) / 4), 0)`, the V-sequence of an alternating
    (or thin) knot with signature `σ`.
    """
    if sigma % 2:
        raise DomainError(f"Signature must be even, but got {sigma}.")
    values = []
    k = 0
    while True:
        value = max((-sigma + 2 * (1 - k)) // 4, 0)
        values.append(value)
        if value == 0:
            return VSequence(values)
        k += 1


def required_v(l: int) -> List[Tuple[int, int]]:  # noqa: E741
    """
    The V-values forced by a negative twist with linking number `l`.

    For odd `l = 2α + 1` these are `V_{kl} = (α-k)(α-k+1)/2` for `k = 0..α`, and
    for even `l = 2β + 2` they are `V_{(k+1/2)l} = (β-k)(β-k+1)/2` for `k = 0..β`.
    """
    if l < 1:
        raise DomainError(f"Linking number must be positive, but got {l}.")
    if l % 2:
        alpha = (l - 1) // 2
        return [(k * l, (alpha - k) * (alpha - k + 1) // 2) for k in range(alpha + 1)]
    beta = (l - 2) // 2
    return [
        ((2 * k + 1) * l // 2, (beta - k) * (beta - k + 1) // 2)
        for k in range(beta + 1)
    ]


def l_interval(nu_lo: int, nu_hi: int) -> FrozenSet[int]:
    """
    The integers `l` with `(1 + √(1 + 8ν_lo))/2 <= l < (3 + √(9 + 8ν_hi))/2`,
    decided with integer arithmetic only.
    """
    if nu_lo < 0 or nu_hi < nu_lo:
        raise DomainError(f"Need 0 <= nu_lo <= nu_hi, but got ({nu_lo}, {nu_hi}).")
    result = set()
    candidate = 1
    while 2 * candidate - 3 < 0 or (2 * candidate - 3) ** 2 < 9 + 8 * nu_hi:
        if (2 * candidate - 1) ** 2 >= 1 + 8 * nu_lo:
            result.add(candidate)
        candidate += 1
    return frozenset(result)


# Partial V-sequences and partner knots...


class PartialV:
    """
    What is known about a V-sequence.

    Parameters:
        known: Exact values, keyed by index.
        diff_bounds: `(i, j, lo, hi)` meaning `lo <= V_i - V_j <= hi`.
        zero_from: If given, `V_k = 0` for every `k >= zero_from`.
    """

    def __init__(
        self,
        known: Optional[Mapping[int, int]] = None,
        diff_bounds: Iterable[DiffBound] = (),
        zero_from: Optional[int] = None,
    ) -> None:
        self.known: Dict[int, int] = dict(known or {})
        self.diff_bounds: List[DiffBound] = list(diff_bounds)
        self.zero_from = zero_from
        for index in self.known:
            if index < 0:
                raise DomainError(f"V-sequence index must be nonnegative, got {index}.")
        for i, j, lo, hi in self.diff_bounds:
            if i < 0 or j < 0 or lo > hi:
                raise DomainError(f"Bad difference bound ({i}, {j}, {lo}, {hi}).")

    @classmethod
    def from_sequence(cls, v_seq: VSequence) -> "PartialV":
        known = {k: v_seq[k] for k in range(v_seq.nu_plus + 1)}
        return cls(known, zero_from=v_seq.nu_plus)

    def value(self, index: int) -> Optional[int]:
        if index in self.known:
            return self.known[index]
        if self.zero_from is not None and index >= self.zero_from:
            return 0
        return None

    def with_values(self, values: Iterable[Tuple[int, int]]) -> "PartialV":
        known = dict(self.known)
        known.update(values)
        return PartialV(known, self.diff_bounds, self.zero_from)

    @property
    def is_empty(self) -> bool:
        return not self.known and not self.diff_bounds and self.zero_from is None

    def __repr__(self) -> str:
        return (
            f"<{self.__class__.__name__} known={len(self.known)} "
            f"bounds={len(self.diff_bounds)} zero_from={self.zero_from}>"
        )


def partner_table(l: int) -> List[Tuple[int, int, Fraction]]:  # noqa: E741
    """
    The rows `(i, j(i), s(i))` for `0 <= i <= n/2`, `n = l² + 1`, relating
    `V_{j(i)}(J') = s(i) - V_i(K)`.
    """
    if l < 1:
        raise DomainError(f"Linking number must be positive, but got {l}.")
    n = l * l + 1
    beta = Fraction(0) if l % 2 == 0 else Fraction(n, 2)
    rows = []
    for i in range(n // 2 + 1):
        j = bracket(l * i + beta, n)
        assert j.denominator == 1
        s = (
            Fraction(-1, 4)
            - Fraction(i, 2)
            - j / 2
            + Fraction(i * i, 2 * n)
            + j * j / (2 * n)
            + Fraction(n, 4)
        )
        rows.append((i, int(j), s))
    return rows


def _pair_bound(
    i: int, s_i: Fraction, i2: int, s_i2: Fraction
) -> Tuple[int, int, Fraction, Fraction]:
    """
    Bounds on `V_a(K) - V_b(K)`, `a < b`, implied by `V_{j}(J')` and `V_{j+1}(J')`
    being consecutive, where `i` pairs with `j` and `i2` with `j + 1`.
    """
    delta = s_i - s_i2
    if i < i2:
        return i, i2, delta - 1, delta
    return i2, i, -delta, -delta + 1


def _node_name(node: Hashable) -> str:
    if node == "zero":
        return "0"
    kind, index = node  # type: ignore[misc]
    return f"V_{index}(K)" if kind == "K" else f"V_{index}(J')"


def partner_v_check(v: PartialV, l: int) -> ObstructionResult:  # noqa: E741
    """
    Decide whether the partner knot `J'` of a negative twist with linking
    number `l` can exist.

    Every row of `partner_table(l)` pins `V_{j(i)}(J') = s(i) - V_i(K)`. Together
    with the V-sequence axioms for both knots these form a system of difference
    constraints, which is feasible iff its constraint graph has no negative
    cycle.
    """
    if l == 0:
        v0 = v.value(0)
        if v0 is None:
            return ObstructionResult.inconclusive("V_0(K) unknown")
        if v0 != 0:
            return ObstructionResult.obstructs(
                f"linking number 0 needs nu+(K) = 0, but V_0(K) = {v0}"
            )
        return ObstructionResult.passes("V_0(K) = 0")

    rows = partner_table(l)
    for i, j, s in rows:
        if s.denominator != 1:
            return ObstructionResult.obstructs(f"s({i}) = {s} is not an integer")
        known = v.value(i)
        if known is not None and s - known < 0:
            return ObstructionResult.obstructs(
                f"V_{j}(J') = s({i}) - V_{i}(K) = {s} - {known} < 0"
            )

    by_j = {j: (i, s) for i, j, s in rows}
    for j in range(max(by_j)):
        if j not in by_j or j + 1 not in by_j:  # pragma: nocover
            continue
        (i, s_i), (i2, s_i2) = by_j[j], by_j[j + 1]
        a, b, lo, hi = _pair_bound(i, s_i, i2, s_i2)
        va, vb = v.value(a), v.value(b)
        if va is None or vb is None:
            continue
        if va - vb > hi:
            return ObstructionResult.obstructs(f"V_{a} - V_{b} = {va - vb} > {hi}")
        if va - vb < lo:
            return ObstructionResult.obstructs(f"V_{a} - V_{b} = {va - vb} < {lo}")

    cycle = _negative_cycle(_constraint_graph(v, rows))
    if cycle is not None:
        path = " -> ".join(_node_name(node) for node in cycle)
        logger.debug("negative cycle for l = %d: %s", l, path)
        return ObstructionResult.obstructs(f"partner constraints infeasible: {path}")
    if v.is_empty:
        return ObstructionResult.inconclusive("no V-sequence data")
    return ObstructionResult.passes(f"partner J' feasible for n = {l * l + 1}")


def _constraint_graph(
    v: PartialV, rows: Sequence[Tuple[int, int, Fraction]]
) -> "nx.DiGraph[Hashable]":
    # Nodes carry W_i = -V_i(K), V_j(J') and the constant 0, so that the partner
    # equations V_j(J') + V_i(K) = s(i) become differences.
    graph: "nx.DiGraph[Hashable]" = nx.DiGraph()

    def at_most(u: Hashable, w: Hashable, bound: int) -> None:
        # x_u - x_w <= bound
        if graph.has_edge(w, u) and graph[w][u]["weight"] <= bound:
            return
        graph.add_edge(w, u, weight=bound)

    top_k = max(
        [0]
        + [i for i, _, _ in rows]
        + list(v.known)
        + [max(i, j) for i, j, _, _ in v.diff_bounds]
        + ([v.zero_from] if v.zero_from is not None else [])
    )
    top_j = max((j for _, j, _ in rows), default=-1)

    for k in range(top_k + 1):
        w = ("K", k)
        at_most(w, "zero", 0)
        if k < top_k:
            after = ("K", k + 1)
            at_most(after, w, 1)
            at_most(w, after, 0)
        value = v.value(k)
        if value is not None:
            at_most(w, "zero", -value)
            at_most("zero", w, value)
    for i, j, lo, hi in v.diff_bounds:
        at_most(("K", j), ("K", i), hi)
        at_most(("K", i), ("K", j), -lo)

    for j in range(top_j + 1):
        node = ("J", j)
        at_most("zero", node, 0)
        if j < top_j:
            after = ("J", j + 1)
            at_most(node, after, 1)
            at_most(after, node, 0)
    for i, j, s in rows:
        at_most(("J", j), ("K", i), int(s))
        at_most(("K", i), ("J", j), -int(s))
    return graph


def _negative_cycle(graph: "nx.DiGraph[Hashable]") -> Optional[List[Hashable]]:
    source = ("source", 0)
    graph.add_edges_from((source, node, {"weight": 0}) for node in list(graph))
    try:
        if not nx.negative_edge_cycle(graph, weight="weight"):
            return None
        return list(nx.find_negative_cycle(graph, source, weight="weight"))[:-1]
    finally:
        graph.remove_node(source)


def v_feasible(v: PartialV) -> bool:
    """
    Whether some V-sequence is consistent with `v`.
    """
    return _negative_cycle(_constraint_graph(v, [])) is None


def forced_v_check(v: PartialV, l: int) -> ObstructionResult:  # noqa: E741
    """
    Compare the values forced by `required_v(l)` with what is known of `V`.
    """
    if l < 1:
        return ObstructionResult.not_applicable("no forced values for l = 0")
    missing = []
    for index, expected in required_v(l):
        actual = v.value(index)
        if actual is None:
            missing.append(index)
        elif actual != expected:
            return ObstructionResult.obstructs(
                f"l = {l} forces V_{index} = {expected}, but V_{index} = {actual}"
            )
    if missing:
        indices = ", ".join(f"V_{index}" for index in missing)
        return ObstructionResult.inconclusive(f"{indices} unknown")
    return ObstructionResult.passes(f"forced values for l = {l} hold")


# Upsilon...


def _reflect(f: PLFunction) -> PLFunction:
    half = [(t, value) for t, value in f.breakpoints if t < 1]
    return PLFunction.symmetric(half + [(Fraction(1), f(1))])


def upsilon_from_v(v_seq: VSequence, genus: Optional[int] = None) -> PLFunction:
    """
    `Υ(t) = -2 min_s (V_s + st/2)` on `[0, 1]`, extended by `Υ(2-t) = Υ(t)`.

    Valid for knots whose complex is a staircase (torus knots and other L-space
    knots) or thin; `genus` only bounds the search when given.
    """
    last = v_seq.nu_plus if genus is None else min(v_seq.nu_plus, genus)
    lines = [PLFunction.line(-s, -2 * v_seq[s]) for s in range(last + 1)]
    return _reflect(pl_max(lines))


def upsilon_lower_bound(l: int) -> PLFunction:  # noqa: E741
    """
    `max_s (-st - 2V_s)` over the values `(s, V_s)` forced by `required_v(l)`,
    on `[0, 1]` and reflected onto `[1, 2]`.
    """
    lines = [PLFunction.line(-s, -2 * value) for s, value in required_v(l)]
    return _reflect(pl_max(lines))


def upsilon_upper_bound(v_seq: VSequence, genus: int) -> PLFunction:
    """
    `min_s max(-gt - 2V_s - 2s + 2g + 2, gt - 2V_s + 2)` for `0 <= s <= g`.
    """
    bounds = []
    for s in range(genus + 1):
        falling = PLFunction.line(-genus, -2 * v_seq[s] - 2 * s + 2 * genus + 2)
        rising = PLFunction.line(genus, -2 * v_seq[s] + 2)
        bounds.append(-pl_combine(falling, rising, "max"))
    return -pl_max(bounds)


def upsilon_check(upsilon: PLFunction, l: int) -> ObstructionResult:  # noqa: E741
    """
    A negative twist with linking number `l` forces `Υ >= upsilon_lower_bound(l)`.

    The difference of two piecewise linear functions is extremal at their joint
    breakpoints, so those are the only points inspected.
    """
    if l < 1:
        return ObstructionResult.not_applicable("no Upsilon bound for l = 0")
    bound = upsilon_lower_bound(l)
    ts = sorted({t for t, _ in upsilon.breakpoints} | {t for t, _ in bound.breakpoints})
    worst = None
    for t in ts:
        deficit = bound(t) - upsilon(t)
        if deficit > 0 and (worst is None or deficit > worst[0]):
            worst = (deficit, t)
    if worst is None:
        return ObstructionResult.passes(f"Upsilon above the l = {l} bound")
    t = worst[1]
    return ObstructionResult.obstructs(
        f"Upsilon({t}) = {upsilon(t)} < {bound(t)} required for l = {l}"
    )


def upsilon_of(knot: KnotRecord) -> Optional[PLFunction]:
    """
    The Upsilon function of a record, when it can be determined.
    """
    if knot.upsilon is not None:
        return knot.upsilon
    if knot.torus is not None:
        if knot.torus.mirrored:
            assert knot.v_seq_mirror is not None
            return -upsilon_from_v(knot.v_seq_mirror)
        assert knot.v_seq is not None
        return upsilon_from_v(knot.v_seq)
    if knot.alternating or knot.thin:
        return PLFunction.symmetric([(0, 0), (1, Fraction(knot.signature, 2))])
    if knot.is_sum:
        parts = [upsilon_of(summand) for summand in knot.summands]
        if any(part is None for part in parts):
            return None
        total = PLFunction.zero()
        for part in parts:
            assert part is not None
            total = total + part
        return total
    return None


# Alternating knots...


def alternating_allowed(sigma: int) -> FrozenSet[TwistIndex]:
    """
    The twist indices an alternating knot with signature `σ` may admit.
    """
    if sigma % 2:
        raise DomainError(f"Signature must be even, but got {sigma}.")
    magnitude = abs(sigma)
    if magnitude == 0:
        pairs: List[Tuple[int, int]] = [
            (2, -1),
            (1, -1),
            (0, -1),
            (0, 1),
            (1, 1),
            (2, 1),
        ]
    elif magnitude == 2:
        pairs = [(1, -1), (0, -1), (2, 1), (3, 1)]
    elif magnitude == 4:
        pairs = [(1, -1), (3, 1)]
    elif magnitude <= 8:
        pairs = [(1, -1), (4, 1)]
    else:
        pairs = [(1, -1)]
    # pairs are written for positive σ; a negative σ mirrors every sign
    direction = 1 if sigma >= 0 else -1
    return frozenset(
        TwistIndex(linking, "+" if sign * direction > 0 else "-")
        for linking, sign in pairs
    )


def nu_bounds(
    v_seq: Optional[VSequence], tau: Optional[int], genus4: Optional[int], genus: int
) -> Tuple[int, int]:
    """
    Bounds `(lo, hi)` on `ν⁺`, exact when the V-sequence is known and otherwise
    `max(τ, 0) <= ν⁺ <= g4 <= g`.
    """
    if v_seq is not None:
        return v_seq.nu_plus, v_seq.nu_plus
    hi = genus if genus4 is None else genus4
    lo = 0 if tau is None else max(tau, 0)
    return min(lo, hi), hi
