import logging
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Tuple

from ._classical import (
    arf_check,
    branched_cover_check,
    gcd_conflicts,
    genus_pair_check,
    signature_twist_check,
)
from ._config import AnalysisConfig
from ._exceptions import ConventionError
from ._floer import (
    PartialV,
    alternating_allowed,
    forced_v_check,
    l_interval,
    nu_bounds,
    partner_v_check,
    upsilon_check,
    upsilon_of,
)
from ._forms import d_invariant_check, linking_form_check
from ._knots import KnotRecord
from ._models import (
    IndexTypes,
    ObstructionResult,
    Reason,
    Status,
    TwistIndex,
    TwistVerdict,
    enforce_index,
)
from ._trace import Trace

logger = logging.getLogger("untwist.engine")

CONVENTION_NOTE = (
    "σ(T(2,3)) = -2; a negative twist with linking number l needs "
    "σ(r/l) in {-2r(l-r), -2r(l-r) + 2}, a positive one the negated pair."
)

SMALL_INDICES = frozenset(
    TwistIndex(linking, sign) for linking in (0, 1, 2) for sign in "-+"
)

Check = Callable[[KnotRecord, TwistIndex], ObstructionResult]


# Candidates...


def _linking_numbers(knot: KnotRecord) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    lo, hi = nu_bounds(knot.v_seq, knot.tau, knot.genus4, knot.genus)
    negative = l_interval(lo, hi)
    mirror_tau = None if knot.tau is None else -knot.tau
    lo, hi = nu_bounds(knot.v_seq_mirror, mirror_tau, knot.genus4, knot.genus)
    positive = l_interval(lo, hi)
    return negative, positive


def candidates(
    knot: KnotRecord, config: Optional[AnalysisConfig] = None
) -> List[TwistIndex]:
    """
    `{0±, 1±}` together with the negative twists allowed by the bounds on
    `ν⁺(K)` and the positive twists allowed by those on `ν⁺(-K)`.
    """
    config = AnalysisConfig() if config is None else config
    negative, positive = _linking_numbers(knot)
    result = {TwistIndex(linking, sign) for linking in (0, 1) for sign in "-+"}
    cap = config.max_l
    result.update(TwistIndex(linking, "-") for linking in negative if linking <= cap)
    result.update(TwistIndex(linking, "+") for linking in positive if linking <= cap)
    return sorted(result)


# Checks...


def external_check(knot: KnotRecord, index: TwistIndex) -> ObstructionResult:
    citation = knot.external_obstructions.get(index)
    if citation is None:
        return ObstructionResult.not_applicable()
    return ObstructionResult.obstructs(citation)


def alternating_check(knot: KnotRecord, index: TwistIndex) -> ObstructionResult:
    if not (knot.alternating or knot.thin):
        return ObstructionResult.not_applicable("neither alternating nor thin")
    allowed = alternating_allowed(knot.signature)
    if index in allowed:
        return ObstructionResult.passes(f"allowed for σ = {knot.signature}")
    names = ", ".join(str(i) for i in sorted(allowed))
    return ObstructionResult.obstructs(
        f"σ = {knot.signature} allows only {{{names}}}"
    )


def _partial_v(knot: KnotRecord, index: TwistIndex) -> PartialV:
    # A positive twist on K is a negative twist on -K.
    v_seq = knot.v_seq if index.negative else knot.v_seq_mirror
    if v_seq is not None:
        return PartialV.from_sequence(v_seq)
    return PartialV(zero_from=knot.genus if knot.genus4 is None else knot.genus4)


def forced_check(knot: KnotRecord, index: TwistIndex) -> ObstructionResult:
    return forced_v_check(_partial_v(knot, index), index.l)


def partner_check(knot: KnotRecord, index: TwistIndex) -> ObstructionResult:
    return partner_v_check(_partial_v(knot, index), index.l)


def upsilon_twist_check(knot: KnotRecord, index: TwistIndex) -> ObstructionResult:
    if index.l == 0:
        return ObstructionResult.not_applicable("no Upsilon bound for l = 0")
    upsilon = upsilon_of(knot)
    if upsilon is None:
        return ObstructionResult.inconclusive("Upsilon unknown")
    return upsilon_check(upsilon if index.negative else -upsilon, index.l)


PIPELINE: Tuple[Tuple[str, Check], ...] = (
    ("external", external_check),
    ("alternating", alternating_check),
    ("arf", arf_check),
    ("signature", signature_twist_check),
    ("branched", branched_cover_check),
    ("forced_v", forced_check),
    ("partner_v", partner_check),
    ("upsilon", upsilon_twist_check),
    ("linking", linking_form_check),
    ("d_invariant", d_invariant_check),
)


# Reports...


class AnalysisReport:
    """
    The verdicts on every candidate twist index of one knot.

    Parameters:
        knot: The knot's name.
        verdicts: One verdict per candidate.
        notes: Remarks about the surviving set as a whole.
        convention_note: The signature convention the verdicts rely on.
    """

    def __init__(
        self,
        knot: str,
        verdicts: List[TwistVerdict],
        notes: Optional[List[str]] = None,
        convention_note: str = CONVENTION_NOTE,
    ) -> None:
        self.knot = knot
        self.verdicts = sorted(verdicts, key=lambda verdict: verdict.index)
        self.notes = list(notes or [])
        self.convention_note = convention_note
        seen = [verdict.index for verdict in self.verdicts]
        if len(seen) != len(set(seen)):
            raise ValueError("Every candidate index needs exactly one verdict.")

    def _with(self, status: Status) -> List[TwistIndex]:
        return [v.index for v in self.verdicts if v.status is status]

    @property
    def known(self) -> List[TwistIndex]:
        return self._with(Status.KNOWN)

    @property
    def possible(self) -> List[TwistIndex]:
        return self._with(Status.POSSIBLE)

    @property
    def obstructed(self) -> List[TwistIndex]:
        return self._with(Status.OBSTRUCTED)

    @property
    def surviving(self) -> List[TwistIndex]:
        return sorted(self.known + self.possible)

    def verdict(self, index: IndexTypes) -> TwistVerdict:
        index = enforce_index(index, name="index")
        for verdict in self.verdicts:
            if verdict.index == index:
                return verdict
        raise KeyError(str(index))

    def as_dict(self) -> Dict[str, Any]:
        return {
            "knot": self.knot,
            "convention": self.convention_note,
            "known": [str(index) for index in self.known],
            "possible": [str(index) for index in self.possible],
            "verdicts": [
                {
                    "index": str(verdict.index),
                    "status": verdict.status.value,
                    "reasons": [list(reason) for reason in verdict.reasons],
                    "notes": [list(note) for note in verdict.notes],
                }
                for verdict in self.verdicts
            ],
            "notes": list(self.notes),
        }

    def __eq__(self, other: Any) -> bool:
        return (
            isinstance(other, AnalysisReport)
            and self.knot == other.knot
            and self.verdicts == other.verdicts
            and self.notes == other.notes
        )

    def __repr__(self) -> str:
        known = ", ".join(str(index) for index in self.known)
        possible = ", ".join(str(index) for index in self.possible)
        return (
            f"<{self.__class__.__name__} [{self.knot}: "
            f"known {{{known}}}, possible {{{possible}}}]>"
        )


def run_checks(
    knot: KnotRecord, index: TwistIndex, config: Optional[AnalysisConfig] = None
) -> List[Tuple[str, ObstructionResult]]:
    """
    Run every enabled obstruction against one index. All of them run, so that
    each independent reason is reported.
    """
    config = AnalysisConfig() if config is None else config
    results = []
    for name, check in PIPELINE:
        if not config.enabled(name):
            continue
        kwargs = {"knot": knot.name, "index": str(index), "check": name}
        with Trace("check", logger, config, kwargs) as trace:
            result = check(knot, index)
            trace.return_value = result
        if result.obstructed:
            logger.debug(
                "%s %s obstructed by %s: %s", knot.name, index, name, result.detail
            )
        elif not result.conclusive:
            logger.debug(
                "%s %s inconclusive %s: %s", knot.name, index, name, result.detail
            )
        results.append((name, result))
    return results


def _classify(
    knot: KnotRecord, index: TwistIndex, config: AnalysisConfig, notes: List[str]
) -> TwistVerdict:
    results = run_checks(knot, index, config)
    reasons: List[Reason] = [(n, r.detail) for n, r in results if r.obstructed]
    pending: List[Reason] = [
        (n, r.detail) for n, r in results if r.applicable and not r.conclusive
    ]
    if index in knot.known_indices:
        if reasons:
            name, detail = reasons[0]
            message = (
                f"{knot.name}: known index {index} is obstructed by {name}: {detail}"
            )
            if config.strict:
                raise ConventionError(message)
            notes.append(message)
        return TwistVerdict(index, Status.KNOWN, notes=pending)
    if reasons:
        return TwistVerdict(index, Status.OBSTRUCTED, reasons, pending)
    return TwistVerdict(index, Status.POSSIBLE, notes=pending)


def _survivor_notes(
    knot: KnotRecord, surviving: List[TwistIndex], config: AnalysisConfig
) -> List[str]:
    notes = [
        f"{first} and {second} cannot both unknot {knot.name}: "
        f"linking numbers {first.l} and {second.l} share a factor"
        for first, second in gcd_conflicts(surviving)
    ]
    notes.extend(genus_pair_check(knot, surviving))

    problem = None
    if len(surviving) > 6:
        problem = f"{len(surviving)} indices survive, at most 6 can unknot a knot"
    elif len(surviving) == 6 and frozenset(surviving) != SMALL_INDICES:
        problem = "six surviving indices must be {2-, 1-, 0-, 0+, 1+, 2+}"
    if problem is not None:
        exact = knot.v_seq is not None and knot.v_seq_mirror is not None
        if exact and config.strict:
            raise ConventionError(f"{knot.name}: {problem}")
        notes.append(problem)
    return notes


def analyze(
    knot: KnotRecord, config: Optional[AnalysisConfig] = None
) -> AnalysisReport:
    """
    Classify each candidate twist index of `knot` as KNOWN, POSSIBLE or
    OBSTRUCTED.

    Raises `ConventionError` when a known index is obstructed and the
    configuration is strict.
    """
    config = AnalysisConfig() if config is None else config
    with Trace("analyze", logger, config, {"knot": knot.name}) as trace:
        indices = set(candidates(knot, config))
        indices |= knot.known_indices | set(knot.external_obstructions)
        notes: List[str] = []
        negative, positive = _linking_numbers(knot)
        skipped = [linking for linking in negative | positive if linking > config.max_l]
        if skipped:
            notes.append(
                f"linking numbers above max_l = {config.max_l} not examined "
                f"(up to {max(skipped)})"
            )

        verdicts = [_classify(knot, index, config, notes) for index in sorted(indices)]
        report = AnalysisReport(knot.name, verdicts, notes)
        report.notes.extend(_survivor_notes(knot, report.surviving, config))
        trace.return_value = report
    return report
