from typing import Any, Callable, Dict, FrozenSet, Optional, Sequence

from ._numeric import enforce_int

TraceCallback = Callable[[str, Any], Any]

CHECKS = (
    "external",
    "alternating",
    "arf",
    "signature",
    "branched",
    "forced_v",
    "partner_v",
    "upsilon",
    "linking",
    "d_invariant",
)


class AnalysisConfig:
    """
    Settings shared by every analysis.

    Parameters:
        max_l: Candidate linking numbers above this are not examined.
        max_workers: The largest number of knots analysed at once.
        strict: Raise `ConventionError` when a known index is obstructed, rather
            than reporting it as a note.
        trace: A callback receiving `(event name, info)` for every traced step.
        checks: Restrict the pipeline to these obstructions. All by default.
    """

    def __init__(
        self,
        *,
        max_l: int = 16,
        max_workers: int = 4,
        strict: bool = True,
        trace: Optional[TraceCallback] = None,
        checks: Optional[Sequence[str]] = None,
    ) -> None:
        max_l = enforce_int(max_l, name="max_l")
        max_workers = enforce_int(max_workers, name="max_workers")
        if max_l < 1:
            raise ValueError(f"max_l must be positive, but got {max_l}.")
        if max_workers < 1:
            raise ValueError(f"max_workers must be positive, but got {max_workers}.")
        if checks is not None:
            for check in checks:
                if check not in CHECKS:
                    raise ValueError(
                        f"Unknown check {check!r}. Choose from {', '.join(CHECKS)}."
                    )
        self._max_l = max_l
        self._max_workers = max_workers
        self._strict = strict
        self._trace = trace
        self._checks: FrozenSet[str] = frozenset(CHECKS if checks is None else checks)

    @property
    def max_l(self) -> int:
        return self._max_l

    @property
    def max_workers(self) -> int:
        return self._max_workers

    @property
    def strict(self) -> bool:
        return self._strict

    @property
    def trace(self) -> Optional[TraceCallback]:
        return self._trace

    @property
    def checks(self) -> FrozenSet[str]:
        return self._checks

    def replace(self, **changes: Any) -> "AnalysisConfig":
        fields: Dict[str, Any] = {
            "max_l": self._max_l,
            "max_workers": self._max_workers,
            "strict": self._strict,
            "trace": self._trace,
            "checks": sorted(self._checks),
        }
        fields.update(changes)
        return AnalysisConfig(**fields)

    def enabled(self, check: str) -> bool:
        return check in self._checks

    def __repr__(self) -> str:
        return (
            f"<{self.__class__.__name__} [max_l={self._max_l}, "
            f"max_workers={self._max_workers}, strict={self._strict}]>"
        )
