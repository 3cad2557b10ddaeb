import logging
from typing import Awaitable, Callable, List, Optional, Sequence

import anyio
import anyio.to_thread

from ._config import AnalysisConfig
from ._engine import AnalysisReport, analyze
from ._exceptions import UntwistError
from ._knots import KnotRecord
from ._trace import Trace

logger = logging.getLogger("untwist.engine")

Analyzer = Callable[[KnotRecord], Awaitable[AnalysisReport]]


async def _gather(
    records: Sequence[KnotRecord], analyzer: Analyzer
) -> List[AnalysisReport]:
    # Each task writes into its own slot, so the result order never depends on
    # which analysis finishes first.
    reports: List[Optional[AnalysisReport]] = [None] * len(records)
    errors: List[Optional[UntwistError]] = [None] * len(records)

    async def run(position: int, record: KnotRecord) -> None:
        try:
            reports[position] = await analyzer(record)
        except UntwistError as exc:
            errors[position] = exc

    async with anyio.create_task_group() as task_group:
        for position, record in enumerate(records):
            task_group.start_soon(run, position, record)

    for error in errors:
        if error is not None:
            raise error
    return [report for report in reports if report is not None]


async def analyze_many_async(
    records: Sequence[KnotRecord], config: Optional[AnalysisConfig] = None
) -> List[AnalysisReport]:
    """
    Analyse several knots concurrently, at most `config.max_workers` at once.

    The `trace` callback, if any, must be async and receives one
    `engine.knot.*` event pair per knot.
    """
    config = AnalysisConfig() if config is None else config
    limiter = anyio.CapacityLimiter(config.max_workers)
    # Worker threads cannot await the callback.
    worker_config = config.replace(trace=None)

    async def analyzer(record: KnotRecord) -> AnalysisReport:
        async with Trace("knot", logger, config, {"knot": record.name}) as trace:
            report = await anyio.to_thread.run_sync(
                analyze, record, worker_config, limiter=limiter
            )
            trace.return_value = report
        return report

    return await _gather(records, analyzer)


def analyze_many(
    records: Sequence[KnotRecord], config: Optional[AnalysisConfig] = None
) -> List[AnalysisReport]:
    """
    Analyse several knots in worker threads, returning the reports in input
    order.
    """
    config = AnalysisConfig() if config is None else config

    async def main() -> List[AnalysisReport]:
        limiter = anyio.CapacityLimiter(config.max_workers)

        async def analyzer(record: KnotRecord) -> AnalysisReport:
            return await anyio.to_thread.run_sync(
                analyze, record, config, limiter=limiter
            )

        return await _gather(records, analyzer)

    return anyio.run(main)
