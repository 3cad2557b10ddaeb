import inspect
import logging
from types import TracebackType
from typing import Any, Dict, Optional, Type

from ._config import AnalysisConfig


class Trace:
    def __init__(
        self,
        name: str,
        logger: logging.Logger,
        config: Optional[AnalysisConfig] = None,
        kwargs: Optional[Dict[str, Any]] = None,
    ) -> None:
        self.name = name
        self.logger = logger
        self.trace_callback = None if config is None else config.trace
        self.debug = self.logger.isEnabledFor(logging.DEBUG)
        self.kwargs = kwargs or {}
        self.return_value: Any = None
        self.should_trace = self.debug or self.trace_callback is not None
        self.prefix = self.logger.name.split(".")[-1]

    def _log(self, name: str, info: Dict[str, Any]) -> None:
        if not self.debug:
            return
        if not info or "return_value" in info and info["return_value"] is None:
            message = name
        else:
            args = " ".join([f"{key}={value!r}" for key, value in info.items()])
            message = f"{name} {args}"
        self.logger.debug(message)

    def trace(self, name: str, info: Dict[str, Any]) -> None:
        if self.trace_callback is not None:
            ret = self.trace_callback(f"{self.prefix}.{name}", info)
            if inspect.iscoroutine(ret):
                ret.close()
                raise TypeError(
                    "If you are using a synchronous interface, "
                    "the `trace` callback should be a normal function "
                    "instead of an asynchronous function."
                )
        self._log(name, info)

    def __enter__(self) -> "Trace":
        if self.should_trace:
            self.trace(f"{self.name}.started", self.kwargs)
        return self

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]] = None,
        exc_value: Optional[BaseException] = None,
        traceback: Optional[TracebackType] = None,
    ) -> None:
        if self.should_trace:
            if exc_value is None:
                self.trace(f"{self.name}.complete", {"return_value": self.return_value})
            else:
                self.trace(f"{self.name}.failed", {"exception": exc_value})

    async def atrace(self, name: str, info: Dict[str, Any]) -> None:
        if self.trace_callback is not None:
            coro = self.trace_callback(f"{self.prefix}.{name}", info)
            if not inspect.iscoroutine(coro):
                raise TypeError(
                    "If you're using an asynchronous interface, "
                    "the `trace` callback should be an asynchronous function "
                    "rather than a normal function."
                )
            await coro
        self._log(name, info)

    async def __aenter__(self) -> "Trace":
        if self.should_trace:
            await self.atrace(f"{self.name}.started", self.kwargs)
        return self

    async def __aexit__(
        self,
        exc_type: Optional[Type[BaseException]] = None,
        exc_value: Optional[BaseException] = None,
        traceback: Optional[TracebackType] = None,
    ) -> None:
        if self.should_trace:
            if exc_value is None:
                info = {"return_value": self.return_value}
                await self.atrace(f"{self.name}.complete", info)
            else:
                await self.atrace(f"{self.name}.failed", {"exception": exc_value})
