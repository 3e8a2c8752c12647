from __future__ import annotations

import logging
import queue
import threading
from typing import Any, Callable, Iterable, Optional, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_STOP = object()


class WorkerPool:
    """Runs a function over items on named worker threads, keeping input order."""

    def __init__(self, jobs: int = 1, name: str = "Worker") -> None:
        self.jobs = max(1, int(jobs))
        self.name = name

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        work = list(items)
        if self.jobs == 1 or len(work) <= 1:
            return [fn(item) for item in work]

        tasks: "queue.Queue[Any]" = queue.Queue()
        results: "queue.Queue[tuple[int, bool, Any]]" = queue.Queue()
        stop = threading.Event()

        def _run() -> None:
            while True:
                task = tasks.get()
                if task is _STOP:
                    return
                idx, item = task
                if stop.is_set():
                    results.put((idx, False, None))
                    continue
                try:
                    results.put((idx, True, fn(item)))
                except BaseException as exc:
                    stop.set()
                    results.put((idx, False, exc))

        n_threads = min(self.jobs, len(work))
        threads = [
            threading.Thread(target=_run, name=f"{self.name}-{i}", daemon=True)
            for i in range(n_threads)
        ]
        for idx, item in enumerate(work):
            tasks.put((idx, item))
        for _ in threads:
            tasks.put(_STOP)
        for thread in threads:
            thread.start()

        out: list[Optional[R]] = [None] * len(work)
        error: Optional[BaseException] = None
        for _ in range(len(work)):
            idx, ok, value = results.get()
            if ok:
                out[idx] = value
            elif value is not None and error is None:
                error = value
        for thread in threads:
            thread.join(timeout=2.0)

        if error is not None:
            logger.debug("%s pool stopped on error: %s", self.name, error)
            raise error
        return out  # type: ignore[return-value]
