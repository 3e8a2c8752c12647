from __future__ import annotations

import threading
import time

import pytest

from src.workers import WorkerPool


class TestWorkerPool:
    def test_single_job_runs_inline(self):
        names = WorkerPool(1).map(lambda _: threading.current_thread().name, range(3))
        assert names == [threading.current_thread().name] * 3

    def test_keeps_input_order(self):
        def slow_square(x: int) -> int:
            time.sleep(0.001 * (10 - x))
            return x * x

        assert WorkerPool(4, name="Sq").map(slow_square, range(10)) == [x * x for x in range(10)]

    def test_uses_named_threads(self):
        names = WorkerPool(3, name="Bench").map(lambda _: threading.current_thread().name, range(6))
        assert all(name.startswith("Bench-") for name in names)

    def test_first_error_is_raised(self):
        def fail_on_three(x: int) -> int:
            if x == 3:
                raise ValueError("three")
            return x

        with pytest.raises(ValueError, match="three"):
            WorkerPool(2).map(fail_on_three, range(8))

    def test_empty_input(self):
        assert WorkerPool(4).map(lambda x: x, []) == []

    def test_jobs_clamped(self):
        assert WorkerPool(0).jobs == 1
