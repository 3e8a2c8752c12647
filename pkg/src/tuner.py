from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .codec.codec import CodecMode, CodecParams, decode, encode
from .errors import UsageError
from .metrics import prd
from .records.signal import Signal
from .workers import WorkerPool

logger = logging.getLogger(__name__)

BRACKET_GROWTH = 10.0
BRACKET_EXPANSIONS = 3


@dataclass(slots=True, frozen=True)
class TuneSpec:
    target_prd: float
    mode: CodecMode = CodecMode.A
    prd0_fraction: float = 0.75
    tolerance: float = 0.5
    max_iters: int = 40
    delta_bracket: tuple[float, float] = (1e-3, 1e4)
    levels: int = 4

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", CodecMode(self.mode))
        lo, hi = self.delta_bracket
        if not self.target_prd > 0:
            raise UsageError(f"target PRD must be > 0, got {self.target_prd}")
        if not 0 <= self.prd0_fraction <= 1:
            raise UsageError(f"PRD0 fraction must be in [0, 1], got {self.prd0_fraction}")
        if not self.tolerance > 0:
            raise UsageError(f"tolerance must be > 0, got {self.tolerance}")
        if not 0 < lo < hi:
            raise UsageError(f"delta bracket must satisfy 0 < lo < hi, got {self.delta_bracket}")
        if self.max_iters < 1:
            raise UsageError(f"max_iters must be >= 1, got {self.max_iters}")

    @property
    def prd0_percent(self) -> float:
        return self.prd0_fraction * self.target_prd if self.mode is CodecMode.A else 0.0

    @property
    def tolerance_abs(self) -> float:
        return self.tolerance / 100.0 * self.target_prd

    def params(self, delta: float) -> CodecParams:
        return CodecParams(mode=self.mode, delta=delta, prd0_percent=self.prd0_percent, levels=self.levels)


@dataclass(slots=True, frozen=True)
class TuneResult:
    params: CodecParams
    achieved_prd: float
    converged: bool
    iterations: int


@dataclass(slots=True, frozen=True)
class CorpusTuneResult:
    params: CodecParams
    mean_prd: float
    record_prds: tuple[float, ...]
    converged: bool
    iterations: int
    record_ids: tuple[str, ...] = field(default=())


def achieved_prd(s: Signal, params: CodecParams) -> float:
    return prd(s, decode(encode(s, params), like=s))


class _DeltaSearch:
    """Geometric bisection of delta on an objective assumed non-decreasing in delta."""

    def __init__(self, spec: TuneSpec, objective: Callable[[float], float], label: str) -> None:
        self.spec = spec
        self.objective = objective
        self.label = label
        self.evaluations = 0
        self.best: Optional[tuple[float, float]] = None

    def _eval(self, delta: float) -> float:
        value = self.objective(delta)
        self.evaluations += 1
        if self.best is None or abs(value - self.spec.target_prd) < abs(self.best[1] - self.spec.target_prd):
            self.best = (delta, value)
        logger.debug("%s: delta=%.6g prd=%.6f", self.label, delta, value)
        return value

    def _done(self, value: float) -> bool:
        return abs(value - self.spec.target_prd) <= self.spec.tolerance_abs

    def run(self) -> tuple[float, float, bool]:
        target = self.spec.target_prd
        lo, hi = self.spec.delta_bracket
        prd_lo, prd_hi = self._eval(lo), self._eval(hi)

        for _ in range(BRACKET_EXPANSIONS):
            if prd_hi >= target:
                break
            lo, prd_lo = hi, prd_hi
            hi *= BRACKET_GROWTH
            prd_hi = self._eval(hi)
        for _ in range(BRACKET_EXPANSIONS):
            if prd_lo <= target:
                break
            hi, prd_hi = lo, prd_lo
            lo /= BRACKET_GROWTH
            prd_lo = self._eval(lo)

        if prd_hi < target or prd_lo > target:
            delta, value = self.best  # type: ignore[misc]
            logger.warning(
                "%s: target PRD %.4f is outside the reachable range [%.4f, %.4f]; best effort delta=%.6g",
                self.label,
                target,
                prd_lo,
                prd_hi,
                delta,
            )
            return delta, value, self._done(value)

        for value in (prd_lo, prd_hi):
            if self._done(value):
                delta, best_value = self.best  # type: ignore[misc]
                return delta, best_value, True

        for _ in range(self.spec.max_iters):
            mid = math.sqrt(lo * hi)
            if not lo < mid < hi:
                break
            value = self._eval(mid)
            if self._done(value):
                return mid, value, True
            if value < target:
                lo = mid
            else:
                hi = mid

        delta, value = self.best  # type: ignore[misc]
        logger.warning(
            "%s: no delta within %.3f%% of PRD %.4f after %s iterations; nearest delta=%.6g gives %.4f",
            self.label,
            self.spec.tolerance,
            target,
            self.spec.max_iters,
            delta,
            value,
        )
        return delta, value, False


def tune_record(s: Signal, spec: TuneSpec) -> TuneResult:
    search = _DeltaSearch(spec, lambda delta: achieved_prd(s, spec.params(delta)), s.record_id or "record")
    delta, value, converged = search.run()
    logger.info(
        "Tuned %s: delta=%.6g prd0=%.4f prd=%.4f (%s evaluations)",
        s.record_id or "record",
        delta,
        spec.prd0_percent,
        value,
        search.evaluations,
    )
    return TuneResult(params=spec.params(delta), achieved_prd=value, converged=converged, iterations=search.evaluations)


def corpus_prds(records: Sequence[Signal], params: CodecParams, jobs: int = 1) -> list[float]:
    return WorkerPool(jobs, name="TuneWorker").map(lambda s: achieved_prd(s, params), records)


def tune_corpus(records: Sequence[Signal], spec: TuneSpec, jobs: int = 1) -> CorpusTuneResult:
    """One shared delta (and PRD0) so the unweighted mean record PRD meets the target."""
    if not records:
        raise UsageError("tune_corpus needs at least one record")
    search = _DeltaSearch(
        spec,
        lambda delta: float(np.mean(corpus_prds(records, spec.params(delta), jobs))),
        f"corpus[{len(records)}]",
    )
    delta, mean_value, converged = search.run()
    params = spec.params(delta)
    per_record = corpus_prds(records, params, jobs)
    logger.info("Tuned corpus of %s: delta=%.6g mean prd=%.4f", len(records), delta, mean_value)
    return CorpusTuneResult(
        params=params,
        mean_prd=mean_value,
        record_prds=tuple(per_record),
        converged=converged,
        iterations=search.evaluations,
        record_ids=tuple(s.record_id for s in records),
    )


def sweep_prd0(
    records: Sequence[Signal],
    target_prd: float,
    fractions: Sequence[float],
    base: Optional[TuneSpec] = None,
    jobs: int = 1,
) -> list[CorpusTuneResult]:
    """Re-tune the shared delta for each PRD0 fraction at a fixed mean PRD."""
    base = base or TuneSpec(target_prd=target_prd)
    results = []
    for fraction in fractions:
        spec = TuneSpec(
            target_prd=target_prd,
            mode=CodecMode.A,
            prd0_fraction=fraction,
            tolerance=base.tolerance,
            max_iters=base.max_iters,
            delta_bracket=base.delta_bracket,
            levels=base.levels,
        )
        results.append(tune_corpus(records, spec, jobs))
    return results
