from __future__ import annotations

import csv
import logging
import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

from .codec.codec import CodecParams, decode, encode
from .metrics import CSV_COLUMNS, QualityReport, summarize
from .records.signal import Signal, subtract_baseline
from .storage.container import EntropyMode, IndexMode, deserialize, serialize
from .tuner import TuneSpec, tune_corpus
from .workers import WorkerPool

logger = logging.getLogger(__name__)

TIMING_COLUMNS = ("t_compress_s", "t_recover_s")
BASELINE_COLUMN = "prd_b"


@dataclass(slots=True)
class BenchSettings:
    params: CodecParams
    tune: Optional[TuneSpec] = None
    entropy_mode: EntropyMode = EntropyMode.NONE
    index_mode: IndexMode = IndexMode.DELTA
    segment_length: int = 2000
    repeat: int = 1
    baseline: Optional[float] = None
    jobs: int = 1


@dataclass(slots=True)
class RecordResult:
    report: QualityReport
    params: CodecParams
    archive_bytes: int
    k: int
    t_compress_s: float
    t_recover_s: float


class BenchRunner:
    """Compresses and recovers each record, timing both directions separately."""

    def __init__(self, settings: BenchSettings) -> None:
        self.settings = settings
        self.params = settings.params

    def _prepared(self, raw: Signal) -> Signal:
        if self.settings.baseline is None:
            return raw
        return subtract_baseline(raw, self.settings.baseline)

    def run(self, records: Sequence[Signal]) -> list[RecordResult]:
        if self.settings.tune is not None:
            tuned = tune_corpus([self._prepared(s) for s in records], self.settings.tune, self.settings.jobs)
            self.params = tuned.params
            print(
                f"TUNED delta={tuned.params.delta:.6g} prd0={tuned.params.prd0_percent:.4f} "
                f"mean_prd={tuned.mean_prd:.4f} converged={tuned.converged}",
                flush=True,
            )
        pool = WorkerPool(self.settings.jobs, name="BenchWorker")
        results = pool.map(self._run_record, records)
        return sorted(results, key=lambda r: r.report.record_id)

    def _run_record(self, raw: Signal) -> RecordResult:
        signal = self._prepared(raw)
        repeat = max(1, self.settings.repeat)
        t_compress = 0.0
        t_recover = 0.0
        data = b""
        recovered = signal
        for _ in range(repeat):
            start = time.perf_counter()
            q = encode(signal, self.params)
            data = serialize(q, self.settings.entropy_mode, self.settings.index_mode)
            t_compress += time.perf_counter() - start

            start = time.perf_counter()
            recovered = decode(deserialize(data), like=signal)
            t_recover += time.perf_counter() - start

        restored = recovered.samples
        if self.settings.baseline is not None:
            restored = restored + self.settings.baseline
        report = QualityReport.from_signals(
            raw,
            restored,
            len(data),
            segment_length=self.settings.segment_length,
            baseline=self.settings.baseline,
        )
        logger.info(
            "Bench %s: prd=%.4f cr=%.2f k=%s bytes=%s",
            raw.record_id,
            report.prd,
            report.cr,
            q.k,
            len(data),
        )
        return RecordResult(
            report=report,
            params=self.params,
            archive_bytes=len(data),
            k=q.k,
            t_compress_s=t_compress / repeat,
            t_recover_s=t_recover / repeat,
        )


def csv_header(with_baseline: bool = False) -> list[str]:
    header = list(CSV_COLUMNS) + list(TIMING_COLUMNS)
    if with_baseline:
        header.append(BASELINE_COLUMN)
    return header


def _row(result: RecordResult, with_baseline: bool) -> list[str]:
    row = result.report.csv_row() + [f"{result.t_compress_s:.6f}", f"{result.t_recover_s:.6f}"]
    if with_baseline:
        row.append(f"{result.report.prd_baseline:.4f}")
    return row


def _footer(results: Sequence[RecordResult], with_baseline: bool) -> list[list[str]]:
    columns = [
        [r.report.local_mean for r in results],
        [r.report.local_std for r in results],
        [r.report.prd for r in results],
        [r.report.prdn for r in results],
        [r.report.cr for r in results],
        [r.report.qs for r in results],
        None,
        [r.t_compress_s for r in results],
        [r.t_recover_s for r in results],
    ]
    if with_baseline:
        columns.append([r.report.prd_baseline for r in results])

    mean_row, std_row = ["mean"], ["std"]
    for values in columns:
        if values is None:
            mean_row.append("")
            std_row.append("")
            continue
        mean, std = summarize([v for v in values if v is not None and math.isfinite(v)])
        mean_row.append(f"{mean:.4f}")
        std_row.append(f"{std:.4f}")
    return [mean_row, std_row]


def write_csv(results: Sequence[RecordResult], stream: TextIO, with_baseline: bool = False) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(csv_header(with_baseline))
    for result in results:
        writer.writerow(_row(result, with_baseline))
    if results:
        writer.writerows(_footer(results, with_baseline))
