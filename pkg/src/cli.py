from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Optional, Sequence

from .bench import BenchRunner, BenchSettings, write_csv
from .codec.codec import CodecMode, CodecParams, decode, encode
from .config import AppConfig
from .errors import UsageError, WecgError
from .metrics import QualityReport, compression_ratio
from .records.signal import Signal, subtract_baseline
from .records.signal_io import read_record, write_text
from .storage.container import EntropyMode, IndexMode, load_archive, save_archive
from .tuner import TuneSpec, sweep_prd0, tune_corpus, tune_record

try:
    from colorama import Fore, Style, init as colorama_init
except Exception:  # pragma: no cover
    Fore = None
    Style = None
    colorama_init = None


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_CORRUPT = 4


def _paint(text: str, color: str) -> str:
    if Fore is None or Style is None:
        return text
    return f"{getattr(Fore, color)}{text}{Style.RESET_ALL}"


def _status(text: str) -> None:
    print(_paint(text, "GREEN"), flush=True)


def _fail(text: str) -> None:
    print(_paint(f"ERROR {text}", "RED"), file=sys.stderr, flush=True)


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _non_negative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _adc_bits(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 8 <= value <= 32:
        raise argparse.ArgumentTypeError(f"must be in [8, 32], got {text}")
    return value


def _fractions(text: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if not values or any(not 0 <= v <= 1 for v in values):
        raise argparse.ArgumentTypeError("fractions must lie in [0, 1]")
    return values


def _add_input_options(p: argparse.ArgumentParser, config: AppConfig) -> None:
    p.add_argument("--channel", type=int, choices=(0, 1), default=config.channel, help="format-212 channel")
    p.add_argument("--samples", type=_positive_int, default=None, help="samples to read (default: all)")
    p.add_argument("--baseline", type=float, default=None, help="baseline subtracted before coding")
    p.add_argument("--fs", type=_positive_float, default=config.sample_rate_hz, help="sample rate in Hz")
    p.add_argument("--adc-bits", type=_adc_bits, default=config.adc_bits, help="bits per raw sample")


def _add_codec_options(p: argparse.ArgumentParser, config: AppConfig) -> None:
    p.add_argument("--mode", choices=("a", "b"), default=config.mode)
    p.add_argument("--delta", type=_positive_float, default=config.delta, help="quantization step")
    p.add_argument("--prd0", type=_non_negative_float, default=config.prd0_percent, help="mode a PRD0 in percent")
    p.add_argument("--levels", type=_positive_int, default=config.levels)


def _add_storage_options(p: argparse.ArgumentParser, config: AppConfig) -> None:
    p.add_argument("--entropy", choices=("none", "huffman"), default=config.entropy)
    p.add_argument("--index", choices=("delta", "rl"), default=config.index)


def _add_tune_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prd0-fraction", type=float, default=0.75, help="PRD0 as a fraction of the target")
    p.add_argument("--tolerance", type=_positive_float, default=0.5, help="allowed error, percent of target")
    p.add_argument("--max-iters", type=_positive_int, default=40)


def build_parser(config: AppConfig) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wecg", description="Wavelet ECG compression codec")
    parser.add_argument("--log-level", default=None, help=f"logging level (default {config.log_level})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="compress a record into a .wecg archive")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--out", type=Path, default=None)
    _add_input_options(p, config)
    _add_codec_options(p, config)
    _add_storage_options(p, config)
    p.set_defaults(handler=cmd_compress)

    p = sub.add_parser("decompress", help="recover samples from an archive as text")
    p.add_argument("archive", type=Path)
    p.add_argument("-o", "--out", type=Path, default=None)
    p.add_argument("--baseline", type=float, default=None, help="baseline added back after decoding")
    p.add_argument("--fs", type=_positive_float, default=config.sample_rate_hz)
    p.add_argument("--adc-bits", type=_adc_bits, default=config.adc_bits)
    p.set_defaults(handler=cmd_decompress)

    p = sub.add_parser("evaluate", help="quality report of an archive against its original")
    p.add_argument("original", type=Path)
    p.add_argument("archive", type=Path)
    p.add_argument("--segment-length", type=_positive_int, default=config.segment_length)
    p.add_argument("--csv", action="store_true", help="print a CSV row instead of key=value lines")
    _add_input_options(p, config)
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("tune", help="find the delta that meets a target (mean) PRD")
    p.add_argument("records", type=Path, nargs="+")
    p.add_argument("--target-prd", type=_positive_float, required=True)
    p.add_argument("--mode", choices=("a", "b"), default=config.mode)
    p.add_argument("--levels", type=_positive_int, default=config.levels)
    p.add_argument("--jobs", type=_positive_int, default=config.jobs)
    p.add_argument("--prd0-fractions", type=_fractions, default=None, help="sweep PRD0, e.g. 0.4,0.5,0.6")
    _add_tune_options(p)
    _add_input_options(p, config)
    p.set_defaults(handler=cmd_tune)

    p = sub.add_parser("bench", help="per-record benchmark rows as CSV")
    p.add_argument("records", type=Path, nargs="+")
    p.add_argument("--out", type=Path, default=None, help="CSV file (default: stdout)")
    p.add_argument("--target-prd", type=_positive_float, default=None, help="tune a shared delta first")
    p.add_argument("--repeat", type=_positive_int, default=1, help="runs averaged for timings")
    p.add_argument("--jobs", type=_positive_int, default=config.jobs)
    p.add_argument("--segment-length", type=_positive_int, default=config.segment_length)
    _add_tune_options(p)
    _add_input_options(p, config)
    _add_codec_options(p, config)
    _add_storage_options(p, config)
    p.set_defaults(handler=cmd_bench)
    return parser


def _read(path: Path, args: argparse.Namespace) -> Signal:
    return read_record(
        path,
        channel=args.channel,
        n_samples=args.samples,
        sample_rate_hz=args.fs,
        adc_bits=args.adc_bits,
    )


def _params(args: argparse.Namespace) -> CodecParams:
    return CodecParams(mode=CodecMode(args.mode), delta=args.delta, prd0_percent=args.prd0, levels=args.levels)


def _tune_spec(args: argparse.Namespace, fraction: Optional[float] = None) -> TuneSpec:
    return TuneSpec(
        target_prd=args.target_prd,
        mode=CodecMode(args.mode),
        prd0_fraction=args.prd0_fraction if fraction is None else fraction,
        tolerance=args.tolerance,
        max_iters=args.max_iters,
        levels=args.levels,
    )


def cmd_compress(args: argparse.Namespace) -> int:
    signal = _read(args.input, args)
    if args.baseline is not None:
        signal = subtract_baseline(signal, args.baseline)
    start = time.perf_counter()
    q = encode(signal, _params(args))
    out = args.out or args.input.with_suffix(".wecg")
    size = save_archive(out, q, EntropyMode(args.entropy), IndexMode(args.index))
    elapsed = time.perf_counter() - start
    cr = compression_ratio(len(signal), signal.adc_bits, size)
    logger.info("Compressed %s -> %s: k=%s bytes=%s", args.input, out, q.k, size)
    _status(f"WROTE {out} k={q.k} bytes={size} cr={cr:.2f} t={elapsed:.3f}s")
    return EXIT_OK


def cmd_decompress(args: argparse.Namespace) -> int:
    q = load_archive(args.archive)
    signal = decode(q, sample_rate_hz=args.fs, adc_bits=args.adc_bits, record_id=args.archive.stem)
    if args.baseline is not None:
        signal = subtract_baseline(signal, -args.baseline)
    text = write_text(signal)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
        _status(f"WROTE {args.out} samples={len(signal)}")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    original = _read(args.original, args)
    q = load_archive(args.archive)
    recovered = decode(q, like=original).samples
    if args.baseline is not None:
        recovered = recovered + args.baseline
    report = QualityReport.from_signals(
        original,
        recovered,
        args.archive.stat().st_size,
        segment_length=args.segment_length,
        baseline=args.baseline,
    )
    print(",".join(report.csv_row()) if args.csv else report.to_key_value(), flush=True)
    return EXIT_OK


def _prepared_records(args: argparse.Namespace) -> list[Signal]:
    records = [_read(path, args) for path in args.records]
    if args.baseline is not None:
        records = [subtract_baseline(s, args.baseline) for s in records]
    return records


def cmd_tune(args: argparse.Namespace) -> int:
    records = _prepared_records(args)
    if args.prd0_fractions:
        if args.mode != "a":
            raise UsageError("--prd0-fractions needs --mode a")
        results = sweep_prd0(records, args.target_prd, args.prd0_fractions, base=_tune_spec(args), jobs=args.jobs)
        print("prd0,delta,mean_prd,converged", flush=True)
        for result in results:
            print(
                f"{result.params.prd0_percent:.4f},{result.params.delta:.6g},"
                f"{result.mean_prd:.4f},{int(result.converged)}",
                flush=True,
            )
        return EXIT_OK

    spec = _tune_spec(args)
    if len(records) == 1:
        single = tune_record(records[0], spec)
        print(
            f"delta={single.params.delta:.6g}\nprd0={single.params.prd0_percent:.6f}\n"
            f"prd={single.achieved_prd:.6f}\nconverged={int(single.converged)}",
            flush=True,
        )
        return EXIT_OK

    result = tune_corpus(records, spec, jobs=args.jobs)
    print(
        f"delta={result.params.delta:.6g}\nprd0={result.params.prd0_percent:.6f}\n"
        f"mean_prd={result.mean_prd:.6f}\nconverged={int(result.converged)}",
        flush=True,
    )
    for record_id, value in zip(result.record_ids, result.record_prds):
        print(f"{record_id}={value:.6f}", flush=True)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    records = [_read(path, args) for path in args.records]
    settings = BenchSettings(
        params=_params(args),
        tune=_tune_spec(args) if args.target_prd is not None else None,
        entropy_mode=EntropyMode(args.entropy),
        index_mode=IndexMode(args.index),
        segment_length=args.segment_length,
        repeat=args.repeat,
        baseline=args.baseline,
        jobs=args.jobs,
    )
    results = BenchRunner(settings).run(records)
    with_baseline = args.baseline is not None
    if args.out is None:
        write_csv(results, sys.stdout, with_baseline)
    else:
        with args.out.open("w", encoding="utf-8", newline="") as fh:
            write_csv(results, fh, with_baseline)
        _status(f"WROTE {args.out} records={len(results)}")
    return EXIT_OK


def run(args: argparse.Namespace) -> int:
    if colorama_init is not None:
        colorama_init()
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except WecgError as exc:
        _fail(str(exc))
        return exc.exit_code
    except OSError as exc:
        _fail(f"{exc.filename or ''} {exc.strerror or exc}".strip())
        return EXIT_IO
    except Exception:
        logger.exception("Fatal error")
        return 1


def parse(argv: Optional[Sequence[str]], config: AppConfig) -> argparse.Namespace:
    return build_parser(config).parse_args(argv)
