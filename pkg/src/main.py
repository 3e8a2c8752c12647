from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .cli import EXIT_USAGE, parse, run
from .config import AppConfig


def _setup_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    project_root = Path(__file__).resolve().parents[1]
    try:
        config = AppConfig.load(project_root)
    except ValueError as exc:
        print(f"ERROR config: {exc}", file=sys.stderr, flush=True)
        return EXIT_USAGE

    try:
        args = parse(argv, config)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    _setup_logging(args.log_level or config.log_level)
    try:
        return run(args)
    except KeyboardInterrupt:
        print("\nInterrupted", flush=True)
        return 130


if __name__ == "__main__":
    sys.exit(main())
