from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

try:
    from dotenv import load_dotenv
except Exception:  # pragma: no cover
    load_dotenv = None


def _env_str(key: str, default: str) -> str:
    return os.getenv(key, default).strip() or default


def _env_int(key: str, default: int) -> int:
    raw = _env_str(key, str(default))
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{key} must be an integer, got {raw!r}") from None


def _env_float(key: str, default: float) -> float:
    raw = _env_str(key, repr(default))
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{key} must be a number, got {raw!r}") from None


def _env_choice(key: str, default: str, choices: tuple[str, ...]) -> str:
    value = _env_str(key, default).lower()
    if value not in choices:
        raise ValueError(f"{key} must be one of {', '.join(choices)}, got {value!r}")
    return value


@dataclass(slots=True)
class AppConfig:
    log_level: str = "INFO"
    levels: int = 4
    mode: str = "a"
    delta: float = 35.0
    prd0_percent: float = 0.4217
    adc_bits: int = 11
    sample_rate_hz: float = 360.0
    channel: int = 0
    segment_length: int = 2000
    jobs: int = 1
    entropy: str = "none"
    index: str = "delta"
    data_dir: Optional[Path] = None

    @classmethod
    def load(cls, project_root: Path) -> "AppConfig":
        env_path = project_root / ".env"
        if load_dotenv is not None and env_path.exists():
            load_dotenv(env_path)

        data_dir = os.getenv("WECG_DATA_DIR", "").strip()
        config = cls(
            log_level=_env_str("LOG_LEVEL", "INFO"),
            levels=_env_int("WECG_LEVELS", 4),
            mode=_env_choice("WECG_MODE", "a", ("a", "b")),
            delta=_env_float("WECG_DELTA", 35.0),
            prd0_percent=_env_float("WECG_PRD0", 0.4217),
            adc_bits=_env_int("WECG_ADC_BITS", 11),
            sample_rate_hz=_env_float("WECG_SAMPLE_RATE", 360.0),
            channel=_env_int("WECG_CHANNEL", 0),
            segment_length=_env_int("WECG_SEGMENT_LENGTH", 2000),
            jobs=_env_int("WECG_JOBS", 1),
            entropy=_env_choice("WECG_ENTROPY", "none", ("none", "huffman")),
            index=_env_choice("WECG_INDEX", "delta", ("delta", "rl")),
            data_dir=Path(data_dir) if data_dir else None,
        )
        config.validate()
        return config

    def validate(self) -> None:
        if self.levels < 1:
            raise ValueError("WECG_LEVELS must be >= 1")
        if self.delta <= 0:
            raise ValueError("WECG_DELTA must be > 0")
        if self.prd0_percent < 0:
            raise ValueError("WECG_PRD0 must be >= 0")
        if not 8 <= self.adc_bits <= 32:
            raise ValueError("WECG_ADC_BITS must be in [8, 32]")
        if self.sample_rate_hz <= 0:
            raise ValueError("WECG_SAMPLE_RATE must be > 0")
        if self.channel not in (0, 1):
            raise ValueError("WECG_CHANNEL must be 0 or 1")
        if self.segment_length < 1:
            raise ValueError("WECG_SEGMENT_LENGTH must be >= 1")
        if self.jobs < 1:
            raise ValueError("WECG_JOBS must be >= 1")
