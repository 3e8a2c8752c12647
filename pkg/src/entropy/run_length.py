from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(slots=True, frozen=True, eq=False)
class RunLengthStream:
    """Nonzero-position flags over 1..n as alternating runs, the first run being zeros.

    Only the leading zero run may be empty, so the literal of every run is
    implied by its position.
    """

    n: int
    runs: np.ndarray

    def __post_init__(self) -> None:
        runs = np.asarray(self.runs, dtype=np.int64).reshape(-1)
        if runs.size == 0 or runs.min() < 0 or (runs.size > 1 and runs[1:].min() < 1):
            raise ValueError("runs must be non-empty with only the leading run allowed to be zero")
        if int(runs.sum()) != self.n:
            raise ValueError(f"runs cover {int(runs.sum())} positions, expected {self.n}")
        object.__setattr__(self, "runs", runs)

    @property
    def k(self) -> int:
        return int(self.runs[1::2].sum())

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(length), i % 2) for i, length in enumerate(self.runs) if length > 0]

    def flags(self) -> np.ndarray:
        literals = (np.arange(self.runs.size) % 2).astype(np.uint8)
        return np.repeat(literals, self.runs)


def run_length_encode_flags(indices: np.ndarray, n: int) -> RunLengthStream:
    indices = np.asarray(indices, dtype=np.int64).reshape(-1)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if indices.size:
        if indices[0] < 1 or indices[-1] > n or np.any(np.diff(indices) < 1):
            raise ValueError("indices must be strictly increasing within 1..n")
    flags = np.zeros(n, dtype=np.int8)
    flags[indices - 1] = 1
    edges = np.flatnonzero(np.diff(flags)) + 1
    runs = np.diff(np.concatenate([[0], edges, [n]]))
    if flags[0] == 1:
        runs = np.concatenate([[0], runs])
    return RunLengthStream(n=n, runs=runs)


def run_length_decode_flags(stream: RunLengthStream) -> np.ndarray:
    return np.flatnonzero(stream.flags()) + 1
