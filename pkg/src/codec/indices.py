from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..errors import CorruptArchiveError


class IndexOrdering(NamedTuple):
    deltas: np.ndarray
    order: np.ndarray


def drop_zeros(q: np.ndarray, indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q = np.asarray(q, dtype=np.int64)
    indices = np.asarray(indices, dtype=np.int64)
    if q.shape != indices.shape:
        raise ValueError(f"{q.size} quantized values but {indices.size} indices")
    keep = q != 0
    return q[keep], indices[keep]


def delta_encode_indices(indices: np.ndarray) -> IndexOrdering:
    """Sort indices ascending and store the first plus consecutive gaps.

    `order` is the 0-based permutation that sorts the input; apply it to the
    companion value and sign arrays.
    """
    indices = np.asarray(indices, dtype=np.int64).reshape(-1)
    order = np.argsort(indices, kind="stable")
    ordered = indices[order]
    if ordered.size and ordered[0] < 1:
        raise ValueError(f"indices are 1-based, got {ordered[0]}")
    deltas = np.diff(ordered, prepend=0)
    if ordered.size > 1 and np.any(deltas[1:] == 0):
        raise ValueError("duplicate indices cannot be delta coded")
    return IndexOrdering(deltas=deltas, order=order)


def delta_decode_indices(deltas: np.ndarray) -> np.ndarray:
    # Recovery is a running sum of the gaps, not a sum of adjacent gaps.
    deltas = np.asarray(deltas, dtype=np.int64).reshape(-1)
    if deltas.size and deltas.min() < 1:
        raise CorruptArchiveError("index gaps must be >= 1")
    return np.cumsum(deltas)
