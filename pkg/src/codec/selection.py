from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..wavelet.dwt import WaveletCoeffs


@dataclass(slots=True, frozen=True, eq=False)
class SparseCoeffs:
    """Selected coefficient values with their 1-based positions in the flat vector."""

    values: np.ndarray
    indices: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        indices = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        if values.size != indices.size:
            raise ValueError(f"{values.size} values but {indices.size} indices")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "indices", indices)

    @property
    def k(self) -> int:
        return int(self.values.size)


def select_largest(w: Union[WaveletCoeffs, np.ndarray], tol: float) -> SparseCoeffs:
    """Drop the longest run of smallest-magnitude coefficients whose energy stays below tol**2.

    Coefficients come back in ascending magnitude order; ties keep their
    original order.
    """
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    coeffs = w.coeffs if isinstance(w, WaveletCoeffs) else np.asarray(w, dtype=np.float64).reshape(-1)
    order = np.argsort(np.abs(coeffs), kind="stable")
    energy = np.cumsum(coeffs[order] ** 2)
    first_kept = int(np.searchsorted(energy, tol * tol, side="left"))
    kept = order[first_kept:]
    return SparseCoeffs(values=coeffs[kept], indices=kept + 1)


def discarded_energy(w: Union[WaveletCoeffs, np.ndarray], selected: SparseCoeffs) -> float:
    coeffs = w.coeffs if isinstance(w, WaveletCoeffs) else np.asarray(w, dtype=np.float64).reshape(-1)
    return float(np.sum(coeffs ** 2) - np.sum(selected.values ** 2))
