"""Eigenvalue multisets compared at a tolerance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .spectral import cluster_values, spectral_tol


@dataclass(frozen=True)
class EigMultiset:
    clusters: tuple[tuple[float, int], ...]

    @classmethod
    def from_values(cls, values: Iterable[float], tol: float | None = None) -> EigMultiset:
        return cls(tuple(cluster_values(list(values), tol)))

    @classmethod
    def of(cls, counts: Mapping[float, int]) -> EigMultiset:
        """Exact multiset, e.g. ``EigMultiset.of({0: 1, 4: 3, 6: 2})``."""
        items = sorted((float(v), int(m)) for v, m in counts.items() if m)
        if any(m < 0 for _, m in items):
            raise ValueError("multiplicities must be non-negative")
        return cls(tuple(items))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.clusters)

    def values(self) -> np.ndarray:
        return np.array([v for v, m in self.clusters for _ in range(m)], dtype=float)

    def tol(self) -> float:
        return spectral_tol(self.values())

    def matches(self, other: EigMultiset | Iterable[float], tol: float | None = None) -> bool:
        a = self.values()
        b = _as_values(other)
        if len(a) != len(b):
            return False
        if tol is None:
            tol = max(spectral_tol(a), spectral_tol(b))
        return bool(np.all(np.abs(np.sort(a) - np.sort(b)) <= tol))

    def difference(
        self, other: EigMultiset | Iterable[float], tol: float | None = None
    ) -> tuple[EigMultiset, EigMultiset]:
        """Return (self minus other, elements of other with no partner in self)."""
        a = np.sort(self.values())
        b = np.sort(_as_values(other))
        if tol is None:
            tol = max(spectral_tol(a), spectral_tol(b))
        used = np.zeros(len(a), dtype=bool)
        missing = []
        i = 0
        for x in b:
            while i < len(a) and (used[i] or a[i] < x - tol):
                i += 1
            if i < len(a) and abs(a[i] - x) <= tol:
                used[i] = True
                i += 1
            else:
                missing.append(x)
        return EigMultiset.from_values(a[~used], tol), EigMultiset.from_values(missing, tol)

    def contains(self, other: EigMultiset | Iterable[float], tol: float | None = None) -> bool:
        return self.difference(other, tol)[1].total == 0

    def to_json(self) -> list[dict]:
        return [{"value": v, "multiplicity": m} for v, m in self.clusters]

    def __str__(self) -> str:
        parts = []
        for v, m in self.clusters:
            r = round(v)
            txt = str(int(r)) if abs(v - r) < 1e-6 else f"{v:.6g}"
            parts.append(txt if m == 1 else f"{txt}^{m}")
        return "{" + ", ".join(parts) + "}"


def _as_values(x) -> np.ndarray:
    if isinstance(x, EigMultiset):
        return x.values()
    return np.asarray(list(x), dtype=float)
