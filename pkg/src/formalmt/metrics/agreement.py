"""Krippendorff's alpha for nominal labels."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Sequence

import numpy as np

from .._accel import coincidence_matrix as _coincidence
from ..errors import InsufficientData


@dataclass(frozen=True)
class RatingsMatrix:
    """Units x raters grid of nominal labels; ``None`` marks a missing rating."""

    rows: tuple[tuple[Hashable | None, ...], ...]

    def __post_init__(self):
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("all units need the same number of rater columns")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Hashable | None]]) -> "RatingsMatrix":
        return cls(tuple(tuple(None if v in ("", None) else v for v in r) for r in rows))

    @classmethod
    def from_columns(cls, *raters: Sequence[Hashable | None]) -> "RatingsMatrix":
        return cls.from_rows(list(zip(*raters)))

    @property
    def n_raters(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def labels(self) -> list:
        found = {v for row in self.rows for v in row if v is not None}
        return sorted(found, key=repr)

    def encode(self) -> tuple[np.ndarray, list]:
        labels = self.labels()
        index = {lab: i for i, lab in enumerate(labels)}
        codes = np.full((len(self.rows), self.n_raters), -1, dtype=np.int64)
        for u, row in enumerate(self.rows):
            for r, v in enumerate(row):
                if v is not None:
                    codes[u, r] = index[v]
        return codes, labels


def read_ratings_tsv(path: str | Path, id_column: bool = False) -> RatingsMatrix:
    """Read a TSV whose first line names the raters and each further line is a unit.

    Empty cells are missing ratings.  With *id_column* the first column is
    a unit identifier and is ignored.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        header = next(reader, [])
        width = len(header)
        rows = []
        for cells in reader:
            if not any(c.strip() for c in cells):
                continue
            cells = [c.strip() for c in cells] + [""] * (width - len(cells))
            rows.append(cells[1:width] if id_column else cells[:width])
    return RatingsMatrix.from_rows(rows)


def _check(ratings: RatingsMatrix, codes: np.ndarray) -> None:
    if ratings.n_raters < 2:
        raise InsufficientData("at least two raters are required")
    if not ((codes >= 0).sum(axis=1) >= 2).any():
        raise InsufficientData("no unit has two or more ratings")


def coincidence_matrix(ratings: RatingsMatrix) -> tuple[np.ndarray, list]:
    codes, labels = ratings.encode()
    _check(ratings, codes)
    return _coincidence(codes, len(labels)), labels


def alpha_from_coincidences(o: np.ndarray) -> float:
    n_c = o.sum(axis=1)
    n = n_c.sum()
    observed = o.sum() - np.trace(o)
    expected = n * n - (n_c * n_c).sum()
    if expected == 0:
        # a single label used throughout: perfect agreement by convention
        return 1.0
    return float(1.0 - (n - 1) * observed / expected)


def krippendorff_alpha(ratings: RatingsMatrix) -> float:
    """Nominal Krippendorff's alpha, ``1 - D_o / D_e``.

    Units with fewer than two ratings are not pairable and are dropped.
    """
    o, _ = coincidence_matrix(ratings)
    return alpha_from_coincidences(o)
