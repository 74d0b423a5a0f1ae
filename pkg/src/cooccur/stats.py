"""Label frequencies, the pairwise co-occurrence matrix, and base classes.

The matrix counts image-level presence: cell (i, j) is the number of
transactions containing both labels, and the diagonal holds each label's
document frequency so conditional probabilities can be computed from the
matrix alone. Threshold comparisons cross-multiply exact integer counts, so
boundary values like 0.5 behave exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import sparse

from cooccur.errors import DegenerateInputError, UsageError
from cooccur.ingest import TransactionSet


@dataclass(frozen=True, eq=False)
class FrequencyTable:
    """Per-label document frequency plus the support denominator."""

    counts: np.ndarray
    n_images: int

    def __post_init__(self):
        if self.counts.ndim != 1:
            raise UsageError("counts must be one-dimensional")
        if (self.counts < 0).any() or (self.counts > self.n_images).any():
            raise UsageError("counts must lie in [0, n_images]")


@dataclass(frozen=True, eq=False)
class CooccurrenceMatrix:
    """Symmetric K x K pair counts with document frequencies on the diagonal."""

    cells: np.ndarray

    def __post_init__(self):
        c = self.cells
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise UsageError("cells must be a square matrix")
        if (c != c.T).any():
            raise UsageError("cells must be symmetric")

    @property
    def dim(self) -> int:
        return self.cells.shape[0]

    def pair_count(self, i: int, j: int) -> int:
        return int(self.cells[i, j])

    def doc_frequency(self, i: int) -> int:
        return int(self.cells[i, i])


@dataclass(frozen=True)
class BaseClassPolicy:
    """How base classes are picked: the k most frequent labels (``top_k``) or
    every label whose document frequency reaches a fraction of the image
    count (``min_fraction``)."""

    mode: str
    k: int | None = None
    fraction: float | None = None

    def __post_init__(self):
        if self.mode == "top_k":
            if self.k is None or self.k < 1 or self.fraction is not None:
                raise UsageError("top_k policy needs k >= 1 and no fraction")
        elif self.mode == "min_fraction":
            if (
                self.fraction is None
                or not 0.0 < self.fraction <= 1.0
                or self.k is not None
            ):
                raise UsageError("min_fraction policy needs fraction in (0, 1]")
        else:
            raise UsageError(f"unknown base-class policy mode: {self.mode!r}")

    @classmethod
    def top_k(cls, k: int) -> "BaseClassPolicy":
        return cls("top_k", k=k)

    @classmethod
    def min_fraction(cls, fraction: float) -> "BaseClassPolicy":
        return cls("min_fraction", fraction=fraction)


@dataclass(frozen=True)
class CooccurrenceThreshold:
    """Minimum conditional probability for a label to count as co-occurring."""

    t: float

    def __post_init__(self):
        if not 0.0 <= self.t <= 1.0:
            raise UsageError(f"co-occurrence threshold {self.t} outside [0, 1]")

    def as_fraction(self) -> Fraction:
        # str() round-trips the shortest decimal form, so 0.5 -> 1/2 exactly.
        return Fraction(str(self.t))


def _as_threshold(value: "CooccurrenceThreshold | float") -> CooccurrenceThreshold:
    if isinstance(value, CooccurrenceThreshold):
        return value
    return CooccurrenceThreshold(float(value))


def count_frequencies(tset: TransactionSet) -> FrequencyTable:
    """Document frequency of every label: the number of images containing it."""
    flat = np.fromiter(
        (i for t in tset.transactions for i in t.labels), dtype=np.int64
    )
    counts = np.bincount(flat, minlength=len(tset.vocabulary))
    return FrequencyTable(counts.astype(np.int64), tset.image_count)


def build_matrix(tset: TransactionSet) -> CooccurrenceMatrix:
    """Count, for every label pair, the images containing both labels.

    Computed as the Gram matrix of the sparse image x label incidence matrix,
    which also puts each label's document frequency on the diagonal.
    """
    k = len(tset.vocabulary)
    rows: list[int] = []
    cols: list[int] = []
    for r, t in enumerate(tset.transactions):
        rows.extend([r] * len(t.labels))
        cols.extend(t.labels)
    incidence = sparse.csr_matrix(
        (np.ones(len(cols), dtype=np.int64), (rows, cols)),
        shape=(len(tset.transactions), k),
    )
    cells = (incidence.T @ incidence).toarray()
    return CooccurrenceMatrix(np.asarray(cells, dtype=np.int64))


def merge_matrices(parts: Sequence[CooccurrenceMatrix]) -> CooccurrenceMatrix:
    """Combine matrices counted over disjoint transaction partitions.

    Element-wise addition is associative and commutative, so partitioned
    counting must reproduce the sequential result exactly.
    """
    if not parts:
        raise UsageError("nothing to merge")
    total = np.zeros_like(parts[0].cells)
    for part in parts:
        if part.cells.shape != total.shape:
            raise UsageError("matrices must share the same dimension")
        total = total + part.cells
    return CooccurrenceMatrix(total)


def select_base_classes(
    table: FrequencyTable, policy: BaseClassPolicy
) -> list[int]:
    """Label ids sorted by descending frequency, ties by ascending id.

    Zero-count labels are never selected. ``top_k`` keeps the first k
    survivors; ``min_fraction`` keeps labels with count / n_images >= f,
    compared in exact rational arithmetic.
    """
    counts = table.counts
    ranked = sorted(
        (i for i in range(len(counts)) if counts[i] > 0),
        key=lambda i: (-int(counts[i]), i),
    )
    if policy.mode == "top_k":
        return ranked[: policy.k]
    if table.n_images == 0:
        raise DegenerateInputError("min_fraction is undefined for zero images")
    frac = Fraction(str(policy.fraction))
    return [
        i
        for i in ranked
        if int(counts[i]) * frac.denominator >= frac.numerator * table.n_images
    ]


def cooccurring_for_base(
    matrix: CooccurrenceMatrix,
    base: int,
    threshold: CooccurrenceThreshold | float,
    *,
    metric: str = "conditional",
    n_images: int | None = None,
) -> list[tuple[int, int, float]]:
    """Labels that co-occur with ``base`` at or above the threshold.

    Returns (label_id, pair_count, pair_count / base_frequency) tuples sorted
    by descending conditional probability, ties by ascending label id. With
    the default ``conditional`` metric the threshold applies to
    P(label | base); with ``support`` it applies to pair_count / n_images
    instead (the reported probability stays conditional either way).
    """
    thr = _as_threshold(threshold)
    base_freq = matrix.doc_frequency(base)
    if base_freq == 0:
        raise DegenerateInputError(f"label {base} never occurs in the dataset")
    if metric == "conditional":
        denom = base_freq
    elif metric == "support":
        if n_images is None:
            raise UsageError("support metric needs n_images")
        denom = n_images
    else:
        raise UsageError(f"unknown co-occurrence metric: {metric!r}")
    frac = thr.as_fraction()
    out = []
    for j in range(matrix.dim):
        if j == base:
            continue
        pair = matrix.pair_count(base, j)
        if pair >= 1 and pair * frac.denominator >= frac.numerator * denom:
            out.append((j, pair, pair / base_freq))
    out.sort(key=lambda row: (-row[1], row[0]))
    return out
