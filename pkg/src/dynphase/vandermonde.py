"""Vandermonde matrices, their determinant formulas, and full-spark checks.

Three constructions are provided:

* ``classical``: entries ``values[k] ** l`` for column exponents ``0..L-1``.
* ``first_kind``: a column selection of the classical matrix, exponents given
  by a strictly increasing integer list. Its determinant factors as the
  classical determinant times a Schur polynomial value (a symmetric
  polynomial with nonnegative integer coefficients), which ``schur_value``
  evaluates numerically from that factorization.
* ``second_kind``: the confluent block form whose j-th block has entries
  ``binom(l, k) * values[j] ** (l - k)``; its square determinant is
  ``prod_{k<j} (values[j] - values[k]) ** (m[k] * m[j])``.

``full_spark`` certifies that every d-column minor of a wide matrix is
invertible, by exhaustive enumeration with scale-aware determinant
thresholds.

Sign convention: the classical determinant is computed with the factor order
``prod_{k > j} (values[k] - values[j])``, which matches the pivoted-LU
determinant of ``classical`` exactly (not only in magnitude) and makes the
first-kind factorization hold without sign fixups.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import BudgetExceededError, DimensionMismatchError
from .validation import as_matrix, as_vector

DEFAULT_SPARK_TOL = 1e-10
DEFAULT_BUDGET = 2_000_000

#: Relative margin below which entries count as coincident for Schur values.
COINCIDENCE_RTOL = 1e-12


@dataclass(frozen=True)
class SparkCertificate:
    """Outcome of a full-spark check.

    ``witness`` is the lexicographically first failing column subset and is
    present exactly when ``full_spark`` is False. ``min_abs_det`` is the
    smallest column-norm-scaled minor magnitude seen during enumeration, or
    None when a structural shortcut made enumeration unnecessary.
    """

    full_spark: bool
    witness: tuple[int, ...] | None
    min_abs_det: float | None

    def __post_init__(self):
        if self.full_spark and self.witness is not None:
            raise ValueError("a passing certificate cannot carry a witness")
        if not self.full_spark and self.witness is None:
            raise ValueError("a failing certificate must carry a witness")


def _as_exponents(exponents) -> tuple[int, ...]:
    exps = tuple(int(e) for e in exponents)
    if len(exps) == 0:
        raise ValueError("exponent selection must be nonempty")
    if exps[0] < 0 or any(b <= a for a, b in zip(exps, exps[1:])):
        raise ValueError(f"exponents must be strictly increasing and nonnegative: {exps}")
    return exps


def _as_multiplicities(multiplicities) -> tuple[int, ...]:
    mults = tuple(int(m) for m in multiplicities)
    if len(mults) == 0 or any(m < 1 for m in mults):
        raise ValueError(f"multiplicities must be positive integers: {mults}")
    return mults


def classical(values, length: int) -> np.ndarray:
    """d x L matrix with entries ``values[k] ** l`` (0**0 taken as 1)."""
    v = as_vector(values, "values")
    if length < 1:
        raise ValueError("length must be >= 1")
    return v[:, None] ** np.arange(length)[None, :]


def det_product_classical(values) -> complex:
    """Closed-form classical Vandermonde determinant ``prod_{k>j} (v[k]-v[j])``."""
    v = as_vector(values, "values")
    out = complex(1.0)
    for j in range(v.size):
        for k in range(j + 1, v.size):
            out *= complex(v[k] - v[j])
    return out


def first_kind(values, exponents) -> np.ndarray:
    """Column selection of the classical matrix: entries ``values[k] ** exponents[l]``."""
    v = as_vector(values, "values")
    exps = _as_exponents(exponents)
    return v[:, None] ** np.array(exps)[None, :]


def schur_value(values, exponents) -> complex:
    """Schur polynomial value from the first-kind determinant factorization.

    Requires a square selection (as many exponents as entries) and pairwise
    distinct entries; coincident entries would blow up the division.
    """
    v = as_vector(values, "values")
    exps = _as_exponents(exponents)
    if len(exps) != v.size:
        raise DimensionMismatchError(
            f"need a square selection: {v.size} values but {len(exps)} exponents"
        )
    scale = max(1.0, float(np.max(np.abs(v))))
    gap = _min_gap(v)
    if gap <= COINCIDENCE_RTOL * scale:
        raise ValueError(f"entries coincide within tolerance (gap {gap:.3e})")
    det = complex(np.linalg.det(first_kind(v, exps)))
    return det / det_product_classical(v)


def second_kind(values, multiplicities, length: int) -> np.ndarray:
    """Confluent Vandermonde: stacked blocks ``binom(l, k) * values[j] ** (l-k)``.

    ``binom(l, k) = 0`` for ``k > l``, which zeroes every entry that would
    otherwise need a negative power. With all multiplicities equal to one the
    result is exactly ``classical(values, length)``.
    """
    v = as_vector(values, "values")
    mults = _as_multiplicities(multiplicities)
    if len(mults) != v.size:
        raise DimensionMismatchError(
            f"{v.size} values but {len(mults)} multiplicities"
        )
    if length < 1:
        raise ValueError("length must be >= 1")
    rows = []
    for lam, m in zip(v, mults):
        block = np.zeros((m, length), dtype=complex)
        for k in range(m):
            for l in range(k, length):
                block[k, l] = math.comb(l, k) * (lam ** (l - k) if l > k else 1.0)
        rows.append(block)
    return np.vstack(rows)


def det_product_second_kind(values, multiplicities) -> complex:
    """Closed-form confluent determinant ``prod_{k<j} (v[j]-v[k]) ** (m[k]*m[j])``."""
    v = as_vector(values, "values")
    mults = _as_multiplicities(multiplicities)
    if len(mults) != v.size:
        raise DimensionMismatchError(
            f"{v.size} values but {len(mults)} multiplicities"
        )
    out = complex(1.0)
    for k in range(v.size):
        for j in range(k + 1, v.size):
            out *= complex(v[j] - v[k]) ** (mults[k] * mults[j])
    return out


def full_spark(
    matrix,
    tol: float = DEFAULT_SPARK_TOL,
    budget: int = DEFAULT_BUDGET,
) -> SparkCertificate:
    """Certify that every d-column minor of a d x L matrix is invertible.

    A minor passes when ``|det| > tol * prod(column norms)``; the Hadamard
    bound makes that ratio scale-free. Subsets are visited in lexicographic
    order and enumeration continues past the first failure so that
    ``min_abs_det`` reflects the global minimum.
    """
    m = as_matrix(matrix, "matrix")
    d, L = m.shape
    if d > L:
        raise DimensionMismatchError(f"matrix must be wide (rows <= cols), got {m.shape}")
    count = math.comb(L, d)
    if count > budget:
        raise BudgetExceededError(
            f"C({L},{d}) = {count} column subsets exceed the budget of {budget}"
        )
    col_norms = np.linalg.norm(m, axis=0)
    witness: tuple[int, ...] | None = None
    min_scaled = float("inf")
    for subset in itertools.combinations(range(L), d):
        idx = list(subset)
        scale = float(np.prod(col_norms[idx]))
        absdet = abs(np.linalg.det(m[:, idx]))
        scaled = absdet / scale if scale > 0.0 else 0.0
        min_scaled = min(min_scaled, scaled)
        if scaled <= tol and witness is None:
            witness = subset
    return SparkCertificate(witness is None, witness, min_scaled)


def _min_gap(v: np.ndarray) -> float:
    if v.size < 2:
        return float("inf")
    diff = np.abs(v[:, None] - v[None, :])
    return float(diff[~np.eye(v.size, dtype=bool)].min())
