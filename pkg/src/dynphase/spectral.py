"""Jordan-structured operators.

A non-diagonalizable operator is never decomposed numerically (that problem
is ill-posed); instead it is supplied as an explicit :class:`JordanSpec`,
which fixes the block eigenvalues, block sizes, and the similarity basis.
This module assembles such operators, raises them to integer powers through
the closed-form binomial formula for Jordan blocks, and tests whether a
generator vector reaches every Jordan chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatchError, SingularMatrixError
from .validation import as_square, as_vector, frozen_copy

#: Condition-number ceiling for a user-supplied similarity basis.
BASIS_COND_LIMIT = 1e12

#: Relative threshold for "these eigenvalues are distinct".
DISTINCT_RTOL = 1e-9

#: Relative threshold for "this coordinate is nonzero" in dependence tests.
DEPENDENCE_RTOL = 1e-10


@dataclass(frozen=True)
class JordanSpec:
    """Exact structural description of an operator ``S J S^{-1}``.

    ``eigenvalues[j]`` and ``multiplicities[j]`` describe the j-th Jordan
    block (size ``multiplicities[j]``, eigenvalue on the diagonal, ones on
    the superdiagonal); ``basis`` holds the generalized eigenvectors
    column-blocked in the same order. Eigenvalues are allowed to repeat
    across blocks; spanning criteria test distinctness separately.
    """

    eigenvalues: np.ndarray
    multiplicities: tuple[int, ...]
    basis: np.ndarray

    def __post_init__(self):
        values = as_vector(self.eigenvalues, "eigenvalues")
        mults = tuple(int(m) for m in self.multiplicities)
        if len(mults) != values.size:
            raise DimensionMismatchError(
                f"{values.size} eigenvalues but {len(mults)} multiplicities"
            )
        if any(m < 1 for m in mults):
            raise ValueError("multiplicities must be positive integers")
        basis = as_square(self.basis, "basis")
        if sum(mults) != basis.shape[0]:
            raise DimensionMismatchError(
                f"multiplicities sum to {sum(mults)} but basis is {basis.shape[0]}x{basis.shape[1]}"
            )
        spread = np.linalg.svd(basis, compute_uv=False)
        if spread[-1] == 0.0 or spread[0] / spread[-1] > BASIS_COND_LIMIT:
            raise SingularMatrixError("similarity basis is numerically singular")
        object.__setattr__(self, "eigenvalues", frozen_copy(values))
        object.__setattr__(self, "multiplicities", mults)
        object.__setattr__(self, "basis", frozen_copy(basis))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def num_blocks(self) -> int:
        return len(self.multiplicities)

    def block_slices(self) -> list[slice]:
        slices, start = [], 0
        for m in self.multiplicities:
            slices.append(slice(start, start + m))
            start += m
        return slices


@dataclass(frozen=True)
class GeneratorCoordinates:
    """Coordinates of a generator in the Jordan basis, split block by block."""

    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(frozen_copy(b) for b in self.blocks))

    @property
    def concatenated(self) -> np.ndarray:
        return np.concatenate(self.blocks)

    def leading_coefficients(self) -> np.ndarray:
        """Last coordinate of each block: the weight on each Jordan generator."""
        return np.array([b[-1] for b in self.blocks])


def jordan_matrix(spec: JordanSpec) -> np.ndarray:
    """The block-diagonal Jordan matrix J described by ``spec``."""
    d = spec.dim
    J = np.zeros((d, d), dtype=complex)
    for lam, sl in zip(spec.eigenvalues, spec.block_slices()):
        size = sl.stop - sl.start
        J[sl, sl] = lam * np.eye(size) + np.eye(size, k=1)
    return J


def assemble(spec: JordanSpec) -> np.ndarray:
    """Materialize the operator ``S J S^{-1}``."""
    S = spec.basis
    SJ = S @ jordan_matrix(spec)
    # A = (S J) S^{-1}, computed as a solve against S^T to avoid forming the inverse
    return np.linalg.solve(S.T, SJ.T).T


def _block_power(lam: complex, size: int, power: int) -> np.ndarray:
    out = np.zeros((size, size), dtype=complex)
    for k in range(size):
        for n in range(k, size):
            step = n - k
            if step > power:
                continue
            coeff = math.comb(power, step)
            try:
                c = float(coeff)
            except OverflowError as exc:
                raise OverflowError(
                    f"binomial({power},{step}) does not fit in a float; power too large"
                ) from exc
            exponent = power - step
            out[k, n] = c * (lam**exponent if exponent > 0 else 1.0)
    return out


def jordan_power(spec: JordanSpec, power: int) -> np.ndarray:
    """``J**power`` by the closed-form entries binom(l, n-k) * lam^(l-n+k).

    Exact integer binomials are used; powers whose coefficients overflow a
    double are rejected rather than approximated.
    """
    if power < 0:
        raise ValueError("power must be a nonnegative integer")
    d = spec.dim
    out = np.zeros((d, d), dtype=complex)
    for lam, sl in zip(spec.eigenvalues, spec.block_slices()):
        out[sl, sl] = _block_power(complex(lam), sl.stop - sl.start, power)
    if not np.all(np.isfinite(out)):
        raise OverflowError(f"entries of J**{power} overflow double precision")
    return out


def generator_coordinates(spec: JordanSpec, generator) -> GeneratorCoordinates:
    """Coordinates ``S^{-1} phi`` of a generator, partitioned by block sizes."""
    phi = as_vector(generator, "generator")
    if phi.size != spec.dim:
        raise DimensionMismatchError(f"generator has dim {phi.size}, expected {spec.dim}")
    coords = np.linalg.solve(spec.basis, phi)
    return GeneratorCoordinates(tuple(coords[sl] for sl in spec.block_slices()))


def depends_on_all_generators(spec: JordanSpec, generator, tol: float | None = None) -> bool:
    """True when the generator loads every Jordan chain's leading vector.

    The exact condition is that the last coordinate of each block of
    ``S^{-1} phi`` is nonzero; ``tol`` (default ``1e-10 * max |coordinate|``)
    is the floating-point surrogate for "nonzero".
    """
    coords = generator_coordinates(spec, generator)
    full = coords.concatenated
    scale = float(np.max(np.abs(full))) if full.size else 0.0
    threshold = DEPENDENCE_RTOL * scale if tol is None else float(tol)
    return bool(np.all(np.abs(coords.leading_coefficients()) > threshold))


def hankel_of(block) -> np.ndarray:
    """Upper-left Hankel matrix of a coordinate block.

    ``H[k, n] = block[k + n]`` when ``k + n <= len(block) - 1``, else 0. It is
    invertible exactly when the block's last coordinate is nonzero, which is
    why the dependence test above looks only at leading coefficients.
    """
    b = as_vector(block, "block")
    m = b.size
    H = np.zeros((m, m), dtype=complex)
    for k in range(m):
        for n in range(m - k):
            H[k, n] = b[k + n]
    return H


def min_eigenvalue_gap(values) -> float:
    """Smallest pairwise distance among eigenvalues (inf for a single one)."""
    v = as_vector(values, "values")
    if v.size < 2:
        return float("inf")
    diff = v[:, None] - v[None, :]
    off = np.abs(diff[~np.eye(v.size, dtype=bool)])
    return float(off.min())


def eigenvalues_distinct(values, rtol: float = DISTINCT_RTOL) -> bool:
    """Pairwise-distinctness test with a scale-relative gap threshold."""
    v = as_vector(values, "values")
    scale = max(1.0, float(np.max(np.abs(v))))
    return min_eigenvalue_gap(v) > rtol * scale
