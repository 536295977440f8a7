"""Deterministic instance generation for experiments and the CLI.

Every generator draws from ``numpy.random.default_rng(seed)``, so a fixed
seed reproduces the instance byte for byte after serialization.
"""

from __future__ import annotations

import math

import numpy as np

from .frames import DynamicalFrame, circulant, dft_matrix
from .retrieval import MeasurementConfig
from .serialization import (
    Instance,
    jordan_spec_to_json,
    matrix_to_json,
    vector_to_json,
)
from .spectral import JordanSpec

KINDS = ("random-diag", "jordan", "circulant", "harmonic", "rotation")

#: Enforced relative pairwise eigenvalue gap for generated spectra.
EIGENVALUE_GAP = 0.15


def _random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _distinct_eigenvalues(rng: np.random.Generator, count: int, gap: float = EIGENVALUE_GAP) -> np.ndarray:
    """Complex spectrum in an annulus around the unit circle with a pairwise gap."""
    while True:
        radii = rng.uniform(0.7, 1.25, size=count)
        args = rng.uniform(0.0, 2.0 * math.pi, size=count)
        values = radii * np.exp(1j * args)
        diff = np.abs(values[:, None] - values[None, :])
        if count == 1 or diff[~np.eye(count, dtype=bool)].min() > gap:
            return values


def _dense_coordinates(rng: np.random.Generator, count: int) -> np.ndarray:
    moduli = rng.uniform(0.35, 1.2, size=count)
    args = rng.uniform(0.0, 2.0 * math.pi, size=count)
    return moduli * np.exp(1j * args)


def random_signal_for(
    frame: DynamicalFrame,
    rng: np.random.Generator,
    min_rel: float = 1e-3,
    tries: int = 256,
    real: bool = False,
) -> np.ndarray:
    """A unit signal whose frame coefficients all stay away from zero."""
    for _ in range(tries):
        x = rng.standard_normal(frame.dim)
        if not real:
            x = x + 1j * rng.standard_normal(frame.dim)
        x = np.asarray(x, dtype=complex)
        x /= np.linalg.norm(x)
        mags = np.abs(frame.coefficients(x))
        if mags.min() > min_rel * mags.max():
            return x
    raise RuntimeError("could not sample a signal with dense frame coefficients")


def _random_partition(rng: np.random.Generator, total: int, largest: int = 3) -> tuple[int, ...]:
    parts: list[int] = []
    left = total
    while left > 0:
        part = int(rng.integers(1, min(largest, left) + 1))
        parts.append(part)
        left -= part
    return tuple(parts)


def make_instance(
    kind: str,
    dim: int,
    length: int,
    seed: int = 0,
    theta: float = math.pi / 4.0,
    config: MeasurementConfig | None = None,
) -> Instance:
    """Generate a frame instance with a signal, deterministically from the seed."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}, expected one of {KINDS}")
    if dim < 1 or length < dim:
        raise ValueError(f"need dim >= 1 and length >= dim, got dim={dim}, length={length}")
    config = config or MeasurementConfig()
    if config.real_mode and kind != "rotation":
        raise ValueError("real_mode generation is only supported for rotation instances")
    rng = np.random.default_rng(seed)

    if kind == "rotation":
        if dim != 2:
            raise ValueError("rotation instances are 2-dimensional")
        if math.isclose(math.sin(theta), 0.0, abs_tol=1e-12):
            raise ValueError("rotation angle must not be a multiple of pi")
        A = np.array(
            [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]],
            dtype=complex,
        )
        phi = np.array([1.0, 0.0], dtype=complex)
        spec = {"A": matrix_to_json(A), "phi": vector_to_json(phi), "L": length}
    elif kind == "harmonic":
        spec = {"harmonic": {"d": dim, "L": length}}
    elif kind == "circulant":
        F = dft_matrix(dim)
        while True:
            kernel = _dense_coordinates(rng, dim)
            k_hat = F @ kernel
            gaps = np.abs(k_hat[:, None] - k_hat[None, :])
            if dim == 1 or gaps[~np.eye(dim, dtype=bool)].min() > EIGENVALUE_GAP:
                break
        while True:
            phi = _dense_coordinates(rng, dim)
            p_hat = np.abs(F @ phi)
            if p_hat.min() > 0.05 * p_hat.max():
                break
        spec = {"circulant": vector_to_json(kernel), "phi": vector_to_json(phi), "L": length}
    elif kind == "jordan":
        mults = _random_partition(rng, dim)
        values = _distinct_eigenvalues(rng, len(mults))
        basis = _random_unitary(rng, dim)
        jspec = JordanSpec(values, mults, basis)
        coords = _dense_coordinates(rng, dim)
        phi = basis @ coords
        spec = {
            "jordan": jordan_spec_to_json(jspec),
            "phi": vector_to_json(phi),
            "L": length,
        }
    else:  # random-diag
        values = _distinct_eigenvalues(rng, dim)
        basis = _random_unitary(rng, dim)
        coords = _dense_coordinates(rng, dim)
        A = (basis * values) @ basis.conj().T
        phi = basis @ coords
        spec = {"A": matrix_to_json(A), "phi": vector_to_json(phi), "L": length}

    instance = Instance(spec, config, None, seed)
    frame = instance.build_frame()
    signal = random_signal_for(frame, rng, real=config.real_mode)
    return Instance(spec, config, signal, seed)
