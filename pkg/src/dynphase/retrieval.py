"""Phase retrieval from phaseless dynamical samples.

``measure`` simulates the magnitude data for a signal x over a dynamical
frame: the base magnitudes ``|<x, A^l phi>|`` plus the aligned magnitudes
``|<x, A^l (phi + exp(1j a_k) A^j phi)>|`` for offsets ``j = 1..jumps+1``.
Under the conjugate-linear-second-argument inner product the aligned value
expands to ``|c_l + exp(-1j a_k) c_{l+j}|`` with ``c_l = <x, A^l phi>``, so
relative phases are recovered by polarization with the NEGATED angle pair.

Recovery walks a chain over the indices whose base magnitude is nonzero:
every edge (l, l+j) with aligned data yields the product
``conj(c_l) c_{l+j}`` and therefore the phase step between the endpoints.
Indices classified as zero still contribute: each pins the linear constraint
``<x, A^l phi> = 0``. A connected chain of size s together with m zero
indices gives s + m independent rows over a full-spark frame, so recovery
needs a chain of size ``dim - m`` rather than ``dim``. With at least ``dim``
zeros the signal is identically zero.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    InconsistentDataError,
    SingularMatrixError,
    ZeroMagnitudeError,
)
from .frames import DynamicalFrame, dual
from .polarization import (
    PolarizationAngles,
    PolarizationData,
    recover_product,
    recover_product_real,
)
from .validation import as_vector, frozen_copy

DEFAULT_ZERO_TOL = 1e-9

#: Relative floor used when re-thresholding borderline magnitudes for a
#: partial-chain rescue; sits well below DEFAULT_ZERO_TOL and well above
#: double-precision noise on honest zeros.
RELAXED_ZERO_FLOOR = 1e-13


def default_angles() -> PolarizationAngles:
    """The best-conditioned admissible pair: |sin(a1 - a2)| = 1."""
    return PolarizationAngles(0.0, math.pi / 2.0)


@dataclass(frozen=True)
class MeasurementConfig:
    """How measurements are taken and interpreted.

    ``jumps`` is the number of consecutive zeros a chain edge may skip;
    aligned offsets run ``j = 1..jumps+1``. ``zero_tol`` classifies a base
    magnitude as zero relative to the largest one. In ``real_mode`` a single
    aligned family with a real shift sign replaces the two-angle family.
    """

    angles: PolarizationAngles = field(default_factory=default_angles)
    jumps: int = 0
    zero_tol: float = DEFAULT_ZERO_TOL
    real_mode: bool = False

    def __post_init__(self):
        if self.jumps < 0:
            raise ValueError("jumps must be >= 0")
        if not (0.0 < self.zero_tol < 1.0):
            raise ValueError("zero_tol must lie strictly between 0 and 1")

    @property
    def real_sign(self) -> int:
        """The real shift sign exp(1j * alpha1), which must be +-1."""
        c, s = math.cos(self.angles.alpha1), math.sin(self.angles.alpha1)
        if abs(s) > 1e-9:
            raise ValueError("real mode needs alpha1 to be a multiple of pi")
        return 1 if c > 0 else -1


@dataclass(frozen=True)
class MeasurementSet:
    """Base and aligned magnitudes with their full (l, j, k) index grid."""

    length: int
    jumps: int
    angles: PolarizationAngles
    base: np.ndarray
    aligned: Mapping[tuple[int, int, int], float]

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float)
        if base.ndim != 1 or base.size != self.length:
            raise DimensionMismatchError(
                f"base must hold {self.length} values, got shape {base.shape}"
            )
        if not np.all(np.isfinite(base)) or np.any(base < 0.0):
            raise ValueError("base magnitudes must be finite and nonnegative")
        aligned = {
            (int(l), int(j), int(k)): float(v) for (l, j, k), v in self.aligned.items()
        }
        for (l, j, k), v in aligned.items():
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"aligned[{(l, j, k)}] must be finite nonnegative, got {v}")
        two = any(k == 2 for (_, _, k) in aligned)
        ks = (1, 2) if two else (1,)
        for j in range(1, self.jumps + 2):
            for l in range(0, self.length - j):
                for k in ks:
                    if (l, j, k) not in aligned:
                        raise ValueError(f"aligned grid incomplete: missing {(l, j, k)}")
        object.__setattr__(self, "length", int(self.length))
        object.__setattr__(self, "jumps", int(self.jumps))
        object.__setattr__(self, "base", frozen_copy(base))
        object.__setattr__(self, "aligned", MappingProxyType(aligned))
        object.__setattr__(self, "_two_angles", two)

    @property
    def has_two_angles(self) -> bool:
        return self._two_angles


class RecoveryStatus(Enum):
    RECOVERED = "Recovered"
    PARTIAL = "RecoveredPartialChain"
    FAILED = "Failed"


@dataclass(frozen=True)
class RecoveryResult:
    """Estimate plus chain diagnostics.

    ``used_indices`` are the indices whose phase was assigned;
    ``component_size`` counts every frame index that contributed a linear
    constraint (the phased chain plus the zero-pinned indices); ``residual``
    is the Euclidean distance between the remeasured and the given base
    magnitudes, a phase-free consistency check.
    """

    estimate: np.ndarray
    status: RecoveryStatus
    used_indices: tuple[int, ...]
    component_size: int
    residual: float

    def __post_init__(self):
        object.__setattr__(self, "estimate", frozen_copy(np.asarray(self.estimate)))
        object.__setattr__(self, "used_indices", tuple(int(i) for i in self.used_indices))


def measure(x, frame: DynamicalFrame, config: MeasurementConfig) -> MeasurementSet:
    """Simulate the phaseless measurement set for a known signal."""
    x = as_vector(x, "x")
    if x.size != frame.dim:
        raise DimensionMismatchError(f"x has dim {x.size}, frame dim is {frame.dim}")
    if config.jumps > max(0, frame.dim - 2):
        raise ValueError(
            f"jumps={config.jumps} exceeds the admissible maximum {max(0, frame.dim - 2)}"
        )
    coeffs = frame.coefficients(x)
    base = np.abs(coeffs)
    aligned: dict[tuple[int, int, int], float] = {}
    if config.real_mode:
        sign = config.real_sign
        for j in range(1, config.jumps + 2):
            for l in range(0, frame.length - j):
                aligned[(l, j, 1)] = float(abs(coeffs[l] + sign * coeffs[l + j]))
    else:
        shifts = {1: cmath.exp(-1j * config.angles.alpha1), 2: cmath.exp(-1j * config.angles.alpha2)}
        for j in range(1, config.jumps + 2):
            for l in range(0, frame.length - j):
                for k in (1, 2):
                    aligned[(l, j, k)] = float(abs(coeffs[l] + shifts[k] * coeffs[l + j]))
    return MeasurementSet(frame.length, config.jumps, config.angles, base, aligned)


def _check_consistency(ms: MeasurementSet, frame: DynamicalFrame, config: MeasurementConfig) -> None:
    if ms.length != frame.length:
        raise InconsistentDataError(
            f"measurement set has L={ms.length}, frame has L={frame.length}"
        )
    if ms.jumps != config.jumps:
        raise InconsistentDataError(f"jumps mismatch: set has {ms.jumps}, config has {config.jumps}")
    if (
        abs(ms.angles.alpha1 - config.angles.alpha1) > 1e-12
        or abs(ms.angles.alpha2 - config.angles.alpha2) > 1e-12
    ):
        raise InconsistentDataError("angle mismatch between measurement set and config")


def _zero_partition(base: np.ndarray, rel_tol: float) -> tuple[list[int], list[int]]:
    scale = float(base.max()) if base.size else 0.0
    zeros = [l for l in range(base.size) if base[l] <= rel_tol * scale]
    zero_set = set(zeros)
    nonzeros = [l for l in range(base.size) if l not in zero_set]
    return zeros, nonzeros


def _components(nonzeros: list[int], jumps: int, ms: MeasurementSet, need_two: bool) -> list[list[int]]:
    """Connected components of the chain graph over the nonzero indices."""
    alive = set(nonzeros)

    def has_edge(l: int, j: int) -> bool:
        if (l, j, 1) not in ms.aligned:
            return False
        return (l, j, 2) in ms.aligned or not need_two

    adjacency: dict[int, list[int]] = {l: [] for l in nonzeros}
    for l in nonzeros:
        for j in range(1, jumps + 2):
            if l + j in alive and has_edge(l, j):
                adjacency[l].append(l + j)
                adjacency[l + j].append(l)
    components, seen = [], set()
    for start in nonzeros:
        if start in seen:
            continue
        queue, comp = deque([start]), []
        seen.add(start)
        while queue:
            node = queue.popleft()
            comp.append(node)
            for nxt in adjacency[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        components.append(sorted(comp))
    return components


def _best_component(components: list[list[int]]) -> list[int]:
    if not components:
        return []
    return max(components, key=lambda c: (len(c), -c[0]))


def _edge_product_complex(ms: MeasurementSet, l: int, j: int) -> complex:
    data = PolarizationData(
        float(ms.base[l]), float(ms.base[l + j]), ms.aligned[(l, j, 1)], ms.aligned[(l, j, 2)]
    )
    return recover_product(data, ms.angles.negated())


def _propagate_phases(
    component: list[int], jumps: int, ms: MeasurementSet, real_sign: int | None
) -> dict[int, complex]:
    """Unit phases (or signs) per index, anchored at the component's lowest index.

    Breadth-first over edges (l, l+j); each edge's polarization product
    ``conj(c_l) c_{l+j}`` carries the phase step from l to l+j.
    """
    if not component:
        return {}
    alive = set(component)
    phases: dict[int, complex] = {component[0]: 1.0 + 0.0j}
    queue = deque([component[0]])
    while queue:
        node = queue.popleft()
        for j in range(1, jumps + 2):
            for other, low in ((node + j, node), (node - j, node - j)):
                if other not in alive or other in phases:
                    continue
                if (low, j, 1) not in ms.aligned:
                    continue
                if real_sign is None:
                    if (low, j, 2) not in ms.aligned:
                        continue
                    product = _edge_product_complex(ms, low, j)
                    step = cmath.exp(1j * cmath.phase(product))
                else:
                    product = recover_product_real(
                        float(ms.base[low]), float(ms.base[low + j]), ms.aligned[(low, j, 1)], real_sign
                    )
                    step = 1.0 if product >= 0.0 else -1.0
                phases[other] = phases[node] * step if other > node else phases[node] / step
                queue.append(other)
    return phases


def _solve_rows(
    frame: DynamicalFrame,
    phased: dict[int, complex],
    zero_rows: list[int],
    require_full_rank: bool,
) -> np.ndarray:
    synthesis = frame.synthesis()
    indices = sorted(phased) + sorted(zero_rows)
    rows = synthesis[:, indices].conj().T
    rhs = np.array([phased[l] for l in sorted(phased)] + [0.0] * len(zero_rows), dtype=complex)
    solution, _, rank, _ = np.linalg.lstsq(rows, rhs, rcond=None)
    if require_full_rank and rank < frame.dim:
        raise SingularMatrixError(
            f"selected frame rows have rank {rank} < {frame.dim}; the orbit lacks full spark"
        )
    return solution


def _remeasure_residual(frame: DynamicalFrame, estimate: np.ndarray, base: np.ndarray) -> float:
    return float(np.linalg.norm(np.abs(frame.coefficients(estimate)) - base))


def recover_generic(
    ms: MeasurementSet, frame: DynamicalFrame, config: MeasurementConfig
) -> RecoveryResult:
    """Recovery along the dense chain; every base magnitude must be nonzero.

    Phases are chained index by index through offset-1 polarization, the
    first coefficient's phase is fixed to zero, and the signal is rebuilt
    through the canonical dual frame. The result matches the true signal up
    to one global phase. A zero base magnitude breaks the chain and raises
    ``ZeroMagnitudeError``; route such data to :func:`recover_full_spark`.
    """
    _check_consistency(ms, frame, config)
    base = ms.base
    scale = float(base.max()) if base.size else 0.0
    if scale <= 0.0 or np.any(base <= config.zero_tol * scale):
        raise ZeroMagnitudeError(
            "a base magnitude is numerically zero; the dense chain is broken "
            "(use recover_full_spark)"
        )
    if ms.length > 1 and not ms.has_two_angles:
        raise InconsistentDataError("measurement set lacks the second aligned angle family")
    L = ms.length
    phases = np.empty(L)
    phases[0] = 0.0
    for l in range(L - 1):
        product = _edge_product_complex(ms, l, 1)
        phases[l + 1] = phases[l] + cmath.phase(product)
    coeffs = base * np.exp(1j * phases)
    estimate = dual(frame).reconstruct(coeffs)
    return RecoveryResult(
        estimate,
        RecoveryStatus.RECOVERED,
        tuple(range(L)),
        L,
        _remeasure_residual(frame, estimate, base),
    )


def _recover_by_chain(
    ms: MeasurementSet,
    frame: DynamicalFrame,
    config: MeasurementConfig,
    real_sign: int | None,
) -> RecoveryResult:
    base = ms.base
    d = frame.dim
    zeros, nonzeros = _zero_partition(base, config.zero_tol)

    # at least d zero coefficients over a full-spark frame pin the signal to 0
    if len(zeros) >= d:
        estimate = np.zeros(d, dtype=complex)
        return RecoveryResult(
            estimate,
            RecoveryStatus.RECOVERED,
            (),
            len(zeros),
            _remeasure_residual(frame, estimate, base),
        )

    need_two = real_sign is None
    components = _components(nonzeros, config.jumps, ms, need_two)
    best = _best_component(components)

    if len(best) + len(zeros) >= d:
        phases = _propagate_phases(best, config.jumps, ms, real_sign)
        phased = {l: base[l] * phases[l] for l in best}
        estimate = _solve_rows(frame, phased, zeros, require_full_rank=True)
        return RecoveryResult(
            estimate,
            RecoveryStatus.RECOVERED,
            tuple(best),
            len(best) + len(zeros),
            _remeasure_residual(frame, estimate, base),
        )

    # Rescue pass: magnitudes between the machine floor and zero_tol may be
    # honest small coefficients; reclassifying them can bridge chain gaps.
    rzeros, rnonzeros = _zero_partition(base, RELAXED_ZERO_FLOOR)
    if rnonzeros != nonzeros:
        rcomponents = _components(rnonzeros, config.jumps, ms, need_two)
        rbest = _best_component(rcomponents)
        if len(rbest) + len(rzeros) >= d:
            phases = _propagate_phases(rbest, config.jumps, ms, real_sign)
            phased = {l: base[l] * phases[l] for l in rbest}
            estimate = _solve_rows(frame, phased, rzeros, require_full_rank=True)
            return RecoveryResult(
                estimate,
                RecoveryStatus.PARTIAL,
                tuple(rbest),
                len(rbest) + len(rzeros),
                _remeasure_residual(frame, estimate, base),
            )

    # no chain reaches far enough: report failure with a minimum-norm guess
    phases = _propagate_phases(best, config.jumps, ms, real_sign)
    phased = {l: base[l] * phases[l] for l in best}
    estimate = _solve_rows(frame, phased, zeros, require_full_rank=False)
    return RecoveryResult(
        estimate,
        RecoveryStatus.FAILED,
        tuple(best),
        len(best) + len(zeros),
        _remeasure_residual(frame, estimate, base),
    )


def recover_full_spark(
    ms: MeasurementSet, frame: DynamicalFrame, config: MeasurementConfig
) -> RecoveryResult:
    """Zero-tolerant recovery over a full-spark frame.

    The caller is responsible for the full-spark property (certify it with
    :func:`dynphase.frames.full_spark_criterion` or
    :func:`dynphase.frames.analyze`); a rank-deficient subframe system is
    reported as ``SingularMatrixError`` when the assumption fails.
    """
    _check_consistency(ms, frame, config)
    if ms.length > 1 and not ms.has_two_angles:
        raise InconsistentDataError("measurement set lacks the second aligned angle family")
    return _recover_by_chain(ms, frame, config, real_sign=None)


def recover_real(
    ms: MeasurementSet, frame: DynamicalFrame, config: MeasurementConfig
) -> RecoveryResult:
    """Sign recovery for real frames and signals from single-shift data.

    Runs the same chain machinery with real polarization products; the
    result matches the true signal up to one global sign.
    """
    if not config.real_mode:
        raise ValueError("recover_real requires config.real_mode")
    _check_consistency(ms, frame, config)
    return _recover_by_chain(ms, frame, config, real_sign=config.real_sign)


def min_length(dim: int, jumps: int = 0) -> int:
    """Smallest orbit length guaranteeing zero-tolerant recovery.

    ``ceil(dim^2 / 4 + dim / 2)`` without jumps, and
    ``ceil((dim+1)^2 / (4 (jumps+1)) + dim)`` with them. ``jumps`` must stay
    in ``0 .. dim-2`` (0 is allowed for dim = 1).
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if jumps < 0 or jumps > max(0, dim - 2):
        raise ValueError(f"jumps must lie in 0..{max(0, dim - 2)} for dim={dim}, got {jumps}")
    if jumps == 0:
        return (dim * dim + 2 * dim + 3) // 4
    denom = 4 * (jumps + 1)
    return ((dim + 1) ** 2 + denom - 1) // denom + dim


def global_phase_distance(x, y) -> float:
    """``min over theta of || x - exp(1j theta) y ||``, the phase-free metric."""
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    if x.shape != y.shape:
        raise DimensionMismatchError(f"vectors have dims {x.size} vs {y.size}")
    nx = float(np.linalg.norm(x)) ** 2
    ny = float(np.linalg.norm(y)) ** 2
    cross = abs(complex(np.sum(x * np.conj(y))))
    return math.sqrt(max(0.0, nx + ny - 2.0 * cross))
