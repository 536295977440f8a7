"""JSON schemas for every value that crosses the CLI boundary.

Complex numbers travel as ``[re, im]`` pairs, vectors as lists of pairs,
matrices as row-major lists of rows. Serialization relies on Python's
shortest round-trip float formatting, so dump -> load is bit-exact for
doubles and byte-identical across runs given identical values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import SchemaError
from .frames import DynamicalFrame, build, circulant, harmonic_frame
from .polarization import PolarizationAngles
from .retrieval import MeasurementConfig, MeasurementSet, RecoveryResult
from .spectral import JordanSpec, assemble
from .validation import frozen_copy


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def json_to_complex(obj: Any, where: str = "value") -> complex:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in obj)
    ):
        raise SchemaError(f"{where}: expected a [re, im] pair, got {obj!r}")
    return complex(float(obj[0]), float(obj[1]))


def vector_to_json(v) -> list[list[float]]:
    return [complex_to_json(z) for z in np.asarray(v, dtype=complex)]


def json_to_vector(obj: Any, where: str = "vector") -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise SchemaError(f"{where}: expected a nonempty list of [re, im] pairs")
    return np.array([json_to_complex(p, where) for p in obj], dtype=complex)


def matrix_to_json(m) -> list[list[list[float]]]:
    arr = np.asarray(m, dtype=complex)
    return [[complex_to_json(z) for z in row] for row in arr]


def json_to_matrix(obj: Any, where: str = "matrix") -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SchemaError(f"{where}: expected a nonempty list of rows")
    width = len(obj[0])
    if width == 0 or any(len(r) != width for r in obj):
        raise SchemaError(f"{where}: rows must be nonempty and equally long")
    return np.array(
        [[json_to_complex(z, where) for z in row] for row in obj], dtype=complex
    )


def jordan_spec_to_json(spec: JordanSpec) -> dict:
    return {
        "eigenvalues": vector_to_json(spec.eigenvalues),
        "multiplicities": list(spec.multiplicities),
        "basis": matrix_to_json(spec.basis),
    }


def json_to_jordan_spec(obj: Any, where: str = "jordan") -> JordanSpec:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    for key in ("eigenvalues", "multiplicities", "basis"):
        if key not in obj:
            raise SchemaError(f"{where}: missing key {key!r}")
    mults = obj["multiplicities"]
    if not isinstance(mults, list) or not all(isinstance(m, int) and m >= 1 for m in mults):
        raise SchemaError(f"{where}.multiplicities: expected positive integers")
    try:
        return JordanSpec(
            json_to_vector(obj["eigenvalues"], f"{where}.eigenvalues"),
            tuple(mults),
            json_to_matrix(obj["basis"], f"{where}.basis"),
        )
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def angles_to_json(angles: PolarizationAngles) -> list[float]:
    return [angles.alpha1, angles.alpha2]


def json_to_angles(obj: Any, where: str = "angles") -> PolarizationAngles:
    if (
        not isinstance(obj, (list, tuple))
        or len(obj) != 2
        or not all(isinstance(a, (int, float)) and not isinstance(a, bool) for a in obj)
    ):
        raise SchemaError(f"{where}: expected [alpha1, alpha2]")
    try:
        return PolarizationAngles(float(obj[0]), float(obj[1]))
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def config_to_json(config: MeasurementConfig) -> dict:
    return {
        "angles": angles_to_json(config.angles),
        "J": config.jumps,
        "zero_tol": config.zero_tol,
        "real_mode": config.real_mode,
    }


def json_to_config(obj: Any, where: str = "config") -> MeasurementConfig:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    angles = json_to_angles(obj["angles"], f"{where}.angles") if "angles" in obj else None
    kwargs: dict[str, Any] = {}
    if angles is not None:
        kwargs["angles"] = angles
    if "J" in obj:
        if not isinstance(obj["J"], int) or obj["J"] < 0:
            raise SchemaError(f"{where}.J: expected a nonnegative integer")
        kwargs["jumps"] = obj["J"]
    if "zero_tol" in obj:
        kwargs["zero_tol"] = float(obj["zero_tol"])
    if "real_mode" in obj:
        if not isinstance(obj["real_mode"], bool):
            raise SchemaError(f"{where}.real_mode: expected a boolean")
        kwargs["real_mode"] = obj["real_mode"]
    try:
        return MeasurementConfig(**kwargs)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def frame_from_spec(spec: Any, where: str = "frame") -> DynamicalFrame:
    """Build the orbit described by one of the four frame schema variants."""
    if not isinstance(spec, dict):
        raise SchemaError(f"{where}: expected an object")
    if "harmonic" in spec:
        h = spec["harmonic"]
        if not isinstance(h, dict) or not isinstance(h.get("d"), int) or not isinstance(
            h.get("L"), int
        ):
            raise SchemaError(f"{where}.harmonic: expected integer fields 'd' and 'L'")
        try:
            return harmonic_frame(h["d"], h["L"])
        except ValueError as exc:
            raise SchemaError(f"{where}.harmonic: {exc}") from exc
    if "L" not in spec or not isinstance(spec["L"], int) or spec["L"] < 1:
        raise SchemaError(f"{where}: missing positive integer field 'L'")
    if "phi" not in spec:
        raise SchemaError(f"{where}: missing generator field 'phi'")
    phi = json_to_vector(spec["phi"], f"{where}.phi")
    length = spec["L"]
    try:
        if "A" in spec:
            return build(json_to_matrix(spec["A"], f"{where}.A"), phi, length)
        if "jordan" in spec:
            return build(assemble(json_to_jordan_spec(spec["jordan"], f"{where}.jordan")), phi, length)
        if "circulant" in spec:
            return build(circulant(json_to_vector(spec["circulant"], f"{where}.circulant")), phi, length)
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from exc
    raise SchemaError(
        f"{where}: expected one of the variants 'A', 'jordan', 'circulant', 'harmonic'"
    )


@dataclass(frozen=True)
class Instance:
    """A frame description plus measurement config, optional signal and seed."""

    frame_spec: dict
    config: MeasurementConfig
    signal: np.ndarray | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.signal is not None:
            object.__setattr__(self, "signal", frozen_copy(np.asarray(self.signal, dtype=complex)))

    def build_frame(self) -> DynamicalFrame:
        frame = frame_from_spec(self.frame_spec)
        if self.signal is not None and self.signal.size != frame.dim:
            raise SchemaError(
                f"signal has dim {self.signal.size} but the frame has dim {frame.dim}"
            )
        return frame


def instance_to_json(instance: Instance) -> dict:
    out: dict[str, Any] = {"frame": instance.frame_spec}
    if instance.signal is not None:
        out["x"] = vector_to_json(instance.signal)
    if instance.seed is not None:
        out["seed"] = instance.seed
    out["config"] = config_to_json(instance.config)
    return out


def json_to_instance(obj: Any) -> Instance:
    if not isinstance(obj, dict) or "frame" not in obj:
        raise SchemaError("instance: expected an object with a 'frame' field")
    config = json_to_config(obj["config"]) if "config" in obj else MeasurementConfig()
    signal = json_to_vector(obj["x"], "instance.x") if "x" in obj else None
    seed = obj.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise SchemaError("instance.seed: expected an integer")
    instance = Instance(obj["frame"], config, signal, seed)
    instance.build_frame()  # validates the frame spec and dimension consistency
    return instance


def measurement_set_to_json(ms: MeasurementSet) -> dict:
    aligned = [
        {"l": l, "j": j, "k": k, "value": ms.aligned[(l, j, k)]}
        for (l, j, k) in sorted(ms.aligned)
    ]
    return {
        "L": ms.length,
        "J": ms.jumps,
        "angles": angles_to_json(ms.angles),
        "base": [float(v) for v in ms.base],
        "aligned": aligned,
    }


def json_to_measurement_set(obj: Any) -> MeasurementSet:
    if not isinstance(obj, dict):
        raise SchemaError("measurements: expected an object")
    for key in ("L", "J", "angles", "base", "aligned"):
        if key not in obj:
            raise SchemaError(f"measurements: missing key {key!r}")
    if not isinstance(obj["L"], int) or not isinstance(obj["J"], int):
        raise SchemaError("measurements: 'L' and 'J' must be integers")
    base = obj["base"]
    if not isinstance(base, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in base
    ):
        raise SchemaError("measurements.base: expected a list of reals")
    entries = obj["aligned"]
    if not isinstance(entries, list):
        raise SchemaError("measurements.aligned: expected a list")
    aligned: dict[tuple[int, int, int], float] = {}
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or not {"l", "j", "k", "value"} <= set(entry):
            raise SchemaError(f"measurements.aligned[{i}]: expected keys l, j, k, value")
        if not all(isinstance(entry[f], int) for f in ("l", "j", "k")):
            raise SchemaError(f"measurements.aligned[{i}]: l, j, k must be integers")
        aligned[(entry["l"], entry["j"], entry["k"])] = float(entry["value"])
    try:
        return MeasurementSet(
            obj["L"],
            obj["J"],
            json_to_angles(obj["angles"], "measurements.angles"),
            np.array([float(v) for v in base]),
            aligned,
        )
    except ValueError as exc:
        raise SchemaError(f"measurements: {exc}") from exc


def recovery_result_to_json(result: RecoveryResult) -> dict:
    return {
        "estimate": vector_to_json(result.estimate),
        "status": result.status.value,
        "used_indices": list(result.used_indices),
        "component_size": result.component_size,
        "residual": result.residual,
    }


def dump_json(obj: Any, path: str | Path | None = None) -> str:
    """Canonical serialization: 2-space indent, trailing newline."""
    text = json.dumps(obj, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def load_json(path: str | Path) -> Any:
    """Parse a JSON file; malformed input reports line and column."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
