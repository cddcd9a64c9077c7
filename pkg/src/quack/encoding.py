"""Trainable data encoding: features, weights and biases to gate angles to states.

Each of the ``n_layers`` layers applies a general rotation to every qubit and then
a CNOT ring. The rotation on qubit ``q`` of layer ``m`` takes the three angles
``theta[m, 3q : 3q + 3]`` as ``(phi, theta, omega)``, where

    theta[m, i] = w[m, i] * x[(3 * n_qubits * m + i) % d] + b[m, i]
"""
from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .simulator import Gate, StateBatch, _cnot_inplace, _matrix_inplace, rot_entries

WORKERS_ENV = "QUACK_MAX_WORKERS"


@dataclass(frozen=True)
class CircuitSpec:
    n_qubits: int
    n_layers: int
    n_features: int

    def __post_init__(self):
        for name in ("n_qubits", "n_layers", "n_features"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.n_angles < self.n_features:
            warnings.warn(
                f"{self.n_layers} layers x {self.n_qubits} qubits give {self.n_angles} angles "
                f"for {self.n_features} features; some features are never encoded",
                stacklevel=2,
            )

    @property
    def angles_per_layer(self) -> int:
        return 3 * self.n_qubits

    @property
    def n_angles(self) -> int:
        return self.n_layers * self.angles_per_layer

    @property
    def param_shape(self) -> tuple[int, int]:
        return (self.n_layers, self.angles_per_layer)


@dataclass
class EncodingParams:
    w: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=np.float64)
        self.b = np.asarray(self.b, dtype=np.float64)
        if self.w.shape != self.b.shape or self.w.ndim != 2:
            raise ValueError(f"w and b must be matching 2-D arrays, got {self.w.shape}, {self.b.shape}")
        if not (np.all(np.isfinite(self.w)) and np.all(np.isfinite(self.b))):
            raise ValueError("encoding parameters must be finite")

    def copy(self) -> "EncodingParams":
        return EncodingParams(self.w.copy(), self.b.copy())


@dataclass
class Centroid:
    coords: np.ndarray
    label: int

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=np.float64).reshape(-1)
        if self.label not in (1, -1):
            raise ValueError(f"centroid label must be +1 or -1, got {self.label}")
        if not np.all(np.isfinite(self.coords)):
            raise ValueError("centroid coordinates must be finite")

    def copy(self) -> "Centroid":
        return Centroid(self.coords.copy(), self.label)


def feature_indices(spec: CircuitSpec) -> np.ndarray:
    """Feature index read by every angle, shape ``(n_layers, 3 * n_qubits)``."""
    flat = np.arange(spec.n_angles) % spec.n_features
    return flat.reshape(spec.param_shape)


def _check_params(spec: CircuitSpec, params: EncodingParams) -> None:
    if params.w.shape != spec.param_shape:
        raise ValueError(f"params have shape {params.w.shape}, circuit needs {spec.param_shape}")


def gate_angles(spec: CircuitSpec, params: EncodingParams, x) -> np.ndarray:
    """Angles for one sample, shape ``(n_layers, 3 * n_qubits)``."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (spec.n_features,):
        raise ValueError(f"sample has shape {x.shape}, expected ({spec.n_features},)")
    return gate_angles_batch(spec, params, x[None, :])[0]


def gate_angles_batch(spec: CircuitSpec, params: EncodingParams, X) -> np.ndarray:
    """Angles for a batch, shape ``(batch, n_layers, 3 * n_qubits)``."""
    _check_params(spec, params)
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != spec.n_features:
        raise ValueError(f"X has {X.shape[1]} features, circuit expects {spec.n_features}")
    return params.w * X[:, feature_indices(spec)] + params.b


def ring_pairs(n_qubits: int) -> list[tuple[int, int]]:
    """CNOT ring ``(q, q + 1)`` for ``q < n - 1``, closed by ``(n - 1, 0)``."""
    if n_qubits == 1:
        return []
    return [(q, q + 1) for q in range(n_qubits - 1)] + [(n_qubits - 1, 0)]


def circuit_gates(spec: CircuitSpec, angles: np.ndarray) -> list[Gate]:
    """Explicit gate list for angles of shape ``(n_layers, 3n)`` or ``(batch, n_layers, 3n)``."""
    gates = []
    for m in range(spec.n_layers):
        for q in range(spec.n_qubits):
            a = angles[..., m, 3 * q : 3 * q + 3]
            gates.append(Gate("rot", (q,), (a[..., 0], a[..., 1], a[..., 2])))
        gates += [Gate("cnot", pair) for pair in ring_pairs(spec.n_qubits)]
    return gates


def _max_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _run_layers(spec: CircuitSpec, angles: np.ndarray) -> np.ndarray:
    n = spec.n_qubits
    amps = np.zeros((angles.shape[0], 2**n), dtype=np.complex128)
    amps[:, 0] = 1.0
    a = angles.reshape(angles.shape[0], spec.n_layers, n, 3)
    u = rot_entries(a[..., 0], a[..., 1], a[..., 2])
    pairs = ring_pairs(n)
    for m in range(spec.n_layers):
        for q in range(n):
            _matrix_inplace(amps, n, q, *(e[:, m, q, None, None] for e in u))
        for c, t in pairs:
            _cnot_inplace(amps, n, c, t)
    return amps


def encode_angles(spec: CircuitSpec, angles: np.ndarray) -> StateBatch:
    """Run the layered circuit from ``|0...0>`` with precomputed per-row angles."""
    angles = np.asarray(angles, dtype=np.float64)
    if angles.ndim != 3 or angles.shape[1:] != spec.param_shape:
        raise ValueError(f"angles must have shape (batch, {spec.param_shape}), got {angles.shape}")
    workers = min(_max_workers(), angles.shape[0])
    if workers == 1:
        return StateBatch(_run_layers(spec, angles), spec.n_qubits)
    chunks = np.array_split(angles, workers)
    with ThreadPoolExecutor(workers) as pool:
        parts = list(pool.map(lambda a: _run_layers(spec, a), chunks))
    return StateBatch(np.concatenate(parts), spec.n_qubits)


def encode(spec: CircuitSpec, params: EncodingParams, X) -> StateBatch:
    return encode_angles(spec, gate_angles_batch(spec, params, X))


def init_params(spec: CircuitSpec, scale: float, seed: int) -> EncodingParams:
    """Weights uniform on ``[-scale, scale]``, biases zero."""
    if not scale > 0:
        raise ValueError(f"scale must be positive, got {scale}")
    rng = np.random.default_rng(seed)
    w = rng.uniform(-scale, scale, size=spec.param_shape)
    return EncodingParams(w, np.zeros(spec.param_shape))
