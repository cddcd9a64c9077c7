"""Centroid kernels, kernel-target alignment and the two training losses."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import Centroid, CircuitSpec, EncodingParams, encode
from .simulator import fidelity


class DegenerateKernelError(ValueError):
    """Raised when a kernel vector is identically zero and alignment is undefined."""


@dataclass
class KernelVector:
    values: np.ndarray
    centroid_label: int


def centroid_kernel(spec: CircuitSpec, params: EncodingParams, X, c: Centroid) -> KernelVector:
    """Fidelity between every encoded row of ``X`` and the encoded centroid."""
    if c.coords.shape != (spec.n_features,):
        raise ValueError(f"centroid has {c.coords.shape[0]} coords, expected {spec.n_features}")
    ref = encode(spec, params, c.coords[None, :])
    return KernelVector(fidelity(encode(spec, params, X), ref), c.label)


def _alignment_parts(k, y):
    k = np.asarray(k, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if k.shape != y.shape:
        raise ValueError(f"kernel length {k.shape} does not match labels {y.shape}")
    kk = float(k @ k)
    if kk == 0.0:
        raise DegenerateKernelError("kernel vector is all zeros; alignment is undefined")
    return k, y, float(y @ k), kk, float(y @ y)


def target_alignment(k, y, label: int | None = None) -> float:
    """Alignment of a centroid kernel vector with the labels.

    ``k`` is a :class:`KernelVector` or a plain array; with a plain array the
    centroid label must be passed explicitly.
    """
    if isinstance(k, KernelVector):
        label = k.centroid_label if label is None else label
        k = k.values
    if label not in (1, -1):
        raise ValueError("centroid label must be +1 or -1")
    _, _, s, kk, yy = _alignment_parts(k, y)
    return label * s / np.sqrt(kk * yy)


def target_alignment_grad(k, y, label: int) -> np.ndarray:
    """d TA / d k_i."""
    k, y, s, kk, yy = _alignment_parts(k, y)
    return label * (y / np.sqrt(kk * yy) - s * k / (kk**1.5 * np.sqrt(yy)))


def boundary_penalty(c) -> float:
    """Total distance of the centroid coordinates outside ``[0, 1]``."""
    coords = c.coords if isinstance(c, Centroid) else np.asarray(c, dtype=np.float64)
    return float(np.sum(np.maximum(coords - 1.0, 0.0) - np.minimum(coords, 0.0)))


def boundary_penalty_grad(c) -> np.ndarray:
    coords = c.coords if isinstance(c, Centroid) else np.asarray(c, dtype=np.float64)
    return (coords > 1.0).astype(np.float64) - (coords < 0.0).astype(np.float64)


def kao_loss(spec, params, X, y, c: Centroid, reg: float) -> float:
    """``1 - TA + reg * ||w||^2`` with the centroid held fixed."""
    ta = target_alignment(centroid_kernel(spec, params, X, c), y)
    return 1.0 - ta + reg * float(np.sum(params.w**2))


def co_loss(spec, params, X, y, c: Centroid, reg: float) -> float:
    """``1 - TA + reg * boundary_penalty(c)`` with the encoding held fixed."""
    ta = target_alignment(centroid_kernel(spec, params, X, c), y)
    return 1.0 - ta + reg * boundary_penalty(c)


def full_kernel_matrix(spec, params, X_a, X_b) -> np.ndarray:
    """Pairwise fidelity kernel. Quadratic; for inspection and checks only."""
    A = encode(spec, params, X_a).amplitudes
    B = encode(spec, params, X_b).amplitudes
    overlaps = A.conj() @ B.T
    return overlaps.real**2 + overlaps.imag**2


def ideal_kernel(y) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    return np.outer(y, y)


def matrix_alignment(K, y) -> float:
    """Frobenius alignment between a full kernel matrix and ``y y^T``."""
    K = np.asarray(K, dtype=np.float64)
    Kstar = ideal_kernel(y)
    return float(np.sum(K * Kstar) / np.sqrt(np.sum(K * K) * np.sum(Kstar * Kstar)))
