"""Gradients of the two training losses.

Three independent engines:

* ``grad_reverse``: adjoint (reverse-mode) differentiation through the state
  evolution, one backward sweep that un-applies each gate.
* ``grad_param_shift``: gate-level shift rule, ``df/dt = (f(t + pi/2) - f(t - pi/2)) / 2``
  for every rotation angle, chained through the linear angle map.
* ``grad_fd``: central finite differences of the loss value.

A loss is described by an :class:`Objective`. For ``kind="kao"`` the parameter
vector is ``concat(w.ravel(), b.ravel())``; for ``kind="co"`` it is the working
centroid's coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, NamedTuple

import numpy as np

from .encoding import (
    Centroid,
    CircuitSpec,
    EncodingParams,
    encode_angles,
    feature_indices,
    gate_angles_batch,
    ring_pairs,
)
from .kernel import boundary_penalty, boundary_penalty_grad, target_alignment, target_alignment_grad
from .simulator import _cnot_inplace, _ry_inplace, _rz_inplace, _split, fidelity


@dataclass
class Objective:
    kind: str
    spec: CircuitSpec
    params: EncodingParams
    X: np.ndarray
    y: np.ndarray
    centroid: Centroid
    reg: float

    def __post_init__(self):
        if self.kind not in ("kao", "co"):
            raise ValueError(f"kind must be 'kao' or 'co', got {self.kind!r}")
        self.X = np.atleast_2d(np.asarray(self.X, dtype=np.float64))
        self.y = np.asarray(self.y, dtype=np.float64)

    def vector(self) -> np.ndarray:
        if self.kind == "kao":
            return np.concatenate([self.params.w.ravel(), self.params.b.ravel()])
        return self.centroid.coords.copy()

    def with_vector(self, v) -> "Objective":
        v = np.asarray(v, dtype=np.float64)
        if self.kind == "kao":
            size = self.params.w.size
            shape = self.params.w.shape
            return replace(self, params=EncodingParams(v[:size].reshape(shape), v[size:].reshape(shape)))
        return replace(self, centroid=Centroid(v, self.centroid.label))

    def regularizer(self) -> float:
        if self.kind == "kao":
            return self.reg * float(np.sum(self.params.w**2))
        return self.reg * boundary_penalty(self.centroid)

    def value(self) -> float:
        k = self.kernel()
        return 1.0 - target_alignment(k, self.y, self.centroid.label) + self.regularizer()

    def kernel(self) -> np.ndarray:
        angles = gate_angles_batch(self.spec, self.params, np.vstack([self.centroid.coords, self.X]))
        amps = encode_angles(self.spec, angles).amplitudes
        o = amps[1:] @ amps[0].conj()
        return o.real**2 + o.imag**2


class Evaluation(NamedTuple):
    loss: float
    alignment: float
    grad: np.ndarray
    kernel_rows: int


# --- adjoint sweep -------------------------------------------------------------


def _adjoint_angle_grads(spec: CircuitSpec, angles, psi, lam) -> np.ndarray:
    """dL/d(angle) for every row, given final states and cotangents.

    The loss is assumed to satisfy ``dL = 2 Re <lam|d psi>``. For a gate
    ``exp(-i t G)`` this gives ``dL/dt = 2 Im <lam|G|psi>`` at the gate output.
    """
    n = spec.n_qubits
    rows = psi.shape[0]
    work = np.concatenate([psi, lam])  # one sweep un-applies gates on both halves
    a = np.concatenate([angles, angles]).reshape(2 * rows, spec.n_layers, n, 3)
    grads = np.zeros((rows, spec.n_layers, n, 3))
    pairs = ring_pairs(n)

    def z_term(q):
        v = _split(work, n, q)
        p, l = v[:rows], v[rows:]
        prod = l.conj() * p
        return np.sum(prod[:, :, 0, :], axis=(1, 2)).imag - np.sum(prod[:, :, 1, :], axis=(1, 2)).imag

    def y_term(q):
        v = _split(work, n, q)
        p, l = v[:rows], v[rows:]
        # <l|Y|p> with Y = [[0, -i], [i, 0]]
        s = np.sum(l[:, :, 1, :].conj() * p[:, :, 0, :] - l[:, :, 0, :].conj() * p[:, :, 1, :], axis=(1, 2))
        return s.real  # Im(i * s) = Re(s)

    for m in reversed(range(spec.n_layers)):
        for c, t in reversed(pairs):
            _cnot_inplace(work, n, c, t)
        for q in reversed(range(n)):
            grads[:, m, q, 2] = z_term(q)
            _rz_inplace(work, n, q, -a[:, m, q, 2])
            grads[:, m, q, 1] = y_term(q)
            _ry_inplace(work, n, q, -a[:, m, q, 1])
            grads[:, m, q, 0] = z_term(q)
            _rz_inplace(work, n, q, -a[:, m, q, 0])
    return grads.reshape(rows, spec.n_layers, 3 * n)


def _weight_grads(obj: Objective, g_rows: np.ndarray, Xall: np.ndarray):
    idx = feature_indices(obj.spec)
    gw = np.einsum("rmj,rmj->mj", g_rows, Xall[:, idx])
    gb = g_rows.sum(axis=0)
    return gw + 2.0 * obj.reg * obj.params.w, gb


def _coord_grads(obj: Objective, g_centroid: np.ndarray):
    idx = feature_indices(obj.spec)
    gc = np.bincount(idx.ravel(), weights=(g_centroid * obj.params.w).ravel(), minlength=obj.spec.n_features)
    return gc + obj.reg * boundary_penalty_grad(obj.centroid)


def value_and_grad(obj: Objective) -> Evaluation:
    """Loss, alignment and reverse-mode gradient in one forward/backward pass."""
    spec, params = obj.spec, obj.params
    label = obj.centroid.label
    if obj.kind == "kao":
        Xall = np.vstack([obj.centroid.coords, obj.X])
        angles = gate_angles_batch(spec, params, Xall)
        amps = encode_angles(spec, angles).amplitudes
    else:
        Xall = obj.centroid.coords[None, :]
        angles = gate_angles_batch(spec, params, Xall)
        amps = np.vstack([encode_angles(spec, angles).amplitudes, encode_angles(spec, gate_angles_batch(spec, params, obj.X)).amplitudes])
    psi_c, psi = amps[0], amps[1:]
    o = psi @ psi_c.conj()
    k = o.real**2 + o.imag**2
    ta = target_alignment(k, obj.y, label)
    g = -target_alignment_grad(k, obj.y, label)  # dL/dk
    lam_c = (g * o.conj()) @ psi
    loss = 1.0 - ta + obj.regularizer()

    if obj.kind == "kao":
        lam = np.vstack([lam_c, (g * o)[:, None] * psi_c[None, :]])
        G = _adjoint_angle_grads(spec, angles, amps, lam)
        gw, gb = _weight_grads(obj, G, Xall)
        grad = np.concatenate([gw.ravel(), gb.ravel()])
    else:
        G = _adjoint_angle_grads(spec, angles, psi_c[None, :], lam_c[None, :])
        grad = _coord_grads(obj, G[0])
    return Evaluation(loss, ta, grad, obj.X.shape[0])


def grad_reverse(obj: Objective) -> np.ndarray:
    return value_and_grad(obj).grad


def grad_param_shift(obj: Objective) -> np.ndarray:
    """Shift-rule gradient: two extra circuit runs per angle and per side."""
    spec, params = obj.spec, obj.params
    label = obj.centroid.label
    shift = np.pi / 2
    a_c = gate_angles_batch(spec, params, obj.centroid.coords[None, :])
    a_s = gate_angles_batch(spec, params, obj.X)
    psi_c = encode_angles(spec, a_c)
    psi = encode_angles(spec, a_s)
    k = fidelity(psi, psi_c)
    g = -target_alignment_grad(k, obj.y, label)

    G_c = np.zeros(spec.param_shape)
    G_s = np.zeros((obj.X.shape[0],) + spec.param_shape)
    for m in range(spec.n_layers):
        for j in range(spec.angles_per_layer):
            plus, minus = a_c.copy(), a_c.copy()
            plus[:, m, j] += shift
            minus[:, m, j] -= shift
            dk = (fidelity(psi, encode_angles(spec, plus)) - fidelity(psi, encode_angles(spec, minus))) / 2
            G_c[m, j] = g @ dk
            if obj.kind == "kao":
                plus, minus = a_s.copy(), a_s.copy()
                plus[:, m, j] += shift
                minus[:, m, j] -= shift
                dk = (fidelity(encode_angles(spec, plus), psi_c) - fidelity(encode_angles(spec, minus), psi_c)) / 2
                G_s[:, m, j] = g * dk

    if obj.kind == "co":
        return _coord_grads(obj, G_c)
    Xall = np.vstack([obj.centroid.coords, obj.X])
    gw, gb = _weight_grads(obj, np.concatenate([G_c[None], G_s]), Xall)
    return np.concatenate([gw.ravel(), gb.ravel()])


def grad_fd(fn: Callable[[np.ndarray], float], p, step: float = 1e-5) -> np.ndarray:
    """Central differences ``(f(p + h e_i) - f(p - h e_i)) / 2h``."""
    if not 1e-7 <= step <= 1e-3:
        raise ValueError(f"step must be in [1e-7, 1e-3], got {step}")
    p = np.asarray(p, dtype=np.float64)
    out = np.empty(p.size)
    for i in range(p.size):
        e = np.zeros(p.size)
        e[i] = step
        out[i] = (fn((p + e).reshape(p.shape)) - fn((p - e).reshape(p.shape))) / (2 * step)
    return out


def grad_fd_objective(obj: Objective, step: float = 1e-5) -> np.ndarray:
    return grad_fd(lambda v: obj.with_vector(v).value(), obj.vector(), step)
