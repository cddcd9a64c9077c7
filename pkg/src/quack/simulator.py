"""Batched pure-state simulator.

A batch holds one state vector per sample, shape ``(batch, 2**n)``. Every gate
acts on all rows at once with its own angle per row, using strided views of the
amplitude array; no ``2**n x 2**n`` matrices are built on the main path.

Qubit 0 is the most significant bit of the basis index, so ``|10>`` on two
qubits is index 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

MAX_QUBITS = 24
MAX_ORACLE_QUBITS = 6


@dataclass
class StateBatch:
    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim == 1:
            amps = amps[None, :]
        if amps.ndim != 2 or amps.shape[1] != 2**self.n_qubits:
            raise ValueError(
                f"amplitudes must have shape (batch, {2**self.n_qubits}), got {amps.shape}"
            )
        self.amplitudes = np.ascontiguousarray(amps)

    @property
    def batch_size(self) -> int:
        return self.amplitudes.shape[0]

    def copy(self) -> "StateBatch":
        return StateBatch(self.amplitudes.copy(), self.n_qubits)

    def norms(self) -> np.ndarray:
        return np.sqrt(np.sum(np.abs(self.amplitudes) ** 2, axis=1))


class Gate(NamedTuple):
    """One gate of a circuit.

    ``name`` is one of ``"rz"``, ``"ry"``, ``"rot"`` or ``"cnot"``. ``wires`` is
    ``(qubit,)`` or ``(control, target)``. ``params`` holds one angle (``rz``/``ry``)
    or ``(phi, theta, omega)`` (``rot``); each angle is a scalar or a per-row vector.
    """

    name: str
    wires: tuple
    params: tuple = ()


def init_zero_state(batch_size: int, n_qubits: int) -> StateBatch:
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}")
    amps = np.zeros((batch_size, 2**n_qubits), dtype=np.complex128)
    amps[:, 0] = 1.0
    return StateBatch(amps, n_qubits)


# --- in-place kernels on raw (batch, 2**n) arrays -----------------------------


def _check_qubit(q: int, n: int) -> None:
    if not 0 <= q < n:
        raise IndexError(f"qubit {q} out of range for {n} qubits")


def _split(amps: np.ndarray, n: int, q: int) -> np.ndarray:
    # (batch, high bits, qubit q, low bits); a view, writes go through
    return amps.reshape(amps.shape[0], 1 << q, 2, 1 << (n - q - 1))


def _col(values, batch: int) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    if v.ndim == 0:
        v = np.full(batch, float(v))
    if v.shape != (batch,):
        raise ValueError(f"expected {batch} angles, got shape {v.shape}")
    return v[:, None, None]


def _rz_inplace(amps, n, q, angles):
    v = _split(amps, n, q)
    half = _col(angles, amps.shape[0]) / 2
    v[:, :, 0, :] *= np.exp(-1j * half)
    v[:, :, 1, :] *= np.exp(1j * half)


def _ry_inplace(amps, n, q, angles):
    v = _split(amps, n, q)
    half = _col(angles, amps.shape[0]) / 2
    c, s = np.cos(half), np.sin(half)
    a0 = v[:, :, 0, :].copy()
    a1 = v[:, :, 1, :]
    v[:, :, 0, :] = c * a0 - s * a1
    v[:, :, 1, :] = s * a0 + c * a1


def _matrix_inplace(amps, n, q, u00, u01, u10, u11):
    # per-row 2x2 matrix, entries given as (batch, 1, 1) arrays
    v = _split(amps, n, q)
    a0 = v[:, :, 0, :].copy()
    a1 = v[:, :, 1, :].copy()
    v[:, :, 0, :] = u00 * a0 + u01 * a1
    v[:, :, 1, :] = u10 * a0 + u11 * a1


def rot_entries(phi, theta, omega):
    """Entries of RZ(omega) RY(theta) RZ(phi), elementwise over the inputs."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return (
        np.exp(-0.5j * (phi + omega)) * c,
        -np.exp(0.5j * (phi - omega)) * s,
        np.exp(-0.5j * (phi - omega)) * s,
        np.exp(0.5j * (phi + omega)) * c,
    )


def _rot_inplace(amps, n, q, phi, theta, omega):
    b = amps.shape[0]
    _matrix_inplace(amps, n, q, *rot_entries(_col(phi, b), _col(theta, b), _col(omega, b)))


def _cnot_inplace(amps, n, control, target):
    v = amps.reshape((amps.shape[0],) + (2,) * n)
    lo = [slice(None)] * (n + 1)
    hi = [slice(None)] * (n + 1)
    lo[1 + control] = hi[1 + control] = 1
    lo[1 + target], hi[1 + target] = 0, 1
    lo, hi = tuple(lo), tuple(hi)
    tmp = v[lo].copy()
    v[lo] = v[hi]
    v[hi] = tmp


def _check_cnot(control, target, n):
    _check_qubit(control, n)
    _check_qubit(target, n)
    if control == target:
        raise ValueError("CNOT control and target must differ")


# --- public, non-mutating gate API ---------------------------------------------


def apply_rz(state: StateBatch, qubit: int, angles) -> StateBatch:
    """RZ(t) = diag(exp(-i t/2), exp(i t/2)) on ``qubit``, one angle per row."""
    _check_qubit(qubit, state.n_qubits)
    out = state.copy()
    _rz_inplace(out.amplitudes, out.n_qubits, qubit, angles)
    return out


def apply_ry(state: StateBatch, qubit: int, angles) -> StateBatch:
    _check_qubit(qubit, state.n_qubits)
    out = state.copy()
    _ry_inplace(out.amplitudes, out.n_qubits, qubit, angles)
    return out


def apply_rot(state: StateBatch, qubit: int, phi, theta, omega) -> StateBatch:
    """General rotation RZ(omega) RY(theta) RZ(phi); RZ(phi) acts first."""
    _check_qubit(qubit, state.n_qubits)
    out = state.copy()
    _rot_inplace(out.amplitudes, out.n_qubits, qubit, phi, theta, omega)
    return out


def apply_cnot(state: StateBatch, control: int, target: int) -> StateBatch:
    _check_cnot(control, target, state.n_qubits)
    out = state.copy()
    _cnot_inplace(out.amplitudes, out.n_qubits, control, target)
    return out


def apply_gate_inplace(amps: np.ndarray, n: int, gate: Gate) -> None:
    if gate.name == "cnot":
        _check_cnot(*gate.wires, n)
        _cnot_inplace(amps, n, *gate.wires)
        return
    (q,) = gate.wires
    _check_qubit(q, n)
    if gate.name == "rz":
        _rz_inplace(amps, n, q, gate.params[0])
    elif gate.name == "ry":
        _ry_inplace(amps, n, q, gate.params[0])
    elif gate.name == "rot":
        _rot_inplace(amps, n, q, *gate.params)
    else:
        raise ValueError(f"unknown gate {gate.name!r}")


def run_circuit(state: StateBatch, gates: Sequence[Gate]) -> StateBatch:
    out = state.copy()
    for gate in gates:
        apply_gate_inplace(out.amplitudes, out.n_qubits, gate)
    return out


def inverse_gates(gates: Sequence[Gate]) -> list[Gate]:
    """Gate list of the adjoint circuit: reversed order, negated angles.

    ``rot`` is expanded into its three factors so the inverse stays in the gate set.
    """
    inv = []
    for g in reversed(gates):
        if g.name == "cnot":
            inv.append(g)
        elif g.name in ("rz", "ry"):
            inv.append(Gate(g.name, g.wires, (-np.asarray(g.params[0]),)))
        elif g.name == "rot":
            phi, theta, omega = (np.asarray(p) for p in g.params)
            inv += [
                Gate("rz", g.wires, (-omega,)),
                Gate("ry", g.wires, (-theta,)),
                Gate("rz", g.wires, (-phi,)),
            ]
        else:
            raise ValueError(f"unknown gate {g.name!r}")
    return inv


def fidelity(states: StateBatch, reference) -> np.ndarray:
    """|<reference|psi_i>|^2 for every row of ``states``."""
    ref = reference.amplitudes if isinstance(reference, StateBatch) else np.asarray(reference)
    ref = np.asarray(ref, dtype=np.complex128).reshape(-1)
    if ref.shape[0] != states.amplitudes.shape[1]:
        raise ValueError(
            f"reference has dimension {ref.shape[0]}, states have {states.amplitudes.shape[1]}"
        )
    overlaps = states.amplitudes @ ref.conj()
    return overlaps.real**2 + overlaps.imag**2


# --- dense reference -------------------------------------------------------------

_I2 = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_P0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
_P1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)


def _rz_matrix(t):
    return np.array([[np.exp(-0.5j * t), 0], [0, np.exp(0.5j * t)]], dtype=np.complex128)


def _ry_matrix(t):
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def _embed(ops: dict, n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for q in range(n):
        out = np.kron(out, ops.get(q, _I2))
    return out


def _scalar(p) -> float:
    a = np.asarray(p, dtype=np.float64)
    if a.size != 1:
        raise ValueError("dense oracle takes scalar angles only")
    return float(a.reshape(()))


def dense_unitary_oracle(gates: Sequence[Gate], n_qubits: int) -> np.ndarray:
    """Full circuit unitary from Kronecker products. Test-only brute force."""
    if not 1 <= n_qubits <= MAX_ORACLE_QUBITS:
        raise ValueError(f"dense oracle supports 1..{MAX_ORACLE_QUBITS} qubits, got {n_qubits}")
    u = np.eye(2**n_qubits, dtype=np.complex128)
    for g in gates:
        if g.name == "cnot":
            c, t = g.wires
            if c == t or not (0 <= c < n_qubits and 0 <= t < n_qubits):
                raise ValueError(f"bad CNOT wires {g.wires}")
            m = _embed({c: _P0}, n_qubits) + _embed({c: _P1, t: _X}, n_qubits)
        else:
            (q,) = g.wires
            if not 0 <= q < n_qubits:
                raise IndexError(f"qubit {q} out of range")
            if g.name == "rz":
                single = _rz_matrix(_scalar(g.params[0]))
            elif g.name == "ry":
                single = _ry_matrix(_scalar(g.params[0]))
            elif g.name == "rot":
                phi, theta, omega = (_scalar(p) for p in g.params)
                single = _rz_matrix(omega) @ _ry_matrix(theta) @ _rz_matrix(phi)
            else:
                raise ValueError(f"unknown gate {g.name!r}")
            m = _embed({q: single}, n_qubits)
        u = m @ u
    return u
