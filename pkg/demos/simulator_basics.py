"""
Simulator basics: states, gates and the fidelity kernel
=======================================================

Run with ``python3 demos/simulator_basics.py``.
"""
import numpy as np

from quack.encoding import CircuitSpec, EncodingParams, encode, init_params
from quack.simulator import Gate, apply_cnot, apply_ry, fidelity, init_zero_state, run_circuit

# A batch of 3 two-qubit states, all |00>. Qubit 0 is the most significant bit.
state = init_zero_state(3, 2)
print(state.amplitudes)

# Angles can differ per row: RY(pi/2) on row 0, RY(pi) on row 1, nothing on row 2.
state = apply_ry(state, 0, np.array([np.pi / 2, np.pi, 0.0]))
state = apply_cnot(state, 0, 1)
print(np.round(state.amplitudes.real, 4))
# row 0 is the Bell state (|00> + |11>)/sqrt(2)
print("norms", state.norms())

# The same thing from a gate list
bell = run_circuit(init_zero_state(1, 2), [Gate("ry", (0,), (np.pi / 2,)), Gate("cnot", (0, 1))])
print("overlap with row 0:", fidelity(state, bell.amplitudes[0]))

# A data-encoding circuit: 2 qubits, 3 layers of Rot gates plus a CNOT ring.
# Each gate angle is w * x_k + b, with features used cyclically.
spec = CircuitSpec(n_qubits=2, n_layers=3, n_features=4)
params = init_params(spec, scale=2.0, seed=0)
print("weights per layer:", params.w.shape)

rng = np.random.default_rng(1)
X = rng.random((5, 4))
states = encode(spec, params, X)

# kernel of every sample against sample 0; k(x, x) = 1
print("k(x_i, x_0):", np.round(fidelity(states, states.amplitudes[0]), 4))

# With zero weights and biases every sample maps to |00>, so all kernels are 1.
zero = EncodingParams(np.zeros(spec.param_shape), np.zeros(spec.param_shape))
print("identity circuit:", fidelity(encode(spec, zero, X), encode(spec, zero, X[:1]).amplitudes[0]))
