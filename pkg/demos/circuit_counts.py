"""
How many circuits does training need?
=====================================

Centroid training evaluates one kernel row per sample per optimization step,
so the count grows linearly with the training set. Aligning a full kernel
matrix instead grows quadratically. The two meet at n_train = n_kao + n_co.

Run with ``python3 demos/circuit_counts.py``.
"""
from quack.cli import circuit_counts
from quack.data import synth_blobs
from quack.encoding import CircuitSpec
from quack.training import TrainConfig, train

print(f"{'n_train':>8} {'centroid':>12} {'full kernel':>14}")
for n in (10, 20, 50, 100, 1000, 10000):
    c = circuit_counts(n, 40, 10, 10)
    print(f"{n:>8} {c['n_quack']:>12,} {c['n_standard']:>14,}")

# check the formula against what training actually evaluates
ds = synth_blobs(50, 3, 0.3, seed=0)
_, history = train(ds, CircuitSpec(2, 2, 3), TrainConfig(n_epochs=3, n_kao=2, n_co=2, lr_kao=0.1, lr_co=0.1))
print("measured", history.kernel_rows, "expected", circuit_counts(50, 3, 2, 2)["n_quack"])
