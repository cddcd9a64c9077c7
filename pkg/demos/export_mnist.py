"""
Export the 5,000-image MNIST sample shipped with mlxtend to a CSV file
=====================================================================

The output has 784 pixel columns ``px0 .. px783`` and a ``label`` column with
the raw digit. Configs relabel digits 0-4 as +1 and 5-9 as -1 via
``positive_labels``.

    pip install mlxtend
    python demos/export_mnist.py data/mnist_5k.csv
"""
import csv
import sys
from pathlib import Path

from mlxtend.data import mnist_data

out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/mnist_5k.csv")
out.parent.mkdir(parents=True, exist_ok=True)

X, y = mnist_data()
with out.open("w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow([f"px{i}" for i in range(X.shape[1])] + ["label"])
    for row, digit in zip(X.astype(int), y):
        writer.writerow(list(row) + [int(digit)])
print(f"wrote {len(y)} rows to {out}")
