"""
Where a single centroid per class struggles: XOR
================================================

Both XOR classes have the same mean, so a centroid classifier in the input
space is at chance. The trainable encoding can move the centroids and reshape
the feature map, but one centroid per class still has to stand in for two
separate clusters, and in practice training stays near chance as well.

Run with ``python3 demos/xor_limits.py``.
"""
from quack.baseline import rbf_centroid_classify
from quack.data import apply_normalizer, fit_normalizer, split_and_subsample, synth_xor
from quack.encoding import CircuitSpec
from quack.metrics import roc_auc
from quack.training import TrainConfig, predict, train

splits = split_and_subsample(synth_xor(1400, seed=7), 200, 200, 200, seed=0)
norm = fit_normalizer(splits.train)
tr, te = apply_normalizer(norm, splits.train), apply_normalizer(norm, splits.test)

print("class means:", tr.X[tr.y == 1].mean(0).round(3), tr.X[tr.y == -1].mean(0).round(3))

_, s = rbf_centroid_classify(tr, te.X)
print("RBF centroid test AUC", round(roc_auc(s, te.y), 3))

for lr in (0.5, 2.0):
    model, _ = train(tr, CircuitSpec(2, 4, 2), TrainConfig(n_epochs=15, lr_kao=lr, lr_co=lr, seed=1))
    _, s = predict(model, te.X)
    print(f"QUACK lr={lr}: test AUC {roc_auc(s, te.y):.3f}")
