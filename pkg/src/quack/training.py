"""Alternating kernel-alignment / centroid optimization and prediction."""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .data import Dataset, Normalizer
from .encoding import Centroid, CircuitSpec, EncodingParams, encode, init_params
from .gradients import Objective, value_and_grad
from .kernel import DegenerateKernelError
from .simulator import fidelity

log = logging.getLogger(__name__)

OPTIMIZERS = ("gd", "adam")


@dataclass(frozen=True)
class TrainConfig:
    n_epochs: int = 40
    n_kao: int = 10
    n_co: int = 10
    lr_kao: float = 5.0
    lr_co: float = 1.0
    r_decay: float = 0.9
    reg_kao: float = 0.001
    reg_co: float = 0.001
    init_scale: float = 0.1
    seed: int = 42
    optimizer: str = "gd"

    def __post_init__(self):
        for name in ("n_epochs", "n_kao", "n_co"):
            if int(getattr(self, name)) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.n_kao < 1 or self.n_co < 1:
            raise ValueError("n_kao and n_co must be positive")
        if not (self.lr_kao > 0 and self.lr_co > 0):
            raise ValueError("learning rates must be positive")
        if not 0 < self.r_decay <= 1:
            raise ValueError(f"r_decay must be in (0, 1], got {self.r_decay}")
        if self.reg_kao < 0 or self.reg_co < 0:
            raise ValueError("regularization strengths must be >= 0")
        if not self.init_scale > 0:
            raise ValueError("init_scale must be positive")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}, got {self.optimizer!r}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class StepRecord:
    epoch: int
    phase: str
    label: int
    loss: float
    alignment: float


@dataclass
class TrainHistory:
    records: list[StepRecord] = field(default_factory=list)
    kernel_rows: int = 0

    def __len__(self) -> int:
        return len(self.records)

    def summary(self) -> dict:
        out = {"steps": len(self.records), "kernel_rows": self.kernel_rows}
        for phase in ("KAO", "CO"):
            last = [r for r in self.records if r.phase == phase]
            if last:
                out[f"final_{phase.lower()}_loss"] = last[-1].loss
                out[f"final_{phase.lower()}_alignment"] = last[-1].alignment
        return out


@dataclass
class Model:
    spec: CircuitSpec
    params: EncodingParams
    centroid_pos: Centroid
    centroid_neg: Centroid
    normalizer: Normalizer
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.centroid_pos.label != 1 or self.centroid_neg.label != -1:
            raise ValueError("centroid_pos must carry label +1 and centroid_neg label -1")
        d = self.spec.n_features
        if self.centroid_pos.coords.shape != (d,) or self.centroid_neg.coords.shape != (d,):
            raise ValueError("centroid dimensions do not match the circuit")


class _Adam:
    def __init__(self, beta1=0.9, beta2=0.999, eps=1e-8):
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = self.v = None
        self.t = 0

    def step(self, grad: np.ndarray, lr: float) -> np.ndarray:
        if self.m is None:
            self.m = np.zeros_like(grad)
            self.v = np.zeros_like(grad)
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad**2
        m_hat = self.m / (1 - self.beta1**self.t)
        v_hat = self.v / (1 - self.beta2**self.t)
        return lr * m_hat / (np.sqrt(v_hat) + self.eps)


class _GD:
    def step(self, grad: np.ndarray, lr: float) -> np.ndarray:
        return lr * grad


def _make_optimizer(name: str):
    return _Adam() if name == "adam" else _GD()


def class_means(X, y) -> tuple[Centroid, Centroid]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    pos = y == 1
    neg = y == -1
    if not pos.any() or not neg.any():
        raise ValueError("both classes must be present to form centroids")
    return Centroid(X[pos].mean(axis=0), 1), Centroid(X[neg].mean(axis=0), -1)


def train(
    dataset: Dataset,
    spec: CircuitSpec,
    config: TrainConfig,
    normalizer: Normalizer | None = None,
    callback=None,
) -> tuple[Model, TrainHistory]:
    """Run the alternating two-step optimization on a ``[0, 1]``-normalized dataset.

    Each epoch takes ``n_kao`` full-batch steps on ``(w, b)`` against the working
    centroid, flips the working label, then takes ``n_co`` steps on that
    centroid's coordinates. Both learning rates are multiplied by ``r_decay``
    after every epoch. ``callback(epoch, model, history)``, if given, runs at the
    end of each epoch.
    """
    if dataset.n_features != spec.n_features:
        raise ValueError(f"dataset has {dataset.n_features} features, circuit expects {spec.n_features}")
    X, y = dataset.X, dataset.y
    params = init_params(spec, config.init_scale, config.seed)
    centroids = dict(zip((1, -1), class_means(X, y)))
    rng = np.random.default_rng([config.seed, 1])
    label = int(rng.integers(0, 2)) * 2 - 1

    if normalizer is None:
        normalizer = Normalizer(np.zeros(spec.n_features), np.ones(spec.n_features))
    history = TrainHistory()
    opt_params = _make_optimizer(config.optimizer)
    opt_centroid = {1: _make_optimizer(config.optimizer), -1: _make_optimizer(config.optimizer)}
    lr_kao, lr_co = config.lr_kao, config.lr_co

    def model():
        return Model(
            spec,
            params.copy(),
            centroids[1].copy(),
            centroids[-1].copy(),
            normalizer,
            {"seed": config.seed, "config": config.to_dict()},
        )

    for epoch in range(config.n_epochs):
        for step in range(config.n_kao):
            obj = Objective("kao", spec, params, X, y, centroids[label], config.reg_kao)
            ev = _evaluate(obj, epoch, "KAO", step)
            vec = obj.vector() - opt_params.step(ev.grad, lr_kao)
            params = obj.with_vector(vec).params
            history.records.append(StepRecord(epoch, "KAO", label, ev.loss, ev.alignment))
            history.kernel_rows += ev.kernel_rows
        label = -label
        for step in range(config.n_co):
            obj = Objective("co", spec, params, X, y, centroids[label], config.reg_co)
            ev = _evaluate(obj, epoch, "CO", step)
            centroids[label] = Centroid(obj.vector() - opt_centroid[label].step(ev.grad, lr_co), label)
            history.records.append(StepRecord(epoch, "CO", label, ev.loss, ev.alignment))
            history.kernel_rows += ev.kernel_rows
        lr_kao *= config.r_decay
        lr_co *= config.r_decay
        log.info(
            "epoch %d: KAO loss %.4f, CO loss %.4f",
            epoch,
            history.records[-1 - config.n_co].loss,
            history.records[-1].loss,
        )
        if callback is not None:
            callback(epoch, model(), history)

    return model(), history


def _evaluate(obj: Objective, epoch: int, phase: str, step: int):
    try:
        return value_and_grad(obj)
    except DegenerateKernelError as exc:
        raise DegenerateKernelError(f"epoch {epoch}, {phase} step {step}: {exc}") from exc


def centroid_kernels(model: Model, X) -> np.ndarray:
    """Kernel of shape ``(n_samples, 2)``: column 0 for the +1 centroid, column 1 for -1."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.spec.n_features:
        raise ValueError(f"X has {X.shape[1]} features, model expects {model.spec.n_features}")
    states = encode(model.spec, model.params, X)
    refs = encode(model.spec, model.params, np.vstack([model.centroid_pos.coords, model.centroid_neg.coords]))
    return np.column_stack([fidelity(states, refs.amplitudes[0]), fidelity(states, refs.amplitudes[1])])


def predict(model: Model, X_new, normalize: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Labels and scores ``K(x, c+) - K(x, c-)``; a zero score is labelled +1.

    Pass ``normalize=True`` when ``X_new`` holds raw features so the model's
    training-split normalizer is applied first.
    """
    X_new = np.atleast_2d(np.asarray(X_new, dtype=np.float64))
    if normalize:
        X_new = model.normalizer.transform(X_new)
    K = centroid_kernels(model, X_new)
    scores = K[:, 0] - K[:, 1]
    return np.where(scores >= 0, 1, -1), scores
