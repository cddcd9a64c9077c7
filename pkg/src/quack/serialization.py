"""Run-config and model files (JSON, versioned)."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import Dataset, Normalizer, Splits, load_csv, split_and_subsample, synth_blobs, synth_xor
from .encoding import Centroid, CircuitSpec, EncodingParams
from .training import Model, TrainConfig

CONFIG_VERSION = 1
MODEL_FORMAT = "quack-model"
MODEL_VERSION = 1


class ConfigError(ValueError):
    pass


_TRAINING_REQUIRED = {
    "n_epochs", "n_kao", "n_co", "lr_kao", "lr_co", "r_decay", "reg_kao", "reg_co", "init_scale", "seed",
}
_TRAINING_OPTIONAL = {"optimizer"}
_DATA_REQUIRED = {"n_train", "n_val", "n_test"}
_DATA_OPTIONAL = {"csv", "test_csv", "synthetic", "label_column", "positive_labels", "train_frac", "split_seed"}
_SYNTH_KEYS = {
    "blobs": ({"n", "d", "separation", "seed"}, {"sigma"}),
    "xor": ({"n", "seed"}, set()),
}

# Per-dataset learning rates, decay and regularization with the shared schedule
# (53 layers, 5 qubits, 40 epochs of 10 + 10 steps, weight scale 0.1).
SHARED = {"n_layers": 53, "n_qubits": 5, "n_train": 1000, "n_val": 400, "n_test": 400,
          "n_epochs": 40, "n_kao": 10, "n_co": 10, "init_scale": 0.1, "seeds": (42, 123, 1234)}
PRESETS = {
    "census": {"lr_kao": 0.5, "lr_co": 0.5, "r_decay": 0.9, "reg_kao": 0.001, "reg_co": 0.001},
    "covert": {"lr_kao": 0.5, "lr_co": 0.1, "r_decay": 0.9, "reg_kao": 0.001, "reg_co": 0.001},
    "doh": {"lr_kao": 0.5, "lr_co": 0.5, "r_decay": 0.9, "reg_kao": 0.001, "reg_co": 0.001},
    "emnist": {"lr_kao": 1.0, "lr_co": 5.0, "r_decay": 0.9, "reg_kao": 0.001, "reg_co": 0.001},
    "fmnist": {"lr_kao": 5.0, "lr_co": 0.5, "r_decay": 0.8, "reg_kao": 0.0001, "reg_co": 0.001},
    "kdd": {"lr_kao": 0.5, "lr_co": 1.0, "r_decay": 0.9, "reg_kao": 0.001, "reg_co": 0.001},
    "mnist": {"lr_kao": 5.0, "lr_co": 1.0, "r_decay": 0.9, "reg_kao": 0.001, "reg_co": 0.001},
    "url": {"lr_kao": 0.5, "lr_co": 0.5, "r_decay": 0.9, "reg_kao": 0.001, "reg_co": 0.001},
}


@dataclass
class RunConfig:
    circuit: dict
    training: TrainConfig
    data: dict
    text: str
    base_dir: Path


def _check_keys(section: str, got: dict, required: set, optional: set) -> None:
    if not isinstance(got, dict):
        raise ConfigError(f"'{section}' must be an object")
    unknown = set(got) - required - optional
    if unknown:
        raise ConfigError(f"unknown key(s) in '{section}': {', '.join(sorted(unknown))}")
    missing = required - set(got)
    if missing:
        raise ConfigError(f"missing key(s) in '{section}': {', '.join(sorted(missing))}")


def parse_config(text: str, base_dir=".") -> RunConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    _check_keys("config", raw, {"version", "circuit", "training", "data"}, set())
    if raw["version"] != CONFIG_VERSION:
        raise ConfigError(f"unsupported config version {raw['version']}")
    _check_keys("circuit", raw["circuit"], {"n_qubits", "n_layers"}, set())
    _check_keys("training", raw["training"], _TRAINING_REQUIRED, _TRAINING_OPTIONAL)
    data = raw["data"]
    _check_keys("data", data, _DATA_REQUIRED, _DATA_OPTIONAL)
    if ("csv" in data) == ("synthetic" in data):
        raise ConfigError("'data' needs exactly one of 'csv' or 'synthetic'")
    if "synthetic" in data:
        synth = dict(data["synthetic"])
        kind = synth.pop("kind", None)
        if kind not in _SYNTH_KEYS:
            raise ConfigError(f"synthetic kind must be one of {sorted(_SYNTH_KEYS)}, got {kind!r}")
        _check_keys("data.synthetic", synth, *_SYNTH_KEYS[kind])
    try:
        training = TrainConfig(**raw["training"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad training section: {exc}") from None
    return RunConfig(raw["circuit"], training, data, text, Path(base_dir))


def load_config(path) -> RunConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), path.parent)


def load_dataset(cfg: RunConfig) -> tuple[Dataset, Dataset | None]:
    data = cfg.data
    if "synthetic" in data:
        synth = dict(data["synthetic"])
        kind = synth.pop("kind")
        return (synth_blobs(**synth) if kind == "blobs" else synth_xor(**synth)), None
    positive = data.get("positive_labels")
    positive = None if positive is None else set(positive)
    label_column = data.get("label_column", "label")

    def read(key):
        p = Path(data[key])
        return load_csv(p if p.is_absolute() else cfg.base_dir / p, label_column, positive)

    return read("csv"), (read("test_csv") if "test_csv" in data else None)


def make_splits(cfg: RunConfig) -> Splits:
    full, test_pool = load_dataset(cfg)
    d = cfg.data
    return split_and_subsample(
        full,
        d["n_train"],
        d["n_val"],
        d["n_test"],
        d.get("train_frac", 0.7),
        d.get("split_seed", 0),
        test_pool,
    )


def _floats(a) -> list[float]:
    # repr of a Python float is the shortest string that round-trips exactly
    return [float(v) for v in np.asarray(a, dtype=np.float64).ravel()]


def model_to_dict(model: Model, config_text: str | None = None, history: dict | None = None) -> dict:
    spec = model.spec
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "circuit": {"n_qubits": spec.n_qubits, "n_layers": spec.n_layers, "n_features": spec.n_features},
        "w": _floats(model.params.w),
        "b": _floats(model.params.b),
        "centroid_pos": _floats(model.centroid_pos.coords),
        "centroid_neg": _floats(model.centroid_neg.coords),
        "normalizer": {"min": _floats(model.normalizer.minimum), "max": _floats(model.normalizer.maximum)},
        "seed": model.metadata.get("seed"),
        "training": model.metadata.get("config"),
        "config": config_text,
        "history": history,
    }


def save_model(model: Model, path, config_text: str | None = None, history: dict | None = None) -> None:
    doc = model_to_dict(model, config_text, history)
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def model_from_dict(doc: dict) -> Model:
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError("not a quack model file")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')}")
    spec = CircuitSpec(**doc["circuit"])
    shape = spec.param_shape
    params = EncodingParams(np.reshape(doc["w"], shape), np.reshape(doc["b"], shape))
    norm = Normalizer(doc["normalizer"]["min"], doc["normalizer"]["max"])
    meta = {"seed": doc.get("seed"), "config": doc.get("training"), "config_text": doc.get("config"),
            "history": doc.get("history")}
    return Model(spec, params, Centroid(doc["centroid_pos"], 1), Centroid(doc["centroid_neg"], -1), norm, meta)


def load_model(path) -> Model:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: model file is not valid JSON: {exc}") from None
    return model_from_dict(doc)
