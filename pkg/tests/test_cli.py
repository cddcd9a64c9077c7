import json

import numpy as np
import pytest

from quack.cli import circuit_counts, main
from quack.data import Dataset, Normalizer, save_csv, synth_blobs
from quack.encoding import Centroid, CircuitSpec, EncodingParams
from quack.serialization import ConfigError, load_model, parse_config, save_model
from quack.training import Model, TrainConfig, predict, train

BLOBS = {
    "version": 1,
    "circuit": {"n_qubits": 2, "n_layers": 3},
    "training": {"n_epochs": 2, "n_kao": 2, "n_co": 2, "lr_kao": 0.5, "lr_co": 0.5, "r_decay": 0.9,
                 "reg_kao": 0.001, "reg_co": 0.001, "init_scale": 0.1, "seed": 7},
    "data": {"synthetic": {"kind": "blobs", "n": 200, "d": 3, "separation": 0.4, "seed": 1},
             "n_train": 40, "n_val": 20, "n_test": 20},
}


def parse_kv(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


@pytest.fixture
def config(tmp_path):
    p = tmp_path / "run.json"
    p.write_text(json.dumps(BLOBS))
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestCount:
    def test_desk_scale_counts(self, capsys):
        code, out, _ = run(capsys, "count", 1000, 40, 10, 10)
        kv = parse_kv(out)
        assert code == 0
        assert (kv["n_quack"], kv["n_standard"], kv["crossover_n_train"]) == ("800000", "40000000", "20")

    def test_crossover(self):
        c = circuit_counts(20, 40, 10, 10)
        assert c["n_quack"] == c["n_standard"]

    def test_single_sample(self):
        assert circuit_counts(1, 7, 3, 2) == {"n_quack": 35, "n_standard": 7, "crossover_n_train": 5}

    def test_table(self, capsys):
        _, out, _ = run(capsys, "count", "--table", 1000, 40, 10, 10)
        assert "800,000" in out and "40,000,000" in out

    def test_matches_measured_run(self):
        ds = synth_blobs(23, 2, 0.3, seed=0)
        _, hist = train(ds, CircuitSpec(2, 2, 2), TrainConfig(n_epochs=2, n_kao=3, n_co=1, lr_kao=0.1, lr_co=0.1))
        assert hist.kernel_rows == circuit_counts(23, 2, 3, 1)["n_quack"]


class TestTrainEval:
    def test_train_eval_predict(self, tmp_path, config, capsys):
        model_path = tmp_path / "m.json"
        code, out, _ = run(capsys, "train", "--config", config, "--out", model_path)
        assert code == 0
        kv = parse_kv(out)
        assert kv["kernel_rows"] == str(2 * 4 * 40)
        data = tmp_path / "d.csv"
        save_csv(synth_blobs(30, 3, 0.4, seed=9), data)
        code, out, _ = run(capsys, "eval", "--model", model_path, "--data", data)
        kv = parse_kv(out)
        assert code == 0 and kv["n"] == "30" and 0 <= float(kv["auc"]) <= 1
        pred = tmp_path / "p.csv"
        code, _, _ = run(capsys, "predict", "--model", model_path, "--data", data, "--out", pred)
        lines = pred.read_text().splitlines()
        assert code == 0 and lines[0] == "label,score" and len(lines) == 31

    def test_seed_override(self, tmp_path, config, capsys):
        run(capsys, "train", "--config", config, "--out", tmp_path / "a.json", "--seed", 99)
        assert load_model(tmp_path / "a.json").metadata["seed"] == 99

    def test_byte_identical_model_files(self, tmp_path, config, capsys):
        for name in ("a.json", "b.json"):
            assert run(capsys, "train", "--config", config, "--out", tmp_path / name)[0] == 0
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_config_echo_byte_for_byte(self, tmp_path, config, capsys):
        run(capsys, "train", "--config", config, "--out", tmp_path / "m.json")
        doc = json.loads((tmp_path / "m.json").read_text())
        assert doc["config"] == config.read_text()

    def test_eval_wrong_dimension(self, tmp_path, config, capsys):
        run(capsys, "train", "--config", config, "--out", tmp_path / "m.json")
        save_csv(synth_blobs(10, 5, 0.4, seed=2), tmp_path / "d5.csv")
        code, _, err = run(capsys, "eval", "--model", tmp_path / "m.json", "--data", tmp_path / "d5.csv")
        assert code != 0 and "features" in err

    def test_missing_label_column(self, tmp_path, capsys):
        (tmp_path / "d.csv").write_text("a,b,c\n" + "0.1,0.2,0.3\n" * 30)
        cfg = dict(BLOBS, data={"csv": "d.csv", "n_train": 10, "n_val": 4, "n_test": 4})
        (tmp_path / "c.json").write_text(json.dumps(cfg))
        code, _, err = run(capsys, "train", "--config", tmp_path / "c.json", "--out", tmp_path / "m.json")
        assert code != 0 and "label" in err

    def test_custom_label_column_named_in_error(self, tmp_path, capsys):
        (tmp_path / "d.csv").write_text("a,label\n0.1,1\n")
        cfg = dict(BLOBS, data={"csv": "d.csv", "label_column": "digit", "n_train": 1, "n_val": 1, "n_test": 1})
        (tmp_path / "c.json").write_text(json.dumps(cfg))
        code, _, err = run(capsys, "baseline", "--config", tmp_path / "c.json")
        assert code != 0 and "digit" in err

    def test_missing_config_file(self, tmp_path, capsys):
        code, _, err = run(capsys, "train", "--config", tmp_path / "nope.json", "--out", tmp_path / "m.json")
        assert code != 0 and err

    def test_identity_circuit_auc_half(self, tmp_path, capsys):
        spec = CircuitSpec(2, 2, 3)
        zero = EncodingParams(np.zeros(spec.param_shape), np.zeros(spec.param_shape))
        model = Model(spec, zero, Centroid(np.full(3, 0.2), 1), Centroid(np.full(3, 0.8), -1),
                      Normalizer(np.zeros(3), np.ones(3)))
        save_model(model, tmp_path / "m.json")
        save_csv(synth_blobs(40, 3, 0.4, seed=3), tmp_path / "d.csv")
        _, out, _ = run(capsys, "eval", "--model", tmp_path / "m.json", "--data", tmp_path / "d.csv")
        assert float(parse_kv(out)["auc"]) == 0.5


class TestBaseline:
    def test_blobs(self, config, capsys):
        code, out, _ = run(capsys, "baseline", "--config", config)
        assert code == 0 and float(parse_kv(out)["test_auc"]) > 0.9

    def test_xor_near_chance(self, tmp_path, capsys):
        cfg = dict(BLOBS, data={"synthetic": {"kind": "xor", "n": 3000, "seed": 4},
                                "n_train": 1000, "n_val": 400, "n_test": 400})
        (tmp_path / "x.json").write_text(json.dumps(cfg))
        _, out, _ = run(capsys, "baseline", "--config", tmp_path / "x.json")
        assert abs(float(parse_kv(out)["test_auc"]) - 0.5) < 0.07


class TestModelFile:
    def test_round_trip_exact(self, tmp_path):
        ds = synth_blobs(30, 3, 0.4, seed=5)
        model, _ = train(ds, CircuitSpec(2, 3, 3), TrainConfig(n_epochs=1, n_kao=2, n_co=2, lr_kao=0.7, lr_co=0.3))
        save_model(model, tmp_path / "m.json")
        back = load_model(tmp_path / "m.json")
        np.testing.assert_array_equal(back.params.w, model.params.w)
        np.testing.assert_array_equal(back.params.b, model.params.b)
        np.testing.assert_array_equal(back.centroid_neg.coords, model.centroid_neg.coords)
        np.testing.assert_array_equal(predict(back, ds.X)[1], predict(model, ds.X)[1])
        save_model(back, tmp_path / "m2.json")
        assert json.loads((tmp_path / "m2.json").read_text())["w"] == json.loads((tmp_path / "m.json").read_text())["w"]

    def test_rejects_foreign_file(self, tmp_path):
        (tmp_path / "m.json").write_text('{"format": "other"}')
        with pytest.raises(ValueError):
            load_model(tmp_path / "m.json")


class TestConfigParsing:
    def test_valid(self):
        cfg = parse_config(json.dumps(BLOBS))
        assert cfg.training.seed == 7 and cfg.circuit["n_layers"] == 3

    @pytest.mark.parametrize("mutate", [
        lambda c: c.update(version=2),
        lambda c: c["training"].pop("lr_kao"),
        lambda c: c["training"].update(lr_kao=-1),
        lambda c: c["circuit"].update(depth=3),
        lambda c: c["data"].update(csv="x.csv"),
        lambda c: c["data"]["synthetic"].update(kind="moons"),
    ])
    def test_invalid(self, mutate):
        cfg = json.loads(json.dumps(BLOBS))
        mutate(cfg)
        with pytest.raises(ConfigError):
            parse_config(json.dumps(cfg))

    def test_not_json(self):
        with pytest.raises(ConfigError):
            parse_config("n_layers: 3")
