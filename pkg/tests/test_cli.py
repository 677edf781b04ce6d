"""
Tests for the command-line interface
"""
import pytest

from cli import build_parser, format_error, main, resolve_options
from app.config.settings import settings
from app.exceptions import ConfigurationError
from app.io.sample_archive import list_stems, read_manifest


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """A generated dataset, a trained smoke checkpoint and its evaluation"""
    root = tmp_path_factory.mktemp("cli")
    data = root / "c4"
    run = root / "run"
    assert main(["generate", "--corners", "4", "--base-n", "8", "--count", "4", "--seed", "0", "--out", str(data)]) == 0
    assert main(["train", "--data", str(data), "--out", str(run), "--preset", "smoke"]) == 0
    assert main([
        "evaluate", "--checkpoint", str(run / "checkpoint.beno"), "--data", str(data), "--out", str(run / "eval.csv"),
    ]) == 0
    return {"root": root, "data": data, "run": run}


class TestFormatError:
    """Test the one-line diagnostic"""

    def test_beno_error(self):
        """Code, type and message on one line"""
        line = format_error(ConfigurationError("bad value", field="seed"))

        assert line.startswith("error code=CONFIG_ERROR type=ConfigurationError message=")
        assert "\n" not in line

    def test_foreign_error(self):
        """Other exceptions are INTERNAL_ERROR"""
        assert format_error(ValueError('say "hi"')) == "error code=INTERNAL_ERROR type=ValueError message=\"say 'hi'\""


class TestResolveOptions:
    """Test option precedence"""

    def test_defaults(self):
        """Unset options fall back to built-in defaults"""
        args = build_parser().parse_args(["generate", "--corners", "1", "--count", "2", "--out", "x"])
        options = resolve_options(args)

        assert options["base_n"] == 32
        assert options["workers"] == 1
        assert options["homogeneous"] is False

    def test_env_seed(self, monkeypatch):
        """BENO_SEED sets the default seed"""
        monkeypatch.setenv("BENO_SEED", "5")
        args = build_parser().parse_args(["generate", "--corners", "1", "--count", "2", "--out", "x"])
        assert resolve_options(args)["seed"] == 5

    def test_file_then_flags(self, tmp_path):
        """Config file beats defaults; flags beat the config file"""
        config = tmp_path / "gen.cfg"
        config.write_text("corners = 2\ncount = 3\nbase-n = 16\nout = data\n")
        args = build_parser().parse_args(["generate", "--config", str(config), "--count", "7"])
        options = resolve_options(args)

        assert options["base_n"] == 16
        assert options["corners"] == 2
        assert options["count"] == 7

    def test_train_accepts_model_keys(self, tmp_path):
        """train config files may set model and optimiser fields"""
        config = tmp_path / "train.cfg"
        config.write_text("data = d\nout = o\nembed_dim = 16\nweight_decay = 0.0\n")
        options = resolve_options(build_parser().parse_args(["train", "--config", str(config)]))

        assert options["embed_dim"] == 16
        assert options["preset"] == "desk"


class TestMain:
    """Test commands end to end"""

    def test_generate_files(self, workspace):
        """Four samples, two CSV files each, and a manifest"""
        assert len(list_stems(workspace["data"])) == 4
        assert len(list(workspace["data"].glob("*.csv"))) == 8
        assert read_manifest(workspace["data"])["base_n"] == 8

    def test_train_artifacts(self, workspace):
        """Checkpoint and history are written"""
        run = workspace["run"]
        assert (run / "checkpoint.beno").exists()
        assert len((run / "history.csv").read_text().strip().splitlines()) == 4

    def test_evaluate_artifacts(self, workspace, capsys):
        """Per-sample CSV, summary and predictions are written"""
        run = workspace["run"]
        assert len((run / "eval.csv").read_text().strip().splitlines()) == 5
        assert (run / "eval.json").exists()
        assert (run / "eval_predictions" / "c4_0000_pred.csv").exists()

    def test_plot_prediction(self, workspace):
        """plot renders prediction against ground truth"""
        out = workspace["root"] / "cmp.png"
        code = main([
            "plot", "--sample", str(workspace["data"] / "c4_0001"),
            "--pred", str(workspace["run"] / "eval_predictions" / "c4_0001_pred.csv"),
            "--out", str(out), "--branches",
        ])
        assert code == 0
        assert out.exists()

    def test_plot_mismatched_prediction(self, workspace, capsys):
        """A prediction from another sample is rejected"""
        other = workspace["root"] / "other"
        assert main(["generate", "--corners", "0", "--base-n", "16", "--count", "1", "--out", str(other)]) == 0
        code = main([
            "plot", "--sample", str(other / "c0_0000"),
            "--pred", str(workspace["run"] / "eval_predictions" / "c4_0000_pred.csv"),
            "--out", str(workspace["root"] / "bad.png"),
        ])

        assert code == 1
        assert "code=SHAPE_MISMATCH" in capsys.readouterr().err

    def test_plot_sample_only(self, workspace):
        """Without a prediction the solution is drawn"""
        out = workspace["root"] / "u.png"
        assert main(["plot", "--sample", str(workspace["data"] / "c4_0000"), "--out", str(out)]) == 0
        assert out.exists()

    def test_missing_required(self, capsys):
        """A missing required option exits with status 2"""
        assert main(["generate", "--corners", "1"]) == 2
        assert "--count" in capsys.readouterr().err

    def test_unknown_config_key(self, tmp_path, capsys):
        """Unknown config keys are reported with status 1"""
        config = tmp_path / "bad.cfg"
        config.write_text("corners = 1\ncount = 1\nout = x\ncolour = blue\n")

        assert main(["generate", "--config", str(config)]) == 1
        assert "code=CONFIG_ERROR" in capsys.readouterr().err

    def test_unknown_preset(self, workspace, capsys):
        """Unknown presets fail cleanly"""
        code = main(["train", "--data", str(workspace["data"]), "--out", str(workspace["root"] / "x"), "--preset", "huge"])

        assert code == 1
        assert "code=CONFIG_ERROR" in capsys.readouterr().err

    def test_green_check(self, capsys):
        """Solver self-checks pass on a small grid"""
        assert main(["green-check", "--base-n", "8", "--trials", "1", "--tol", "1e-12", "--max-principle"]) == 0
        assert "green symmetry (8x8)" in capsys.readouterr().out

    def test_broken_presets_abort(self, workspace, tmp_path, monkeypatch, capsys):
        """An invalid presets file stops the command before it runs"""
        broken = tmp_path / "presets.yaml"
        broken.write_text("desk:\n  model: {embed_dim: 6, mp_steps: 1, transformer_layers: 1, attention_heads: 4, mlp_layers: 2}\n")
        monkeypatch.setattr(settings, "PRESETS_CONFIG", broken)

        code = main(["train", "--data", str(workspace["data"]), "--out", str(tmp_path / "run")])

        assert code == 1
        assert "code=CONFIG_ERROR" in capsys.readouterr().err
        assert not (tmp_path / "run").exists()

    def test_version(self, capsys):
        """--version prints the application name and version"""
        assert main(["--version"]) == 0
        assert settings.APP_VERSION in capsys.readouterr().out


def written_files(directory):
    return {path.name: path.read_bytes() for path in sorted(directory.iterdir()) if path.is_file()}


class TestReproducibility:
    """Identical invocations write identical bytes"""

    def generate(self, out, *extra):
        args = ["generate", "--corners", "3", "--base-n", "8", "--count", "3", "--seed", "11", "--out", str(out)]
        assert main(args + list(extra)) == 0
        return written_files(out)

    def test_generate_twice(self, tmp_path):
        """Same seed, same CSV files and manifest"""
        first = self.generate(tmp_path / "a")
        second = self.generate(tmp_path / "b")

        assert len([name for name in first if name.endswith(".csv")]) == 6
        assert "dataset.yaml" in first
        assert first == second

    def test_workers_write_same_bytes(self, tmp_path):
        """Two generation processes write what one process writes"""
        assert self.generate(tmp_path / "parallel", "--workers", "2") == self.generate(tmp_path / "serial")

    def test_evaluate_twice(self, workspace, tmp_path):
        """Re-evaluating a checkpoint reproduces the metrics CSV and predictions"""
        out = tmp_path / "again.csv"
        code = main([
            "evaluate", "--checkpoint", str(workspace["run"] / "checkpoint.beno"),
            "--data", str(workspace["data"]), "--out", str(out),
        ])

        assert code == 0
        assert out.read_bytes() == (workspace["run"] / "eval.csv").read_bytes()
        assert written_files(tmp_path / "again_predictions") == written_files(workspace["run"] / "eval_predictions")
