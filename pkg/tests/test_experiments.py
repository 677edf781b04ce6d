"""
Tests for experiment specifications and the experiment runner
"""
import csv
import json

import pytest
import yaml

from app.config.settings import settings
from app.eval.experiments import GRID_COLUMNS, load_experiment_spec, run_experiment
from app.exceptions import ConfigurationError
from app.models.experiment import ExperimentSpec


def smoke_spec(tmp_path, **fields):
    base = {
        "name": "smoke",
        "kind": "cross_shape",
        "preset": "smoke",
        "train_corners": [4],
        "test_corners": [0, 4],
        "train_base_n": 8,
        "train_samples": 4,
        "test_samples": 2,
        "output_dir": tmp_path,
    }
    base.update(fields)
    return ExperimentSpec(**base)


class TestLoadExperimentSpec:
    """Test YAML loading"""

    def test_shipped_specs(self):
        """Every shipped experiment file validates"""
        paths = sorted(settings.EXPERIMENTS_DIR.glob("*.yaml"))

        assert paths
        for path in paths:
            spec = load_experiment_spec(path)
            assert spec.name

    def test_shipped_spec_by_name(self):
        """A bare name resolves to the shipped file"""
        by_name = load_experiment_spec("cross_shape")
        by_path = load_experiment_spec(settings.EXPERIMENTS_DIR / "cross_shape.yaml")

        assert by_name == by_path

    def test_default_output_dir(self, monkeypatch, tmp_path):
        """Without output_dir runs land under BENO_OUTPUT_DIR"""
        monkeypatch.setattr(settings, "OUTPUT_DIR", tmp_path)
        spec = ExperimentSpec(name="x", kind="cross_shape")

        assert spec.run_dir == tmp_path / "x"

    def test_missing_file(self, tmp_path):
        """A missing file is a configuration error"""
        with pytest.raises(ConfigurationError):
            load_experiment_spec(tmp_path / "none.yaml")

    def test_not_a_mapping(self, tmp_path):
        """The top level must be a mapping"""
        path = tmp_path / "list.yaml"
        path.write_text("- a\n- b\n")
        with pytest.raises(ConfigurationError):
            load_experiment_spec(path)

    def test_invalid_field(self, tmp_path):
        """Field errors name the offending field"""
        path = tmp_path / "bad.yaml"
        path.write_text(yaml.safe_dump({"name": "x", "kind": "cross_shape", "test_corners": [5]}))

        with pytest.raises(ConfigurationError) as exc_info:
            load_experiment_spec(path)
        assert "test_corners" in str(exc_info.value)

    def test_invalid_yaml(self, tmp_path):
        """Unparseable YAML is reported"""
        path = tmp_path / "broken.yaml"
        path.write_text("name: [unclosed\n")
        with pytest.raises(ConfigurationError):
            load_experiment_spec(path)


class TestRunExperiment:
    """Test end-to-end experiment runs at smoke scale"""

    def test_cross_shape(self, tmp_path):
        """One variant scored on every test family, with artifacts on disk"""
        report = run_experiment(smoke_spec(tmp_path))
        run_dir = tmp_path / "smoke"

        assert report.shape == (1, 2)
        assert report.test_sets == ["c0_n8", "c4_n8"]
        assert (run_dir / "spec.yaml").exists()
        assert (run_dir / "full" / "checkpoint.beno").exists()
        assert (run_dir / "full" / "eval_c0_n8.csv").exists()
        assert (run_dir / "data" / "train_c4" / "dataset.yaml").exists()

        with open(run_dir / "grid.csv", newline="") as f:
            rows = list(csv.DictReader(f))
        assert tuple(rows[0]) == GRID_COLUMNS
        assert [r["test_set"] for r in rows] == ["c0_n8", "c4_n8"]

    def test_variant_comparison(self, tmp_path):
        """Variants share data; later variants are compared to the first"""
        spec = smoke_spec(tmp_path, kind="variant_comparison", variants=["full", "wo_D"], test_corners=[2])
        report = run_experiment(spec)

        assert report.variants == ["full", "wo_D"]
        assert list(report.comparisons) == ["wo_D:c2_n8"]
        saved = json.loads((tmp_path / "smoke" / "report.json").read_text())
        assert len(saved["grid"]) == 2
        assert "wo_D:c2_n8" in saved["comparisons"]

    def test_resolution_transfer(self, tmp_path):
        """Training-resolution sets come first, then the finer test sets"""
        spec = smoke_spec(tmp_path, kind="resolution_transfer", test_corners=[4], test_samples=1)
        report = run_experiment(spec)

        assert report.test_sets == ["c4_n8", "c4_n16"]

    def test_zero_boundary(self, tmp_path):
        """Zero-boundary test sets are generated with g = 0"""
        from app.io.sample_archive import load_dataset

        run_experiment(smoke_spec(tmp_path, kind="zero_boundary", test_corners=[1]))
        test_samples = load_dataset(tmp_path / "smoke" / "data" / "test_c1_n8")

        assert all(not s.g.any() for s in test_samples)

    def test_unknown_preset(self, tmp_path):
        """An unknown preset fails before any training"""
        with pytest.raises(ConfigurationError):
            run_experiment(smoke_spec(tmp_path, preset="huge"))
