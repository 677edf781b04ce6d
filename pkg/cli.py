#!/usr/bin/env python3
"""
BENO Workbench CLI

Usage:
    python cli.py generate --corners 4 --base-n 16 --count 20 --seed 0 --out data/c4
    python cli.py train --data data/c4 --out runs/full --variant full --preset desk
    python cli.py evaluate --checkpoint runs/full/checkpoint.beno --data data/test --out runs/full/eval.csv
    python cli.py experiment --spec config/experiments/cross_shape.yaml
    python cli.py green-check --base-n 8 --trials 5 [--order] [--max-principle]
    python cli.py plot --sample data/c4/c4_0000 --pred runs/full/eval_predictions/c4_0000_pred.csv --out c4_0000.png

Every flag can also be set in a `key = value` file passed with --config.
Precedence: built-in defaults < preset < BENO_SEED < config file < flags.

Environment variables:
    BENO_SEED=<int>  default seed
    BENO_DEBUG=1     enable debug logging
"""
# Load .env before anything reads the environment
from dotenv import load_dotenv
load_dotenv(override=True)

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from app.config.config_manager import config_manager
from app.config.settings import Settings, settings
from app.config.validator import ConfigValidator
from app.core.logging import clear_run_context, configure_logging, generate_run_id, get_logger, set_run_context
from app.core.pipeline import WorkbenchPipeline, generate_sample
from app.eval.experiments import load_experiment_spec, run_experiment
from app.exceptions import BenoError, CheckFailedError, ConfigurationError, ShapeMismatchError
from app.geometry.domain_gen import build_domain
from app.io.config_file import load_config_file
from app.io.sample_archive import COORD_ATOL, list_stems, load_dataset, read_prediction, read_sample
from app.models.model_config import ModelConfig
from app.models.train_config import TrainConfig
from app.solver.poisson import (
    green_matrix,
    green_reconstruction,
    green_symmetry_defect,
    manufactured_error,
    maximum_principle_defect,
    observed_order,
    solve_poisson,
    superposition_check,
)
from app.training.checkpoint import load_checkpoint
from app.utils.plotting import plot_comparison, plot_field

configure_logging(log_file=settings.LOG_FILE)
logger = get_logger(__name__)

CHECK_TOL = 1e-8
SYMMETRY_TOL_FACTOR = 10
MIN_ORDER = 1.8
ORDER_BASE_NS = (16, 32, 64)

# Keys each command accepts from flags and config files (train also takes model / train fields)
OPTIONS = {
    "generate": ("corners", "base_n", "count", "seed", "out", "homogeneous", "neumann", "workers", "set"),
    "train": ("data", "out", "variant", "preset", "seed", "epochs", "learning_rate", "knn_k"),
    "evaluate": ("checkpoint", "data", "out", "knn_k"),
    "experiment": ("spec", "output_dir"),
    "green_check": ("base_n", "trials", "seed", "tol", "order", "max_principle"),
    "plot": ("sample", "pred", "out", "branches", "px_per_cell"),
}

DEFAULTS = {
    "generate": {"base_n": 32, "workers": 1, "homogeneous": False, "neumann": False},
    "train": {"variant": "full", "preset": "desk"},
    "evaluate": {},
    "experiment": {},
    "green_check": {"base_n": 8, "trials": 5, "order": False, "max_principle": False},
    "plot": {"branches": False},
}

REQUIRED = {
    "generate": ("corners", "count", "out"),
    "train": ("data", "out"),
    "evaluate": ("checkpoint", "data", "out"),
    "experiment": ("spec",),
    "green_check": (),
    "plot": ("sample", "out"),
}

TRAIN_CONFIG_KEYS = set(ModelConfig.model_fields) | set(TrainConfig.model_fields)


def format_error(error: Exception) -> str:
    """Single-line diagnostic: error code=<CODE> type=<Class> message="..." """
    code = getattr(error, "code", "INTERNAL_ERROR")
    message = " ".join(str(error).split()).replace('"', "'")
    return f'error code={code} type={type(error).__name__} message="{message}"'


def validate_configuration():
    """Validate the preset file before any command runs"""
    try:
        ConfigValidator.validate_all()
        logger.debug("Configuration validated")
    except ConfigurationError as e:
        logger.error(f"Configuration validation failed: {e}")
        raise


def resolve_options(args: argparse.Namespace) -> Dict[str, Any]:
    """
    Merge defaults, BENO_SEED, the config file and flags for one command

    Raises:
        ConfigurationError: Config file key the command does not accept
        SystemExit(2): A required value is missing everywhere
    """
    command = args.command_key
    known = set(OPTIONS[command])
    if command == "train":
        known |= TRAIN_CONFIG_KEYS

    file_values: Dict[str, Any] = {}
    if getattr(args, "config", None):
        file_values = load_config_file(args.config)
        for key in file_values:
            if key not in known:
                raise ConfigurationError(f"unknown key '{key}' for {command}", config_file=args.config, field=key)

    flags = {key: value for key, value in vars(args).items() if key in OPTIONS[command] and value is not None}

    options = dict(DEFAULTS[command])
    if "seed" in OPTIONS[command]:
        options["seed"] = Settings().SEED
    options.update(file_values)
    options.update(flags)

    missing = [key for key in REQUIRED[command] if options.get(key) is None]
    if missing:
        args.usage.error("missing required option(s): " + ", ".join("--" + k.replace("_", "-") for k in missing))
    return options


def cmd_generate(options: Dict[str, Any], run_id: str) -> int:
    pipeline = WorkbenchPipeline(run_id=run_id, workers=int(options["workers"]))
    samples = pipeline.generate(
        base_n=int(options["base_n"]),
        n_corners=int(options["corners"]),
        count=int(options["count"]),
        seed=int(options["seed"]),
        out=options["out"],
        homogeneous=bool(options["homogeneous"]),
        bc_kind="neumann" if options["neumann"] else "dirichlet",
        set_name=options.get("set"),
    )
    solved = sum(s.solved for s in samples)
    print(f"generated {len(samples)} samples ({solved} solved) in {options['out']}")
    return 0


def cmd_train(options: Dict[str, Any], run_id: str) -> int:
    overrides = {key: value for key, value in options.items() if key in TRAIN_CONFIG_KEYS}
    model_config, train_config = config_manager.build_configs(options["preset"], **overrides)

    samples = load_dataset(options["data"])
    pipeline = WorkbenchPipeline(run_id=run_id)
    result = pipeline.train(samples, model_config, train_config, out_dir=options["out"])
    print(
        f"trained {model_config.variant}: best val_mse {result.best_val_mse:.6e} "
        f"at epoch {result.best_epoch}, checkpoint in {options['out']}"
    )
    return 0


def cmd_evaluate(options: Dict[str, Any], run_id: str) -> int:
    checkpoint = load_checkpoint(options["checkpoint"])
    data = Path(options["data"])
    samples = load_dataset(data)
    names = [stem.name for stem in list_stems(data)]

    pipeline = WorkbenchPipeline(run_id=run_id)
    knn_k = options.get("knn_k")
    if knn_k is not None:
        checkpoint.info.setdefault("train_config", {})["knn_k"] = int(knn_k)
    result = pipeline.evaluate(checkpoint, samples, out=options["out"], names=names)

    report = result.report
    print(
        f"rel_l2 {report.rel_l2_mean:.6f} ± {report.rel_l2_std:.6f}  "
        f"mae {report.mae_mean:.6e} ± {report.mae_std:.6e}  ({len(report)} samples)"
    )
    return 0


def cmd_experiment(options: Dict[str, Any], run_id: str) -> int:
    spec = load_experiment_spec(options["spec"])
    if options.get("output_dir"):
        spec = spec.model_copy(update={"output_dir": Path(options["output_dir"])})

    report = run_experiment(spec, WorkbenchPipeline(run_id=run_id))
    for row in report.rows():
        print(
            f"{row['variant']} {row['test_set']}: rel_l2 {row['rel_l2_mean']:.6f} ± {row['rel_l2_std']:.6f} "
            f"mae_e3 {row['mae_e3_mean']:.4f}"
        )
    print(f"report written to {spec.run_dir}")
    return 0


def cmd_green_check(options: Dict[str, Any], run_id: str) -> int:
    base_n, trials, seed = int(options["base_n"]), int(options["trials"]), int(options["seed"])
    tol = float(options["tol"]) if options.get("tol") is not None else settings.SOLVER_TOL
    failures: List[str] = []

    def report(label: str, value: float, limit: float = CHECK_TOL, above: bool = False):
        ok = value >= limit if above else value <= limit
        print(f"{label}: {value:.3e} {'ok' if ok else 'FAIL'}")
        if not ok:
            failures.append(label)

    for trial in range(trials):
        sample = generate_sample(trial, base_n, trial % 5, seed, tol=tol)
        report(f"superposition trial {trial} (corners {trial % 5})", superposition_check(sample.domain, sample.f, tol=tol))

    domain = build_domain(base_n)
    green = green_matrix(domain, tol)
    report(f"green symmetry ({base_n}x{base_n})", green_symmetry_defect(green), SYMMETRY_TOL_FACTOR * tol)

    for trial in range(trials):
        sample = generate_sample(trial, base_n, 0, seed, tol=tol, stream=1)
        _, _, defect = green_reconstruction(domain, sample.f, sample.g, tol, green=green)
        report(f"green reconstruction trial {trial}", defect)

    if options["max_principle"]:
        for trial in range(trials):
            sample = generate_sample(trial, base_n, trial % 5, seed, tol=tol, stream=2)
            u = solve_poisson(sample.domain, np.zeros(sample.num_cells), tol=tol).u
            report(f"maximum principle trial {trial}", maximum_principle_defect(u, sample.g))

    if options["order"]:
        errors = [manufactured_error(n, tol) for n in ORDER_BASE_NS]
        for n, error in zip(ORDER_BASE_NS, errors):
            print(f"manufactured solution rms error (base_n={n}): {error:.6e}")
        report("observed order", observed_order(ORDER_BASE_NS, errors), MIN_ORDER, above=True)

    if failures:
        raise CheckFailedError(f"{len(failures)} check(s) failed: {'; '.join(failures)}")
    return 0


def cmd_plot(options: Dict[str, Any], run_id: str) -> int:
    sample = read_sample(options["sample"])
    px = options.get("px_per_cell")
    px = int(px) if px is not None else None

    if options.get("pred"):
        table = read_prediction(options["pred"])
        coords = sample.domain.interior_cells
        if table.shape[0] != len(coords) or not np.allclose(table[:, :2], coords, rtol=0.0, atol=COORD_ATOL):
            raise ShapeMismatchError(f"{options['pred']} does not match the cells of {options['sample']}")
        branches = [table[:, 3], table[:, 4]] if options["branches"] else None
        out = plot_comparison(sample.domain, table[:, 2], sample.u, options["out"], branches=branches, px_per_cell=px)
    else:
        values, title = (sample.u, "u") if sample.solved else (sample.f, "f")
        out = plot_field(sample.domain, values, options["out"], title=title, px_per_cell=px)

    print(f"plot written to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cli.py",
        description="BENO workbench - boundary-embedded neural operators for elliptic PDEs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="Config files hold one 'key = value' per line; keys use the flag spelling.",
    )
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.APP_VERSION}")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    def add_command(name: str, key: str, handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text, description=help_text)
        sub.set_defaults(command_key=key, handler=handler, usage=sub)
        if key != "experiment":
            sub.add_argument("--config", help="key = value config file")
        return sub

    sub = add_command("generate", "generate", cmd_generate, "Generate and solve a dataset")
    sub.add_argument("--corners", type=int, help="Cut corners per domain (0..4)")
    sub.add_argument("--base-n", type=int, help="Cells per side (default 32)")
    sub.add_argument("--count", type=int, help="Number of samples")
    sub.add_argument("--seed", type=int, help="Seed (default BENO_SEED or 0)")
    sub.add_argument("--out", help="Output directory")
    sub.add_argument("--homogeneous", action="store_true", default=None, help="Boundary values g = 0")
    sub.add_argument("--neumann", action="store_true", default=None, help="Neumann instead of Dirichlet data")
    sub.add_argument("--workers", type=int, help="Generation processes (default 1)")
    sub.add_argument("--set", help="Set name used in file stems (default c<corners>)")

    sub = add_command("train", "train", cmd_train, "Train a model on a generated dataset")
    sub.add_argument("--data", help="Dataset directory")
    sub.add_argument("--out", help="Output directory for checkpoint and history")
    sub.add_argument("--variant", choices=["full", "w_M", "wo_D"], help="Model variant (default full)")
    sub.add_argument("--preset", help="Hyper-parameter preset (default desk)")
    sub.add_argument("--seed", type=int, help="Seed (default BENO_SEED or 0)")
    sub.add_argument("--epochs", type=int, help="Override the preset's epochs")
    sub.add_argument("--learning-rate", type=float, help="Override the preset's learning rate")
    sub.add_argument("--knn-k", type=int, help="Override the preset's K")

    sub = add_command("evaluate", "evaluate", cmd_evaluate, "Score a checkpoint on a dataset")
    sub.add_argument("--checkpoint", help="checkpoint.beno file")
    sub.add_argument("--data", help="Dataset directory")
    sub.add_argument("--out", help="Per-sample metrics CSV (summary JSON and predictions go next to it)")
    sub.add_argument("--knn-k", type=int, help="Override the K the checkpoint was trained with")

    sub = add_command("experiment", "experiment", cmd_experiment, "Run a YAML experiment specification")
    sub.add_argument("--spec", help="Experiment YAML")
    sub.add_argument("--output-dir", help="Override the experiment's output directory")

    sub = add_command("green-check", "green_check", cmd_green_check, "Solver self-checks")
    sub.add_argument("--base-n", type=int, help="Cells per side (default 8)")
    sub.add_argument("--trials", type=int, help="Random trials per check (default 5)")
    sub.add_argument("--seed", type=int, help="Seed (default BENO_SEED or 0)")
    sub.add_argument("--tol", type=float, help="Solver tolerance (default BENO_SOLVER_TOL)")
    sub.add_argument("--order", action="store_true", default=None, help="Also measure the order of accuracy")
    sub.add_argument("--max-principle", action="store_true", default=None, help="Also check the maximum principle")

    sub = add_command("plot", "plot", cmd_plot, "Render a sample, or prediction vs ground truth")
    sub.add_argument("--sample", help="Sample stem (<dir>/<set>_<index>)")
    sub.add_argument("--pred", help="Prediction CSV written by evaluate")
    sub.add_argument("--out", help="Output PNG")
    sub.add_argument("--branches", action="store_true", default=None, help="Add the two branch fields as panels")
    sub.add_argument("--px-per-cell", type=int, help="Pixels per cell (default BENO_PLOT_PX_PER_CELL)")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the process exit status"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        options = resolve_options(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0
    except BenoError as e:
        print(format_error(e), file=sys.stderr)
        return 1

    run_id = generate_run_id()
    set_run_context(run_id, stage=args.command_key)
    logger.info(f"{args.command} started")
    try:
        validate_configuration()
        return args.handler(options, run_id)
    except BenoError as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(format_error(e), file=sys.stderr)
        return 1
    except Exception as e:
        logger.error(f"{args.command} failed unexpectedly: {e}", exc_info=True)
        print(format_error(e), file=sys.stderr)
        return 1
    finally:
        clear_run_context()


if __name__ == "__main__":
    sys.exit(main())
