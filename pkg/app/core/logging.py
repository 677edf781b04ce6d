"""
Unified Logging Configuration for the BENO workbench

Every record carries the run ID and the pipeline stage it was emitted in, so
a generate -> train -> evaluate run (or a whole experiment) can be followed
through one log. Stage timings, solver outcomes and per-epoch training
progress are logged through the helpers below so they read the same
everywhere.

Usage:
    from app.core.logging import get_logger, log_stage_timing

    logger = get_logger(__name__)
    with log_stage_timing(logger, "training", run_id="run_abc123", variant="full"):
        ...
"""
import logging
import sys
import time
import uuid
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

from app.config.settings import Settings

DEFAULT_LOG_LEVEL = logging.INFO

# Fields every record is guaranteed to carry
CONTEXT_DEFAULTS = {"run_id": "-", "stage": "-"}

LOG_FORMAT = "%(asctime)s - [%(run_id)s] - %(stage)s - %(levelname)s - %(message)s"
DEBUG_LOG_FORMAT = (
    "%(asctime)s - [%(run_id)s] - %(stage)s - %(name)s - %(levelname)s - "
    "%(filename)s:%(lineno)d - %(message)s"
)

NOISY_LOGGERS = ("matplotlib", "PIL")


class RunContextFilter(logging.Filter):
    """
    Logging filter that stamps run context onto records

    Values passed through `extra=` win over the stored context, so a stage
    timer can name its own stage while the run-wide context stays in place.
    """

    def __init__(self):
        super().__init__()
        self.context = {}

    def filter(self, record):
        for key, value in {**CONTEXT_DEFAULTS, **self.context}.items():
            if key not in record.__dict__:
                setattr(record, key, value)
        return True

    def set_context(self, **kwargs):
        self.context.update({k: v for k, v in kwargs.items() if v is not None})

    def clear_context(self):
        self.context.clear()


_context_filter = RunContextFilter()


def _debug_requested() -> bool:
    return Settings().DEBUG


def configure_logging(
    log_level: Optional[int] = None,
    log_file: Optional[str] = None,
    enable_debug: Optional[bool] = None
):
    """
    Configure the global logging setup

    Args:
        log_level: Logging level (default: INFO, or DEBUG if BENO_DEBUG=1)
        log_file: Also append records to this file
        enable_debug: Force debug mode (default: read from BENO_DEBUG)
    """
    if enable_debug is None:
        enable_debug = _debug_requested()
    if log_level is None:
        log_level = logging.DEBUG if enable_debug else DEFAULT_LOG_LEVEL

    formatter = logging.Formatter(
        DEBUG_LOG_FORMAT if enable_debug else LOG_FORMAT,
        datefmt="%Y-%m-%d %H:%M:%S"
    )

    handlers = [logging.StreamHandler(sys.stdout)]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()
    for handler in handlers:
        handler.setLevel(log_level)
        handler.setFormatter(formatter)
        handler.addFilter(_context_filter)
        root_logger.addHandler(handler)

    for name in NOISY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def generate_run_id() -> str:
    """Run ID for tracing, e.g. "run_a1b2c3d4e5f6" """
    return f"run_{uuid.uuid4().hex[:12]}"


def set_run_context(
    run_id: str,
    stage: Optional[str] = None,
    variant: Optional[str] = None,
    dataset: Optional[str] = None,
    **kwargs
):
    """
    Set the context added to every subsequent record

    Args:
        run_id: Unique run identifier
        stage: Pipeline stage (generate/train/evaluate/...)
        variant: Model variant (full/w_M/wo_D)
        dataset: Dataset name
        **kwargs: Additional context fields
    """
    _context_filter.set_context(run_id=run_id, stage=stage, variant=variant, dataset=dataset, **kwargs)


def clear_run_context():
    _context_filter.clear_context()


def _format_metadata(metadata: dict) -> str:
    return " ".join(f"{key}={value}" for key, value in metadata.items())


@contextmanager
def log_stage_timing(
    logger: logging.Logger,
    stage_name: str,
    run_id: Optional[str] = None,
    **metadata
) -> Iterator[dict]:
    """
    Time a pipeline stage and log its start, completion or failure

    Args:
        logger: Logger instance
        stage_name: Stage label; also stamped on the records as `stage`
        run_id: Run ID (defaults to the context's)
        **metadata: Key/value pairs appended to the start message

    Yields:
        Dict that receives `elapsed` (seconds) and, on failure, `error`
    """
    extra = {"stage": stage_name}
    if run_id:
        extra["run_id"] = run_id

    timing_info = {"stage": stage_name}
    details = _format_metadata(metadata)
    logger.info(f"Starting {stage_name}" + (f" ({details})" if details else ""), extra=extra)
    start = time.perf_counter()

    try:
        yield timing_info
    except Exception as e:
        timing_info["elapsed"] = time.perf_counter() - start
        timing_info["error"] = str(e)
        logger.error(f"Failed {stage_name} after {timing_info['elapsed']:.2f}s: {e}", extra=extra)
        raise

    timing_info["elapsed"] = time.perf_counter() - start
    logger.info(f"Completed {stage_name} in {timing_info['elapsed']:.2f}s", extra=extra)


def log_solve_report(logger: logging.Logger, report, label: str = "Gauss-Seidel"):
    """One line per solve: DEBUG when converged, WARNING otherwise"""
    if report.converged:
        logger.debug(f"{label} converged in {report.iterations} sweeps (residual {report.final_residual:.2e})")
    else:
        logger.warning(
            f"{label} stopped after {report.iterations} sweeps at residual {report.final_residual:.2e} "
            f"(tolerance {report.tolerance:.1e})"
        )


def log_epoch(logger: logging.Logger, record, total_epochs: int, every: int):
    """Epoch progress at INFO on the first epoch and every `every` epochs, DEBUG otherwise"""
    message = (
        f"epoch {record.epoch}/{total_epochs} lr={record.lr:.3e} "
        f"train_mse={record.train_mse:.4e} val_mse={record.val_mse:.4e}"
    )
    level = logging.INFO if record.epoch == 1 or record.epoch % every == 0 else logging.DEBUG
    logger.log(level, message)


# Initialize logging on module import (with defaults)
configure_logging()
