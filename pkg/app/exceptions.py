"""Custom exceptions for the BENO workbench"""


class BenoError(Exception):
    """Base exception for all workbench errors"""

    code = "BENO_ERROR"


class ConfigurationError(BenoError):
    """Raised when configuration files or values are invalid"""

    code = "CONFIG_ERROR"

    def __init__(self, message: str, config_file: str = None, field: str = None):
        self.config_file = config_file
        self.field = field

        error_msg = "Configuration error"
        if config_file:
            error_msg += f" in {config_file}"
        if field:
            error_msg += f" (field: {field})"
        error_msg += f": {message}"

        super().__init__(error_msg)


class ValidationError(BenoError):
    """Raised when input validation fails"""

    code = "VALIDATION_ERROR"

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"Validation error for '{field}': {message}")


class ParameterError(ValidationError):
    """Raised when an algorithm parameter is out of range (e.g. K >= N)"""

    code = "PARAMETER_ERROR"


class DegenerateGeometryError(BenoError):
    """Raised for geometry that cannot be triangulated or meshed"""

    code = "DEGENERATE_GEOMETRY"


class ShapeMismatchError(BenoError):
    """Raised when tensor or array shapes disagree"""

    code = "SHAPE_MISMATCH"


class NonFiniteError(BenoError):
    """Raised when a computation produces NaN or Inf"""

    code = "NON_FINITE"

    def __init__(self, op: str, message: str = "non-finite values produced"):
        self.op = op
        super().__init__(f"{op}: {message}")


class SolverConvergenceError(BenoError):
    """Raised when Gauss-Seidel does not reach the requested tolerance"""

    code = "SOLVER_NOT_CONVERGED"

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"Solver did not converge after {report.iterations} sweeps "
            f"(relative residual {report.final_residual:.3e})"
        )


class SingularSystemError(BenoError):
    """Raised when a singular system is solved without the required pinning"""

    code = "SINGULAR_SYSTEM"


class UndefinedMetricError(BenoError):
    """Raised when a metric is undefined for the given inputs"""

    code = "UNDEFINED_METRIC"


class TrainingDivergedError(BenoError):
    """Raised when the training loss becomes non-finite"""

    code = "TRAINING_DIVERGED"

    def __init__(self, epoch: int, sample_index: int, loss: float):
        self.epoch = epoch
        self.sample_index = sample_index
        self.loss = loss
        super().__init__(
            f"Non-finite loss {loss} at epoch {epoch}, sample {sample_index}"
        )


class SampleFormatError(BenoError):
    """Base class for sample archive errors"""

    code = "SAMPLE_FORMAT"

    def __init__(self, path, message: str):
        self.path = str(path)
        super().__init__(f"{path}: {message}")


class SampleFileMissingError(SampleFormatError):
    code = "SAMPLE_FILE_MISSING"


class MalformedHeaderError(SampleFormatError):
    code = "MALFORMED_HEADER"


class RowCountMismatchError(SampleFormatError):
    code = "ROW_COUNT_MISMATCH"


class CheckpointFormatError(BenoError):
    """Raised when a checkpoint file cannot be parsed"""

    code = "CHECKPOINT_FORMAT"


class ExperimentError(BenoError):
    """Raised when an experiment specification cannot be executed"""

    code = "EXPERIMENT_ERROR"


class CheckFailedError(BenoError):
    """Raised when a numerical self-check exceeds its tolerance"""

    code = "CHECK_FAILED"
