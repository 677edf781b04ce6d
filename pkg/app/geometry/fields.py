"""
Source and boundary value fields

Source fields f are drawn from four analytic families and evaluated at the
interior cell centers. Boundary values g are an open sinusoid in the
arc-length coordinate of the boundary trace; no continuity is enforced at the
seam t = 0.
"""
from typing import Dict, Optional

import numpy as np

from app.core.logging import get_logger
from app.exceptions import ValidationError
from app.models.domain import BoundarySet, Domain, SourceField

logger = get_logger(__name__)

SOURCE_FAMILIES = ("sinusoidal", "exponential", "logarithmic", "polynomial")

# (p, q) exponents of the cubic polynomial family, p + q <= 3
POLY_TERMS = tuple((p, q) for p in range(4) for q in range(4 - p))

AMPLITUDE_RANGE = (0.5, 2.0)
FREQUENCY_RANGE = (0.5, 2.0 * np.pi)
EXP_RATE_RANGE = (-1.0, 1.0)
POLY_COEFF_RANGE = (-1.0, 1.0)
WAVELENGTH_RANGE = (1.0, 5.0)
LOG_ARGUMENT_FLOOR = 0.1


def evaluate_source(family: str, coefficients: Dict, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Evaluate a source family at points (x, y)

    Args:
        family: One of SOURCE_FAMILIES
        coefficients: Family coefficients (A, a, b, phi or c for the polynomial)
        x, y: Coordinates

    Returns:
        Field values, same shape as x
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    amp = float(coefficients["A"])

    if family == "sinusoidal":
        return amp * np.sin(coefficients["a"] * x + coefficients["b"] * y + coefficients["phi"])
    if family == "exponential":
        return amp * np.exp(coefficients["a"] * x + coefficients["b"] * y)
    if family == "logarithmic":
        arg = 1.0 + coefficients["a"] * x + coefficients["b"] * y
        return amp * np.log(np.maximum(arg, LOG_ARGUMENT_FLOOR))
    if family == "polynomial":
        total = np.zeros_like(x)
        for (p, q), c in zip(POLY_TERMS, coefficients["c"]):
            total = total + c * x ** p * y ** q
        return amp * total

    raise ValidationError("family", f"unknown source family '{family}'")


def draw_source_coefficients(family: str, rng: np.random.Generator) -> Dict:
    """Draw bounded coefficients for a source family"""
    amp = float(rng.uniform(*AMPLITUDE_RANGE))

    if family == "sinusoidal":
        return {
            "A": amp,
            "a": float(rng.uniform(*FREQUENCY_RANGE)),
            "b": float(rng.uniform(*FREQUENCY_RANGE)),
            "phi": float(rng.uniform(0.0, 2.0 * np.pi)),
        }
    if family == "exponential":
        return {
            "A": amp,
            "a": float(rng.uniform(*EXP_RATE_RANGE)),
            "b": float(rng.uniform(*EXP_RATE_RANGE)),
        }
    if family == "logarithmic":
        return {
            "A": amp,
            "a": float(rng.uniform(*FREQUENCY_RANGE)),
            "b": float(rng.uniform(*FREQUENCY_RANGE)),
        }
    if family == "polynomial":
        return {
            "A": amp,
            "c": [float(c) for c in rng.uniform(*POLY_COEFF_RANGE, size=len(POLY_TERMS))],
        }

    raise ValidationError("family", f"unknown source family '{family}'")


def sample_source(domain: Domain, seed: int, family: Optional[str] = None) -> SourceField:
    """
    Sample a source field on the interior cell centers

    Args:
        domain: Domain to evaluate on
        seed: Seed; the family (unless given) and coefficients are drawn from it
        family: Force a family instead of drawing one

    Returns:
        SourceField
    """
    rng = np.random.default_rng(seed)
    if family is None:
        family = SOURCE_FAMILIES[int(rng.integers(len(SOURCE_FAMILIES)))]
    elif family not in SOURCE_FAMILIES:
        raise ValidationError("family", f"unknown source family '{family}'")

    coefficients = draw_source_coefficients(family, rng)
    centers = domain.interior_cells
    values = evaluate_source(family, coefficients, centers[:, 0], centers[:, 1])

    logger.debug(f"Source family={family} seed={seed} max|f|={np.abs(values).max():.3g}")
    return SourceField(values=values, family=family, coefficients=coefficients)


def sinusoid_profile(t: np.ndarray, amplitude: float, wavelength: float, phase: float) -> np.ndarray:
    """g(t) = A sin(2 pi t / wavelength + phase)"""
    return amplitude * np.sin(2.0 * np.pi * np.asarray(t, dtype=np.float64) / wavelength + phase)


def sample_boundary_values(boundary: BoundarySet, seed: int, homogeneous: bool = False) -> BoundarySet:
    """
    Sample boundary values g along the arc-length coordinate

    Args:
        boundary: Traced boundary
        seed: Seed for amplitude, wavelength and phase
        homogeneous: Return g = 0 instead

    Returns:
        Copy of the boundary carrying the sampled values
    """
    if homogeneous:
        return boundary.with_values(np.zeros(len(boundary)))

    rng = np.random.default_rng(seed)
    wavelength = float(rng.uniform(*WAVELENGTH_RANGE))
    phase = float(rng.uniform(0.0, 2.0 * np.pi))
    amplitude = float(rng.uniform(*AMPLITUDE_RANGE))

    return boundary.with_values(sinusoid_profile(boundary.arc_length, amplitude, wavelength, phase))
