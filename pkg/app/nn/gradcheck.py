"""Finite-difference verification of reverse-mode gradients"""
from typing import Callable, Optional

import numpy as np

from app.core.logging import get_logger
from app.nn.params import ParameterStore
from app.nn.tensor import Tensor

logger = get_logger(__name__)

DENOMINATOR_FLOOR = 1e-8


def grad_check(
    fn: Callable[[], Tensor],
    params: ParameterStore,
    probe_count: int = 50,
    eps: float = 1e-6,
    seed: int = 0,
    analytic: Optional[np.ndarray] = None,
) -> float:
    """
    Compare reverse-mode gradients with central differences

    Args:
        fn: Zero-argument function returning a scalar Tensor computed from params
        params: Parameters to probe
        probe_count: Number of randomly chosen flat indices
        eps: Central-difference step
        seed: Seed for the probe selection
        analytic: Use this flat gradient instead of running backward

    Returns:
        Max relative error |a - n| / max(|a|, |n|, 1e-8) over the probes
    """
    if analytic is None:
        params.zero_grad()
        fn().backward()
        analytic = params.flat_grads()
        params.zero_grad()

    rng = np.random.default_rng(seed)
    probes = rng.choice(params.size, size=min(probe_count, params.size), replace=False)

    worst = 0.0
    for index in np.sort(probes):
        original = params.get_value(index)
        params.set_value(index, original + eps)
        plus = float(fn().data)
        params.set_value(index, original - eps)
        minus = float(fn().data)
        params.set_value(index, original)

        numeric = (plus - minus) / (2.0 * eps)
        a = float(analytic[index])
        error = abs(a - numeric) / max(abs(a), abs(numeric), DENOMINATOR_FLOOR)
        if error > worst:
            worst = error
            logger.debug(f"grad_check {params.locate(int(index))}: analytic={a:.6e} numeric={numeric:.6e}")

    return worst
