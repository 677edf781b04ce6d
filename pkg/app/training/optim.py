"""Adam with coupled weight decay and the cosine warm-restart schedule"""
import math
from dataclasses import dataclass, field

import numpy as np

from app.nn.params import ParameterStore

BETA1 = 0.9
BETA2 = 0.999
ADAM_EPS = 1e-8


@dataclass
class AdamState:
    """First/second moments over the flat parameter vector"""
    m: np.ndarray
    v: np.ndarray
    step: int = 0

    @classmethod
    def zeros(cls, size: int) -> "AdamState":
        return cls(m=np.zeros(size), v=np.zeros(size))


def adam_step(
    state: AdamState,
    params: np.ndarray,
    grads: np.ndarray,
    lr: float,
    weight_decay: float = 0.0,
) -> np.ndarray:
    """
    One Adam update; weight decay is added to the gradient as wd * theta

    Returns:
        Updated flat parameters (state is advanced in place)
    """
    grads = grads + weight_decay * params
    state.step += 1
    state.m = BETA1 * state.m + (1.0 - BETA1) * grads
    state.v = BETA2 * state.v + (1.0 - BETA2) * grads ** 2
    m_hat = state.m / (1.0 - BETA1 ** state.step)
    v_hat = state.v / (1.0 - BETA2 ** state.step)
    return params - lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)


@dataclass
class Adam:
    """Adam bound to a ParameterStore"""
    params: ParameterStore
    weight_decay: float = 0.0
    state: AdamState = field(init=False)

    def __post_init__(self):
        self.state = AdamState.zeros(self.params.size)

    def step(self, lr: float):
        updated = adam_step(self.state, self.params.flat_values(), self.params.flat_grads(), lr, self.weight_decay)
        self.params.set_flat_values(updated)


def lr_schedule(
    epoch: int,
    base_lr: float,
    restart_period: int = 16,
    restart_mult: int = 1,
    eta_min: float = 0.0,
) -> float:
    """
    Cosine annealing with warm restarts, stepped once per epoch

    The first cycle lasts restart_period epochs, each later cycle
    restart_mult times the previous one.
    """
    t_cur, t_i = epoch, restart_period
    while t_cur >= t_i:
        t_cur -= t_i
        t_i *= restart_mult
    return eta_min + (base_lr - eta_min) * (1.0 + math.cos(math.pi * t_cur / t_i)) / 2.0
