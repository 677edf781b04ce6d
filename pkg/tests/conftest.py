"""Pytest configuration and fixtures"""

import numpy as np
import pytest

from app.core.pipeline import generate_sample
from app.geometry.domain_gen import build_domain
from app.geometry.fields import sample_boundary_values, sample_source
from app.models.model_config import ModelConfig
from app.models.train_config import TrainConfig
from app.solver.poisson import solve_poisson
from app.training.trainer import train


@pytest.fixture
def uncut_domain():
    """8x8 unit square without cuts"""
    return build_domain(8)


@pytest.fixture
def cut_domain():
    """16x16 domain with all four corners cut to different sizes"""
    return build_domain(16, {"bottom_left": 3, "bottom_right": 1, "top_right": 2, "top_left": 4})


@pytest.fixture
def solved_sample():
    """Solved 8x8 Dirichlet sample with two cut corners"""
    return generate_sample(0, 8, 2, seed=0)


@pytest.fixture
def tiny_sample():
    """Solved 4x4 uncut sample"""
    domain = build_domain(4)
    domain = domain.with_boundary(sample_boundary_values(domain.boundary, seed=3))
    return solve_poisson(domain, sample_source(domain, seed=5))


@pytest.fixture
def small_dataset():
    """Six solved 4-corner samples at base_n = 8"""
    return [generate_sample(i, 8, 4, seed=0) for i in range(6)]


@pytest.fixture
def tiny_model_config():
    """Smallest useful full model"""
    return ModelConfig(embed_dim=4, mp_steps=1, transformer_layers=1, attention_heads=2, mlp_layers=2)


@pytest.fixture
def quick_train_config():
    """Two epochs, K = 4, a quarter of the data for validation"""
    return TrainConfig(learning_rate=1e-3, epochs=2, validation_fraction=0.25, knn_k=4, seed=0)


@pytest.fixture
def trained(small_dataset, tiny_model_config, quick_train_config):
    """TrainResult of a two-epoch run on the small dataset"""
    return train(quick_train_config, small_dataset, tiny_model_config)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
