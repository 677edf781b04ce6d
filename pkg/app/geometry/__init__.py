"""
Geometry Module

Corner-cut domains, source/boundary fields and boundary distance features.
"""
from app.geometry.domain_gen import build_domain, generate_domain, max_cut_size
from app.geometry.fields import (
    SOURCE_FAMILIES,
    evaluate_source,
    sample_boundary_values,
    sample_source,
    sinusoid_profile,
)
from app.geometry.distances import interior_boundary_distances

__all__ = [
    "build_domain",
    "generate_domain",
    "max_cut_size",
    "SOURCE_FAMILIES",
    "evaluate_source",
    "sample_boundary_values",
    "sample_source",
    "sinusoid_profile",
    "interior_boundary_distances",
]
