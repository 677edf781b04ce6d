"""
IO Module

Two-file sample archive and key = value configuration files.
"""
from app.io.config_file import load_config_file, normalize_key, parse_config_text, parse_value
from app.io.sample_archive import (
    load_dataset,
    read_manifest,
    read_prediction,
    read_sample,
    sample_paths,
    sample_stem,
    write_dataset,
    write_prediction,
    write_sample,
)

__all__ = [
    "load_config_file",
    "normalize_key",
    "parse_config_text",
    "parse_value",
    "load_dataset",
    "read_manifest",
    "read_prediction",
    "read_sample",
    "sample_paths",
    "sample_stem",
    "write_dataset",
    "write_prediction",
    "write_sample",
]
