"""
Two-file sample archive

Each sample is stored as `<stem>_interior.csv` (x,y,f,u per interior cell)
and `<stem>_boundary.csv` (x,y,g per interface in trace order), with
17-significant-digit decimals. A directory of samples carries a
`dataset.yaml` manifest.

Reading rebuilds the domain from the files alone: base_n from the boundary
row count (always 4 * base_n), corner cut sizes from where the left and right
walls start and stop.
"""
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import yaml

from app.core.logging import get_logger
from app.exceptions import (
    MalformedHeaderError,
    RowCountMismatchError,
    SampleFileMissingError,
    SampleFormatError,
    ValidationError,
)
from app.geometry.domain_gen import build_domain
from app.models.domain import SourceField
from app.models.sample import BC_KINDS, SolutionSample

logger = get_logger(__name__)

INTERIOR_HEADER = "x,y,f,u"
BOUNDARY_HEADER = "x,y,g"
PREDICTION_HEADER = "x,y,u_pred,branch1,branch2"
MANIFEST_NAME = "dataset.yaml"
NUMBER_FORMAT = "%.17g"
COORD_ATOL = 1e-12

PathLike = Union[str, Path]


def sample_paths(stem: PathLike):
    stem = Path(stem)
    return (
        stem.parent / f"{stem.name}_interior.csv",
        stem.parent / f"{stem.name}_boundary.csv",
    )


def sample_stem(directory: PathLike, set_name: str, index: int) -> Path:
    return Path(directory) / f"{set_name}_{index:04d}"


def _write_table(path: Path, header: str, columns: Sequence[np.ndarray]):
    np.savetxt(path, np.column_stack(columns), delimiter=",", header=header, comments="", fmt=NUMBER_FORMAT)


def _read_table(path: Path, header: str) -> np.ndarray:
    if not path.exists():
        raise SampleFileMissingError(path, "file not found")

    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().strip()
    if first != header:
        raise MalformedHeaderError(path, f"expected header '{header}', found '{first}'")

    width = len(header.split(","))
    try:
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as e:
        raise SampleFormatError(path, f"unparseable row ({e})") from e
    if table.size == 0:
        return np.zeros((0, width))
    if table.shape[1] != width:
        raise MalformedHeaderError(path, f"rows have {table.shape[1]} columns, header names {width}")
    return table


def write_sample(sample: SolutionSample, stem: PathLike):
    """Write the interior and boundary files of a sample"""
    interior_path, boundary_path = sample_paths(stem)
    interior_path.parent.mkdir(parents=True, exist_ok=True)

    domain = sample.domain
    _write_table(interior_path, INTERIOR_HEADER, [domain.interior_cells, sample.f, sample.u])
    _write_table(boundary_path, BOUNDARY_HEADER, [domain.boundary.midpoints, sample.g])


def _infer_cuts(boundary_xy: np.ndarray, base_n: int, path: Path) -> Dict[str, int]:
    h = 1.0 / base_n
    left = boundary_xy[np.isclose(boundary_xy[:, 0], 0.0, atol=COORD_ATOL), 1]
    right = boundary_xy[np.isclose(boundary_xy[:, 0], 1.0, atol=COORD_ATOL), 1]
    if len(left) == 0 or len(right) == 0:
        raise SampleFormatError(path, "boundary does not touch both side walls")

    def cell(y):
        return int(round(y / h - 0.5))

    return {
        "bottom_left": cell(left.min()),
        "top_left": base_n - 1 - cell(left.max()),
        "bottom_right": cell(right.min()),
        "top_right": base_n - 1 - cell(right.max()),
    }


def read_sample(stem: PathLike, bc_kind: str = "dirichlet", family: str = "custom") -> SolutionSample:
    """
    Read a sample written by write_sample

    Raises:
        SampleFileMissingError: Either file is absent
        MalformedHeaderError: Header or column count is wrong
        RowCountMismatchError: Row counts disagree with the reconstructed domain
        SampleFormatError: Coordinates disagree with the reconstructed domain
    """
    if bc_kind not in BC_KINDS:
        raise ValidationError("bc_kind", f"must be one of {BC_KINDS}, got '{bc_kind}'")

    interior_path, boundary_path = sample_paths(stem)
    interior = _read_table(interior_path, INTERIOR_HEADER)
    boundary = _read_table(boundary_path, BOUNDARY_HEADER)

    if len(boundary) == 0 or len(boundary) % 4:
        raise RowCountMismatchError(boundary_path, f"{len(boundary)} rows is not 4 * base_n")
    base_n = len(boundary) // 4
    if len(interior) == 0:
        raise RowCountMismatchError(interior_path, "no interior rows")
    if not np.isclose(2.0 * interior[:, 0].min(), 1.0 / base_n, atol=COORD_ATOL):
        raise RowCountMismatchError(
            boundary_path, f"{len(boundary)} rows disagree with interior spacing {2.0 * interior[:, 0].min():.6g}"
        )

    try:
        domain = build_domain(base_n, _infer_cuts(boundary[:, :2], base_n, boundary_path))
    except ValidationError as e:
        raise SampleFormatError(boundary_path, f"cannot rebuild domain: {e}") from e

    if len(interior) != domain.num_cells:
        raise RowCountMismatchError(
            interior_path, f"expected {domain.num_cells} rows for the traced domain, found {len(interior)}"
        )
    if not np.allclose(interior[:, :2], domain.interior_cells, rtol=0.0, atol=COORD_ATOL):
        raise SampleFormatError(interior_path, "cell coordinates do not match the traced domain")
    if not np.allclose(boundary[:, :2], domain.boundary.midpoints, rtol=0.0, atol=COORD_ATOL):
        raise SampleFormatError(boundary_path, "interface coordinates are not in trace order")

    domain = domain.with_boundary(domain.boundary.with_values(boundary[:, 2]))
    return SolutionSample(
        domain=domain,
        source=SourceField(values=interior[:, 2].copy(), family=family),
        u=interior[:, 3].copy(),
        bc_kind=bc_kind,
    )


def write_dataset(
    samples: Sequence[SolutionSample],
    directory: PathLike,
    set_name: str,
    meta: Optional[Dict] = None,
) -> Path:
    """Write every sample plus the dataset.yaml manifest; returns the manifest path"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    entries = []
    for index, sample in enumerate(samples):
        stem = sample_stem(directory, set_name, index)
        write_sample(sample, stem)
        entries.append({
            "stem": stem.name,
            "family": sample.source.family,
            "cuts": dict(sample.domain.cut_specs),
            "solved": sample.solved,
            "solve_report": sample.report.to_dict() if sample.report else None,
        })

    manifest = {
        "set": set_name,
        "bc_kind": samples[0].bc_kind if samples else "dirichlet",
        **(meta or {}),
        "count": len(samples),
        "samples": entries,
    }
    path = directory / MANIFEST_NAME
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(manifest, f, sort_keys=False)

    logger.info(f"Wrote {len(samples)} samples to {directory}")
    return path


def read_manifest(directory: PathLike) -> Optional[Dict]:
    path = Path(directory) / MANIFEST_NAME
    if not path.exists():
        return None
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


def list_stems(directory: PathLike) -> List[Path]:
    """Sample stems of a directory, from the manifest when present"""
    directory = Path(directory)
    manifest = read_manifest(directory)
    if manifest and manifest.get("samples"):
        return [directory / entry["stem"] for entry in manifest["samples"]]
    return sorted(p.parent / p.name[: -len("_interior.csv")] for p in directory.glob("*_interior.csv"))


def load_dataset(directory: PathLike) -> List[SolutionSample]:
    """
    Load every sample of a directory

    Raises:
        SampleFileMissingError: The directory holds no samples
    """
    directory = Path(directory)
    manifest = read_manifest(directory) or {}
    bc_kind = manifest.get("bc_kind", "dirichlet")
    families = {e["stem"]: e.get("family", "custom") for e in manifest.get("samples", [])}

    stems = list_stems(directory)
    if not stems:
        raise SampleFileMissingError(directory, "no samples found")
    return [read_sample(stem, bc_kind, families.get(stem.name, "custom")) for stem in stems]


def write_prediction(path: PathLike, coords: np.ndarray, prediction: np.ndarray, branches: Sequence[np.ndarray]):
    """Per-cell prediction file x,y,u_pred,branch1,branch2; single-branch output goes to branch1 with zeros in branch2"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    parts = list(branches) if len(branches) == 2 else [prediction, np.zeros_like(prediction)]
    _write_table(path, PREDICTION_HEADER, [coords, prediction, *parts])


def read_prediction(path: PathLike) -> np.ndarray:
    """(N, 5) table x, y, u_pred, branch1, branch2"""
    return _read_table(Path(path), PREDICTION_HEADER)
