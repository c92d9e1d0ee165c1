"""File formats: JSON records for matrices, states and parameters; CSV tables."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .ansatz import AnsatzParams
from .errors import InvalidInputError
from .state import BasisDistribution, DensityMatrix


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def read_json(path: Path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc})") from exc


def save_density_matrix(path: Path, rho: DensityMatrix, **extra) -> None:
    write_json(path, {**rho.to_dict(), **extra})


def load_density_matrix(path: Path) -> DensityMatrix:
    return DensityMatrix.from_dict(read_json(path))


def save_params(path: Path, params: AnsatzParams, **extra) -> None:
    write_json(path, {**params.to_dict(), **extra})


def load_params(path: Path) -> AnsatzParams:
    return AnsatzParams.from_dict(read_json(path))


def write_table(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])


def write_distribution(path: Path, dist: BasisDistribution) -> None:
    write_table(path, ("basis", "probability"), dist.to_rows())


def read_table(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
