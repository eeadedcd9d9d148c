"""
Module that provides reading and writing of experiment configs, bridge problems, CSV fields and JSON reports
"""

import csv
import io
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Sequence, Union

import numpy as np
import yaml
from pydantic import BaseModel, TypeAdapter, ValidationError

from levy_bridge.exceptions import ConfigError, LevyBridgeValidationError
from levy_bridge.schemas import BridgeProblem, ComplexField, ExperimentConfig, Grid1D, KernelKind, RealField

logger = logging.getLogger(__name__)


def format_float(value: float) -> str:
    """Round-tripping form with 17 significant digits"""

    return f"{float(value):.17g}"


def columns_to_csv(header: Sequence[str], columns: Sequence[Sequence[float]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in zip(*columns):
        writer.writerow([format_float(v) for v in row])
    return buffer.getvalue()


def field_to_csv(field: Union[RealField, ComplexField], value_name: str = "value") -> str:
    """x,re,im for complex fields and x,<value_name> for real ones"""

    x = field.grid.x
    if isinstance(field, ComplexField):
        return columns_to_csv(("x", "re", "im"), (x, field.samples.real, field.samples.imag))
    return columns_to_csv(("x", value_name), (x, field.samples))


def read_field_csv(path: Path) -> Union[RealField, ComplexField]:
    """Reads a field written by field_to_csv; the grid is inferred from the x column"""

    with open(path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    if len(rows) < 17:
        raise LevyBridgeValidationError(f"{path} holds too few rows for a grid: found {len(rows) - 1}")
    header, body = rows[0], np.array(rows[1:], dtype=float)
    x = body[:, 0]
    dx = x[1] - x[0]
    grid = Grid1D(x_min=x[0], x_max=x[0] + dx * x.size, n=x.size)
    if header == ["x", "re", "im"]:
        return ComplexField(grid=grid, samples=body[:, 1] + 1j * body[:, 2])
    return RealField(grid=grid, samples=body[:, 1])


def _to_jsonable(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.integer, np.floating, np.bool_)):
        return value.item()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def to_json(payload: Any) -> str:
    return json.dumps(payload, default=_to_jsonable, sort_keys=True, indent=2) + "\n"


def load_experiment_config(path: Path) -> ExperimentConfig:
    """Loads a JSON (or YAML) experiment config"""

    try:
        document = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    if not isinstance(document, dict):
        raise ConfigError(f"Config {path} must hold a mapping")
    try:
        return ExperimentConfig(**document)
    except ValidationError as e:
        raise ConfigError(f"Invalid config {path}: {e.errors()[0]['msg']}") from e


def load_bridge_problem(path: Path) -> BridgeProblem:
    """Loads {kind, params, t1, t2, rho1, rho2}; marginal CSV paths are relative to the problem file"""

    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
        kind = TypeAdapter(KernelKind).validate_python({"family": document["kind"], **document.get("params", {})})
        rho1 = read_field_csv(path.parent / document["rho1"])
        rho2 = read_field_csv(path.parent / document["rho2"])
        return BridgeProblem(rho1=rho1, rho2=rho2, t1=document["t1"], t2=document["t2"], kind=kind)
    except (OSError, KeyError, json.JSONDecodeError, ValueError) as e:
        raise ConfigError(f"Invalid bridge problem {path}: {e}") from e


class OutputBundle:
    """In-memory output files, written together once an experiment has finished"""

    def __init__(self):
        self.files: Dict[str, str] = {}

    def add_text(self, name: str, text: str):
        self.files[name] = text

    def add_field(self, name: str, field: Union[RealField, ComplexField], value_name: str = "value"):
        self.files[name] = field_to_csv(field, value_name)

    def add_columns(self, name: str, header: Sequence[str], columns: Sequence[Sequence[float]]):
        self.files[name] = columns_to_csv(header, columns)

    def add_json(self, name: str, payload: Any):
        self.files[name] = to_json(payload)

    def write(self, directory: Path):
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for name in sorted(self.files):
            (directory / name).write_text(self.files[name], encoding="utf-8", newline="\n")
        logger.info("Wrote %d files to %s", len(self.files), directory)
