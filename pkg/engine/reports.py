"""
Deterministic JSON and CSV output.

Floats are rounded to 12 significant digits and keys are sorted, so a report
is a pure function of its inputs.
"""

import csv
import json
import logging
import math
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

import numpy as np

log = logging.getLogger(__name__)

SCHEMA = "ads-kernel/1"
SIGNIFICANT = 12


def _round(value: float) -> Union[float, None, str]:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(f"{value:.{SIGNIFICANT}g}")


def to_jsonable(obj: Any) -> Any:
    """Convert numpy data, complex numbers, enums and dataclasses to JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, complex):
        return [_round(obj.real), _round(obj.imag)]
    if isinstance(obj, Enum):
        return obj.value
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if is_dataclass(obj):
        return to_jsonable(asdict(obj))
    return obj


def dumps(payload: dict) -> str:
    body = dict(payload)
    body.setdefault("schema", SCHEMA)
    return json.dumps(to_jsonable(body), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(payload: dict, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload), encoding="utf-8")
    log.debug("wrote %s", path)
    return path


def write_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, quoting=csv.QUOTE_MINIMAL)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])
    return path
