"""
CSV and JSON artifacts: traces, scans, fit reports and result rows
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence

import numpy as np

from .fitting import ScalingSample

logger = logging.getLogger(__name__)

TRACE_FIELDS = ["t2", "prob", "norm_err"]
SCAN_FIELDS = ["s", "P", "t2", "theta"]
RETURN_AMP_FIELDS = ["s", "A", "theta"]
RESULT_FIELDS = ["d", "L", "s", "t1", "P", "t2"]
SNAPSHOT_FIELDS = ["x1", "x2", "prob"]


def format_value(value: Any) -> str:
    """Floats with 10 significant digits, None as an empty cell"""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".10g")
    return str(value)


def write_csv(
    path: Path, fieldnames: Sequence[str], rows: Iterable[Mapping[str, Any]], append: bool = False
) -> Path:
    """Write rows under a header; appending to an existing file skips the header"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_header = not (append and path.exists() and path.stat().st_size > 0)
    with path.open("a" if append else "w", encoding="utf-8", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(fieldnames), extrasaction="ignore", lineterminator="\n")
        if write_header:
            w.writeheader()
        for row in rows:
            w.writerow({k: format_value(row.get(k)) for k in fieldnames})
    logger.debug("wrote %s", path)
    return path


def read_csv(path: Path) -> List[Dict[str, str]]:
    with Path(path).open("r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def missing_columns(rows: List[Dict[str, str]], required: Sequence[str]) -> List[str]:
    """Required columns absent from the header of rows"""
    if not rows:
        return list(required)
    return [c for c in required if c not in rows[0]]


def read_samples(path: Path) -> List[ScalingSample]:
    """Load a d,L,s,t1,P,t2 results file"""
    rows = read_csv(path)
    missing = missing_columns(rows, RESULT_FIELDS)
    if missing:
        raise ValueError(f"{path}: missing columns {', '.join(missing)}")
    return [ScalingSample.from_row(row) for row in rows]


def append_result(path: Path, sample: ScalingSample) -> Path:
    return write_csv(path, RESULT_FIELDS, [sample.as_row()], append=True)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"cannot serialise {type(value).__name__}")


def write_json(path: Path, payload: Mapping[str, Any]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, default=_jsonable)
        f.write("\n")
    logger.debug("wrote %s", path)
    return path


def read_json(path: Path) -> Dict[str, Any]:
    with Path(path).open("r", encoding="utf-8") as f:
        return json.load(f)
