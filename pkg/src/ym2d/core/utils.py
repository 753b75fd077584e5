"""
Shared Utilities for the ym2d Core
==================================

Common helpers used across core modules: exact-number parsing and formatting,
order-stable floating point reduction, and JSON/CSV persistence.

Dependencies:
- numpy: array handling (https://numpy.org/)
- fractions / math.fsum: exact rationals and correctly rounded sums

Sample Usage:
    parse_fraction("1/3")
    # Returns: Fraction(1, 3)

    format_number(Fraction(5, 16))
    # Returns: {"decimal": "0.3125", "rational": "5/16"}
"""

import csv
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, TextIO, Union

import numpy as np

Number = Union[int, float, Fraction]


def parse_fraction(value: Union[str, int, float, Fraction]) -> Fraction:
    """
    Parse an area or split fraction into an exact rational.

    Strings go through ``Fraction(str)`` so "0.1" becomes 1/10 rather than the
    binary double nearest to it.

    Args:
        value: "1/2", "0.25", 3, 0.5 or a Fraction

    Returns:
        Exact Fraction

    Raises:
        ValueError: If the value cannot be parsed
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"Not a finite number: {value!r}")
        return Fraction(repr(value))
    return Fraction(str(value).strip())


def parse_float_list(text: str) -> List[float]:
    """Parse "0.5,0.5" style comma lists."""
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise ValueError("Empty list")
    return [float(item) for item in items]


def format_number(value: Any) -> Any:
    """
    Make a number JSON friendly.

    Fractions become ``{"decimal": ..., "rational": ...}``; numpy scalars become
    Python floats; non-finite floats become strings.
    """
    if isinstance(value, Fraction):
        return {"decimal": repr(float(value)), "rational": f"{value.numerator}/{value.denominator}"}
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def to_jsonable(data: Any) -> Any:
    """Recursively convert numbers, tuples and mappings for ``json.dump``."""
    if isinstance(data, Mapping):
        return {str(k): to_jsonable(v) for k, v in data.items()}
    if isinstance(data, (list, tuple)):
        return [to_jsonable(v) for v in data]
    if isinstance(data, np.ndarray):
        return [to_jsonable(v) for v in data.tolist()]
    if isinstance(data, complex):
        return {"real": format_number(data.real), "imag": format_number(data.imag)}
    return format_number(data)


def ordered_fsum(parts: Iterable[float]) -> float:
    """Correctly rounded sum; the result does not depend on how parts were sharded."""
    return math.fsum(float(p) for p in parts)


def load_json_file(file_path: Path) -> Dict[str, Any]:
    """
    Load JSON file with error handling.

    Args:
        file_path: Path to JSON file

    Returns:
        Parsed JSON data

    Raises:
        FileNotFoundError: If file doesn't exist
        json.JSONDecodeError: If file is not valid JSON
    """
    if not file_path.exists():
        raise FileNotFoundError(f"File not found: {file_path}")

    with open(file_path, "r", encoding="utf-8") as f:
        return json.load(f)


def save_json_file(data: Dict[str, Any], file_path: Path, indent: int = 2) -> None:
    """
    Save data to JSON file.

    Keys keep insertion order and no timestamps are added, so equal inputs
    produce byte-identical files.

    Args:
        data: Data to save
        file_path: Path to save to
        indent: JSON indentation level
    """
    file_path.parent.mkdir(parents=True, exist_ok=True)

    with open(file_path, "w", encoding="utf-8") as f:
        json.dump(to_jsonable(data), f, indent=indent, ensure_ascii=False)
        f.write("\n")


def write_csv(rows: Sequence[Mapping[str, Any]], stream: TextIO) -> None:
    """
    Write report rows as CSV, one row per (parameter point, engine).

    The header is the union of row keys in first-seen order.
    """
    header: List[str] = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)

    writer = csv.DictWriter(stream, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row.get(k, "")) for k in header})


def save_csv_file(rows: Sequence[Mapping[str, Any]], file_path: Path) -> None:
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, "w", encoding="utf-8", newline="") as f:
        write_csv(rows, f)


def _csv_cell(value: Any) -> Any:
    if isinstance(value, Fraction):
        return repr(float(value))
    if isinstance(value, float):
        return repr(value)
    return value
