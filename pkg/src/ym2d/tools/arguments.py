"""Argument parsing shared by the command handlers."""

import math
from typing import Any, Dict, List, Optional

from ..core.errors import InvalidParameterError
from ..core.liegroup import ClassFunction, GroupModel
from ..core.utils import parse_float_list


def require(arguments: Dict[str, Any], key: str) -> Any:
    value = arguments.get(key)
    if value is None:
        raise InvalidParameterError(f"Missing required argument {key!r}")
    return value


def as_float(arguments: Dict[str, Any], key: str, default: Optional[float] = None, positive: bool = False) -> float:
    raw = arguments.get(key, default)
    if raw is None:
        raise InvalidParameterError(f"Missing required argument {key!r}")
    try:
        value = float(raw)
    except (TypeError, ValueError) as e:
        raise InvalidParameterError(f"{key} must be a number", value=raw) from e
    if math.isnan(value) or (positive and not value > 0):
        raise InvalidParameterError(f"{key} must be > 0" if positive else f"{key} is not a number", value=raw)
    return value


def as_int(arguments: Dict[str, Any], key: str, default: Optional[int] = None) -> int:
    raw = arguments.get(key, default)
    if raw is None:
        raise InvalidParameterError(f"Missing required argument {key!r}")
    try:
        value = int(raw)
    except (TypeError, ValueError) as e:
        raise InvalidParameterError(f"{key} must be an integer", value=raw) from e
    if value != float(raw):
        raise InvalidParameterError(f"{key} must be an integer", value=raw)
    return value


def as_float_list(arguments: Dict[str, Any], key: str) -> List[float]:
    raw = require(arguments, key)
    if isinstance(raw, str):
        try:
            return parse_float_list(raw)
        except ValueError as e:
            raise InvalidParameterError(f"{key} must be a comma-separated list of numbers", value=raw) from e
    return [float(x) for x in raw]


def parse_group(arguments: Dict[str, Any]) -> GroupModel:
    return GroupModel(arguments.get("group", "SU2"), as_float(arguments, "metric_scale", 1.0, positive=True))


def parse_observable(group: GroupModel, arguments: Dict[str, Any]) -> ClassFunction:
    """``observable`` ("2:1,3:-0.5") wins over ``irrep`` (a single label)."""
    if arguments.get("observable"):
        return ClassFunction.parse(group, arguments["observable"])
    default = 2 if group.kind.value == "SU2" else 1
    return ClassFunction.character(group.irrep(as_int(arguments, "irrep", default)))
