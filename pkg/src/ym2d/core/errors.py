"""
Exception hierarchy for ym2d.

Every error raised by the computational core derives from ``Ym2dError`` and
carries a ``details`` mapping so the CLI can emit it as structured JSON.

Sample Input:
    raise TruncationError("cutoff too small", required_cutoff=41, tail_bound=3e-9)

Expected Output:
    {"error": "truncation", "message": "cutoff too small",
     "details": {"required_cutoff": 41, "tail_bound": 3e-09}}
"""

from typing import Any, Dict


class Ym2dError(RuntimeError):
    """Base class for all ym2d failures."""

    code = "ym2d_error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        return {"error": self.code, "message": self.message, "details": self.details}


class InvalidParameterError(Ym2dError, ValueError):
    """A precondition on the inputs does not hold."""

    code = "invalid_parameter"


class UnsupportedGroupError(InvalidParameterError):
    code = "unsupported_group"


class SurfaceMapError(InvalidParameterError):
    """The combinatorial map is not a valid closed orientable surface."""

    code = "invalid_surface_map"


class SelfIntersectionError(InvalidParameterError):
    code = "self_intersection"


class QuadratureError(Ym2dError):
    """Adaptive refinement ran out of budget before converging."""

    code = "quadrature"


class TruncationError(Ym2dError):
    """A series cutoff leaves a tail larger than the tolerance."""

    code = "truncation"


class SamplingError(Ym2dError):
    """Importance weights degenerated; the estimate is not trustworthy."""

    code = "sampling"


class IdentityCheckError(Ym2dError):
    code = "identity_check"
