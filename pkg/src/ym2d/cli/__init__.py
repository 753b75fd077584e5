"""ym2d command-line interface."""

from .__main__ import app

__all__ = ["app"]
