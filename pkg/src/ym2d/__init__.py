"""
ym2d initialization
"""

from .config import get_settings

__version__ = get_settings().APP_VERSION


def main():
    """Main entry point for the package."""
    from .cli import app

    app()


__all__ = ["main", "__version__"]
