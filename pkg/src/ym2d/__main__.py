"""Main entry point for the ym2d package."""

from . import main

if __name__ == "__main__":
    main()
