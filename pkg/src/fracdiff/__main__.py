"""Entry point for `python -m src.fracdiff`."""

from .cli import main

if __name__ == "__main__":
    main()
