"""Top-level package marker to allow imports like `src.fracdiff` in tests."""
