""".. include:: ../../README.md"""  # noqa: D415

__version__ = "0.1.0"
