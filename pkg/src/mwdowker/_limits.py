from __future__ import annotations

import os

DEFAULT_MAX_CELLS = 10**6


class CellLimitError(RuntimeError):
    """Face enumeration would exceed the configured cell budget."""


def max_cells() -> int:
    raw = os.environ.get("MWD_MAX_CELLS")
    if not raw:
        return DEFAULT_MAX_CELLS
    return int(raw)


def check(count: int) -> None:
    limit = max_cells()
    if count > limit:
        raise CellLimitError(f"more than {limit} cells (raise MWD_MAX_CELLS to allow)")
