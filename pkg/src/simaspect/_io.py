"""Shared file helpers."""

from __future__ import annotations

from pathlib import Path
from typing import IO


def open_write(path: str | Path) -> IO[str]:
    """Open a UTF-8 text file for writing, creating parent directories."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return open(p, "w", encoding="utf-8")
