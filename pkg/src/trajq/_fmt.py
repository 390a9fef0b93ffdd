"""Shared deterministic number formatting for CSV export and algebra text."""

from __future__ import annotations


def format_float(v: float) -> str:
    """Render a float compactly: integral values lose the trailing .0.

    The output survives a float() roundtrip bit-exactly, which CSV export
    relies on.
    """
    if v == int(v) and abs(v) < 2**53:
        return str(int(v))
    return repr(v)
