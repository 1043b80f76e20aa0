"""Deterministic CSV assembly for the CLI and service layers.

Every number is written in its shortest round-trip form (repr, never more
than 17 significant digits), line endings are always "\\n", and undefined
entries become the literal token "nan", so identical configurations produce
byte-identical files.
"""

from __future__ import annotations

import math

__all__ = [
    "format_cell",
    "assemble",
    "spectrum_table",
    "wavefn_table",
    "state_table",
    "metrics_table",
    "identity_table",
]


def format_cell(value) -> str:
    """Shortest round-trip text for one cell; None and NaN both print as nan."""
    if value is None:
        return "nan"
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean cells are not part of any table schema")
    if isinstance(value, int):
        return str(value)
    v = float(value)
    if math.isnan(v):
        return "nan"
    return repr(v)


def assemble(header: tuple, rows) -> str:
    """Header plus rows, comma separated, trailing newline included."""
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} does not match header width {len(header)}")
        lines.append(",".join(format_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def spectrum_table(ns, energies) -> str:
    return assemble(("n", "energy"), zip(ns, energies))


def wavefn_table(x, psi) -> str:
    return assemble(("x", "psi"), zip(x, psi))


def state_table(coeff) -> str:
    rows = [
        (n, c.real, c.imag, abs(c) ** 2)
        for n, c in enumerate(coeff)
    ]
    return assemble(("n", "re", "im", "abs2"), rows)


def _field(row, name: str):
    """Rows arrive as dataclasses in process and as JSON dicts over the wire."""
    if isinstance(row, dict):
        return row[name]
    return getattr(row, name)


def metrics_table(records) -> str:
    header = ("z", "S_X1", "S_P1", "S_X2", "S_P2", "Q", "trunc_dim", "tail_bound")
    names = ("z", "s_x1", "s_p1", "s_x2", "s_p2", "q", "trunc_dim", "tail_bound")
    rows = [tuple(_field(r, name) for name in names) for r in records]
    return assemble(header, rows)


def identity_table(rows) -> str:
    header = ("n", "quadrature", "closed_form", "rel_err")
    return assemble(header, [tuple(_field(r, name) for name in header) for r in rows])
