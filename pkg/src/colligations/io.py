"""JSON documents for colligations, matrices and scalars.

Exact scalars are strings (``"3/4-1/2*i"``), float scalars are ``[re, im]``
pairs.  Output is canonical: sorted keys, floats written with ``repr`` so
that parsing gives back the same doubles.
"""

from __future__ import annotations

import json

import numpy as np

from .core import FLAVORS, Colligation, Shape
from .errors import ModeError, ShapeError
from .scalars import EXACT, FLOAT, GaussRat, format_exact, parse_exact


def scalar_to_json(x):
    if isinstance(x, GaussRat):
        return format_exact(x)
    z = complex(x)
    return [z.real, z.imag]


def scalar_from_json(v, mode=None):
    if isinstance(v, str):
        if mode == FLOAT:
            raise ModeError("exact scalar in a float document")
        return parse_exact(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        if mode == EXACT:
            raise ModeError("float scalar in an exact document")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        if mode == EXACT:
            if isinstance(v, int):
                return GaussRat(v)
            raise ModeError("float scalar in an exact document")
        return complex(v)
    raise ShapeError(f"not a scalar: {v!r}")


def matrix_to_json(M):
    M = np.asarray(M)
    return [[scalar_to_json(x) for x in row] for row in M]


def matrix_from_json(rows, mode=None):
    """Parse a list of rows; the mode is inferred from the first entry if not given."""
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ShapeError("a matrix is a list of rows")
    if rows and len({len(r) for r in rows}) != 1:
        raise ShapeError("ragged matrix")
    if mode is None:
        first = rows[0][0] if rows and rows[0] else None
        mode = EXACT if isinstance(first, str) else FLOAT
    n, k = len(rows), (len(rows[0]) if rows else 0)
    out = np.empty((n, k), dtype=object if mode == EXACT else complex)
    for i, r in enumerate(rows):
        for j, v in enumerate(r):
            out[i, j] = scalar_from_json(v, mode)
    return out


def colligation_to_json(C):
    return {
        "alpha": C.alpha,
        "m": C.m,
        "N": C.N,
        "mode": C.mode,
        "flavor": C.flavor,
        "entries": matrix_to_json(C.entries),
    }


def colligation_from_json(doc):
    try:
        alpha, m, N = int(doc["alpha"]), int(doc["m"]), int(doc["N"])
        mode = doc["mode"]
        flavor = doc.get("flavor", "general")
        rows = doc["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f"malformed colligation document: {exc}") from exc
    if mode not in (EXACT, FLOAT):
        raise ShapeError(f"unknown mode {mode!r}")
    if flavor not in FLAVORS:
        raise ShapeError(f"unknown flavor {flavor!r}")
    shape = Shape(alpha, m, N)
    E = matrix_from_json(rows, mode)
    if E.shape != (shape.size, shape.size):
        raise ShapeError(f"entries must be {shape.size}x{shape.size}, got {E.shape}")
    return Colligation(shape, E, flavor)


def dumps(obj):
    """Canonical JSON text."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def loads(text):
    return json.loads(text)
