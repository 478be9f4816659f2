"""The product of colligations ``M_{N1} x M_{N2} -> M_{N1+N2}``."""

from __future__ import annotations

from functools import reduce

import numpy as np

from . import linalg as la
from .core import Colligation, Shape, _inner_map
from .errors import ModeError, ShapeError


def _extend(C, big, shift):
    """Act as ``C`` on its own coordinates and as the identity elsewhere."""
    E = la.eye(big.size, C.mode)
    idx = _inner_map(C.shape, big, shift)
    E[np.ix_(idx, idx)] = C.entries
    return E


def circ(g, h):
    """``g o h`` in shape (alpha, m, N1 + N2).

    The inner space Z_{N1+N2} is ordered as Z_{N1} then Z_{N2}: ``g`` is
    extended by the identity on V (x) Z_{N2}, ``h`` by the identity on
    V (x) Z_{N1}, and the two extensions are multiplied in that order.
    """
    if g.alpha != h.alpha or g.m != h.m:
        raise ShapeError(f"incompatible shapes {g.shape} and {h.shape}")
    if g.mode != h.mode:
        raise ModeError("cannot multiply exact and float colligations")
    big = Shape(g.alpha, g.m, g.N + h.N)
    E = _extend(g, big, 0) @ _extend(h, big, g.N)
    flavor = g.flavor if g.flavor == h.flavor else "general"
    if {g.flavor, h.flavor} == {"unitary", "invertible"}:
        flavor = "invertible"
    return Colligation(big, E, flavor)


def circ_chain(colligations):
    """Left fold of :func:`circ` over a non-empty sequence."""
    items = list(colligations)
    if not items:
        raise ValueError("circ_chain needs at least one colligation")
    return reduce(circ, items)
