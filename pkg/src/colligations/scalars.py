"""Scalars in two modes.

Exact mode uses :class:`GaussRat`, a Gaussian rational ``re + im*i`` with
``gmpy2.mpq`` components (always in lowest terms, positive denominator).
Float mode uses Python/numpy ``complex``.  Python ints and rationals are
exact and combine freely with :class:`GaussRat`; floats and complex numbers
raise :class:`~colligations.errors.ModeError` when combined with it.
"""

from __future__ import annotations

import numbers
import re
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from .errors import ModeError

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

_MPQ = type(mpq(0))


def _as_mpq(x):
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (int, np.integer)):
        return mpq(int(x))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x)
    if isinstance(x, (float, complex, np.inexact)):
        raise ModeError(f"cannot mix float value {x!r} into exact arithmetic")
    raise TypeError(f"not a rational: {x!r}")


class GaussRat:
    """Exact complex rational number."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _as_mpq(re)
        self.im = _as_mpq(im)

    @classmethod
    def _raw(cls, re, im):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussRat):
            return other
        if isinstance(other, (int, np.integer, _MPQ, Fraction)):
            return GaussRat._raw(_as_mpq(other), _ZERO_Q)
        if isinstance(other, (numbers.Complex, np.inexact)):
            raise ModeError(f"cannot mix float value {other!r} into exact arithmetic")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat._raw(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return GaussRat._raw(self.re * o.re, _ZERO_Q)
        return GaussRat._raw(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def reciprocal(self):
        if not self.im:
            if not self.re:
                raise ZeroDivisionError("GaussRat division by zero")
            return GaussRat._raw(1 / self.re, _ZERO_Q)
        n = self.re * self.re + self.im * self.im
        return GaussRat._raw(self.re / n, -self.im / n)

    def __pow__(self, k):
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        k = int(k)
        if k < 0:
            return self.reciprocal() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __neg__(self):
        return GaussRat._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return GaussRat._raw(self.re, -self.im)

    def abs2(self):
        """Squared modulus (an exact rational)."""
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return abs(complex(self))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, np.integer, _MPQ, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRat('{self}')"

    def __str__(self):
        return format_exact(self)


_ZERO_Q = mpq(0)
ZERO = GaussRat(0)
ONE = GaussRat(1)

_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def format_exact(x):
    """Serialize as ``"p/q"`` or ``"p/q+r/t*i"``."""
    x = to_exact(x)
    out = f"{x.re.numerator}/{x.re.denominator}"
    if x.im:
        sign = "+" if x.im > 0 else "-"
        out += f"{sign}{abs(x.im.numerator)}/{x.im.denominator}*i"
    return out


def parse_exact(s):
    """Inverse of :func:`format_exact`; also accepts bare integers and ``"r/t*i"``."""
    t = s.replace(" ", "")
    real, imag = t, ""
    if t.endswith("*i"):
        body = t[:-2]
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        real, imag = (body[:cut], body[cut:]) if cut > 0 else ("", body)
    if not real and not imag:
        raise ValueError(f"malformed exact scalar: {s!r}")
    for part in (real, imag):
        if part and not _RATIONAL.match(part):
            raise ValueError(f"malformed exact scalar: {s!r}")
    return GaussRat._raw(mpq(real) if real else _ZERO_Q, mpq(imag.lstrip("+")) if imag else _ZERO_Q)


def to_exact(x):
    """Convert an int/rational/GaussRat to :class:`GaussRat` (floats are rejected)."""
    if isinstance(x, GaussRat):
        return x
    return GaussRat(x)


def mode_of(x):
    """Mode of a scalar, or of a numpy array (object dtype means exact)."""
    if isinstance(x, np.ndarray):
        return EXACT if x.dtype == object else FLOAT
    if isinstance(x, (GaussRat, int, np.integer, _MPQ, Fraction)):
        return EXACT
    if isinstance(x, (numbers.Complex, np.inexact)):
        return FLOAT
    if hasattr(x, "is_unit"):
        return EXACT
    raise TypeError(f"unknown scalar type: {type(x).__name__}")


def check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def is_zero(x, tol=0.0):
    """Exact zero test; in float mode ``|x| <= tol``."""
    if isinstance(x, GaussRat):
        return not x
    return abs(x) <= tol


def close(x, y, tol=1e-9):
    """Equality with the package-wide relative tolerance rule.

    Exact scalars compare exactly.  Float scalars compare with
    ``|x - y| <= tol * max(1, |x|, |y|)``.
    """
    if isinstance(x, GaussRat) or isinstance(y, GaussRat):
        return to_exact(x) == to_exact(y)
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))
