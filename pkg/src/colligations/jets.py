"""Truncated multilinear jets: exact arithmetic modulo ``x_i^2 = 0``.

A jet in ``r`` variables is a sum over subsets of ``{0..r-1}`` (bitmasks)
of exact coefficients.  Evaluating a rational function on jets whose
variables are ``x_0 .. x_{r-1}`` yields its multilinear Taylor
coefficients exactly; in particular the coefficient of ``x_0 x_1 ... x_{r-1}``
sits under the full mask.
"""

from __future__ import annotations

from .scalars import ONE, ZERO, GaussRat, to_exact


class Jet:
    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars, coeffs=None):
        self.nvars = nvars
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def constant(cls, c, nvars):
        return cls(nvars, {0: to_exact(c)})

    @classmethod
    def variable(cls, i, nvars):
        return cls(nvars, {1 << i: ONE})

    @property
    def full_mask(self):
        return (1 << self.nvars) - 1

    def coefficient(self, mask):
        return self.coeffs.get(mask, ZERO)

    def constant_term(self):
        return self.coeffs.get(0, ZERO)

    def is_unit(self):
        return bool(self.constant_term())

    def __bool__(self):
        return bool(self.coeffs)

    def _lift(self, other):
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise ValueError("jets over different numbers of variables")
            return other
        if isinstance(other, (GaussRat, int)) or hasattr(other, "numerator"):
            return Jet(self.nvars, {0: to_exact(other)})
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.coeffs)
        for k, v in o.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return Jet(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.nvars, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in o.coeffs.items():
                if k1 & k2:
                    continue
                k = k1 | k2
                out[k] = out.get(k, ZERO) + v1 * v2
        return Jet(self.nvars, out)

    __rmul__ = __mul__

    def inverse(self):
        c0 = self.constant_term()
        if not c0:
            raise ZeroDivisionError("jet with zero constant term is not invertible")
        inv0 = 1 / c0
        q = self * inv0 - ONE
        # (1 + q)^-1 = sum (-q)^k, and q^(nvars+1) = 0
        term = Jet.constant(ONE, self.nvars)
        total = Jet.constant(ONE, self.nvars)
        for _ in range(self.nvars):
            term = term * (-q)
            if not term:
                break
            total = total + term
        return total * inv0

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def log(self):
        """``ln`` of a jet with constant term 1 (the constant of the result is 0)."""
        if self.constant_term() != 1:
            raise ValueError("log needs constant term 1")
        q = self - ONE
        total = Jet(self.nvars)
        term = Jet.constant(ONE, self.nvars)
        for k in range(1, self.nvars + 1):
            term = term * q
            if not term:
                break
            total = total + term * (GaussRat(1 if k % 2 else -1) / k)
        return total

    def conjugate(self):
        return Jet(self.nvars, {k: v.conjugate() for k, v in self.coeffs.items()})

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    __hash__ = None

    def __repr__(self):
        return f"Jet({self.nvars}, {{{', '.join(f'{k:b}: {v}' for k, v in sorted(self.coeffs.items()))}}})"


def jet_from_poly(p):
    """Multilinear truncation of a :class:`SparsePoly` (terms with an exponent > 1 drop)."""
    out = {}
    for e, c in p.terms.items():
        if any(k > 1 for k in e):
            continue
        mask = sum(1 << i for i, k in enumerate(e) if k)
        out[mask] = c
    return Jet(p.nvars, out)
