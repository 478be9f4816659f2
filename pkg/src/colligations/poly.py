"""Sparse multivariate polynomials over Gaussian rationals (or complex floats).

A :class:`SparsePoly` is a mapping from exponent tuples to nonzero
coefficients over a fixed, ordered list of variables.  The module also
provides the symbolic determinant used for divisor polynomials
(:func:`poly_det`), exact division (:func:`poly_divide_exact`), and a
Schwartz-Zippel identity test (:func:`poly_equal_pit`).
"""

from __future__ import annotations

import operator
from typing import Callable, Sequence

import numpy as np

from .errors import CapExceededError, ModeError, ShapeError
from .scalars import EXACT, FLOAT, ONE, ZERO, GaussRat, check_mode, format_exact, parse_exact, to_exact

DEFAULT_DET_CAP = 12
DEFAULT_TOL = 1e-9


def _coerce_coeff(c, mode):
    if mode == EXACT:
        return to_exact(c)
    if isinstance(c, GaussRat):
        raise ModeError("exact coefficient in a float polynomial")
    return complex(c)


def grlex_key(exponents):
    """Graded lexicographic key on the flat variable order (larger is leading)."""
    return (sum(exponents), exponents)


class SparsePoly:
    """Immutable sparse polynomial.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    coefficients.  Exact polynomials hold :class:`GaussRat` coefficients,
    float polynomials hold ``complex``.
    """

    __slots__ = ("variables", "terms", "mode")

    def __init__(self, variables, terms=None, mode=EXACT):
        self.variables = tuple(variables)
        self.mode = check_mode(mode)
        n = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ShapeError(f"exponent vector {exps} does not match {n} variables")
            if any(e < 0 for e in exps):
                raise ShapeError(f"negative exponent in {exps}")
            c = _coerce_coeff(c, self.mode)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def _from_clean(cls, variables, terms, mode):
        obj = object.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        obj.mode = mode
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, variables, mode=EXACT):
        return cls(variables, {}, mode)

    @classmethod
    def constant(cls, c, variables, mode=EXACT):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c}, mode)

    @classmethod
    def variable(cls, var, variables, mode=EXACT):
        """The monomial of degree one in ``var`` (an identifier or a flat index)."""
        variables = tuple(variables)
        idx = var if isinstance(var, int) and var not in variables else variables.index(var)
        exps = [0] * len(variables)
        exps[idx] = 1
        return cls(variables, {tuple(exps): 1}, mode)

    # basic queries --------------------------------------------------------
    @property
    def nvars(self):
        return len(self.variables)

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var_index):
        return max((e[var_index] for e in self.terms), default=-1)

    def leading_term(self):
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def coefficient(self, exponents):
        return self.terms.get(tuple(exponents), ZERO if self.mode == EXACT else 0j)

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def __len__(self):
        return len(self.terms)

    # arithmetic -----------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, SparsePoly):
            raise TypeError(f"expected SparsePoly, got {type(other).__name__}")
        if other.mode != self.mode:
            raise ModeError("exact and float polynomials cannot be combined")
        if other.variables != self.variables:
            raise ShapeError("polynomials over different variable lists")

    def _lift(self, other):
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        return SparsePoly.constant(other, self.variables, self.mode)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return SparsePoly._from_clean(self.variables, out, self.mode)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._from_clean(self.variables, {e: -c for e, c in self.terms.items()}, self.mode)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            c = _coerce_coeff(other, self.mode)
            if not c:
                return SparsePoly.zero(self.variables, self.mode)
            return SparsePoly._from_clean(self.variables, {e: v * c for e, v in self.terms.items()}, self.mode)
        self._check(other)
        out = {}
        add = operator.add
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return SparsePoly._from_clean(self.variables, {e: c for e, c in out.items() if c}, self.mode)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = SparsePoly.constant(1, self.variables, self.mode)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.mode == other.mode and self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, GaussRat)):
            return self.terms == SparsePoly.constant(other, self.variables, self.mode).terms
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __call__(self, point):
        return poly_eval(self, point)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            mono = "*".join(
                f"x{i}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            c = self.terms[e]
            coeff = str(c) if self.mode == EXACT else repr(c)
            parts.append(f"({coeff})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # conversions ----------------------------------------------------------
    def substitute(self, values):
        """Replace some variables by scalars; ``values`` maps flat index -> scalar.

        The result lives over the remaining variables, in their original order.
        """
        keep = [i for i in range(self.nvars) if i not in values]
        new_vars = tuple(self.variables[i] for i in keep)
        out = {}
        for e, c in self.terms.items():
            for i, v in values.items():
                if e[i]:
                    c = c * _coerce_coeff(v, self.mode) ** e[i]
            if not c:
                continue
            key = tuple(e[i] for i in keep)
            out[key] = out.get(key, 0) + c
        return SparsePoly(new_vars, out, self.mode)

    def to_json(self):
        terms = []
        for e in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[e]
            coeff = format_exact(c) if self.mode == EXACT else [c.real, c.imag]
            terms.append({"exponents": list(e), "coeff": coeff})
        return terms

    @classmethod
    def from_json(cls, terms, variables, mode=EXACT):
        out = {}
        for t in terms:
            c = t["coeff"]
            c = parse_exact(c) if mode == EXACT else complex(c[0], c[1])
            out[tuple(t["exponents"])] = c
        return cls(variables, out, mode)


def poly_arith(p, q, op):
    """``p op q`` for ``op`` in ``add``, ``sub``, ``mul``."""
    ops = {"add": operator.add, "sub": operator.sub, "mul": operator.mul}
    if op not in ops:
        raise ValueError(f"unknown polynomial operation {op!r}")
    p._check(q)
    return ops[op](p, q)


def poly_eval(p, point):
    """Evaluate ``p`` at ``point`` (one scalar per variable)."""
    point = list(point)
    if len(point) != p.nvars:
        raise ShapeError(f"point has {len(point)} coordinates, polynomial has {p.nvars} variables")
    if p.mode == EXACT:
        point = [to_exact(x) for x in point]
        total = ZERO
    else:
        if any(isinstance(x, GaussRat) for x in point):
            raise ModeError("exact point for a float polynomial")
        point = [complex(x) for x in point]
        total = 0j
    powers = [{0: ONE if p.mode == EXACT else 1.0, 1: x} for x in point]

    def pw(i, k):
        cache = powers[i]
        if k not in cache:
            cache[k] = cache[1] ** k
        return cache[k]

    for e, c in p.terms.items():
        term = c
        for i, k in enumerate(e):
            if k:
                term = term * pw(i, k)
        total = total + term
    return total


class PolyMatrix:
    """Rectangular matrix of :class:`SparsePoly` over one shared variable list."""

    def __init__(self, entries):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ShapeError("ragged polynomial matrix")
        first = self.entries[0][0] if self.rows and self.cols else None
        for row in self.entries:
            for e in row:
                if first is not None:
                    first._check(e)
        self.variables = first.variables if first is not None else ()
        self.mode = first.mode if first is not None else EXACT

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @classmethod
    def from_linear(cls, const, coeffs, variables, mode=EXACT):
        """Build ``const + sum_v coeffs[v] * x_v``.

        ``const`` is a scalar matrix, ``coeffs`` maps flat variable index to a
        scalar matrix of the same shape.
        """
        variables = tuple(variables)
        n = len(variables)
        r, c = const.shape
        zero_e = (0,) * n
        unit = []
        for v in range(n):
            e = [0] * n
            e[v] = 1
            unit.append(tuple(e))
        entries = []
        for i in range(r):
            row = []
            for j in range(c):
                terms = {zero_e: const[i, j]}
                for v, M in coeffs.items():
                    x = M[i, j]
                    if x:
                        terms[unit[v]] = x
                row.append(SparsePoly(variables, terms, mode))
            entries.append(row)
        return cls(entries)


def _strip_unit_lines(entries):
    """Drop index k while column k or row k equals the unit vector e_k.

    The determinant is unchanged (expand along that column/row).
    """
    idx = list(range(len(entries)))
    changed = True
    while changed:
        changed = False
        for k in list(idx):
            diag = entries[k][k]
            if not (len(diag.terms) == 1 and diag.constant_term() == 1):
                continue
            col_unit = all(entries[i][k].is_zero() for i in idx if i != k)
            row_unit = all(entries[k][j].is_zero() for j in idx if j != k)
            if col_unit or row_unit:
                idx.remove(k)
                changed = True
    return [[entries[i][j] for j in idx] for i in idx]


def poly_det(M, cap=DEFAULT_DET_CAP):
    """Exact determinant of a square :class:`PolyMatrix`.

    Dynamic programming over column subsets: after placing rows ``0..k-1``
    on the columns of ``mask``, the accumulated signed sum is the minor on
    those rows and columns.  Costs ``O(2^n n)`` polynomial multiplications.
    Rows/columns that are unit vectors are eliminated first; ``cap`` bounds
    the remaining side.
    """
    if M.rows != M.cols:
        raise ShapeError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    one = SparsePoly.constant(1, M.variables, M.mode)
    if M.rows == 0:
        return one
    entries = _strip_unit_lines(M.entries)
    n = len(entries)
    if n == 0:
        return one
    if n > cap:
        raise CapExceededError(f"determinant side {n} exceeds cap {cap}")
    layer = {0: one}
    for k in range(n):
        row = entries[k]
        nxt = {}
        for mask, val in layer.items():
            for j in range(n):
                if mask >> j & 1:
                    continue
                a = row[j]
                if a.is_zero():
                    continue
                term = val * a
                if bin(mask >> (j + 1)).count("1") & 1:
                    term = -term
                key = mask | (1 << j)
                prev = nxt.get(key)
                nxt[key] = term if prev is None else prev + term
        layer = {m: v for m, v in nxt.items() if not v.is_zero()}
        if not layer:
            return SparsePoly.zero(M.variables, M.mode)
    return layer.get((1 << n) - 1, SparsePoly.zero(M.variables, M.mode))


def poly_divide_exact(num, den):
    """Exact quotient ``num / den``, or ``None`` when ``den`` does not divide ``num``.

    Multivariate long division in graded lexicographic order; with a single
    divisor the remainder is unique, so a leading term that ``den`` cannot
    cancel proves non-divisibility.
    """
    num._check(den)
    if num.mode != EXACT:
        raise ModeError("exact division needs exact polynomials")
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lead_e, lead_c = den.leading_term()
    inv_lead = 1 / lead_c
    rem = dict(num.terms)
    quot = {}
    sub = operator.sub
    add = operator.add
    while rem:
        e = max(rem, key=grlex_key)
        shift = tuple(map(sub, e, lead_e))
        if any(s < 0 for s in shift):
            return None
        c = rem[e] * inv_lead
        quot[shift] = c
        for e2, c2 in den.terms.items():
            t = tuple(map(add, shift, e2))
            v = rem.get(t, ZERO) - c * c2
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return SparsePoly._from_clean(num.variables, quot, num.mode)


def _as_evaluator(p):
    if isinstance(p, SparsePoly):
        return p.__call__
    if callable(p):
        return p
    raise TypeError(f"cannot evaluate {type(p).__name__}")


def poly_equal_pit(p, q, trials=20, seed=0, *, nvars=None, degree_bound=None, mode=None, tol=DEFAULT_TOL):
    """Schwartz-Zippel identity test of ``p`` and ``q``.

    Each argument is a :class:`SparsePoly` or a callable taking a list of
    coordinates.  Points are drawn from the integer box ``[-2d, 2d]`` where
    ``d`` is the degree bound, so a false "equal" has probability at most
    ``(1/4)**trials``.  Exact mode compares exactly; float mode uses
    ``|p - q| <= tol * max(1, |p|, |q|)``.
    """
    polys = [x for x in (p, q) if isinstance(x, SparsePoly)]
    if len(polys) == 2:
        polys[0]._check(polys[1])
    if polys:
        nvars = polys[0].nvars if nvars is None else nvars
        mode = polys[0].mode if mode is None else mode
        if degree_bound is None:
            degree_bound = max(x.degree() for x in polys)
    if nvars is None:
        raise ValueError("nvars is required when both arguments are evaluators")
    mode = check_mode(mode or EXACT)
    d = max(int(degree_bound or 1), 1)
    rng = np.random.default_rng(seed)
    fp, fq = _as_evaluator(p), _as_evaluator(q)
    for _ in range(trials):
        ints = rng.integers(-2 * d, 2 * d, endpoint=True, size=nvars)
        point = [GaussRat(int(v)) for v in ints] if mode == EXACT else [complex(int(v)) for v in ints]
        a, b = fp(point), fq(point)
        if mode == EXACT:
            if to_exact(a) != to_exact(b):
                return False
        elif abs(a - b) > tol * max(1.0, abs(a), abs(b)):
            return False
    return True


# univariate helpers -------------------------------------------------------

def _uni_check(p):
    if p.nvars != 1:
        raise ShapeError("univariate operation on a multivariate polynomial")
    if p.mode != EXACT:
        raise ModeError("univariate gcd needs exact polynomials")


def univariate_divmod(p, q):
    """Quotient and remainder of univariate exact polynomials."""
    _uni_check(p)
    _uni_check(q)
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    dq = q.degree()
    lc = q.terms[(dq,)]
    rem = dict(p.terms)
    quot = {}
    while rem:
        dr = max(e[0] for e in rem)
        if dr < dq:
            break
        c = rem[(dr,)] / lc
        quot[(dr - dq,)] = c
        for (e,), c2 in q.terms.items():
            t = (e + dr - dq,)
            v = rem.get(t, ZERO) - c * c2
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return SparsePoly(p.variables, quot, EXACT), SparsePoly(p.variables, rem, EXACT)


def univariate_gcd(p, q):
    """Monic gcd of two univariate exact polynomials (Euclid)."""
    _uni_check(p)
    _uni_check(q)
    a, b = p, q
    while not b.is_zero():
        a, b = b, univariate_divmod(a, b)[1]
    if a.is_zero():
        return a
    lc = a.terms[(a.degree(),)]
    return a * (1 / lc)


__all__ = [
    "DEFAULT_DET_CAP", "PolyMatrix", "SparsePoly", "grlex_key", "poly_arith", "poly_det",
    "poly_divide_exact", "poly_equal_pit", "poly_eval", "univariate_divmod", "univariate_gcd",
]
