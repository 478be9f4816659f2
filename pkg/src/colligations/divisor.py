"""Divisor polynomials ``p_g(S) = det(1 - d S~)`` and their bookkeeping.

Variables of ``p_{g^[j]}`` are the entries of a jm x jm matrix ``S`` in
copy-major order; entry ``S[(mu, phi), (nu, psi)]`` is the variable
``s_{phi psi}^{mu nu}`` and is identified by the 1-based quadruple
``(phi, psi, mu, nu)``.

Only two components of the divisor get multiplicities here: ``delta``
(``det(1 - S) = 0``, gained once per embedding step) and ``det Lambda = 0``
(invisible in the S-chart, detected through the degree deficit).  For
m = 1 the reduced denominator ``P_g`` of ``det chi_g``, the ratio
``pi_g = p_g / P_g`` and the cocycle ``c_{g,h}`` are computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .core import amplify
from .errors import CapExceededError, ModeError, ShapeError
from .poly import (
    DEFAULT_DET_CAP,
    PolyMatrix,
    SparsePoly,
    poly_det,
    poly_divide_exact,
    univariate_divmod,
    univariate_gcd,
)
from .scalars import EXACT, FLOAT, GaussRat, mode_of
from .semigroup import circ


def s_variables(m, j=1):
    """Variable identifiers ``(phi, psi, mu, nu)`` in flat (row-major) order."""
    out = []
    for row in range(j * m):
        mu, phi = divmod(row, m)
        for col in range(j * m):
            nu, psi = divmod(col, m)
            out.append((phi + 1, psi + 1, mu + 1, nu + 1))
    return tuple(out)


def flat_index(m, j, phi, psi, mu, nu):
    """Flat position of ``s_{phi psi}^{mu nu}`` (all 1-based)."""
    return ((mu - 1) * m + phi - 1) * (j * m) + (nu - 1) * m + psi - 1


def _require_exact(C, what):
    if C.mode != EXACT:
        raise ModeError(f"{what} needs an exact colligation (use p_eval for float)")


def resolvent_polymatrix(C, j=1, support=None):
    """``1 - d^[j] S~`` as a polynomial matrix.

    ``support`` optionally lists the (row, col) positions of ``S`` kept as
    variables (0-based); all other entries of ``S`` are set to zero, and the
    polynomial ring then has only the kept variables, in the given order.
    """
    A = amplify(C, j)
    n, N = A.m, A.N
    all_vars = s_variables(C.m, j)
    positions = [(r, c) for r in range(n) for c in range(n)] if support is None else list(support)
    variables = tuple(all_vars[r * n + c] for r, c in positions)
    D = A.D
    coeffs = {}
    for v, (r, c) in enumerate(positions):
        M = la.zeros((n * N, n * N), C.mode)
        # (d S~)[:, block c] gets d[:, block r] * s_rc
        M[:, c * N:(c + 1) * N] = -D[:, r * N:(r + 1) * N]
        coeffs[v] = M
    return PolyMatrix.from_linear(la.eye(n * N, C.mode), coeffs, variables, C.mode)


def p_poly(C, j=1, cap=DEFAULT_DET_CAP, support=None):
    """Exact ``p_{g^[j]}`` as a polynomial in the (jm)^2 entries of ``S``.

    With ``support`` the polynomial is the restriction to the listed entries
    (a slice through the origin), which keeps Taylor-coefficient extraction
    cheap at higher amplification levels.
    """
    _require_exact(C, "p_poly")
    if support is None and j * C.m * C.N > cap:
        raise CapExceededError(f"j*m*N = {j * C.m * C.N} exceeds the determinant cap {cap}")
    return poly_det(resolvent_polymatrix(C, j, support), cap=cap)


def _infer_level(C, S):
    n = S.shape[0]
    if S.shape != (n, n) or n % C.m:
        raise ShapeError(f"S of shape {S.shape} does not fit m={C.m}")
    return n // C.m


def p_eval(C, S):
    """``det(1 - d^[j] S~)`` at a point; the level ``j`` is read off the size of ``S``."""
    S = np.asarray(S)
    if mode_of(S) != C.mode:
        raise ModeError("point and colligation modes differ")
    A = amplify(C, _infer_level(C, S))
    St = la.kron_identity(S, A.N)
    return la.det(la.eye(A.m * A.N, C.mode) - A.D @ St)


def p_eval_batch(C, S_stack):
    """Float :func:`p_eval` over a stack of points."""
    if C.mode != FLOAT:
        raise ModeError("batch evaluation is float only")
    S_stack = np.asarray(S_stack, dtype=complex)
    A = amplify(C, _infer_level(C, S_stack[0]))
    St = np.kron(S_stack, np.eye(A.N))
    return np.linalg.det(np.eye(A.m * A.N) - A.D @ St)


def lambda_chart_eval(C, Lam):
    """``det(d - Lambda~)``, the divisor equation in the chart ``Lambda = S^-1``."""
    Lam = np.asarray(Lam)
    if Lam.shape != (C.m, C.m):
        raise ShapeError(f"Lambda must be {C.m}x{C.m}")
    if mode_of(Lam) != C.mode:
        raise ModeError("point and colligation modes differ")
    return la.det(C.D - la.kron_identity(Lam, C.N))


def det_one_minus_s(variables, m, mode=EXACT):
    """``det(1 - S)`` over the j=1 variable list of an m x m matrix."""
    coeffs = {}
    for v in range(m * m):
        M = la.zeros((m, m), mode)
        M[v // m, v % m] = -1.0 if mode == FLOAT else GaussRat(-1)
        coeffs[v] = M
    return poly_det(PolyMatrix.from_linear(la.eye(m, mode), coeffs, variables, mode))


def delta_multiplicity(C, cap=DEFAULT_DET_CAP, p=None):
    """Largest ``k`` with ``det(1 - S)^k`` dividing ``p_g``."""
    _require_exact(C, "delta_multiplicity")
    p = p_poly(C, cap=cap) if p is None else p
    delta = det_one_minus_s(p.variables, C.m)
    k = 0
    while True:
        q = poly_divide_exact(p, delta)
        if q is None:
            return k
        p, k = q, k + 1


def det_lambda_multiplicity(C, cap=DEFAULT_DET_CAP, p=None):
    """Multiplicity ``l`` of ``det Lambda = 0`` from ``deg p_g = m (N - l)``.

    Returns ``None`` when the degree deficit is not a multiple of ``m``
    (the degree accounting does not apply).
    """
    _require_exact(C, "det_lambda_multiplicity")
    p = p_poly(C, cap=cap) if p is None else p
    deficit = C.m * C.N - max(p.degree(), 0)
    if deficit % C.m:
        return None
    return deficit // C.m


def float_degree(C, seed=0, rtol=1e-9):
    """Total degree of ``p_g`` from the nonzero eigenvalues of ``d S~`` at a random ``S``.

    Along a generic ray ``p(tS) = prod (1 - t lambda_i)`` over the eigenvalues
    of ``d S~``, so the count of nonzero ones is the total degree.
    """
    rng = np.random.default_rng(seed)
    S = (rng.standard_normal((C.m, C.m)) + 1j * rng.standard_normal((C.m, C.m))) / np.sqrt(2)
    M = la.to_float(C.D) @ np.kron(S, np.eye(C.N))
    if M.size == 0:
        return 0
    ev = np.abs(np.linalg.eigvals(M))
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    return int(np.sum(ev > rtol * scale))


@dataclass
class DivisorSummary:
    """Degree and distinguished multiplicities of ``p_g``."""

    total_degree: int
    delta_multiplicity: int | None
    det_lambda_multiplicity: int | None
    residual_degree: int | None
    p: SparsePoly | None = field(default=None, repr=False)

    def to_json(self, include_terms=True):
        doc = {
            "degree": self.total_degree,
            "deltaMult": self.delta_multiplicity,
            "detLambdaMult": self.det_lambda_multiplicity,
            "residualDegree": self.residual_degree,
        }
        if include_terms and self.p is not None:
            doc["variables"] = [list(v) for v in self.p.variables]
            doc["pTerms"] = self.p.to_json()
        return doc


def divisor_summary(C, cap=DEFAULT_DET_CAP):
    """Exact summary within the cap; float colligations get the degree data only."""
    if C.mode == FLOAT:
        deg = float_degree(C)
        deficit = C.m * C.N - deg
        return DivisorSummary(deg, None, None if deficit % C.m else deficit // C.m, None)
    p = p_poly(C, cap=cap)
    k = delta_multiplicity(C, p=p)
    return DivisorSummary(
        total_degree=max(p.degree(), 0),
        delta_multiplicity=k,
        det_lambda_multiplicity=det_lambda_multiplicity(C, p=p),
        residual_degree=max(p.degree(), 0) - k * C.m,
        p=p,
    )


# m = 1: reduced denominators and the cocycle ---------------------------------

@dataclass(frozen=True, eq=False)
class RationalFunction1D:
    """Reduced univariate rational function ``numerator / denominator``.

    The denominator is normalized to constant term 1 (monic if it vanishes
    at 0); numerator and denominator are coprime.
    """

    numerator: SparsePoly
    denominator: SparsePoly

    def __post_init__(self):
        num, den = self.numerator, self.denominator
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not num.is_zero():
            g = univariate_gcd(num, den)
            if g.degree() > 0:
                num = univariate_divmod(num, g)[0]
                den = univariate_divmod(den, g)[0]
        else:
            den = SparsePoly.constant(1, den.variables)
        scale = _scale_factor(den)
        object.__setattr__(self, "numerator", num * scale)
        object.__setattr__(self, "denominator", den * scale)

    @classmethod
    def polynomial(cls, p):
        return cls(p, SparsePoly.constant(1, p.variables))

    def is_polynomial(self):
        return self.denominator.degree() == 0

    def __mul__(self, other):
        return RationalFunction1D(self.numerator * other.numerator, self.denominator * other.denominator)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction1D):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    __hash__ = None

    def __repr__(self):
        return f"RationalFunction1D({self.numerator!r} / {self.denominator!r})"


def _scale_factor(den):
    c0 = den.constant_term()
    return 1 / c0 if c0 else 1 / den.terms[(den.degree(),)]


def _require_m1(C):
    if C.m != 1:
        raise ShapeError("reduced denominators are only computed for m = 1")
    _require_exact(C, "m = 1 divisor data")


def det_charfn_m1(C, cap=DEFAULT_DET_CAP):
    """``det chi_g(s)`` as a reduced rational function of one variable (m = 1).

    The numerator is ``det[[a, -b s], [c, 1 - d s]]`` and the unreduced
    denominator is ``p_g(s)``.
    """
    _require_m1(C)
    al, N = C.alpha, C.N
    variables = s_variables(1)
    n = al + N
    if n > cap:
        raise CapExceededError(f"alpha + N = {n} exceeds the determinant cap {cap}")
    const = la.zeros((n, n), EXACT)
    const[:al, :al] = C.a
    const[al:, :al] = C.C
    const[al:, al:] = la.eye(N, EXACT)
    lin = la.zeros((n, n), EXACT)
    lin[:al, al:] = -C.B
    lin[al:, al:] = -C.D
    num = poly_det(PolyMatrix.from_linear(const, {0: lin}, variables), cap=cap)
    return RationalFunction1D(num, p_poly(C, cap=cap))


def reduced_denominator_m1(C, cap=DEFAULT_DET_CAP):
    """``(P_g, pi_g)`` for m = 1: the reduced denominator of ``det chi_g`` and ``p_g / P_g``."""
    det_chi = det_charfn_m1(C, cap)
    P = det_chi.denominator
    p = p_poly(C, cap=cap)
    pi = poly_divide_exact(p, P)
    if pi is None:
        raise ArithmeticError("reduced denominator does not divide p_g")
    return RationalFunction1D.polynomial(P), RationalFunction1D.polynomial(pi)


def cocycle_m1(g, h, cap=DEFAULT_DET_CAP):
    """``c_{g,h} = P_g P_h / P_{g o h}`` (m = 1); the division is checked to be exact."""
    _require_m1(g)
    _require_m1(h)
    Pg = reduced_denominator_m1(g, cap)[0].numerator
    Ph = reduced_denominator_m1(h, cap)[0].numerator
    Pgh = reduced_denominator_m1(circ(g, h), cap)[0].numerator
    c = poly_divide_exact(Pg * Ph, Pgh)
    if c is None:
        raise ArithmeticError("P_{g o h} does not divide P_g P_h")
    return RationalFunction1D.polynomial(c)
