"""Characteristic functions of colligations.

For ``S`` in Mat(m) write ``S~ = S (x) 1_N`` (block (phi, psi) of ``S~`` is
``s_{phi psi} 1_N``).  The characteristic function is

    chi_g(S) = a + b S~ (1 - d S~)^{-1} c,

the map obtained by eliminating ``x`` from ``q = a p + b S~ x``,
``x = c p + d S~ x``.
"""

from __future__ import annotations

import numpy as np

from . import linalg as la
from .core import amplify
from .errors import ModeError, PoleError, ShapeError, SingularError
from .scalars import EXACT, FLOAT, ONE, ZERO, mode_of

# 1 - d S~ counts as singular when sigma_min <= POLE_RTOL * ||1 - d S~||
POLE_RTOL = 1e-12


def tilde(S, N):
    """``S (x) 1_N`` acting on V (x) Z_N."""
    return la.kron_identity(S, N)


def _check_point(C, S):
    if S.shape != (C.m, C.m):
        raise ShapeError(f"S must be {C.m}x{C.m}, got {S.shape}")
    if mode_of(S) != C.mode:
        raise ModeError(f"{mode_of(S)} point for a {C.mode} colligation")


def resolvent_matrix(C, S):
    """``1 - d S~`` together with ``S~``."""
    St = tilde(S, C.N)
    T = la.eye(C.m * C.N, C.mode) - C.D @ St
    return T, St


def _pole_check(T):
    if T.size == 0:
        return
    s = np.linalg.svd(T, compute_uv=False)
    rel = s[-1] / s[0] if s[0] else 0.0
    if rel <= POLE_RTOL:
        raise PoleError(f"1 - d S~ is singular (relative sigma_min {rel:.3g})", residual=rel)


def charfn_eval(C, S):
    """``chi_g(S) = a + b S~ (1 - d S~)^{-1} c``; raises :class:`PoleError` on the divisor."""
    S = np.asarray(S)
    _check_point(C, S)
    if C.N == 0:
        return C.a
    T, St = resolvent_matrix(C, S)
    if C.mode == FLOAT:
        _pole_check(T)
        J = slice(None)
    else:
        # only the nonzero columns J of S~ matter:
        # b S~ (1 - d S~)^-1 c = b S~[:, J] (1 - (d S~)[J, J])^-1 c[J]
        J = [k for k in range(St.shape[1]) if any(St[:, k])]
        if not J:
            return C.a.copy()
        T = T[np.ix_(J, J)]
    try:
        X = la.solve(T, C.C[J])
    except SingularError as exc:
        raise PoleError("1 - d S~ is singular", residual=ZERO if C.mode == EXACT else 0.0) from exc
    return C.a + C.B @ St[:, J] @ X


def charfn_eval_batch(C, S_stack):
    """Float :func:`charfn_eval` over a stack of points, shape (K, m, m) -> (K, alpha, alpha).

    No pole detection; intended for sampling well inside the regular region.
    """
    if C.mode != FLOAT:
        raise ModeError("batch evaluation is float only")
    S_stack = np.asarray(S_stack, dtype=complex)
    K = S_stack.shape[0]
    if C.N == 0:
        return np.broadcast_to(C.a, (K, C.alpha, C.alpha)).copy()
    St = np.kron(S_stack, np.eye(C.N))
    T = np.eye(C.m * C.N) - C.D @ St
    X = np.linalg.solve(T, np.broadcast_to(C.C, (K,) + C.C.shape))
    return C.a + C.B @ St @ X


def charfn_oracle(C, S):
    """``chi_g(S)`` by solving the defining linear system column by column.

    For each basis vector ``p = e_l`` the unknowns ``x_1..x_m`` satisfy
    ``x_phi = c_phi p + sum_psi d_{phi psi} sum_chi s_{psi chi} x_chi``;
    then ``q = a p + sum_beta b_beta sum_chi s_{beta chi} x_chi``.
    The system matrix is assembled entry by entry, without Kronecker products.
    """
    S = np.asarray(S)
    _check_point(C, S)
    al, m, N = C.alpha, C.m, C.N
    mode = C.mode
    one = ONE if mode == EXACT else 1.0
    K = la.zeros((m * N, m * N), mode)
    for phi in range(m):
        for i in range(N):
            row = phi * N + i
            for chi in range(m):
                for k in range(N):
                    col = chi * N + k
                    acc = one if row == col else 0 * one
                    for psi in range(m):
                        acc = acc - S[psi, chi] * C.entries[al + phi * N + i, al + psi * N + k]
                    K[row, col] = acc
    if m * N and la.rank(K) < m * N:
        raise SingularError("the elimination system has no unique solution")
    result = la.zeros((al, al), mode)
    for l in range(al):
        rhs = la.zeros((m * N, 1), mode)
        for r in range(m * N):
            rhs[r, 0] = C.entries[al + r, l]
        x = la.solve(K, rhs) if m * N else rhs
        for kk in range(al):
            q = C.entries[kk, l]
            for beta in range(m):
                for i in range(N):
                    y = 0 * one
                    for chi in range(m):
                        y = y + S[beta, chi] * x[chi * N + i, 0]
                    q = q + C.entries[kk, al + beta * N + i] * y
            result[kk, l] = q
    return result


def charfn_eval_amplified(C, j, S):
    """``chi_{g^[j]}(S)`` for ``S`` of size jm x jm (copy-major indexing)."""
    return charfn_eval(amplify(C, j), S)


def h_tilde(H, size):
    """``H (x) 1_size`` in copy-major indexing (the copy index is outer)."""
    return la.kron_identity(H, size)


# Grassmannian form -----------------------------------------------------------

class Subspace:
    """Linear subspace of an ambient space, held by a canonical basis.

    The basis is the reduced column echelon form of any spanning set, which
    is unique for the subspace (exactly in exact mode, up to roundoff in
    float mode).
    """

    def __init__(self, ambient, basis):
        self.ambient = ambient
        self.basis = basis

    @classmethod
    def from_basis(cls, M, tol=None):
        M = np.asarray(M)
        if M.ndim != 2:
            raise ShapeError("a basis matrix must be 2-D")
        ambient = M.shape[0]
        if M.shape[1] == 0:
            return cls(ambient, la.zeros((ambient, 0), mode_of(M)))
        span = la.column_space(M, tol)
        R, pivots = la.rref(span.T.copy(), tol)
        return cls(ambient, R[: len(pivots)].T.copy())

    @classmethod
    def graph(cls, M):
        """``{(v, M v)}``, the graph of an operator, inside the doubled space."""
        n = M.shape[1]
        return cls.from_basis(np.concatenate([la.eye(n, mode_of(M)), M], axis=0))

    @property
    def dim(self):
        return self.basis.shape[1]

    @property
    def mode(self):
        return mode_of(self.basis)

    def equals(self, other, tol=1e-9):
        if self.ambient != other.ambient or self.dim != other.dim:
            return False
        return la.matrices_equal(self.basis, other.basis, tol)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim}, mode={self.mode})"


def grassmann_map(C, L, tol=None):
    """Image of ``L`` in Gr(V + V) under the colligation.

    ``L`` lives in V_x + V_y (coordinates ordered x first); the graph of ``S``
    is ``{(x, S x)}``, so ``y = S~ x`` as in the defining system.  The result
    is the subspace of pairs ``(p, q)`` (input first) for which some
    ``(x, y)`` in ``L (x) Z_N`` satisfies ``q = a p + b y``, ``x = c p + d y``.
    For ``L = graph(S)`` at a regular point this is ``graph(chi_g(S))``.
    """
    m, N, al = C.m, C.N, C.alpha
    if L.ambient != 2 * m:
        raise ShapeError(f"L must live in a {2 * m}-dimensional space")
    if L.mode != C.mode:
        raise ModeError("subspace and colligation modes differ")
    k = L.dim
    X = la.kron_identity(L.basis[:m], N)
    Y = la.kron_identity(L.basis[m:], N)
    # unknowns (p, z) with x = X z, y = Y z
    system = np.concatenate([-C.C, X - C.D @ Y], axis=1)
    if system.shape[0] == 0:
        sol = la.eye(al + k * N, C.mode)
    else:
        sol = la.nullspace(system, tol)
    p = sol[:al]
    q = C.a @ p + C.B @ Y @ sol[al:]
    return Subspace.from_basis(np.concatenate([p, q], axis=0), tol)


# determinant identity -------------------------------------------------------

def det_identity_residual(C, S, relative=False):
    """``det chi(S) det(1 - d S~) - det[[a, -b S~], [c, 1 - d S~]]``.

    Zero in exact arithmetic.  With ``relative=True`` (float) the residual
    is divided by ``max(1, |lhs|, |rhs|)``.
    """
    S = np.asarray(S)
    chi = charfn_eval(C, S)
    T, St = resolvent_matrix(C, S)
    lhs = la.det(chi) * la.det(T)
    big = np.block([[C.a, -(C.B @ St)], [C.C, T]]) if C.N else C.a
    rhs = la.det(big)
    res = lhs - rhs
    if relative and C.mode == FLOAT:
        return abs(res) / max(1.0, abs(lhs), abs(rhs))
    return res
