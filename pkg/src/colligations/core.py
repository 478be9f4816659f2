"""Colligations: block matrices of size ``alpha + m*N`` modulo inner conjugation.

A colligation is stored as one representative matrix

    g = [[a,   b_1,  ..., b_m ],
         [c_1, d_11, ..., d_1m],
         ...
         [c_m, d_m1, ..., d_mm]]

with ``a`` of size alpha x alpha and every ``d`` block N x N.  The group
GL(N) (or U(N) for unitary colligations) acts by ``g -> iota(u) g iota(u)^-1``
where ``iota(u) = diag(1_alpha, u, ..., u)``.  Block indices are 1-based, as
in the usual notation; array offsets are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from gmpy2 import mpq

from . import linalg as la
from .errors import ModeError, ShapeError, SingularError
from .scalars import EXACT, FLOAT, ONE, GaussRat, check_mode, mode_of

FLAVORS = ("general", "invertible", "unitary")
UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class Shape:
    alpha: int
    m: int
    N: int

    def __post_init__(self):
        if self.alpha < 0 or self.m < 1 or self.N < 0:
            raise ShapeError(f"invalid shape alpha={self.alpha}, m={self.m}, N={self.N}")

    @property
    def size(self):
        return self.alpha + self.m * self.N

    def inner_offset(self, beta):
        """First row of block ``beta`` (1-based)."""
        if not 1 <= beta <= self.m:
            raise ShapeError(f"block index {beta} outside 1..{self.m}")
        return self.alpha + (beta - 1) * self.N


class Colligation:
    """A representative matrix together with its shape and flavor.

    Instances are treated as immutable: the entry array is marked read-only.
    Construction does not check invariants; use :func:`validate`.
    """

    __slots__ = ("shape", "entries", "flavor")

    def __init__(self, shape, entries, flavor="general"):
        if flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
        entries = np.asarray(entries)
        entries = np.array(entries, dtype=object if entries.dtype == object else complex)
        entries.setflags(write=False)
        self.shape = shape
        self.entries = entries
        self.flavor = flavor

    @property
    def mode(self):
        return mode_of(self.entries)

    @property
    def alpha(self):
        return self.shape.alpha

    @property
    def m(self):
        return self.shape.m

    @property
    def N(self):
        return self.shape.N

    # block accessors (copies) ----------------------------------------------
    @property
    def a(self):
        al = self.alpha
        return self.entries[:al, :al].copy()

    def b(self, beta):
        o = self.shape.inner_offset(beta)
        return self.entries[: self.alpha, o:o + self.N].copy()

    def c(self, gamma):
        o = self.shape.inner_offset(gamma)
        return self.entries[o:o + self.N, : self.alpha].copy()

    def d(self, phi, psi):
        r = self.shape.inner_offset(phi)
        s = self.shape.inner_offset(psi)
        return self.entries[r:r + self.N, s:s + self.N].copy()

    @property
    def B(self):
        """``[b_1 ... b_m]``, size alpha x mN."""
        return self.entries[: self.alpha, self.alpha:].copy()

    @property
    def C(self):
        """``[c_1; ...; c_m]``, size mN x alpha."""
        return self.entries[self.alpha:, : self.alpha].copy()

    @property
    def D(self):
        """The full mN x mN block ``[d_{phi psi}]``."""
        return self.entries[self.alpha:, self.alpha:].copy()

    def with_entries(self, entries, flavor=None):
        return Colligation(self.shape, entries, self.flavor if flavor is None else flavor)

    def __eq__(self, other):
        if not isinstance(other, Colligation):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.flavor == other.flavor
            and self.mode == other.mode
            and self.entries.shape == other.entries.shape
            and all(x == y for x, y in zip(self.entries.flat, other.entries.flat))
        )

    __hash__ = None

    def __repr__(self):
        s = self.shape
        return f"Colligation(alpha={s.alpha}, m={s.m}, N={s.N}, mode={self.mode}, flavor={self.flavor})"


def block(C, selector):
    """Sub-block addressed by ``"a"``, ``("b", beta)``, ``("c", gamma)`` or ``("d", phi, psi)``."""
    if selector == "a" or selector == ("a",):
        return C.a
    kind, *idx = selector
    if kind == "b" and len(idx) == 1:
        return C.b(*idx)
    if kind == "c" and len(idx) == 1:
        return C.c(*idx)
    if kind == "d" and len(idx) == 2:
        return C.d(*idx)
    raise ShapeError(f"bad block selector {selector!r}")


def identity(shape, mode=EXACT, flavor="unitary"):
    return Colligation(shape, la.eye(shape.size, mode), flavor)


def neutral(alpha, m, mode=EXACT):
    """The N=0 colligation given by ``1_alpha``; neutral for the product."""
    return identity(Shape(alpha, m, 0), mode)


def _is_unitary(M, tol=UNITARY_TOL):
    n = M.shape[0]
    G = la.conj_transpose(M) @ M if n else M
    return la.matrices_equal(G, la.eye(n, mode_of(M)), tol) if n else True


def validate(C, tol=UNITARY_TOL):
    """List of invariant violations (empty when ``C`` is well formed)."""
    problems = []
    E = C.entries
    n = C.shape.size
    if E.ndim != 2 or E.shape != (n, n):
        problems.append(f"shape: entries are {E.shape}, expected ({n}, {n})")
        return problems
    if C.flavor not in FLAVORS:
        problems.append(f"flavor: unknown flavor {C.flavor!r}")
    if C.mode == EXACT:
        bad = [x for x in E.flat if not isinstance(x, GaussRat)]
        if bad:
            problems.append(f"mode: {len(bad)} non-exact entries in an exact colligation")
            return problems
    elif not np.all(np.isfinite(E)):
        problems.append("entries: non-finite values")
        return problems
    if C.flavor == "unitary" and not _is_unitary(E, tol):
        problems.append("flavor: g* g != 1")
    if C.flavor == "invertible":
        if C.mode == EXACT:
            singular = not la.det(E)
        else:
            singular = la.rank(E) < n
        if singular:
            problems.append("flavor: det g == 0")
    return problems


def check(C):
    problems = validate(C)
    if problems:
        raise ShapeError("; ".join(problems))
    return C


@dataclass(frozen=True, eq=False)
class InnerGroupElement:
    """An element ``u`` of GL(N) or U(N) acting on the inner space."""

    u: np.ndarray
    kind: str = "general-linear"

    def __post_init__(self):
        if self.kind not in ("general-linear", "unitary"):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.u.ndim != 2 or self.u.shape[0] != self.u.shape[1]:
            raise ShapeError("inner group element must be square")

    @property
    def N(self):
        return self.u.shape[0]

    def inverse(self):
        if self.kind == "unitary" and self.u.dtype != object:
            return InnerGroupElement(self.u.conj().T, self.kind)
        return InnerGroupElement(la.inv(self.u), self.kind)


def _as_inner(u):
    return u if isinstance(u, InnerGroupElement) else InnerGroupElement(np.asarray(u))


def iota(u, alpha, m):
    """``diag(1_alpha, u, ..., u)`` with ``m`` copies of ``u``."""
    u = _as_inner(u).u
    mode = mode_of(u)
    return la.block_diag(la.eye(alpha, mode), *([u] * m))


def conjugate(C, u):
    """``iota(u) g iota(u)^-1``; the shape and flavor are kept."""
    u = _as_inner(u)
    if u.N != C.N:
        raise ShapeError(f"inner element of size {u.N} for N={C.N}")
    la.same_mode(u.u, C.entries)
    if C.flavor == "unitary" and not _is_unitary(u.u):
        raise ModeError("a unitary colligation can only be conjugated by a unitary u")
    try:
        u_inv = u.inverse().u
    except SingularError as exc:
        raise SingularError("conjugating element is singular") from exc
    if C.mode == FLOAT and la.rank(u.u) < u.N:
        raise SingularError("conjugating element is singular")
    left = iota(u.u, C.alpha, C.m)
    right = iota(u_inv, C.alpha, C.m)
    return C.with_entries(left @ C.entries @ right)


def embed(C):
    """The map N -> N+1: pad ``b`` and ``c`` with zeros, ``d_{phi phi}`` with a trailing 1."""
    s = C.shape
    new = Shape(s.alpha, s.m, s.N + 1)
    E = la.zeros((new.size, new.size), C.mode)
    old_idx = _inner_map(s, new, 0)
    E[np.ix_(old_idx, old_idx)] = C.entries
    for beta in range(1, s.m + 1):
        k = new.inner_offset(beta) + s.N
        E[k, k] = ONE if C.mode == EXACT else 1.0
    return Colligation(new, E, C.flavor)


def _inner_map(small, big, shift):
    """Positions of ``small``'s coordinates inside ``big`` (same alpha, m).

    Inner coordinate ``n`` of block ``beta`` goes to ``n + shift`` of the same
    block of ``big``.
    """
    idx = list(range(small.alpha))
    for beta in range(1, small.m + 1):
        o = big.inner_offset(beta) + shift
        idx.extend(range(o, o + small.N))
    return idx


def amplify_permutation(shape, j):
    """Index map from the naive j-fold direct sum to the amplified ordering.

    ``perm[k]`` is the row of the amplified matrix that carries row ``k`` of
    ``blockdiag(g, ..., g)``.  Copy-major convention: the corner lists copy 1's
    alpha coordinates first; the inner part lists (copy, block) pairs ordered
    first by copy, then by block index.
    """
    al, m, N = shape.alpha, shape.m, shape.N
    perm = []
    for copy in range(j):
        perm.extend(copy * al + i for i in range(al))
        for beta in range(m):
            base = j * al + (copy * m + beta) * N
            perm.extend(base + n for n in range(N))
    return perm


def amplify(C, j):
    """``g^[j]``: j copies of ``g`` as a colligation of shape (j alpha, j m, N)."""
    if j < 1:
        raise ValueError("amplification level must be >= 1")
    if j == 1:
        return C
    s = C.shape
    new = Shape(j * s.alpha, j * s.m, s.N)
    naive = la.block_diag(*([C.entries] * j))
    perm = amplify_permutation(s, j)
    E = la.zeros((new.size, new.size), C.mode)
    E[np.ix_(perm, perm)] = naive
    return Colligation(new, E, C.flavor)


# random generation ----------------------------------------------------------

def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_exact_matrix(rows, cols, rng):
    """Gaussian-rational entries with numerators in [-9, 9], denominators in {1,2,3,4}."""
    num = rng.integers(-9, 9, endpoint=True, size=(rows, cols, 2))
    den = rng.integers(1, 4, endpoint=True, size=(rows, cols, 2))
    out = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for k in range(cols):
            out[i, k] = GaussRat(
                mpq(int(num[i, k, 0]), int(den[i, k, 0])), mpq(int(num[i, k, 1]), int(den[i, k, 1]))
            )
    return out


def random_float_matrix(rows, cols, rng):
    """I.i.d. standard complex Gaussians (unit variance)."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def haar_unitary(n, rng):
    """Haar-distributed unitary via QR of a complex Gaussian with phase correction."""
    rng = _rng(rng)
    if n == 0:
        return np.zeros((0, 0), complex)
    q, r = np.linalg.qr(random_float_matrix(n, n, rng))
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_matrix(rows, cols, mode, rng):
    rng = _rng(rng)
    if check_mode(mode) == EXACT:
        return random_exact_matrix(rows, cols, rng)
    return random_float_matrix(rows, cols, rng)


def random_colligation(shape, flavor="general", mode=EXACT, seed=0):
    """Random representative; deterministic in ``seed``."""
    check_mode(mode)
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    if mode == EXACT and flavor == "unitary":
        raise ModeError("exact unitary colligations are not supported")
    rng = _rng(seed)
    n = shape.size
    if flavor == "unitary":
        return Colligation(shape, haar_unitary(n, rng), "unitary")
    while True:
        E = random_matrix(n, n, mode, rng)
        C = Colligation(shape, E, flavor)
        if flavor != "invertible" or not validate(C):
            return C


def random_inner(N, kind="general-linear", mode=EXACT, seed=0):
    """Random invertible (or Haar unitary) element of the inner group."""
    rng = _rng(seed)
    if kind == "unitary":
        if mode == EXACT:
            raise ModeError("exact unitary elements are not supported")
        return InnerGroupElement(haar_unitary(N, rng), "unitary")
    while True:
        u = random_matrix(N, N, mode, rng)
        if N == 0 or (la.det(u) if mode == EXACT else la.rank(u) == N):
            return InnerGroupElement(u, kind)
