"""Dense linear algebra over both scalar modes.

Matrices are numpy arrays.  An ``object`` array holds exact scalars
(:class:`GaussRat`, or any ring element that supports ``+ - * /``), and a
``complex128`` array is a float matrix.  Exact routines do plain Gaussian
elimination; float routines defer to ``numpy.linalg``.
"""

from __future__ import annotations

import numpy as np

from .errors import ModeError, ShapeError, SingularError
from .scalars import EXACT, FLOAT, ONE, ZERO, GaussRat, check_mode, mode_of, to_exact

# relative threshold for numerical rank decisions
RANK_RTOL = 1e-10


def is_exact(M):
    return M.dtype == object


def exact_array(rows):
    """Build an object array of GaussRat from nested ints/rationals/strings."""
    from .scalars import parse_exact

    def conv(x):
        if isinstance(x, str):
            return parse_exact(x)
        return to_exact(x)

    arr = np.asarray(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = conv(x)
    return out


def float_array(rows):
    return np.asarray(rows, dtype=complex)


def as_mode(rows, mode):
    check_mode(mode)
    if mode == EXACT:
        if isinstance(rows, np.ndarray) and rows.dtype != object and rows.dtype.kind in "fc":
            raise ModeError("float array given where an exact one is required")
        return exact_array(rows)
    if isinstance(rows, np.ndarray) and rows.dtype == object:
        raise ModeError("exact array given where a float one is required")
    return float_array(rows)


def to_float(M):
    """Explicit exact -> float conversion (never done implicitly)."""
    if M.dtype == object:
        return np.vectorize(complex, otypes=[complex])(M) if M.size else np.zeros(M.shape, complex)
    return np.asarray(M, dtype=complex)


def zeros(shape, mode):
    if check_mode(mode) == EXACT:
        out = np.empty(shape, dtype=object)
        out.fill(ZERO)
        return out
    return np.zeros(shape, dtype=complex)


def eye(n, mode):
    out = zeros((n, n), mode)
    for i in range(n):
        out[i, i] = ONE if mode == EXACT else 1.0
    return out


def same_mode(*arrays):
    modes = {mode_of(a) for a in arrays}
    if len(modes) > 1:
        raise ModeError("exact and float matrices cannot be combined")
    return modes.pop()


def kron_identity(S, n):
    """``S (x) 1_n``: entry block (i, j) equals ``S[i, j] * 1_n``."""
    r, c = S.shape
    out = zeros((r * n, c * n), mode_of(S))
    for i in range(r):
        for j in range(c):
            for k in range(n):
                out[i * n + k, j * n + k] = S[i, j]
    return out


def block_diag(*blocks):
    mode = same_mode(*blocks)
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros((rows, cols), mode)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def conj_transpose(M):
    if M.dtype == object:
        return np.vectorize(lambda x: x.conjugate(), otypes=[object])(M.T) if M.size else M.T.copy()
    return M.conj().T


def _usable_pivot(x):
    # ring elements (truncated jets) can only be divided by units
    is_unit = getattr(x, "is_unit", None)
    if is_unit is not None:
        return is_unit()
    return bool(x)


def _rref_exact(M):
    """Reduced row echelon form over an exact field; returns (R, pivot columns)."""
    R = M.copy()
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if _usable_pivot(R[i, c])), None)
        if p is None:
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        inv = 1 / R[r, c]
        R[r] = R[r] * inv
        for i in range(rows):
            if i != r and R[i, c]:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def _rref_float(M, tol=None):
    R = np.array(M, dtype=complex)
    rows, cols = R.shape
    scale = np.abs(R).max() if R.size else 0.0
    if tol is None:
        tol = RANK_RTOL * max(scale, 1e-300) * max(rows, cols, 1)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[p, c]) <= tol:
            R[r:, c] = 0
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        for i in range(rows):
            if i != r:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    R[r:] = 0
    return R, pivots


def rref(M, tol=None):
    """Reduced row echelon form and pivot columns, in the mode of ``M``."""
    if is_exact(M):
        return _rref_exact(M)
    return _rref_float(M, tol)


def det(M):
    n, n2 = M.shape
    if n != n2:
        raise ShapeError(f"det of non-square {M.shape} matrix")
    if not is_exact(M):
        return complex(np.linalg.det(M)) if n else 1.0 + 0j
    R = M.copy()
    result = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if R[i, c]), None)
        if p is None:
            return ZERO
        if p != c:
            R[[c, p]] = R[[p, c]]
            result = -result
        piv = R[c, c]
        result = result * piv
        inv = 1 / piv
        for i in range(c + 1, n):
            if R[i, c]:
                f = R[i, c] * inv
                R[i, c:] = R[i, c:] - f * R[c, c:]
    return result


def solve(A, B):
    """Solve ``A X = B``; raises :class:`SingularError` when ``A`` is singular."""
    same_mode(A, B)
    n = A.shape[0]
    if A.shape != (n, n) or B.shape[0] != n:
        raise ShapeError(f"solve: incompatible shapes {A.shape}, {B.shape}")
    if not is_exact(A):
        try:
            return np.linalg.solve(A, B)
        except np.linalg.LinAlgError as exc:
            raise SingularError(str(exc)) from exc
    vec = B.ndim == 1
    Bm = B.reshape(n, -1)
    aug = np.concatenate([A, Bm], axis=1)
    R, pivots = _rref_exact(aug)
    if pivots[:n] != list(range(n)):
        raise SingularError("singular matrix in exact solve")
    X = R[:, n:]
    return X.reshape(-1) if vec else X


def inv(M):
    return solve(M, eye(M.shape[0], mode_of(M)))


def rank(M, tol=None):
    if M.size == 0:
        return 0
    if is_exact(M):
        return len(_rref_exact(M)[1])
    s = np.linalg.svd(M, compute_uv=False)
    if tol is None:
        tol = RANK_RTOL * max(M.shape) * (s[0] if s.size else 0.0)
    return int(np.sum(s > tol))


def nullspace(M, tol=None):
    """Basis of ``{x : M x = 0}`` as the columns of the returned matrix."""
    rows, cols = M.shape
    mode = mode_of(M)
    if is_exact(M):
        R, pivots = _rref_exact(M)
        free = [c for c in range(cols) if c not in pivots]
        basis = zeros((cols, len(free)), mode)
        for k, f in enumerate(free):
            basis[f, k] = ONE
            for r, p in enumerate(pivots):
                basis[p, k] = -R[r, f]
        return basis
    if rows == 0:
        return np.eye(cols, dtype=complex)
    _, s, vh = np.linalg.svd(M)
    if tol is None:
        tol = RANK_RTOL * max(rows, cols) * (s[0] if s.size else 0.0)
    r = int(np.sum(s > tol))
    return vh[r:].conj().T


def column_space(M, tol=None):
    """Basis (as columns) of the span of the columns of ``M``."""
    if is_exact(M):
        R, pivots = _rref_exact(M)
        return M[:, pivots]
    if M.shape[1] == 0:
        return np.zeros((M.shape[0], 0), complex)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if tol is None:
        tol = RANK_RTOL * max(M.shape) * (s[0] if s.size else 0.0)
    return u[:, : int(np.sum(s > tol))]


def spectral_norm(M):
    M = to_float(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def matrices_equal(A, B, tol=1e-9):
    """Exact equality for exact matrices, relative-tolerance equality for float ones."""
    if A.shape != B.shape:
        return False
    if is_exact(A) or is_exact(B):
        same_mode(A, B)
        return all(x == y for x, y in zip(A.flat, B.flat))
    scale = max(1.0, float(np.abs(A).max(initial=0.0)), float(np.abs(B).max(initial=0.0)))
    return bool(np.abs(A - B).max(initial=0.0) <= tol * scale)


def relative_error(A, B):
    """``max|A - B| / max(1, max|A|, max|B|)`` as a float (exact inputs are converted)."""
    A, B = to_float(A), to_float(B)
    scale = max(1.0, float(np.abs(A).max(initial=0.0)), float(np.abs(B).max(initial=0.0)))
    return float(np.abs(A - B).max(initial=0.0)) / scale


__all__ = [
    "EXACT", "FLOAT", "GaussRat", "as_mode", "block_diag", "column_space", "conj_transpose",
    "det", "exact_array", "eye", "float_array", "inv", "is_exact", "kron_identity",
    "matrices_equal", "nullspace", "rank", "relative_error", "rref", "same_mode", "solve",
    "spectral_norm", "to_float", "zeros",
]
