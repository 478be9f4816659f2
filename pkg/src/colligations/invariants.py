"""Conjugation invariants of colligations.

Three families of polynomial invariants:

* trace words ``tr d_{phi1 psi1} d_{phi2 psi2} ... d_{phin psin}``,
* pairings ``b_beta[k] d_{...} ... d_{...} c_gamma[l]`` (row k of ``b_beta``,
  column l of ``c_gamma``),
* the entries of ``a``,

plus, when ``N <= alpha m``, determinants built from N rows of ``b`` or N
columns of ``c`` (these are invariant under SL(N) only).

The module also recovers trace words and pairings from Taylor
coefficients of ``ln p_{g^[j]}`` and ``chi_{g^[j]}``, using nothing but
evaluations, and contains a brute-force conjugacy test that solves the
intertwining equations directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .charfn import charfn_eval, charfn_eval_batch
from .core import amplify, iota
from .divisor import p_eval_batch, p_poly
from .errors import ModeError, ReconstructionError, ShapeError, SingularError
from .jets import Jet, jet_from_poly
from .scalars import EXACT, FLOAT, ONE, ZERO

FLOAT_RTOL = 1e-8
FLOAT_ATOL = 1e-10


# words -------------------------------------------------------------------

def letters(m):
    return [(phi, psi) for phi in range(1, m + 1) for psi in range(1, m + 1)]


def all_words(m, n):
    """Every word of length ``n`` as a tuple of 1-based ``(phi, psi)`` pairs."""
    return list(itertools.product(letters(m), repeat=n))


def canonical_rotation(w):
    """Lexicographically smallest cyclic rotation."""
    w = tuple(w)
    if not w:
        return w
    return min(w[i:] + w[:i] for i in range(len(w)))


def cyclic_classes(m, n):
    return sorted({canonical_rotation(w) for w in all_words(m, n)})


def word_key(w):
    """``"11.12"`` style spelling; pairs are joined by ':' when m > 9."""
    sep = "" if all(max(p) < 10 for p in w) else ":"
    return ".".join(f"{phi}{sep}{psi}" for phi, psi in w)


def parse_word(s):
    if not s:
        return ()
    out = []
    for part in s.split("."):
        if ":" in part:
            phi, psi = part.split(":")
        elif len(part) == 2:
            phi, psi = part
        else:
            raise ShapeError(f"cannot read word letter {part!r}")
        out.append((int(phi), int(psi)))
    return tuple(out)


def _check_word(C, w, allow_empty):
    if not w and not allow_empty:
        raise ShapeError("trace words are nonempty")
    for phi, psi in w:
        if not (1 <= phi <= C.m and 1 <= psi <= C.m):
            raise ShapeError(f"letter {(phi, psi)} outside 1..{C.m}")


def word_matrix(C, w):
    P = la.eye(C.N, C.mode)
    for phi, psi in w:
        P = P @ C.d(phi, psi)
    return P


def _trace(M):
    acc = ZERO if M.dtype == object else 0j
    for i in range(M.shape[0]):
        acc = acc + M[i, i]
    return acc


# direct invariants ---------------------------------------------------------

def trace_word(C, w):
    """``tr`` of the product of the d-blocks named by ``w``."""
    w = tuple(w)
    _check_word(C, w, allow_empty=False)
    return _trace(word_matrix(C, w))


def cwb_invariant(C, gamma, l, w, beta, k):
    """``b_beta[k] . d_w . c_gamma[l]``: row k of ``b_beta`` against column l of ``c_gamma``."""
    w = tuple(w)
    _check_word(C, w, allow_empty=True)
    if not (1 <= gamma <= C.m and 1 <= beta <= C.m):
        raise ShapeError("block index out of range")
    if not (1 <= l <= C.alpha and 1 <= k <= C.alpha):
        raise ShapeError("corner index out of range")
    row = C.b(beta)[k - 1]
    col = C.c(gamma)[:, l - 1]
    return row @ word_matrix(C, w) @ col if C.N else (ZERO if C.mode == EXACT else 0j)


def sl_det_invariants(C):
    """Determinants of N-plets of rows of ``b`` and of columns of ``c``.

    Keys are ``("b", ((beta, k), ...))`` and ``("c", ((gamma, l), ...))``.
    Empty when ``N > alpha m``.
    """
    N, m, al = C.N, C.m, C.alpha
    if N > al * m:
        return {}
    labels = [(beta, k) for beta in range(1, m + 1) for k in range(1, al + 1)]
    rows = {(beta, k): C.b(beta)[k - 1] for beta, k in labels}
    cols = {(gamma, l): C.c(gamma)[:, l - 1] for gamma, l in labels}
    out = {}
    for combo in itertools.combinations(labels, N):
        if N:
            out[("b", combo)] = la.det(np.array([rows[x] for x in combo]))
            out[("c", combo)] = la.det(np.array([cols[x] for x in combo]).T)
        else:
            one = ONE if C.mode == EXACT else 1.0 + 0j
            out[("b", combo)] = one
            out[("c", combo)] = one
    return out


# fingerprint -------------------------------------------------------------

def _words_with_products(C, max_len):
    """``{word: d_word}`` for all words of length 0..max_len, built prefix by prefix."""
    blocks = {x: C.d(*x) for x in letters(C.m)}
    level = {(): la.eye(C.N, C.mode)}
    out = dict(level)
    for _ in range(max_len):
        nxt = {}
        for w, P in level.items():
            for x, B in blocks.items():
                nxt[w + (x,)] = P @ B
        out.update(nxt)
        level = nxt
    return out


def _scalars_close(x, y):
    return abs(x - y) <= max(FLOAT_ATOL, FLOAT_RTOL * max(abs(x), abs(y)))


@dataclass
class InvariantFingerprint:
    trace_words: dict
    cwb: dict
    a_entries: np.ndarray
    max_word_length: int
    mode: str
    sl_dets: dict = field(default_factory=dict)

    def _pairs(self, other, include_sl):
        yield self.trace_words, other.trace_words
        yield self.cwb, other.cwb
        yield (
            {ij: self.a_entries[ij] for ij in np.ndindex(self.a_entries.shape)},
            {ij: other.a_entries[ij] for ij in np.ndindex(other.a_entries.shape)},
        )
        if include_sl:
            yield self.sl_dets, other.sl_dets

    def equals(self, other, include_sl=False):
        """Entrywise comparison; exact in exact mode, tolerance-based in float mode.

        SL determinants are left out by default since they are not invariant
        under the full GL(N) action.
        """
        if self.mode != other.mode or self.max_word_length != other.max_word_length:
            return False
        for mine, theirs in self._pairs(other, include_sl):
            if mine.keys() != theirs.keys():
                return False
            for key, x in mine.items():
                y = theirs[key]
                if self.mode == EXACT:
                    if x != y:
                        return False
                elif not _scalars_close(x, y):
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, InvariantFingerprint):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def differences(self, other, include_sl=False):
        """Keys whose values differ (for diagnostics)."""
        out = []
        for mine, theirs in self._pairs(other, include_sl):
            for key in sorted(set(mine) | set(theirs), key=repr):
                if key not in mine or key not in theirs:
                    out.append(key)
                    continue
                x, y = mine[key], theirs[key]
                same = x == y if self.mode == EXACT else _scalars_close(x, y)
                if not same:
                    out.append(key)
        return out

    def to_json(self):
        from .io import matrix_to_json, scalar_to_json

        tw = {word_key(w): scalar_to_json(v) for w, v in self.trace_words.items()}
        cwb = {
            f"{g},{l}|{word_key(w)}|{b},{k}": scalar_to_json(v)
            for (g, l, w, b, k), v in self.cwb.items()
        }
        doc = {
            "mode": self.mode,
            "maxWordLength": self.max_word_length,
            "traceWords": tw,
            "cwb": cwb,
            "aEntries": matrix_to_json(self.a_entries),
        }
        if self.sl_dets:
            doc["slDets"] = {
                f"{kind}:" + ".".join(f"{x},{y}" for x, y in combo): scalar_to_json(v)
                for (kind, combo), v in self.sl_dets.items()
            }
        return doc


def fingerprint(C, max_len=None):
    """Trace words up to ``max_len`` (default ``N^2``), pairings up to ``max_len - 1``, ``a``."""
    if max_len is None:
        max_len = max(1, C.N * C.N)
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    products = _words_with_products(C, max_len)
    trace_words = {}
    for w, P in products.items():
        if w and w == canonical_rotation(w):
            trace_words[w] = _trace(P)
    m, al = C.m, C.alpha
    cwb = {}
    if al:
        # all rows of b against all columns of c at once
        for w, P in products.items():
            if len(w) > max_len - 1:
                continue
            V = _pairing_matrix(C, P)
            for beta in range(1, m + 1):
                for k in range(1, al + 1):
                    for gamma in range(1, m + 1):
                        for l in range(1, al + 1):
                            cwb[(gamma, l, w, beta, k)] = V[(beta - 1) * al + k - 1, (gamma - 1) * al + l - 1]
    return InvariantFingerprint(
        trace_words=trace_words,
        cwb=cwb,
        a_entries=C.a,
        max_word_length=max_len,
        mode=C.mode,
        sl_dets=sl_det_invariants(C),
    )


def _pairing_matrix(C, P):
    """``[b_beta[k] P c_gamma[l]]`` with rows (beta, k) and columns (gamma, l)."""
    al, m, N = C.alpha, C.m, C.N
    if not N:
        return la.zeros((al * m, al * m), C.mode)
    rows = np.concatenate([C.b(beta) for beta in range(1, m + 1)], axis=0)
    cols = np.concatenate([C.c(gamma) for gamma in range(1, m + 1)], axis=1)
    return rows @ P @ cols


def fingerprints_equal(C1, C2, max_len=None, include_sl=False):
    if max_len is None:
        max_len = max(1, C1.N * C1.N)
    return fingerprint(C1, max_len).equals(fingerprint(C2, max_len), include_sl)


# reconstruction from spectral data ----------------------------------------

class SpectralData:
    """Evaluation access to ``p_{g^[j]}`` and ``chi_{g^[j]}``, and nothing else.

    The reconstruction routines below only see a colligation through this
    interface.  ``scale`` is a bound for the operator norm of ``d``; it is
    used to place float sampling contours inside the region where both
    functions are analytic.  ``max_level`` caps the amplification levels
    that may be queried.
    """

    def __init__(self, C, max_level=None):
        self._C = C
        self._amplified = {}
        self.alpha = C.alpha
        self.m = C.m
        self.mode = C.mode
        self.max_level = max_level
        self.scale = max(1.0, la.spectral_norm(la.to_float(C.D))) if C.N else 1.0

    def _level(self, j):
        if self.max_level is not None and j > self.max_level:
            raise ReconstructionError(f"amplification level {j} not available (max {self.max_level})")
        if j not in self._amplified:
            self._amplified[j] = amplify(self._C, j)
        return self._amplified[j]

    def p_slice(self, j, support):
        """Exact ``p_{g^[j]}`` restricted to the listed (row, col) entries of ``S``."""
        self._level(j)
        return p_poly(self._C, j, support=support)

    def p_batch(self, j, S_stack):
        self._level(j)
        return p_eval_batch(self._C, S_stack)

    def chi(self, j, S):
        return charfn_eval(self._level(j), S)

    def chi_batch(self, j, S_stack):
        return charfn_eval_batch(self._level(j), S_stack)


def trace_positions(m, w):
    """Entries of the n-fold amplified ``S`` carrying the word ``w``.

    Factor t sits at row (copy t, block psi_{t-1}) and column
    (copy t+1 mod n, block phi_t); the coefficient of the product of these
    n variables in ``ln p_{g^[n]}`` is ``-tr d_w``.
    """
    n = len(w)
    out = []
    for t in range(n):
        row_block = w[t - 1][1]
        col_block = w[t][0]
        out.append((t * m + row_block - 1, ((t + 1) % n) * m + col_block - 1))
    return out


def cwb_positions(m, w, beta, gamma):
    """Entries of the (n+2)-fold amplified ``S`` for the pairing ``b_beta . d_w . c_gamma``.

    The chain of copies is 0 -> 2 -> 3 -> ... -> n+1 -> 1; the output entry
    is (copy 0, k) x (copy 1, l) of ``chi``.
    """
    n = len(w)
    seq = [0] + list(range(2, n + 2)) + [1]
    phis = [beta] + [x[1] for x in w]
    psis = [x[0] for x in w] + [gamma]
    return [(seq[f] * m + phis[f] - 1, seq[f + 1] * m + psis[f] - 1) for f in range(n + 1)]


def _contour_coefficient(f, nvars, radius, K):
    """Coefficient of ``x_0 x_1 ... x_{nvars-1}`` of an analytic ``f`` by averaging on a torus.

    ``f`` maps an array of sample points (P, nvars) to values of shape
    (P, ...).  Aliasing error is of order (radius / R)^K for a convergence
    radius R.
    """
    ks = np.indices((K,) * nvars).reshape(nvars, -1).T
    omega = np.exp(2j * np.pi * ks / K)
    vals = f(radius * omega)
    weights = np.prod(np.conj(omega), axis=1) / radius ** nvars
    weights = weights.reshape((-1,) + (1,) * (vals.ndim - 1))
    return (vals * weights).mean(axis=0)


def _float_coefficient(f, nvars, scale, K, tol, ratio=0.1):
    """Two contour radii; their disagreement is the reported residual."""
    r = ratio / scale
    c1 = _contour_coefficient(f, nvars, r, K)
    c2 = _contour_coefficient(f, nvars, 0.7 * r, K)
    residual = float(np.max(np.abs(c1 - c2))) if np.size(c1) else 0.0
    ref = max(1.0, float(np.max(np.abs(c1))) if np.size(c1) else 0.0)
    if residual > tol * ref:
        raise ReconstructionError(
            f"Taylor extraction is not stable (residual {residual:.3g})", residual=residual
        )
    return c1


def _stack(size, positions, samples):
    P = samples.shape[0]
    S = np.zeros((P, size, size), dtype=complex)
    for t, (r, c) in enumerate(positions):
        S[:, r, c] = samples[:, t]
    return S


def reconstruct_trace_words(data, max_len, words=None, *, K=8, tol=1e-7):
    """Trace words recovered from ``ln p_{g^[n]}`` Taylor coefficients.

    Returns ``{word: value}`` for ``words`` (default: every word of length
    1..max_len).  Exact mode reads the coefficient from the restricted
    polynomial with truncated jets; float mode averages ``ln p`` over a
    small torus.
    """
    m = data.m
    if words is None:
        words = [w for n in range(1, max_len + 1) for w in all_words(m, n)]
    out = {}
    for w in words:
        w = tuple(w)
        n = len(w)
        if not 1 <= n <= max_len:
            raise ShapeError(f"word length {n} outside 1..{max_len}")
        positions = trace_positions(m, w)
        if data.mode == EXACT:
            jet = jet_from_poly(data.p_slice(n, positions))
            out[w] = -jet.log().coefficient((1 << n) - 1)
        else:
            size = n * m

            def f(x, positions=positions, size=size, n=n):
                return np.log(data.p_batch(n, _stack(size, positions, x)))

            out[w] = -complex(_float_coefficient(f, n, data.scale, K, tol))
    return out


def reconstruct_cwb(data, max_len, *, K=8, tol=1e-7):
    """Pairings ``b_beta[k] d_w c_gamma[l]`` for words of length 0..max_len, plus ``a``.

    Returns ``(cwb, a)`` with ``cwb`` keyed like :func:`fingerprint`.  The
    value for a word of length n is the Taylor coefficient of the entry
    (copy 0, k), (copy 1, l) of ``chi_{g^[n+2]}`` at the product of the
    n + 1 chain variables; ``a = chi_g(0)``.
    """
    m, al = data.m, data.alpha
    if data.mode == EXACT:
        a = data.chi(1, la.zeros((m, m), EXACT))
    else:
        a = data.chi_batch(1, np.zeros((1, m, m), dtype=complex))[0]
    cwb = {}
    for n in range(max_len + 1):
        j = n + 2
        size = j * m
        for w in all_words(m, n):
            for beta in range(1, m + 1):
                for gamma in range(1, m + 1):
                    positions = cwb_positions(m, w, beta, gamma)
                    nv = n + 1
                    if data.mode == EXACT:
                        S = np.empty((size, size), dtype=object)
                        zero = Jet(nv)
                        for idx in np.ndindex(S.shape):
                            S[idx] = zero
                        for t, rc in enumerate(positions):
                            S[rc] = Jet.variable(t, nv)
                        X = data.chi(j, S)
                        full = (1 << nv) - 1
                        grid = np.array(
                            [[X[k, al + l].coefficient(full) for l in range(al)] for k in range(al)],
                            dtype=object,
                        )
                    else:

                        def f(x, positions=positions, size=size, j=j):
                            vals = data.chi_batch(j, _stack(size, positions, x))
                            return vals[:, :al, al:2 * al]

                        grid = _float_coefficient(f, nv, data.scale, K, tol)
                    for k in range(1, al + 1):
                        for l in range(1, al + 1):
                            cwb[(gamma, l, w, beta, k)] = grid[k - 1, l - 1]
    return cwb, a


# conjugacy oracle ---------------------------------------------------------

@dataclass
class Verdict:
    verdict: str  # "conjugate" | "not-conjugate" | "inconclusive"
    witness: np.ndarray | None = None
    details: str = ""

    def to_json(self):
        from .io import matrix_to_json

        doc = {"verdict": self.verdict}
        if self.witness is not None:
            doc["witness"] = matrix_to_json(self.witness)
        if self.details:
            doc["details"] = self.details
        return doc


def _intertwining_system(C1, C2):
    """Linear equations for ``(vec u, t)`` with ``iota(u) g1 = g2 iota(u)`` scaled by ``t`` on the corner.

    ``u`` is flattened row-major.  Rows:
    ``u c_gamma - t c'_gamma``, ``t b_beta - b'_beta u``,
    ``u d_{phi psi} - d'_{phi psi} u``.
    """
    N, m, mode = C1.N, C1.m, C1.mode
    I = la.eye(N, mode)
    blocks = []

    def row(u_part, t_part):
        blocks.append(np.concatenate([u_part, t_part], axis=1))

    for gamma in range(1, m + 1):
        c, c2 = C1.c(gamma), C2.c(gamma)
        # vec(u c) = (I kron c^T) vec(u)
        row(np.kron(I, c.T), -c2.reshape(-1, 1))
    for beta in range(1, m + 1):
        b, b2 = C1.b(beta), C2.b(beta)
        # vec(b' u) = (b' kron I) vec(u)
        row(-np.kron(b2, I), b.reshape(-1, 1))
    for phi in range(1, m + 1):
        for psi in range(1, m + 1):
            d, d2 = C1.d(phi, psi), C2.d(phi, psi)
            zero = la.zeros((N * N, 1), mode)
            row(np.kron(I, d.T) - np.kron(d2, I), zero)
    return np.concatenate(blocks, axis=0)


def _witness_ok(C1, C2, u, tol):
    try:
        left = iota(u, C1.alpha, C1.m)
        right = iota(la.inv(u), C1.alpha, C1.m)
    except SingularError:
        return False
    return la.matrices_equal(left @ C1.entries @ right, C2.entries, tol)


def conjugacy_oracle(C1, C2, trials=20, seed=0, tol=1e-9):
    """Decide whether ``C2 = iota(u) C1 iota(u)^-1`` for some invertible ``u``.

    The intertwining equations are linear in ``u``; a corner scalar ``t``
    is carried along so that a solution space with ``t = 0`` throughout is
    recognized as "no solution with t = 1".  Random integer combinations of
    a basis are tried for an invertible element.
    """
    if C1.shape != C2.shape:
        raise ShapeError(f"shapes differ: {C1.shape} vs {C2.shape}")
    if C1.mode != C2.mode:
        raise ModeError("modes differ")
    mode, N = C1.mode, C1.N
    if not la.matrices_equal(C1.a, C2.a, tol):
        return Verdict("not-conjugate", details="a blocks differ")
    if N == 0:
        return Verdict("conjugate", la.zeros((0, 0), mode))
    system = _intertwining_system(C1, C2)
    basis = la.nullspace(system, None if mode == EXACT else 1e-10)
    if basis.shape[1] == 0:
        return Verdict("not-conjugate", details="intertwiner space is zero")
    t_row = basis[-1]
    if mode == EXACT:
        t_zero = not any(t_row)
    else:
        t_zero = np.max(np.abs(t_row)) <= 1e-10
    if t_zero:
        return Verdict("not-conjugate", details="every intertwiner vanishes on the corner")
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        coeffs = rng.integers(-10, 10, endpoint=True, size=basis.shape[1])
        if mode == EXACT:
            v = basis @ np.array([ONE * int(x) for x in coeffs], dtype=object)
            t = v[-1]
            if not t:
                continue
        else:
            v = basis @ coeffs.astype(complex)
            t = v[-1]
            if abs(t) <= 1e-10:
                continue
        u = (v[:-1] / t).reshape(N, N)
        if mode == EXACT:
            if not la.det(u):
                continue
        elif la.rank(u) < N:
            continue
        if _witness_ok(C1, C2, u, tol):
            return Verdict("conjugate", u)
    return Verdict("inconclusive", details=f"no invertible intertwiner in {trials} trials")
