"""Named property suites used by ``collig verify`` and the acceptance tests.

Every suite takes a :class:`RunConfig` and returns a :class:`Report`.
Counts default to ``config.trials`` but can be passed explicitly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .charfn import Subspace, charfn_eval, det_identity_residual, grassmann_map
from .core import (
    Colligation,
    Shape,
    amplify,
    conjugate,
    embed,
    haar_unitary,
    random_colligation,
    random_inner,
    random_matrix,
)
from .divisor import (
    cocycle_m1,
    delta_multiplicity,
    det_one_minus_s,
    p_eval,
    p_poly,
    reduced_denominator_m1,
)
from .errors import ModeError, PoleError, SingularError
from .invariants import (
    SpectralData,
    all_words,
    conjugacy_oracle,
    cwb_invariant,
    fingerprint,
    reconstruct_cwb,
    reconstruct_trace_words,
    trace_word,
)
from .poly import poly_divide_exact
from .scalars import EXACT, FLOAT, GaussRat, check_mode
from .semigroup import circ

SUITES = ("multiplicativity", "unitarity", "divisor", "relations", "reconstruction", "separation")


@dataclass
class RunConfig:
    mode: str = EXACT
    seed: int = 0
    tol: float = 1e-9
    trials: int = 20
    max_word_len: int | None = None
    det_cap: int = 12

    def __post_init__(self):
        check_mode(self.mode)
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass
class Case:
    name: str
    status: str
    residual: float | None = None
    details: str = ""

    def to_json(self):
        doc = {"name": self.name, "status": self.status}
        if self.residual is not None:
            doc["residual"] = self.residual
        if self.details:
            doc["details"] = self.details
        return doc


@dataclass
class Report:
    suite: str
    cases: list = field(default_factory=list)
    seconds: float = 0.0

    def add(self, name, ok, residual=None, details=""):
        self.cases.append(Case(name, "pass" if ok else "fail", residual, details))

    @property
    def summary(self):
        out = {"pass": 0, "fail": 0, "inconclusive": 0}
        for c in self.cases:
            out[c.status] += 1
        return out

    @property
    def ok(self):
        return self.summary["fail"] == 0 and bool(self.cases)

    def to_json(self):
        return {
            "suite": self.suite,
            "cases": [c.to_json() for c in sorted(self.cases, key=lambda c: c.name)],
            "summary": self.summary,
        }


def _rng(config, salt):
    return np.random.default_rng([config.seed, salt])


def _seed(rng):
    return int(rng.integers(0, 2**31))


def _random_point(rng, m, mode, norm=None):
    S = random_matrix(m, m, mode, rng)
    if norm is not None and mode == FLOAT:
        S = S * (norm / max(la.spectral_norm(S), 1e-300))
    return S


def _compare(A, B, mode, tol):
    """(ok, residual) for matrices or scalars."""
    if mode == EXACT:
        A, B = np.asarray(A, dtype=object), np.asarray(B, dtype=object)
        return bool(A.shape == B.shape and all(x == y for x, y in zip(A.flat, B.flat))), None
    err = la.relative_error(np.atleast_1d(A), np.atleast_1d(B))
    return err <= tol, err


def _invertible(rng, n, mode):
    while True:
        H = random_matrix(n, n, mode, rng)
        if la.rank(H) == n:
            return H


# multiplicativity ---------------------------------------------------------

def multiplicativity(config, pairs=None, points=None):
    pairs = pairs or config.trials
    points = points or config.trials
    rng = _rng(config, 1)
    rep = Report("multiplicativity")
    for i in range(pairs):
        al, m = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        n1, n2 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        g = random_colligation(Shape(al, m, n1), mode=config.mode, seed=_seed(rng))
        h = random_colligation(Shape(al, m, n2), mode=config.mode, seed=_seed(rng))
        gh = circ(g, h)
        worst, ok, skipped = 0.0, True, 0
        for _ in range(points):
            S = _random_point(rng, m, config.mode)
            try:
                lhs = charfn_eval(gh, S)
                rhs = charfn_eval(g, S) @ charfn_eval(h, S)
            except PoleError:
                skipped += 1
                continue
            good, res = _compare(lhs, rhs, config.mode, config.tol)
            ok &= good
            worst = max(worst, res or 0.0)
        rep.add(
            f"pair{i:03d}", ok,
            None if config.mode == EXACT else worst,
            f"alpha={al} m={m} N=({n1},{n2})" + (f" skipped={skipped}" if skipped else ""),
        )
    return rep


# unitarity ------------------------------------------------------------------

def unitarity(config, colligations=None, points=None, shape=Shape(1, 2, 3)):
    if config.mode != FLOAT:
        raise ModeError("unitary colligations exist in float mode only")
    count = colligations or config.trials
    points = points or 5 * config.trials
    rng = _rng(config, 2)
    rep = Report("unitarity")
    for i in range(count):
        g = random_colligation(shape, flavor="unitary", mode=FLOAT, seed=_seed(rng))
        worst_norm, worst_unit = 0.0, 0.0
        for _ in range(points):
            S = _random_point(rng, shape.m, FLOAT, norm=float(rng.uniform(0.0, 1.0)))
            worst_norm = max(worst_norm, la.spectral_norm(charfn_eval(g, S)) - 1.0)
            U = haar_unitary(shape.m, rng)
            X = charfn_eval(g, U)
            worst_unit = max(worst_unit, la.spectral_norm(X.conj().T @ X - np.eye(shape.alpha)))
        rep.add(f"contractive{i:03d}", worst_norm <= 1e-10, max(worst_norm, 0.0))
        rep.add(f"boundary{i:03d}", worst_unit <= 1e-9, worst_unit)
    return rep


# divisor --------------------------------------------------------------------

def cancellation_pair():
    """Two m = 1 colligations whose product loses a pole of ``det chi``.

    ``chi_G = (1 - s)/(1 - 2s)`` and ``chi_H = (1 - 2s)/(1 - 3s)``; the pole
    of ``chi_G`` at s = 1/2 cancels against the zero of ``chi_H``.
    """
    def make(a, b, c, d):
        E = np.array([[GaussRat(a), GaussRat(b)], [GaussRat(c), GaussRat(d)]], dtype=object)
        return Colligation(Shape(1, 1, 1), E)

    return make(1, 1, 1, 2), make(1, 1, 1, 3)


def cocycle_case():
    """(ok, details) for the m = 1 cocycle on :func:`cancellation_pair`."""
    G, H = cancellation_pair()
    GH = circ(G, H)
    P_g, pi_g = reduced_denominator_m1(G)
    P_h, pi_h = reduced_denominator_m1(H)
    P_gh, pi_gh = reduced_denominator_m1(GH)
    c = cocycle_m1(G, H)
    ok = c.numerator.degree() >= 1 and pi_gh == pi_g * pi_h * c
    return ok, f"c={c!r} P_g={P_g!r} P_gh={P_gh!r}"


def divisor(config, pairs=None, shape_m=2):
    pairs = pairs or max(1, config.trials // 4)
    rng = _rng(config, 3)
    rep = Report("divisor")
    mode = config.mode
    for i in range(pairs):
        g = random_colligation(Shape(1, shape_m, 1), mode=mode, seed=_seed(rng))
        h = random_colligation(Shape(1, shape_m, 1), mode=mode, seed=_seed(rng))
        if mode == EXACT:
            pg, ph = p_poly(g, cap=config.det_cap), p_poly(h, cap=config.det_cap)
            rep.add(f"additivity{i:03d}", p_poly(circ(g, h), cap=config.det_cap) == pg * ph)
            pe = p_poly(embed(g), cap=config.det_cap)
            q = poly_divide_exact(pe, det_one_minus_s(pe.variables, shape_m))
            rep.add(f"embed{i:03d}", q is not None and q == pg)
            e3 = embed(embed(embed(g)))
            rep.add(
                f"delta{i:03d}",
                delta_multiplicity(e3, cap=config.det_cap) == delta_multiplicity(g, cap=config.det_cap) + 3,
            )
        else:
            worst = 0.0
            for _ in range(config.trials):
                S = _random_point(rng, shape_m, FLOAT)
                lhs = p_eval(circ(g, h), S)
                rhs = p_eval(g, S) * p_eval(h, S)
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
                lhs = p_eval(embed(g), S)
                rhs = p_eval(g, S) * la.det(np.eye(shape_m) - S)
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
            rep.add(f"additivity{i:03d}", worst <= config.tol, worst)
    rep.cases.extend(det_identity(config).cases)
    if mode == EXACT:
        ok, details = cocycle_case()
        rep.add("cocycle", ok, details=details)
    return rep


def det_identity(config, instances=None):
    instances = instances or config.trials
    rng = _rng(config, 4)
    rep = Report("det-identity")
    for i in range(instances):
        shape = Shape(int(rng.integers(1, 3)), int(rng.integers(1, 3)), int(rng.integers(1, 3)))
        g = random_colligation(shape, mode=config.mode, seed=_seed(rng))
        S = _random_point(rng, shape.m, config.mode)
        try:
            res = det_identity_residual(g, S, relative=True)
        except PoleError:
            rep.cases.append(Case(f"det{i:03d}", "inconclusive", details="point on the divisor"))
            continue
        if config.mode == EXACT:
            rep.add(f"det{i:03d}", res == 0)
        else:
            rep.add(f"det{i:03d}", res <= config.tol, float(res))
    return rep


# relations ------------------------------------------------------------------

def relations(config, points=None, shape=Shape(1, 2, 2), grassmann=None):
    points = points or config.trials
    grassmann = grassmann if grassmann is not None else config.trials
    rng = _rng(config, 5)
    rep = Report("relations")
    mode, m, al = config.mode, shape.m, shape.alpha
    for i in range(points):
        g = random_colligation(shape, mode=mode, seed=_seed(rng))
        g2 = amplify(g, 2)
        S1, S2 = _random_point(rng, m, mode), _random_point(rng, m, mode)
        S = la.block_diag(S1, S2)
        try:
            lhs = charfn_eval(g2, S)
            rhs = la.block_diag(charfn_eval(g, S1), charfn_eval(g, S2))
            ok, res = _compare(lhs, rhs, mode, config.tol)
            rep.add(f"split{i:03d}", ok, res)
            ok, res = _compare(p_eval(g, S), p_eval(g, S1) * p_eval(g, S2), mode, config.tol)
            rep.add(f"p-split{i:03d}", ok, res)
        except PoleError:
            rep.cases.append(Case(f"split{i:03d}", "inconclusive", details="pole"))
        H = _invertible(rng, 2, mode)
        Hinv = la.inv(H)
        Hs, Hs_inv = la.kron_identity(H, m), la.kron_identity(Hinv, m)
        Ha, Ha_inv = la.kron_identity(H, al), la.kron_identity(Hinv, al)
        T = _random_point(rng, 2 * m, mode)
        moved = Hs @ T @ Hs_inv
        try:
            ok, res = _compare(charfn_eval(g2, moved), Ha @ charfn_eval(g2, T) @ Ha_inv, mode, config.tol)
            rep.add(f"equivariant{i:03d}", ok, res)
        except PoleError:
            rep.cases.append(Case(f"equivariant{i:03d}", "inconclusive", details="pole"))
        ok, res = _compare(p_eval(g, moved), p_eval(g, T), mode, config.tol)
        rep.add(f"p-invariant{i:03d}", ok, res)
    rep.cases.extend(grassmann_consistency(config, grassmann).cases)
    return rep


def grassmann_consistency(config, instances=None, shape=Shape(2, 2, 2)):
    instances = instances if instances is not None else config.trials
    rng = _rng(config, 6)
    rep = Report("grassmann")
    mode = config.mode
    tol = config.tol if mode == FLOAT else None
    for i in range(instances):
        g = random_colligation(shape, mode=mode, seed=_seed(rng))
        S = _random_point(rng, shape.m, mode)
        try:
            X = charfn_eval(g, S)
        except PoleError:
            rep.cases.append(Case(f"graph{i:03d}", "inconclusive", details="pole"))
            continue
        image = grassmann_map(g, Subspace.graph(S), tol)
        rep.add(f"graph{i:03d}", image.equals(Subspace.graph(X), config.tol))
        # Lambda = 0: the subspace x = 0
        L = Subspace.from_basis(
            np.concatenate([la.zeros((shape.m, shape.m), mode), la.eye(shape.m, mode)]), tol
        )
        try:
            target = g.a - g.B @ la.inv(g.D) @ g.C
        except SingularError:
            continue
        image = grassmann_map(g, L, tol)
        rep.add(f"lambda0-{i:03d}", image.equals(Subspace.graph(target), config.tol))
    return rep


# reconstruction -----------------------------------------------------------

def reconstruction(config, colligations=None, shape=Shape(1, 2, 2), trace_len=3, cwb_len=2):
    count = colligations or max(1, config.trials // 2)
    rng = _rng(config, 7)
    rep = Report("reconstruction")
    mode = config.mode
    rtol = 1e-6
    for i in range(count):
        g = random_colligation(shape, mode=mode, seed=_seed(rng))
        data = SpectralData(g)
        rec = reconstruct_trace_words(data, trace_len)
        cwb, a = reconstruct_cwb(data, cwb_len)
        worst, ok = 0.0, True
        checks = [(v, trace_word(g, w)) for w, v in rec.items()]
        checks += [(v, cwb_invariant(g, *key)) for key, v in cwb.items()]
        checks += [(a[ij], g.a[ij]) for ij in np.ndindex(a.shape)]
        for got, want in checks:
            if mode == EXACT:
                ok &= got == want
            else:
                err = abs(got - want) / max(1.0, abs(want))
                worst = max(worst, err)
                ok &= err <= rtol
        rep.add(
            f"colligation{i:03d}", ok,
            None if mode == EXACT else worst,
            f"{len(rec)} trace words, {len(cwb)} pairings",
        )
    return rep


# separation -----------------------------------------------------------------

SEPARATION_SHAPES = (
    Shape(1, 1, 1), Shape(1, 2, 1), Shape(2, 2, 1), Shape(1, 1, 2),
    Shape(1, 2, 2), Shape(2, 1, 2), Shape(1, 1, 3), Shape(2, 1, 3),
)


def _perturb(C, row, col, delta):
    E = C.entries.copy()
    E[row, col] = E[row, col] + delta
    return C.with_entries(E)


def _copy_blocks(src, dst, corner=True, inner=False):
    E = dst.entries.copy()
    al = src.alpha
    if corner:
        E[:al, :al] = src.entries[:al, :al]
    if inner:
        E[al:, al:] = src.entries[al:, al:]
    return dst.with_entries(E)


def separation_pairs(config, pairs):
    """Random pairs in five families of increasing similarity."""
    rng = _rng(config, 8)
    mode = config.mode
    delta = GaussRat(1, 1) if mode == EXACT else 0.5 + 0.5j
    out = []
    for i in range(pairs):
        shape = SEPARATION_SHAPES[i % len(SEPARATION_SHAPES)]
        g = random_colligation(shape, mode=mode, seed=_seed(rng))
        h = random_colligation(shape, mode=mode, seed=_seed(rng))
        family = i % 5
        al = shape.alpha
        if family == 0:
            name = "independent"
        elif family == 1:
            name, h = "shared-a", _copy_blocks(g, h)
        elif family == 2:
            name, h = "shared-a-d", _copy_blocks(g, h, inner=True)
        else:
            u = random_inner(shape.N, mode=mode, seed=_seed(rng))
            h = conjugate(g, u)
            if family == 3:
                name = "perturbed-d"
                h = _perturb(h, al + shape.N - 1, al, delta)
            else:
                name = "perturbed-b"
                h = _perturb(h, 0, al + shape.N - 1, delta)
        out.append((f"{name}-{i:03d}", g, h))
    return out


def conjugate_pairs(config, pairs):
    rng = _rng(config, 9)
    out = []
    for i in range(pairs):
        shape = SEPARATION_SHAPES[i % len(SEPARATION_SHAPES)]
        g = random_colligation(shape, mode=config.mode, seed=_seed(rng))
        u = random_inner(shape.N, mode=config.mode, seed=_seed(rng))
        out.append((f"conjugate-{i:03d}", g, conjugate(g, u)))
    return out


def _witness_valid(g, h, u, mode, tol):
    from .core import iota

    W = iota(u, g.alpha, g.m) @ g.entries @ iota(la.inv(u), g.alpha, g.m)
    ok, _ = _compare(W, h.entries, mode, tol)
    return ok


def separation(config, pairs=None, conjugates=None):
    pairs = pairs or config.trials
    conjugates = conjugates if conjugates is not None else max(1, pairs // 5)
    rep = Report("separation")
    for name, g, h in separation_pairs(config, pairs) + conjugate_pairs(config, conjugates):
        max_len = config.max_word_len or max(1, g.N * g.N)
        verdict = conjugacy_oracle(g, h, trials=20, seed=config.seed)
        same = fingerprint(g, max_len).equals(fingerprint(h, max_len))
        if verdict.verdict == "inconclusive":
            rep.cases.append(Case(name, "inconclusive", details=f"fingerprints equal: {same}"))
            continue
        agree = (verdict.verdict == "conjugate") == same
        if verdict.verdict == "conjugate":
            agree &= _witness_valid(g, h, verdict.witness, config.mode, config.tol)
        if name.startswith("conjugate-"):
            agree &= verdict.verdict == "conjugate"
        rep.add(name, agree, details=f"oracle={verdict.verdict} fingerprints-equal={same}")
    return rep


# dispatch -------------------------------------------------------------------

RUNNERS = {
    "multiplicativity": multiplicativity,
    "unitarity": unitarity,
    "divisor": divisor,
    "relations": relations,
    "reconstruction": reconstruction,
    "separation": separation,
}


def run_suite(name, config):
    """One named suite, or every suite that applies to the mode for ``all``."""
    if name == "all":
        names = [s for s in SUITES if not (s == "unitarity" and config.mode == EXACT)]
        reports = [run_suite(s, config) for s in names]
        merged = Report("all")
        for r in reports:
            merged.cases.extend(Case(f"{r.suite}/{c.name}", c.status, c.residual, c.details) for c in r.cases)
        merged.seconds = sum(r.seconds for r in reports)
        return merged
    if name not in RUNNERS:
        raise KeyError(f"unknown suite {name!r}")
    t0 = time.perf_counter()
    rep = RUNNERS[name](config)
    rep.seconds = time.perf_counter() - t0
    return rep
