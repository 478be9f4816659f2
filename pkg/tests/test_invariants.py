import numpy as np
import pytest

from colligations import linalg as la
from colligations.core import Colligation, Shape, conjugate, embed, identity, random_colligation, random_inner
from colligations.errors import ReconstructionError, ShapeError
from colligations.invariants import (
    SpectralData,
    all_words,
    canonical_rotation,
    conjugacy_oracle,
    cwb_invariant,
    cyclic_classes,
    fingerprint,
    parse_word,
    reconstruct_cwb,
    reconstruct_trace_words,
    sl_det_invariants,
    trace_word,
    word_key,
)
from colligations.jets import Jet, jet_from_poly
from colligations.poly import SparsePoly
from colligations.scalars import EXACT, FLOAT, GaussRat


def rand(shape, seed, mode=EXACT):
    return random_colligation(shape, mode=mode, seed=seed)


# jets -----------------------------------------------------------------------

def test_jet_product_truncates_squares():
    x, y = Jet.variable(0, 2), Jet.variable(1, 2)
    assert (x * x).coeffs == {}
    assert ((1 + x) * (1 + y)).coeffs == {0: 1, 1: 1, 2: 1, 3: 1}


def test_jet_inverse_and_log():
    x, y = Jet.variable(0, 2), Jet.variable(1, 2)
    u = 2 + 3 * x - y
    assert u * u.inverse() == 1
    # ln((1 + x)(1 + y)) = x + y
    assert ((1 + x) * (1 + y)).log() == x + y
    # ln(1 + x + y + c xy) has xy coefficient c - 1
    assert (1 + x + y + 5 * x * y).log().coefficient(3) == 4


def test_jet_from_poly_drops_higher_powers():
    v = ("a", "b")
    a, b = SparsePoly.variable("a", v), SparsePoly.variable("b", v)
    j = jet_from_poly(1 + a * a + a * b * 3)
    assert j.coeffs == {0: 1, 3: 3}


# words and direct invariants ------------------------------------------------

def test_word_spelling():
    w = ((1, 2), (2, 1))
    assert word_key(w) == "12.21"
    assert parse_word("12.21") == w
    assert parse_word("") == ()
    assert canonical_rotation(((2, 2), (1, 1))) == ((1, 1), (2, 2))
    assert len(cyclic_classes(2, 2)) == 10


def test_identity_trace_words():
    I = identity(Shape(1, 2, 3))
    assert trace_word(I, [(1, 1)]) == 3
    assert trace_word(I, [(1, 2)]) == 0
    with pytest.raises(ShapeError):
        trace_word(I, [])
    with pytest.raises(ShapeError):
        trace_word(I, [(1, 3)])


def test_cyclic_invariance():
    C = rand(Shape(1, 2, 3), 1)
    for w in all_words(2, 3):
        for k in range(3):
            assert trace_word(C, w) == trace_word(C, w[k:] + w[:k])


def test_scalar_pairing_by_hand():
    # alpha = m = N = 1: b d^n c
    C = Colligation(Shape(1, 1, 1), la.exact_array([[7, 2], [5, "1/3"]]))
    for n in range(4):
        assert cwb_invariant(C, 1, 1, ((1, 1),) * n, 1, 1) == 2 * GaussRat(1, 1) ** 0 * 5 * GaussRat("1/3") ** n


def test_pairing_with_zero_b():
    C = rand(Shape(2, 2, 2), 2)
    E = C.entries.copy()
    E[:2, 2:] = GaussRat(0)
    Z = C.with_entries(E)
    assert all(cwb_invariant(Z, g, l, w, b, k) == 0
               for g in (1, 2) for b in (1, 2) for l in (1, 2) for k in (1, 2) for w in [(), ((1, 2),)])


def test_invariance_under_conjugation():
    C = rand(Shape(1, 2, 2), 3)
    u = random_inner(2, mode=EXACT, seed=4)
    D = conjugate(C, u)
    for w in all_words(2, 2):
        assert trace_word(C, w) == trace_word(D, w)
        assert cwb_invariant(C, 1, 1, w, 2, 1) == cwb_invariant(D, 1, 1, w, 2, 1)
    assert fingerprint(C) == fingerprint(D)


def test_fingerprint_under_embed():
    C = rand(Shape(1, 2, 1), 5)
    f, e = fingerprint(C, 3), fingerprint(embed(C), 3)
    for w, v in f.trace_words.items():
        diagonal = all(phi == psi for phi, psi in w)
        assert e.trace_words[w] == v + (1 if diagonal else 0)
    assert e.cwb == f.cwb
    assert la.matrices_equal(e.a_entries, f.a_entries)


def test_fingerprint_sees_a():
    C = rand(Shape(2, 1, 1), 6)
    E = C.entries.copy()
    E[0, 1] = E[0, 1] + 1
    assert fingerprint(C) != fingerprint(C.with_entries(E))


def test_fingerprint_keys_and_json():
    C = rand(Shape(1, 2, 2), 7)
    f = fingerprint(C)
    assert f.max_word_length == 4
    assert set(f.trace_words) == {w for n in range(1, 5) for w in cyclic_classes(2, n)}
    assert {len(k[2]) for k in f.cwb} == {0, 1, 2, 3}
    doc = f.to_json()
    assert "12.21" in doc["traceWords"] and "21.12" not in doc["traceWords"]
    assert doc["slDets"]


def test_sl_dets():
    C = rand(Shape(1, 2, 2), 8)
    dets = sl_det_invariants(C)
    assert len(dets) == 2
    rows = np.array([C.b(1)[0], C.b(2)[0]])
    assert dets[("b", ((1, 1), (2, 1)))] == la.det(rows)
    assert sl_det_invariants(rand(Shape(1, 2, 3), 8)) == {}
    u = random_inner(2, mode=EXACT, seed=1)
    D = conjugate(C, u)
    # rows of b transform by u^-1, columns of c by u
    assert sl_det_invariants(D)[("c", ((1, 1), (2, 1)))] == la.det(u.u) * dets[("c", ((1, 1), (2, 1)))]


def test_fingerprints_differ_for_different_seeds():
    assert fingerprint(rand(Shape(1, 2, 2), 1)) != fingerprint(rand(Shape(1, 2, 2), 2))


def test_float_fingerprint_tolerance():
    F = rand(Shape(1, 2, 2), 3, FLOAT)
    u = random_inner(2, mode=FLOAT, seed=3)
    assert fingerprint(F) == fingerprint(conjugate(F, u))


# reconstruction ------------------------------------------------------------

def test_reconstruct_exact():
    C = rand(Shape(1, 2, 2), 11)
    data = SpectralData(C)
    rec = reconstruct_trace_words(data, 3)
    assert len(rec) == 4 + 16 + 64
    assert all(v == trace_word(C, w) for w, v in rec.items())
    cwb, a = reconstruct_cwb(data, 2)
    assert all(v == cwb_invariant(C, *k) for k, v in cwb.items())
    assert la.matrices_equal(a, C.a)


def test_reconstruct_identity_and_zero_c():
    I = identity(Shape(1, 2, 2))
    rec = reconstruct_trace_words(SpectralData(I), 2)
    assert rec[((1, 1),)] == 2 and rec[((1, 1), (2, 2))] == 2 and rec[((1, 2),)] == 0
    C = rand(Shape(1, 2, 2), 12)
    E = C.entries.copy()
    E[1:, :1] = GaussRat(0)
    cwb, _ = reconstruct_cwb(SpectralData(C.with_entries(E)), 1)
    assert all(v == 0 for v in cwb.values())


def test_reconstruct_float():
    F = rand(Shape(1, 2, 2), 13, FLOAT)
    data = SpectralData(F)
    rec = reconstruct_trace_words(data, 2)
    for w, v in rec.items():
        want = trace_word(F, w)
        assert abs(v - want) <= 1e-6 * max(1.0, abs(want))
    cwb, a = reconstruct_cwb(data, 1)
    for k, v in cwb.items():
        want = cwb_invariant(F, *k)
        assert abs(v - want) <= 1e-6 * max(1.0, abs(want))


def test_reconstruction_level_cap_and_conditioning():
    C = rand(Shape(1, 2, 2), 14)
    with pytest.raises(ReconstructionError):
        reconstruct_trace_words(SpectralData(C, max_level=2), 3)
    F = rand(Shape(1, 2, 2), 14, FLOAT)
    with pytest.raises(ReconstructionError) as info:
        reconstruct_trace_words(SpectralData(F), 2, K=2)
    assert info.value.residual > 0


# conjugacy oracle -----------------------------------------------------------

def test_oracle_finds_witness():
    C = rand(Shape(2, 2, 2), 15)
    u = random_inner(2, mode=EXACT, seed=16)
    D = conjugate(C, u)
    v = conjugacy_oracle(C, D)
    assert v.verdict == "conjugate"
    assert conjugate(C, v.witness) == D
    assert v.to_json()["verdict"] == "conjugate"


def test_oracle_rejects():
    C = rand(Shape(1, 2, 2), 17)
    E = C.entries.copy()
    E[0, 0] = E[0, 0] + 1
    assert conjugacy_oracle(C, C.with_entries(E)).verdict == "not-conjugate"
    D = rand(Shape(1, 2, 2), 18)
    assert conjugacy_oracle(C, D).verdict == "not-conjugate"
    assert fingerprint(C) != fingerprint(D)
    with pytest.raises(ShapeError):
        conjugacy_oracle(C, rand(Shape(1, 2, 1), 0))


def test_oracle_float():
    F = rand(Shape(1, 2, 2), 19, FLOAT)
    u = random_inner(2, mode=FLOAT, seed=20)
    v = conjugacy_oracle(F, conjugate(F, u))
    assert v.verdict == "conjugate"


def test_nilpotent_orbit_is_reported_not_asserted():
    # d nilpotent, b = c = 0: the orbit of a nonzero nilpotent is not closed;
    # fingerprints agree with the zero colligation while no invertible
    # intertwiner exists, so the oracle says not-conjugate
    E = la.zeros((3, 3), EXACT)
    E[1, 2] = GaussRat(1)
    nil = Colligation(Shape(1, 1, 2), E)
    zero = Colligation(Shape(1, 1, 2), la.zeros((3, 3), EXACT))
    assert fingerprint(nil) == fingerprint(zero)
    assert conjugacy_oracle(nil, zero).verdict in ("not-conjugate", "inconclusive")
