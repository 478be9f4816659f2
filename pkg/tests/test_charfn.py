import numpy as np
import pytest

from colligations import linalg as la
from colligations.charfn import (
    Subspace,
    charfn_eval,
    charfn_eval_amplified,
    charfn_eval_batch,
    charfn_oracle,
    det_identity_residual,
    grassmann_map,
)
from colligations.core import Colligation, Shape, amplify, conjugate, embed, identity, random_colligation, random_inner
from colligations.errors import ModeError, PoleError, ShapeError
from colligations.scalars import EXACT, FLOAT, GaussRat
from colligations.core import haar_unitary, random_matrix


def exact_point(rng, m):
    return random_matrix(m, m, EXACT, rng)


def test_scalar_colligation_by_hand():
    # g = [[1, 1], [1, 2]]: chi(s) = 1 + s / (1 - 2 s); at s = 1/3 this is 2
    g = Colligation(Shape(1, 1, 1), la.exact_array([[1, 1], [1, 2]]))
    assert charfn_eval(g, la.exact_array([["1/3"]]))[0, 0] == 2
    with pytest.raises(PoleError):
        charfn_eval(g, la.exact_array([["1/2"]]))


def test_identity_and_zero_point():
    I = identity(Shape(2, 2, 3))
    rng = np.random.default_rng(0)
    S = exact_point(rng, 2)
    assert la.matrices_equal(charfn_eval(I, S), la.eye(2, EXACT))
    assert la.matrices_equal(charfn_oracle(I, S), la.eye(2, EXACT))
    C = random_colligation(Shape(2, 2, 2), mode=EXACT, seed=1)
    assert la.matrices_equal(charfn_eval(C, la.zeros((2, 2), EXACT)), C.a)


@pytest.mark.parametrize("mode", [EXACT, FLOAT])
def test_matches_elimination_oracle(mode):
    rng = np.random.default_rng(2)
    for i in range(100):
        shape = Shape(int(rng.integers(1, 3)), int(rng.integers(1, 3)), int(rng.integers(0, 3)))
        C = random_colligation(shape, mode=mode, seed=i)
        S = random_matrix(shape.m, shape.m, mode, rng)
        assert la.matrices_equal(charfn_eval(C, S), charfn_oracle(C, S), 1e-9)


def test_batch_matches_single():
    C = random_colligation(Shape(2, 2, 2), mode=FLOAT, seed=3)
    rng = np.random.default_rng(3)
    stack = rng.standard_normal((5, 2, 2)) * 0.3
    out = charfn_eval_batch(C, stack)
    for k in range(5):
        assert la.matrices_equal(out[k], charfn_eval(C, stack[k].astype(complex)), 1e-12)


def test_point_checks():
    C = random_colligation(Shape(1, 2, 1), mode=EXACT, seed=0)
    with pytest.raises(ShapeError):
        charfn_eval(C, la.eye(3, EXACT))
    with pytest.raises(ModeError):
        charfn_eval(C, np.eye(2, dtype=complex))


def test_embed_and_conjugation_invariance():
    rng = np.random.default_rng(4)
    C = random_colligation(Shape(1, 2, 2), mode=EXACT, seed=4)
    D = conjugate(C, random_inner(2, mode=EXACT, seed=5))
    for _ in range(5):
        S = exact_point(rng, 2)
        X = charfn_eval(C, S)
        assert la.matrices_equal(charfn_eval(embed(C), S), X)
        assert la.matrices_equal(charfn_eval(D, S), X)


def test_unitary_values():
    rng = np.random.default_rng(5)
    g = random_colligation(Shape(2, 2, 2), "unitary", FLOAT, seed=5)
    U = haar_unitary(2, rng)
    X = charfn_eval(g, U)
    assert la.matrices_equal(X.conj().T @ X, np.eye(2), 1e-9)
    S = 0.9 * U
    assert la.spectral_norm(charfn_eval(g, S)) <= 1 + 1e-10


def test_amplified_splits_and_j1():
    rng = np.random.default_rng(6)
    C = random_colligation(Shape(1, 2, 1), mode=EXACT, seed=6)
    S1, S2 = exact_point(rng, 2), exact_point(rng, 2)
    assert la.matrices_equal(charfn_eval_amplified(C, 1, S1), charfn_eval(C, S1))
    X = charfn_eval_amplified(C, 2, la.block_diag(S1, S2))
    assert la.matrices_equal(X, la.block_diag(charfn_eval(C, S1), charfn_eval(C, S2)))


def test_amplified_equivariance():
    rng = np.random.default_rng(7)
    C = random_colligation(Shape(2, 2, 1), mode=EXACT, seed=7)
    H = la.exact_array([[1, 2], [1, 3]])
    Hi = la.inv(H)
    S = exact_point(rng, 4)
    lhs = charfn_eval_amplified(C, 2, la.kron_identity(H, 2) @ S @ la.kron_identity(Hi, 2))
    rhs = la.kron_identity(H, 2) @ charfn_eval_amplified(C, 2, S) @ la.kron_identity(Hi, 2)
    assert la.matrices_equal(lhs, rhs)


def test_grassmann_graph_and_lambda_zero():
    rng = np.random.default_rng(8)
    for mode in (EXACT, FLOAT):
        C = random_colligation(Shape(2, 2, 2), mode=mode, seed=8)
        S = random_matrix(2, 2, mode, rng)
        tol = None if mode == EXACT else 1e-9
        image = grassmann_map(C, Subspace.graph(S), tol)
        assert image.equals(Subspace.graph(charfn_eval(C, S)), 1e-9)
        L = Subspace.from_basis(np.concatenate([la.zeros((2, 2), mode), la.eye(2, mode)]), tol)
        target = C.a - C.B @ la.inv(C.D) @ C.C
        assert grassmann_map(C, L, tol).equals(Subspace.graph(target), 1e-9)
    I = identity(Shape(2, 2, 1))
    S = exact_point(rng, 2)
    assert grassmann_map(I, Subspace.graph(S)) == Subspace.graph(la.eye(2, EXACT))


def test_subspace_canonical_basis():
    A = la.exact_array([[1, 0], [0, 1], [2, 3]])
    B = A @ la.exact_array([[2, 1], [1, 1]])
    assert Subspace.from_basis(A) == Subspace.from_basis(B)
    assert Subspace.from_basis(A) != Subspace.from_basis(la.exact_array([[1], [0], [0]]))


def test_det_identity():
    rng = np.random.default_rng(9)
    I = identity(Shape(1, 2, 2))
    assert det_identity_residual(I, exact_point(rng, 2)) == 0
    for i in range(10):
        C = random_colligation(Shape(2, 2, 2), mode=EXACT, seed=i)
        assert det_identity_residual(C, exact_point(rng, 2)) == 0
        F = random_colligation(Shape(2, 2, 2), mode=FLOAT, seed=i)
        S = random_matrix(2, 2, FLOAT, rng)
        assert det_identity_residual(F, S, relative=True) <= 1e-9
