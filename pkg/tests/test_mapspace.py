import numpy as np
import pytest

from choicone.errors import NotCompletelyPositive
from choicone.mapspace import (
    LinearMap,
    ad_map,
    apply_map,
    choi_to_kraus,
    compose,
    identity_map,
    involution,
    is_hermiticity_preserving,
    kraus_to_choi,
    maps_close,
    trace_map,
    transpose_map,
)
from choicone.matlin import TensorMatrix, matrix_unit

from conftest import crandn


def rand_map(rng, m, n):
    return LinearMap(m, n, TensorMatrix(m, n, crandn(rng, m * n, m * n)))


def test_apply_simple_maps():
    e12 = matrix_unit(0, 1, 2)
    assert np.array_equal(apply_map(identity_map(2), e12), e12)
    assert np.array_equal(apply_map(transpose_map(2), e12), e12.T)


def test_apply_ad(rng):
    s = crandn(rng, 3, 2)
    x = crandn(rng, 3, 3)
    assert np.allclose(ad_map(s)(x), s.conj().T @ x @ s, atol=1e-10)


def test_map_matrix_roundtrip(rng):
    phi = rand_map(rng, 2, 3)
    back = LinearMap.from_matrix(phi.matrix, 2, 3)
    assert maps_close(phi, back, 0)
    x = crandn(rng, 2, 2)
    assert np.allclose(phi.matrix @ x.reshape(-1, order="F"), phi(x).reshape(-1, order="F"))


def test_involution(rng):
    t = transpose_map(2)
    assert maps_close(involution(t), t, 0)
    s = crandn(rng, 2, 2)
    assert maps_close(involution(ad_map(s)), ad_map(s), 1e-12)
    phi = rand_map(rng, 2, 3)
    x = crandn(rng, 2, 2)
    dag = involution(phi)
    assert np.allclose(dag(x), phi(x.conj().T).conj().T)
    assert maps_close(involution(dag), phi, 0)


def test_hermiticity_preservation(rng):
    assert is_hermiticity_preserving(ad_map(crandn(rng, 2, 2)))
    assert not is_hermiticity_preserving(trace_map(2, 2, 1j))
    h = crandn(rng, 6, 6)
    assert is_hermiticity_preserving(LinearMap(2, 3, TensorMatrix(2, 3, h + h.conj().T)))


def test_kraus_examples():
    assert maps_close(kraus_to_choi([np.eye(3)]), identity_map(3), 0)
    pinch = kraus_to_choi([matrix_unit(0, 0, 2), matrix_unit(1, 1, 2)])
    assert np.array_equal(pinch.choi.mat, np.diag([1, 0, 0, 1]).astype(complex))
    with pytest.raises(NotCompletelyPositive):
        choi_to_kraus(transpose_map(2))


def test_kraus_roundtrip(rng):
    ops = [crandn(rng, 3, 2) for _ in range(2)]
    phi = kraus_to_choi(ops)
    x = crandn(rng, 2, 2)
    assert np.allclose(phi(x), sum(k @ x @ k.conj().T for k in ops))
    assert maps_close(kraus_to_choi(choi_to_kraus(phi)), phi, 1e-10)


def test_compose(rng):
    phi = rand_map(rng, 3, 3)
    assert maps_close(compose(None, phi, None), phi, 0)
    t = transpose_map(3)
    assert maps_close(compose(t, t), identity_map(3), 0)
    sigma, tau = rand_map(rng, 3, 3), rand_map(rng, 3, 3)
    comp = compose(tau, phi, sigma)
    for i in range(3):
        for j in range(3):
            e = matrix_unit(i, j, 3)
            assert np.allclose(comp(e), tau(phi(sigma(e))), atol=1e-10)
