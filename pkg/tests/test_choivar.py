import numpy as np
import pytest

from choicone.choivar import (
    PAULI_2,
    WEYL_2,
    BasisPair,
    choi,
    choi_by_assembly,
    choi_from_basis,
    choi_theta,
    choi_variant,
    detect_left_simple,
    random_hermitian_basis_pair,
    standard_basis_pair,
    transposed_basis_pair,
    variant_superop,
)
from choicone.errors import NotDualPair
from choicone.mapspace import LinearMap, ad_map, compose, identity_map, involution, transpose_map
from choicone.matlin import TensorMatrix, dagger, kron, max_entangled, swap_operator
from choicone.pairing import map_dual
from choicone.transforms import (
    Flip,
    TransformSpec,
    TransposeLeft,
    TransposeRight,
    compile_spec,
    identity,
    local,
)

from conftest import crandn


def rand_map(rng, m, n):
    return LinearMap(m, n, TensorMatrix(m, n, crandn(rng, m * n, m * n)))


def test_choi_examples(rng):
    assert np.array_equal(choi(identity_map(2)).mat, max_entangled(2).mat)
    assert np.array_equal(choi(transpose_map(2)).mat, swap_operator(2))
    s = crandn(rng, 2, 2)
    omega = max_entangled(2).mat
    expected = kron(s.conj(), np.eye(2)) @ omega @ dagger(kron(s.conj(), np.eye(2)))
    assert np.allclose(choi(ad_map(s)).mat, expected, atol=1e-12)
    assert np.allclose(choi_by_assembly(ad_map(s)).mat, expected, atol=1e-12)


def test_weyl_basis_gives_standard_choi(rng):
    bp = BasisPair(WEYL_2, WEYL_2)
    phi = rand_map(rng, 2, 3)
    assert np.allclose(choi_from_basis(bp, phi).mat, choi(phi).mat, atol=1e-12)
    assert not bp.is_hermitian()  # the antisymmetric element is not Hermitian


def test_pauli_matches_transposed_pair(rng):
    phi = rand_map(rng, 2, 2)
    pauli = BasisPair(PAULI_2, PAULI_2, "transpose")
    assert pauli.is_hermitian()
    expected = choi_from_basis(transposed_basis_pair(2), phi)
    assert np.allclose(choi_from_basis(pauli, phi).mat, expected.mat, atol=1e-12)
    assert np.allclose(expected.mat, choi_variant("depillis", phi).mat, atol=1e-12)


def test_standard_pair(rng):
    phi = rand_map(rng, 3, 2)
    assert np.array_equal(choi_from_basis(standard_basis_pair(3), phi).mat, choi(phi).mat)


def test_non_dual_pair_rejected():
    with pytest.raises(NotDualPair):
        BasisPair(PAULI_2, PAULI_2, "standard")


def test_basis_independence(rng):
    for _ in range(20):
        m = int(rng.integers(2, 4))
        bp = random_hermitian_basis_pair(m, rng)
        phi = rand_map(rng, m, 2)
        assert np.allclose(choi_from_basis(bp, phi).mat, choi(phi).mat, atol=1e-9)


def test_involution_conjugates_choi(rng):
    phi = rand_map(rng, 2, 3)
    assert np.allclose(choi(involution(phi)).mat, dagger(choi(phi).mat), atol=1e-12)


def test_choi_theta_examples(rng):
    phi = rand_map(rng, 2, 2)
    assert np.allclose(choi_theta(identity(2, 2), phi).mat, choi(phi).mat)
    tl = compile_spec(TransformSpec(2, 2, [TransposeLeft()]))
    assert np.array_equal(choi_theta(tl, identity_map(2)).mat, swap_operator(2))
    fl = compile_spec(TransformSpec(2, 2, [Flip()]))
    assert np.array_equal(choi_theta(fl, identity_map(2)).mat, max_entangled(2).mat)


def test_ad_u_variant_needs_unitary():
    with pytest.raises(ValueError):
        variant_superop("ad-u", 2, 2)


def test_composition_identity(rng):
    for _ in range(10):
        m, n = 2, 3
        sigma, tau = rand_map(rng, m, m), rand_map(rng, n, n)
        phi = rand_map(rng, m, n)
        lhs = local(sigma, tau)(choi(phi)).mat
        rhs = compose(tau, phi, map_dual(sigma)).choi.mat
        assert np.allclose(lhs, rhs, atol=1e-10 * max(1, abs(lhs).max()))


def test_detect_left_simple(rng):
    for m, n in ((2, 2), (2, 3), (3, 2)):
        sigma = rand_map(rng, m, m)
        got = detect_left_simple(local(sigma, identity_map(n)))
        assert got is not None
        assert np.abs(got.choi.mat - sigma.choi.mat).max() <= 1e-9
    for atoms in ([TransposeRight()], [TransposeLeft(), TransposeRight()], [Flip()]):
        assert detect_left_simple(compile_spec(TransformSpec(2, 2, atoms))) is None
