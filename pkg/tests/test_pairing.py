import numpy as np
from hypothesis import given, settings, strategies as st

from choicone.mapspace import LinearMap, ad_map, identity_map, transpose_map
from choicone.matlin import TensorMatrix, kron, matrix_unit
from choicone.pairing import (
    check_pairing_transform,
    map_map_pair,
    map_state_pair,
    map_state_pair_theta,
    preset_map_pair,
    preset_pair,
    superop_dual,
    trace_pair,
)
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


def spec(m, n, *atoms):
    return compile_spec(TransformSpec(m, n, list(atoms)))


def rand_map(rng, m, n):
    return LinearMap(m, n, TensorMatrix(m, n, crandn(rng, m * n, m * n)))


def test_trace_pair_units(rng):
    e12, e21 = matrix_unit(0, 1, 2), matrix_unit(1, 0, 2)
    assert trace_pair(e12, e12) == 1
    assert trace_pair(e12, e21) == 0
    x, y = crandn(rng, 4, 4), crandn(rng, 4, 4)
    assert np.isclose(trace_pair(x, y), np.trace(x @ y.T))


def test_trace_pair_respects_involution(rng):
    x, y = crandn(rng, 3, 3), crandn(rng, 3, 3)
    assert np.isclose(trace_pair(x.conj().T, y.conj().T), np.conj(trace_pair(x, y)))


def test_map_state_examples():
    e11, e22 = matrix_unit(0, 0, 2), matrix_unit(1, 1, 2)
    idm = identity_map(2)
    assert map_state_pair(idm, TensorMatrix(2, 2, kron(e11, e11))) == 1
    assert map_state_pair(idm, TensorMatrix(2, 2, kron(e11, e22))) == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**31))
def test_pairing_identity(m, n, seed):
    rng = np.random.default_rng(seed)
    phi = rand_map(rng, m, n)
    x, y = crandn(rng, m, m), crandn(rng, n, n)
    lhs = map_state_pair(phi, TensorMatrix(m, n, kron(x, y)))
    assert abs(lhs - np.trace(phi(x) @ y.T)) <= 1e-10 * max(1, abs(lhs))


def test_theta_pairings(rng):
    phi = rand_map(rng, 2, 3)
    z = TensorMatrix(2, 3, crandn(rng, 6, 6))
    assert np.isclose(map_state_pair_theta(identity(2, 3), phi, z), map_state_pair(phi, z))
    tt = spec(2, 3, TransposeLeft(), TransposeRight())
    assert np.isclose(preset_pair("woronowicz", phi, z), map_state_pair(phi, TensorMatrix(2, 3, z.mat.T)))
    x, y = crandn(rng, 2, 2), crandn(rng, 3, 3)
    prod = TensorMatrix(2, 3, kron(x, y))
    assert np.isclose(map_state_pair_theta(spec(2, 3, TransposeRight()), phi, prod), np.trace(phi(x) @ y))
    assert np.isclose(preset_pair("horodecki", phi, prod), np.trace(phi(x) @ y))
    # the reduced horodecki form agrees with its definition
    horo = map_state_pair_theta(tt, LinearMap(2, 3, spec(2, 3, TransposeLeft())(phi.choi)), prod)
    assert np.isclose(horo, preset_pair("horodecki", phi, prod))


def test_superop_duals(rng):
    for _ in range(5):
        s, t = crandn(rng, 2, 2), crandn(rng, 3, 3)
        dual = superop_dual(local(ad_map(s), ad_map(t)))
        assert dual.allclose(local(ad_map(s.T), ad_map(t.T)), 1e-10)
    tt = spec(2, 3, TransposeLeft(), TransposeRight())
    assert np.array_equal(superop_dual(tt).matrix, tt.matrix)
    fl = spec(3, 3, Flip())
    assert np.array_equal(superop_dual(fl).matrix, fl.matrix)


def test_check_pairing_transform():
    tt = spec(2, 2, TransposeLeft(), TransposeRight())
    tl, tr = spec(2, 2, TransposeLeft()), spec(2, 2, TransposeRight())
    i = identity(2, 2)
    assert check_pairing_transform(tt, tl, tr) is True
    assert check_pairing_transform(i, i, i) is True
    assert check_pairing_transform(tt, i, i) is False


def test_map_map_pair(rng):
    idm, tm = identity_map(2), transpose_map(2)
    assert map_map_pair(idm, idm) == 4
    assert map_map_pair(idm, tm) == 2
    h1, h2 = crandn(rng, 4, 4), crandn(rng, 4, 4)
    phi = LinearMap(2, 2, TensorMatrix(2, 2, h1 + h1.conj().T))
    psi = LinearMap(2, 2, TensorMatrix(2, 2, h2 + h2.conj().T))
    assert np.isclose(map_map_pair(phi, psi), map_map_pair(psi, phi))
    tt = spec(2, 2, TransposeLeft(), TransposeRight())
    assert np.isclose(preset_map_pair("ssz", phi, psi), map_map_pair(phi, psi, tt))
