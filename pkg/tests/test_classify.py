import numpy as np
import pytest

from choicone.classify import (
    CanonicalFactorization,
    Factored,
    NotPreserving,
    classify_separability_preserver,
    random_factorization,
    verify_factorization,
)
from choicone.cones import ConeId, Family, verify_certificate
from choicone.errors import DimMismatch, NotHermiticityPreserving, SingularTheta
from choicone.matlin import TensorMatrix
from choicone.transforms import (
    AdGlobal,
    AdLocal,
    Flip,
    NoCounterexample,
    SuperOp,
    TransformSpec,
    compile_spec,
    identity,
    preserves_cone_sampled,
    random_nonsingular,
)

CNOT = np.eye(4)[[0, 1, 3, 2]]


def test_flip_factorization():
    res = classify_separability_preserver(compile_spec(TransformSpec(2, 2, [Flip()])))
    assert isinstance(res, Factored)
    fac = res.factorization
    assert fac.flip and not fac.transpose_left and not fac.transpose_right
    assert np.allclose(fac.s, np.eye(2) / np.sqrt(2)) and np.allclose(fac.t, np.eye(2) / np.sqrt(2))


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
def test_ad_local_roundtrip(rng, dims):
    m, n = dims
    for _ in range(10):
        s0, t0 = random_nonsingular(m, rng), random_nonsingular(n, rng)
        theta = compile_spec(TransformSpec(m, n, [AdLocal(s0, t0)]))
        res = classify_separability_preserver(theta)
        assert isinstance(res, Factored) and res.residual < 1e-8
        fac = res.factorization
        for got, want in ((fac.s, s0), (fac.t, t0)):
            assert abs(abs(np.vdot(got.ravel(), want.ravel())) - np.linalg.norm(want)) < 1e-8
        flat = fac.s.ravel()
        lead = flat[np.flatnonzero(np.abs(flat) > 1e-12)[0]]
        assert abs(lead.imag) < 1e-14 and lead.real > 0


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
def test_catalog_completeness(rng, dims):
    for _ in range(15):
        fac = random_factorization(*dims, rng)
        res = classify_separability_preserver(fac.superop())
        assert isinstance(res, Factored)
        assert verify_factorization(fac.superop(), res.factorization) < 1e-8


def test_cnot_not_preserving():
    res = classify_separability_preserver(compile_spec(TransformSpec(2, 2, [AdGlobal(CNOT)])))
    assert isinstance(res, NotPreserving)
    assert res.certificate.method == "ppt"
    assert verify_certificate(res.certificate, res.image)
    # the named input is a product of rank-one projections
    for proj in (res.p, res.q):
        assert np.allclose(proj @ proj, proj) and np.isclose(np.trace(proj), 1)


def test_verify_factorization():
    fac = CanonicalFactorization(np.eye(2) / np.sqrt(2), np.eye(3) / np.sqrt(3), False, True, False, 6.0)
    theta = fac.superop()
    assert verify_factorization(theta, fac) <= 1e-12
    bumped = CanonicalFactorization(fac.s * 1.01, fac.t, False, True, False, 6.0)
    assert verify_factorization(theta, bumped) > 1e-3
    with pytest.raises(DimMismatch):
        verify_factorization(identity(2, 2), fac)


def test_preconditions():
    with pytest.raises(SingularTheta):
        classify_separability_preserver(SuperOp(2, 2, np.zeros((16, 16))))
    bad = identity(2, 2).matrix.copy()
    bad[0, 0] = 1j
    with pytest.raises(NotHermiticityPreserving):
        classify_separability_preserver(SuperOp(2, 2, bad))


def test_negative_scale_refuted():
    res = classify_separability_preserver(-1 * identity(2, 3))
    assert isinstance(res, NotPreserving)
    assert verify_certificate(res.certificate, res.image)


def test_factored_implies_sampled_preservation(rng):
    fac = random_factorization(2, 3, rng)
    assert isinstance(classify_separability_preserver(fac.superop()), Factored)
    res = preserves_cone_sampled(fac.superop(), ConeId(Family.SCHMIDT, 1), samples=30)
    assert isinstance(res, NoCounterexample)
