"""Bilinear pairings between maps, matrices and tensors.

Every form here is bilinear: no complex conjugation appears anywhere. The
base form on ``M_m`` is ``<x, y> = sum_ij x_ij y_ij = tr(x y^t)``; it extends
to ``M_m (x) M_n`` factorwise and to maps through their Choi matrices.
"""

from __future__ import annotations

import numpy as np

from .errors import DimMismatch
from .mapspace import LinearMap, apply_map
from .matlin import TensorMatrix, max_abs
from .transforms import SuperOp, compile_spec, TransformSpec, TransposeLeft, TransposeRight


def trace_pair(x, y) -> complex:
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape:
        raise DimMismatch(f"shapes {x.shape} and {y.shape} differ")
    return complex(np.sum(x * y))


def map_state_pair(phi: LinearMap, z: TensorMatrix) -> complex:
    """``<phi, z> = <C_phi, z>``; on ``x (x) y`` this is ``<phi(x), y>``."""
    if z.dims != (phi.m, phi.n):
        raise DimMismatch(f"state dims {z.dims} for a map {phi.m}->{phi.n}")
    return trace_pair(phi.choi.mat, z.mat)


def map_state_pair_theta(theta: SuperOp, phi: LinearMap, z: TensorMatrix) -> complex:
    """``<phi, z>_theta = <phi, theta^{-1}(z)>``."""
    return map_state_pair(phi, theta.inverse()(z))


def product_pair(phi: LinearMap, x, y) -> complex:
    """``<phi(x), y>`` evaluated on the range side."""
    return trace_pair(apply_map(phi, x), y)


def superop_dual(theta: SuperOp) -> SuperOp:
    """``theta*`` with ``<theta(z1), z2> = <z1, theta*(z2)>``."""
    return theta.dual()


def map_dual(sigma: LinearMap) -> LinearMap:
    """Dual of a map ``M_m -> M_n`` for the trace forms on both sides."""
    return LinearMap.from_matrix(sigma.matrix.T, sigma.n, sigma.m)


def pairing_transform(theta1: SuperOp, theta2: SuperOp) -> SuperOp:
    """``theta1 o (theta2*)^{-1}``."""
    return theta1 @ theta2.dual().inverse()


def check_pairing_transform(
    theta1: SuperOp,
    theta2: SuperOp,
    theta3: SuperOp,
    tol: float = 1e-10,
    samples: int = 8,
    seed: int = 0,
) -> bool:
    """Whether ``<C^theta2_phi, z>_theta1 = <phi, z>_theta3`` for all ``phi, z``.

    Decided by the superoperator identity; when it holds, the two pairings are
    additionally compared on random ``(phi, z)`` samples.
    """
    if max_abs(pairing_transform(theta1, theta2).matrix - theta3.matrix) > tol:
        return False
    m, n = theta1.dims
    rng = np.random.default_rng(seed)
    d = m * n
    inv1, inv3 = theta1.inverse(), theta3.inverse()
    for _ in range(samples):
        c = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        z = TensorMatrix(m, n, rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
        phi = LinearMap(m, n, TensorMatrix(m, n, c))
        lhs = trace_pair(theta2(phi.choi).mat, inv1(z).mat)
        rhs = trace_pair(phi.choi.mat, inv3(z).mat)
        if abs(lhs - rhs) > max(tol, 1e-10) * max(1.0, abs(lhs)):
            return False
    return True


def map_map_pair(phi: LinearMap, psi: LinearMap, theta: SuperOp | None = None) -> complex:
    """``<phi, psi>_theta = <C_phi, theta^{-1}(C_psi)>``."""
    if (phi.m, phi.n) != (psi.m, psi.n):
        raise DimMismatch("maps act between different spaces")
    c_psi = psi.choi if theta is None else theta.inverse()(psi.choi)
    return trace_pair(phi.choi.mat, c_psi.mat)


# ---------------------------------------------------------------------------
# named presets from the literature

STATE_PRESETS = ("standard", "woronowicz", "horodecki")
MAP_PRESETS = ("standard", "ssz")


def preset_pair(name: str, phi: LinearMap, z: TensorMatrix) -> complex:
    """Map/state pairings by name.

    ``woronowicz`` is ``<C_phi, z>_{t(x)t}``. ``horodecki`` is
    ``<C^{t(x)id}_phi, z>_{t(x)t}``, which reduces to ``<phi, z>_{id(x)t}``.
    """
    m, n = phi.m, phi.n
    if name == "standard":
        return map_state_pair(phi, z)
    if name == "woronowicz":
        tt = compile_spec(TransformSpec(m, n, [TransposeLeft(), TransposeRight()]))
        return map_state_pair_theta(tt, phi, z)
    if name == "horodecki":
        it = compile_spec(TransformSpec(m, n, [TransposeRight()]))
        return map_state_pair_theta(it, phi, z)
    raise ValueError(f"unknown pairing preset {name!r}")


def preset_map_pair(name: str, phi: LinearMap, psi: LinearMap) -> complex:
    if name == "standard":
        return map_map_pair(phi, psi)
    if name == "ssz":
        tt = compile_spec(TransformSpec(phi.m, phi.n, [TransposeLeft(), TransposeRight()]))
        return map_map_pair(phi, psi, tt)
    raise ValueError(f"unknown map pairing preset {name!r}")
