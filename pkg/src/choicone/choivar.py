"""Choi matrices: the standard one, basis-pair versions, and twisted variants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimMismatch, NotDualPair
from .mapspace import LinearMap, apply_map
from .matlin import TensorMatrix, as_matrix, kron, max_abs, svd
from .transforms import (
    AdGlobal,
    Flip,
    SuperOp,
    TransformSpec,
    TransposeLeft,
    TransposeRight,
    apply_transform,
    compile_spec,
)

#: bilinear forms on ``M_m``: ``tr(x y^t)`` and ``tr(x y)``
FORMS = ("standard", "transpose")


def form_value(x: np.ndarray, y: np.ndarray, form: str = "standard") -> complex:
    if form == "standard":
        return complex(np.sum(x * y))
    if form == "transpose":
        return complex(np.sum(x * y.T))
    raise ValueError(f"unknown form {form!r}")


@dataclass(frozen=True, eq=False)
class BasisPair:
    """Bases ``e`` and ``f`` of ``M_m`` that are dual, ``<e_i, f_j> = delta_ij``."""

    e: tuple
    f: tuple
    form: str = "standard"
    tol: float = 1e-10

    def __post_init__(self):
        e = tuple(as_matrix(x, square=True) for x in self.e)
        f = tuple(as_matrix(x, square=True) for x in self.f)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "f", f)
        m = e[0].shape[0] if e else 0
        if len(e) != m * m or len(f) != m * m:
            raise NotDualPair(f"need {m * m} elements in each basis")
        if any(x.shape != (m, m) for x in e + f):
            raise DimMismatch("basis elements must share one size")
        gram = np.array([[form_value(a, b, self.form) for b in f] for a in e])
        if max_abs(gram - np.eye(m * m)) > self.tol:
            raise NotDualPair("bases are not dual under the chosen form")

    @property
    def m(self) -> int:
        return self.e[0].shape[0]

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return all(max_abs(x - x.conj().T) <= tol for x in self.e + self.f)

    @classmethod
    def from_primal(cls, e: Sequence, form: str = "standard") -> BasisPair:
        """Complete ``e`` to a dual pair by inverting its Gram matrix."""
        e = [as_matrix(x, square=True) for x in e]
        rows = np.stack([x.reshape(-1) for x in e])
        f_rows = np.linalg.inv(rows).T
        f = [r.reshape(e[0].shape) for r in f_rows]
        if form == "transpose":
            # <x, y>_t = vec(x) . vec(y^t)
            f = [x.T for x in f]
        return cls(tuple(e), tuple(f), form)


def standard_basis_pair(m: int) -> BasisPair:
    units = []
    for i in range(m):
        for j in range(m):
            u = np.zeros((m, m), dtype=complex)
            u[i, j] = 1.0
            units.append(u)
    return BasisPair(tuple(units), tuple(units))


def transposed_basis_pair(m: int) -> BasisPair:
    """``{e_ij}`` against ``{e_ji}``: the pair inducing ``tr(x y)``."""
    e, f = [], []
    for i in range(m):
        for j in range(m):
            u = np.zeros((m, m), dtype=complex)
            u[i, j] = 1.0
            e.append(u)
            f.append(u.T.copy())
    return BasisPair(tuple(e), tuple(f), "transpose")


_R2 = 1 / np.sqrt(2)
WEYL_2 = (
    _R2 * np.array([[1, 0], [0, 1]], dtype=complex),
    _R2 * np.array([[1, 0], [0, -1]], dtype=complex),
    _R2 * np.array([[0, 1], [1, 0]], dtype=complex),
    _R2 * np.array([[0, -1], [1, 0]], dtype=complex),
)
PAULI_2 = (
    _R2 * np.array([[1, 0], [0, 1]], dtype=complex),
    _R2 * np.array([[1, 0], [0, -1]], dtype=complex),
    _R2 * np.array([[0, 1], [1, 0]], dtype=complex),
    _R2 * np.array([[0, -1j], [1j, 0]], dtype=complex),
)


def hermitian_basis(m: int) -> list[np.ndarray]:
    """Real-linear basis of the Hermitian ``m x m`` matrices."""
    out = []
    for i in range(m):
        for j in range(m):
            h = np.zeros((m, m), dtype=complex)
            if i == j:
                h[i, i] = 1.0
            elif i < j:
                h[i, j] = h[j, i] = 1.0
            else:
                h[i, j], h[j, i] = 1j, -1j
            out.append(h)
    return out


def random_hermitian_basis_pair(m: int, rng: np.random.Generator) -> BasisPair:
    """Real-invertible recombination of a Hermitian basis, completed by Gram inversion."""
    h = hermitian_basis(m)
    while True:
        r = rng.normal(size=(m * m, m * m))
        if np.linalg.cond(r) < 1e4:
            break
    e = [sum(r[a, b] * h[b] for b in range(m * m)) for a in range(m * m)]
    return BasisPair.from_primal(e)


# ---------------------------------------------------------------------------


def choi(phi: LinearMap) -> TensorMatrix:
    return phi.choi


def choi_by_assembly(phi: LinearMap) -> TensorMatrix:
    """``sum_ij e_ij (x) phi(e_ij)`` evaluated term by term."""
    m, n = phi.m, phi.n
    out = np.zeros((m * n, m * n), dtype=complex)
    for i in range(m):
        for j in range(m):
            e = np.zeros((m, m), dtype=complex)
            e[i, j] = 1.0
            out += kron(e, apply_map(phi, e))
    return TensorMatrix(m, n, out)


def choi_from_basis(bp: BasisPair, phi: LinearMap) -> TensorMatrix:
    if bp.m != phi.m:
        raise DimMismatch(f"basis on M_{bp.m} for a map on M_{phi.m}")
    out = sum(kron(e, apply_map(phi, f)) for e, f in zip(bp.e, bp.f))
    return TensorMatrix(phi.m, phi.n, out)


def choi_theta(theta: SuperOp, phi: LinearMap) -> TensorMatrix:
    if theta.dims != (phi.m, phi.n):
        raise DimMismatch(f"superoperator dims {theta.dims} for a map {phi.m}->{phi.n}")
    return apply_transform(theta, phi.choi)


VARIANTS = ("standard", "depillis", "id-t", "t-t", "flip", "ad-u")


def variant_superop(name: str, m: int, n: int, unitary=None) -> SuperOp:
    atoms = {
        "standard": [],
        "depillis": [TransposeLeft()],
        "id-t": [TransposeRight()],
        "t-t": [TransposeLeft(), TransposeRight()],
        "flip": [Flip()],
    }
    if name == "ad-u":
        if unitary is None:
            raise ValueError("variant ad-u needs a unitary")
        return compile_spec(TransformSpec(m, n, [AdGlobal(unitary)]))
    if name not in atoms:
        raise ValueError(f"unknown variant {name!r}; choose from {', '.join(VARIANTS)}")
    return compile_spec(TransformSpec(m, n, atoms[name]))


def choi_variant(name: str, phi: LinearMap, unitary=None) -> TensorMatrix:
    return choi_theta(variant_superop(name, phi.m, phi.n, unitary), phi)


# ---------------------------------------------------------------------------


def _realign(theta: SuperOp) -> np.ndarray:
    """Regroup ``theta`` as a matrix over ``L(M_m) x L(M_n)``.

    Rows are indexed by ``(a, b, i, j)`` and columns by ``(c, d, k, l)`` where
    ``theta(e_ij (x) e_kl)[(a, c), (b, d)]`` is the entry; a product
    ``sigma (x) tau`` becomes the rank-one outer product of their matrices.
    """
    m, n = theta.dims
    # matrix[(out col, out row), (in col, in row)] in column-stacked order
    t = theta.matrix.reshape(m, n, m, n, m, n, m, n)
    # axes: (b, d, a, c, j, l, i, k)
    t = t.transpose(2, 0, 6, 4, 3, 1, 7, 5)
    return t.reshape(m ** 4, n ** 4)


def detect_left_simple(theta: SuperOp, tol: float = 1e-8) -> LinearMap | None:
    """Return ``sigma`` when ``theta = sigma (x) id``, otherwise ``None``.

    Decided on the operator-Schmidt decomposition: one significant singular
    value, and a second factor proportional to the identity map.
    """
    m, n = theta.dims
    r = _realign(theta)
    u, s, v = svd(r)
    if s[0] == 0.0 or (len(s) > 1 and s[1] > tol * s[0]):
        return None
    idn = np.zeros((n, n, n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            idn[k, l, k, l] = 1.0
    idn = idn.reshape(-1)
    tau = np.conj(v[:, 0])
    # phase-align tau with the identity before comparing directions
    overlap = np.vdot(idn, tau)
    if abs(overlap) == 0.0:
        return None
    tau_aligned = tau * abs(overlap) / overlap
    dist = np.linalg.norm(tau_aligned / np.linalg.norm(tau_aligned) - idn / np.linalg.norm(idn))
    if dist > tol:
        return None
    sigma4 = (r @ idn / np.dot(idn, idn)).reshape(m, m, m, m)  # [a, b, i, j]
    return LinearMap.from_function(lambda x: np.einsum("abij,ij->ab", sigma4, x), m, m)
