"""Linear maps ``M_m -> M_n`` held in Choi-canonical form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimMismatch, NotCompletelyPositive
from .matlin import TensorMatrix, as_matrix, dagger, is_hermitian, max_abs


@dataclass(frozen=True, eq=False)
class LinearMap:
    """A map ``phi: M_m -> M_n`` stored as ``C_phi = sum_ij e_ij (x) phi(e_ij)``."""

    m: int
    n: int
    choi: TensorMatrix

    def __post_init__(self):
        if self.choi.dims != (self.m, self.n):
            raise DimMismatch(f"Choi dims {self.choi.dims} do not match ({self.m}, {self.n})")

    def __call__(self, x) -> np.ndarray:
        return apply_map(self, x)

    @property
    def matrix(self) -> np.ndarray:
        """Matrix of ``vec(x) -> vec(phi(x))`` with column-stacked ``vec``."""
        c4 = self.choi.tensor()  # c4[i, k, j, l] = phi(e_ij)[k, l]
        # row index l * n + k, column index j * m + i
        return c4.transpose(3, 1, 2, 0).reshape(self.n * self.n, self.m * self.m)

    @classmethod
    def from_matrix(cls, mat: np.ndarray, m: int, n: int) -> LinearMap:
        c4 = np.asarray(mat).reshape(n, n, m, m).transpose(3, 1, 2, 0)
        return cls(m, n, TensorMatrix(m, n, c4.reshape(m * n, m * n)))

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], m: int, n: int) -> LinearMap:
        """Tabulate ``f`` on matrix units; ``f`` must be linear."""
        c4 = np.zeros((m, n, m, n), dtype=complex)
        for i in range(m):
            for j in range(m):
                e = np.zeros((m, m), dtype=complex)
                e[i, j] = 1.0
                out = np.asarray(f(e), dtype=complex)
                if out.shape != (n, n):
                    raise DimMismatch(f"function returned shape {out.shape}, expected {(n, n)}")
                c4[i, :, j, :] = out
        return cls(m, n, TensorMatrix.from_tensor(c4))


def apply_map(phi: LinearMap, x) -> np.ndarray:
    x = as_matrix(x)
    if x.shape != (phi.m, phi.m):
        raise DimMismatch(f"input of shape {x.shape} for a map on M_{phi.m}")
    return np.einsum("ij,ikjl->kl", x, phi.choi.tensor())


def involution(phi: LinearMap) -> LinearMap:
    """``phi^dagger(x) = phi(x*)*``; its Choi matrix is the adjoint of ``C_phi``."""
    return LinearMap(phi.m, phi.n, TensorMatrix(phi.m, phi.n, dagger(phi.choi.mat)))


def is_hermiticity_preserving(phi: LinearMap, tol: float = 1e-8) -> bool:
    return is_hermitian(phi.choi.mat, tol)


def kraus_to_choi(kraus: Sequence) -> LinearMap:
    """Choi matrix of ``x -> sum_a K_a x K_a*`` for ``n x m`` Kraus operators."""
    ops = [as_matrix(k) for k in kraus]
    if not ops:
        raise ValueError("at least one Kraus operator is required")
    n, m = ops[0].shape
    if any(k.shape != (n, m) for k in ops):
        raise DimMismatch("Kraus operators must share a shape")
    # C = sum_a |k_a><k_a| with k_a[i*n + k] = K_a[k, i]
    vecs = np.stack([k.T.reshape(-1) for k in ops], axis=1)
    return LinearMap(m, n, TensorMatrix(m, n, vecs @ dagger(vecs)))


def choi_to_kraus(phi: LinearMap, tol: float = 1e-8) -> list[np.ndarray]:
    """Kraus operators from the eigendecomposition of a PSD Choi matrix.

    Eigenvalues in ``[-tol, 0]`` are clipped to zero; anything below ``-tol``
    raises :class:`NotCompletelyPositive`. Operators are returned for the
    eigenvalues above ``tol``, largest first.
    """
    c = phi.choi.mat
    if not is_hermitian(c, tol):
        raise NotCompletelyPositive("Choi matrix is not Hermitian")
    w, v = np.linalg.eigh((c + dagger(c)) / 2)
    if w[0] < -tol:
        raise NotCompletelyPositive(f"Choi matrix has eigenvalue {w[0]:.3e}")
    ops = []
    for lam, vec in zip(w[::-1], v.T[::-1]):
        if lam <= tol:
            break
        ops.append((np.sqrt(lam) * vec).reshape(phi.m, phi.n).T)
    return ops


def compose(tau: LinearMap | None, phi: LinearMap, sigma: LinearMap | None = None) -> LinearMap:
    """The map ``x -> tau(phi(sigma(x)))``; ``None`` stands for the identity."""
    mat = phi.matrix
    m, n = phi.m, phi.n
    if sigma is not None:
        if sigma.n != phi.m:
            raise DimMismatch(f"sigma lands in M_{sigma.n}, phi starts on M_{phi.m}")
        mat = mat @ sigma.matrix
        m = sigma.m
    if tau is not None:
        if tau.m != phi.n:
            raise DimMismatch(f"phi lands in M_{phi.n}, tau starts on M_{tau.m}")
        mat = tau.matrix @ mat
        n = tau.n
    return LinearMap.from_matrix(mat, m, n)


# ---------------------------------------------------------------------------
# named maps


def identity_map(m: int) -> LinearMap:
    return LinearMap.from_function(lambda x: x, m, m)


def transpose_map(m: int) -> LinearMap:
    return LinearMap.from_function(lambda x: x.T, m, m)


def ad_map(s) -> LinearMap:
    """``x -> s* x s`` for an ``m x n`` matrix ``s``."""
    s = as_matrix(s)
    return kraus_to_choi([dagger(s)])


def trace_map(m: int, n: int, scale: complex = 1.0) -> LinearMap:
    """``x -> scale * tr(x) * I_n``."""
    return LinearMap.from_function(lambda x: scale * np.trace(x) * np.eye(n), m, n)


def maps_close(phi: LinearMap, psi: LinearMap, atol: float = 1e-10) -> bool:
    return (phi.m, phi.n) == (psi.m, psi.n) and max_abs(phi.choi.mat - psi.choi.mat) <= atol
