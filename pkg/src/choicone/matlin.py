"""Dense complex linear algebra on small matrices.

Matrices are plain ``numpy`` complex arrays. Bipartite matrices in
``M_m (x) M_n`` are wrapped in :class:`TensorMatrix`, which records the factor
dimensions. The composite index of the pair ``(i, k)`` is ``i * n + k``
(first factor major, zero based).

The eigensolver and SVD are cyclic Jacobi methods written out here so that
the rank and positivity decisions made elsewhere can be audited against a
self-contained reference. Hot loops elsewhere in the package call LAPACK
through ``numpy.linalg`` directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BadDims, DimMismatch, NoConvergence, NotHermitian


@dataclass(frozen=True)
class ToleranceProfile:
    structural: float = 1e-8
    reconstruction: float = 1e-10
    cone: float = 1e-10
    rank: float = 1e-8


DEFAULT_TOL = ToleranceProfile()


class Side(str, Enum):
    FIRST = "first"
    SECOND = "second"
    BOTH = "both"


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Validate ``a`` as a finite 2-D complex matrix and return a read-only copy."""
    arr = np.array(a, dtype=complex)
    if arr.ndim != 2:
        raise BadDims(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    if square and arr.shape[0] != arr.shape[1]:
        raise BadDims(f"expected a square matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TensorMatrix:
    """An element of ``M_m (x) M_n`` as an ``mn x mn`` matrix."""

    m: int
    n: int
    mat: np.ndarray

    def __post_init__(self):
        mat = as_matrix(self.mat, square=True)
        if mat.shape[0] != self.m * self.n:
            raise BadDims(f"matrix of size {mat.shape[0]} does not match {self.m}x{self.n}")
        object.__setattr__(self, "mat", mat)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.m, self.n)

    def tensor(self) -> np.ndarray:
        """View as a 4-index array ``z[i, k, j, l]``."""
        return self.mat.reshape(self.m, self.n, self.m, self.n)

    @classmethod
    def from_tensor(cls, z4: np.ndarray) -> TensorMatrix:
        m, n = z4.shape[:2]
        return cls(m, n, z4.reshape(m * n, m * n))

    def __add__(self, other: TensorMatrix) -> TensorMatrix:
        _same_dims(self, other)
        return TensorMatrix(self.m, self.n, self.mat + other.mat)

    def __sub__(self, other: TensorMatrix) -> TensorMatrix:
        _same_dims(self, other)
        return TensorMatrix(self.m, self.n, self.mat - other.mat)

    def __mul__(self, c) -> TensorMatrix:
        return TensorMatrix(self.m, self.n, c * self.mat)

    __rmul__ = __mul__

    def allclose(self, other: TensorMatrix, atol: float = 1e-10) -> bool:
        return self.dims == other.dims and max_abs(self.mat - other.mat) <= atol


def _same_dims(a: TensorMatrix, b: TensorMatrix) -> None:
    if a.dims != b.dims:
        raise DimMismatch(f"tensor dims {a.dims} and {b.dims} differ")


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def is_hermitian(a: np.ndarray, tol: float = 1e-8) -> bool:
    return a.shape[-1] == a.shape[-2] and max_abs(a - dagger(a)) <= tol


def kron(a, b) -> np.ndarray:
    """Kronecker product, ``(a (x) b)[i*p + k, j*q + l] = a[i, j] * b[k, l]``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    r, c = a.shape
    p, q = b.shape
    return np.einsum("ij,kl->ikjl", a, b).reshape(r * p, c * q)


def tensor_product(x, y) -> TensorMatrix:
    x = as_matrix(x, square=True)
    y = as_matrix(y, square=True)
    return TensorMatrix(x.shape[0], y.shape[0], kron(x, y))


def matrix_unit(i: int, j: int, rows: int, cols: int | None = None) -> np.ndarray:
    e = np.zeros((rows, rows if cols is None else cols), dtype=complex)
    e[i, j] = 1.0
    return e


def max_entangled(m: int, n: int | None = None) -> TensorMatrix:
    """The unnormalised ``sum_ij e_ij (x) e_ij`` (for ``m == n``), or its corner embedding."""
    n = m if n is None else n
    omega = np.zeros(m * n, dtype=complex)
    for i in range(min(m, n)):
        omega[i * n + i] = 1.0
    return TensorMatrix(m, n, np.outer(omega, omega.conj()))


def swap_operator(n: int) -> np.ndarray:
    """Matrix of ``a (x) b -> b (x) a`` on ``C^n (x) C^n``."""
    f = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for k in range(n):
            f[k * n + i, i * n + k] = 1.0
    return f


def partial_trace(z: TensorMatrix, side: Side | str) -> np.ndarray:
    z4 = z.tensor()
    side = Side(side)
    if side is Side.SECOND:
        return np.einsum("ikjk->ij", z4)
    if side is Side.FIRST:
        return np.einsum("ikil->kl", z4)
    raise ValueError("partial trace over both factors is the full trace")


def partial_transpose(z: TensorMatrix, side: Side | str) -> TensorMatrix:
    z4 = z.tensor()
    side = Side(side)
    if side is Side.FIRST:
        out = z4.transpose(2, 1, 0, 3)
    elif side is Side.SECOND:
        out = z4.transpose(0, 3, 2, 1)
    else:
        out = z4.transpose(2, 3, 0, 1)
    return TensorMatrix.from_tensor(out)


def flip(z: TensorMatrix) -> TensorMatrix:
    """``x (x) y -> y (x) x`` extended linearly; needs ``m == n``."""
    if z.m != z.n:
        raise DimMismatch("flip needs equal factor dimensions")
    return TensorMatrix.from_tensor(z.tensor().transpose(1, 0, 3, 2))


# ---------------------------------------------------------------------------
# Jacobi methods


def _jacobi_rotation(app: float, aqq: float, apq: complex) -> tuple[float, float, complex]:
    """Return ``(c, s, phase)`` of the unitary that zeroes ``apq``.

    The 2x2 rotation on coordinates ``(p, q)`` is
    ``G = [[c, s], [-s * conj(phase), c * conj(phase)]]`` with ``|phase| = 1``.
    """
    mag = abs(apq)
    phase = apq / mag
    tau = (aqq - app) / (2.0 * mag)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c, phase


def hermitian_eig(h, tol: float = 1e-8, max_sweeps: int = 60):
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` in descending order and a unitary
    ``v`` whose columns are the matching eigenvectors, so ``h = v diag(w) v*``.
    """
    a = np.array(as_matrix(h, square=True))
    if max_abs(a - dagger(a)) > tol:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    a = (a + dagger(a)) / 2
    size = a.shape[0]
    v = np.eye(size, dtype=complex)
    scale = np.linalg.norm(a)
    if size < 2 or scale == 0.0:
        return _sorted_eig(np.real(np.diag(a)), v)
    thresh = np.finfo(float).eps * scale
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= thresh:
            break
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = a[p, q]
                if abs(apq) <= 1e-3 * thresh / size:
                    continue
                c, s, ph = _jacobi_rotation(a[p, p].real, a[q, q].real, apq)
                gqp, gqq = -s * np.conj(ph), c * np.conj(ph)
                colp, colq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * colp + gqp * colq
                a[:, q] = s * colp + gqq * colq
                rowp, rowq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rowp + np.conj(gqp) * rowq
                a[q, :] = s * rowp + np.conj(gqq) * rowq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp + gqp * vq
                v[:, q] = s * vp + gqq * vq
    else:
        raise NoConvergence(f"Jacobi sweep cap {max_sweeps} exceeded")
    return _sorted_eig(np.real(np.diag(a)), v)


def _sorted_eig(w, v):
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def svd(a, max_sweeps: int = 60):
    """One-sided (Hestenes) Jacobi SVD, thin form.

    Returns ``(u, s, v)`` with ``a = u diag(s) v*``, ``s`` descending and
    nonnegative, and ``u``, ``v`` with orthonormal columns.
    """
    a = as_matrix(a)
    rows, cols = a.shape
    if rows < cols:
        u, s, v = svd(dagger(a), max_sweeps)
        return v, s, u
    w = np.array(a)
    v = np.eye(cols, dtype=complex)
    eps = np.finfo(float).eps
    # columns below this squared norm are roundoff and are left alone
    negligible = (eps * np.linalg.norm(w)) ** 2
    for _ in range(max_sweeps):
        rotated = False
        for p in range(cols - 1):
            for q in range(p + 1, cols):
                alpha = np.vdot(w[:, p], w[:, p]).real
                beta = np.vdot(w[:, q], w[:, q]).real
                gamma = np.vdot(w[:, p], w[:, q])
                if min(alpha, beta) <= negligible or abs(gamma) <= eps * np.sqrt(alpha * beta):
                    continue
                rotated = True
                c, s, ph = _jacobi_rotation(alpha, beta, gamma)
                gqp, gqq = -s * np.conj(ph), c * np.conj(ph)
                wp, wq = w[:, p].copy(), w[:, q].copy()
                w[:, p] = c * wp + gqp * wq
                w[:, q] = s * wp + gqq * wq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp + gqp * vq
                v[:, q] = s * vp + gqq * vq
        if not rotated:
            break
    else:
        raise NoConvergence(f"Jacobi sweep cap {max_sweeps} exceeded")
    s = np.linalg.norm(w, axis=0)
    order = np.argsort(-s, kind="stable")
    s, w, v = s[order], w[:, order], v[:, order]
    u = np.zeros_like(w)
    cutoff = eps * max(rows, cols) * (s[0] if s.size else 0.0)
    good = s > cutoff
    u[:, good] = w[:, good] / s[good]
    s = np.where(good, s, 0.0)
    if not np.all(good):
        u = _complete_orthonormal(u, good)
    return u, s, v


def _complete_orthonormal(u: np.ndarray, good: np.ndarray) -> np.ndarray:
    """Fill the columns of ``u`` not flagged ``good`` with an orthonormal completion."""
    rows = u.shape[0]
    basis = [u[:, j] for j in np.flatnonzero(good)]
    out = u.copy()
    candidates = iter(np.eye(rows, dtype=complex))
    for j in np.flatnonzero(~good):
        for e in candidates:
            x = e.copy()
            for _ in range(2):
                for b in basis:
                    x -= np.vdot(b, x) * b
            nrm = np.linalg.norm(x)
            if nrm > 1e-8:
                x /= nrm
                basis.append(x)
                out[:, j] = x
                break
    return out


def min_eigh(h: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a unit eigenvector, via LAPACK."""
    w, v = np.linalg.eigh((h + dagger(h)) / 2)
    return float(w[0]), v[:, 0]


def is_psd(h: np.ndarray, tol: float = 1e-10) -> bool:
    return min_eigh(h)[0] >= -tol
