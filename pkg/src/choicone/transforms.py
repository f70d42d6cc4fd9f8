"""Linear isomorphisms on ``M_m (x) M_n``.

A :class:`SuperOp` is stored as the ``(mn)^2 x (mn)^2`` matrix acting on
column-stacked coordinates, ``vec(z)[c * mn + r] = z[r, c]``. Matrix units
are orthonormal for the bilinear trace form, so the dual of a superoperator
is simply the transpose of this matrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
import scipy.linalg as sla

from .errors import DimMismatch, SingularAd, SingularTheta
from .mapspace import LinearMap
from .matlin import TensorMatrix, as_matrix, dagger, max_abs

RCOND_MIN = 1e-12


@dataclass(frozen=True, eq=False)
class SuperOp:
    m: int
    n: int
    matrix: np.ndarray

    def __post_init__(self):
        mat = as_matrix(self.matrix, square=True)
        size = (self.m * self.n) ** 2
        if mat.shape[0] != size:
            raise DimMismatch(f"superoperator of size {mat.shape[0]} for dims ({self.m}, {self.n})")
        object.__setattr__(self, "matrix", mat)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.m, self.n)

    def __call__(self, z: TensorMatrix) -> TensorMatrix:
        return apply_transform(self, z)

    def __matmul__(self, other: SuperOp) -> SuperOp:
        """Composition: ``(a @ b)(z) = a(b(z))``."""
        _check_dims(self, other.dims)
        return SuperOp(self.m, self.n, self.matrix @ other.matrix)

    def __mul__(self, c) -> SuperOp:
        return SuperOp(self.m, self.n, c * self.matrix)

    __rmul__ = __mul__

    def apply_many(self, zs: np.ndarray) -> np.ndarray:
        """Apply to a stack of ``mn x mn`` matrices with shape ``(..., mn, mn)``."""
        d = self.m * self.n
        flat = np.swapaxes(zs, -1, -2).reshape(*zs.shape[:-2], d * d)
        out = flat @ self.matrix.T
        return np.swapaxes(out.reshape(*zs.shape[:-2], d, d), -1, -2)

    def inverse(self) -> SuperOp:
        return SuperOp(self.m, self.n, _inverse(self.matrix))

    def dual(self) -> SuperOp:
        return SuperOp(self.m, self.n, self.matrix.T)

    def allclose(self, other: SuperOp, atol: float = 1e-10) -> bool:
        return self.dims == other.dims and max_abs(self.matrix - other.matrix) <= atol


def _check_dims(theta: SuperOp, dims: tuple[int, int]) -> None:
    if theta.dims != tuple(dims):
        raise DimMismatch(f"superoperator dims {theta.dims} do not match {tuple(dims)}")


def _inverse(mat: np.ndarray) -> np.ndarray:
    """LU inverse; raises :class:`SingularTheta` on a tiny reciprocal condition."""
    with warnings.catch_warnings():
        # exact singularity is reported through rcond below
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(mat, check_finite=False)
    anorm = np.linalg.norm(mat, 1)
    if anorm == 0.0:
        raise SingularTheta("zero superoperator")
    rcond, info = sla.lapack.zgecon(lu, anorm, norm="1")
    if info != 0 or rcond < RCOND_MIN:
        raise SingularTheta(f"superoperator is numerically singular (rcond={rcond:.2e})")
    return sla.lu_solve((lu, piv), np.eye(mat.shape[0], dtype=complex), check_finite=False)


def vec(z: np.ndarray) -> np.ndarray:
    return np.asarray(z).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d, order="F")


def apply_transform(theta: SuperOp, z: TensorMatrix) -> TensorMatrix:
    _check_dims(theta, z.dims)
    d = theta.m * theta.n
    return TensorMatrix(theta.m, theta.n, unvec(theta.matrix @ vec(z.mat), d))


def superop_from_function(f: Callable[[np.ndarray], np.ndarray], m: int, n: int) -> SuperOp:
    """Tabulate a linear ``f`` on the matrix units of ``M_mn``."""
    d = m * n
    cols = np.empty((d * d, d * d), dtype=complex)
    for c in range(d):
        for r in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[r, c] = 1.0
            cols[:, c * d + r] = vec(f(e))
    return SuperOp(m, n, cols)


def identity(m: int, n: int) -> SuperOp:
    return SuperOp(m, n, np.eye((m * n) ** 2, dtype=complex))


def local(sigma: LinearMap, tau: LinearMap) -> SuperOp:
    """``sigma (x) tau`` for maps ``sigma`` on ``M_m`` and ``tau`` on ``M_n``."""
    if sigma.m != sigma.n or tau.m != tau.n:
        raise DimMismatch("local factors must map a matrix algebra to itself")
    m, n = sigma.m, tau.m
    cs, ct = sigma.choi.tensor(), tau.choi.tensor()

    def f(z):
        z4 = z.reshape(m, n, m, n)
        return np.einsum("iajb,kcld,ikjl->acbd", cs, ct, z4).reshape(m * n, m * n)

    return superop_from_function(f, m, n)


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True, eq=False)
class AdLocal:
    s: np.ndarray
    t: np.ndarray
    kind: str = field(default="adLocal", init=False)


@dataclass(frozen=True)
class TransposeLeft:
    kind: str = field(default="transposeLeft", init=False)


@dataclass(frozen=True)
class TransposeRight:
    kind: str = field(default="transposeRight", init=False)


@dataclass(frozen=True)
class Flip:
    kind: str = field(default="flip", init=False)


@dataclass(frozen=True, eq=False)
class AdGlobal:
    v: np.ndarray
    kind: str = field(default="adGlobal", init=False)


Atom = Union[AdLocal, TransposeLeft, TransposeRight, Flip, AdGlobal]


def _rcond(a: np.ndarray) -> float:
    s = np.linalg.svd(a, compute_uv=False)
    return float(s[-1] / s[0]) if s[0] > 0 else 0.0


@dataclass(frozen=True, eq=False)
class TransformSpec:
    """Atoms listed in application order: ``atoms[0]`` acts first."""

    m: int
    n: int
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        for atom in self.atoms:
            if isinstance(atom, AdLocal):
                s, t = as_matrix(atom.s, square=True), as_matrix(atom.t, square=True)
                if s.shape[0] != self.m or t.shape[0] != self.n:
                    raise DimMismatch("adLocal factor sizes do not match (m, n)")
                if min(_rcond(s), _rcond(t)) < 1e-10:
                    raise SingularAd("adLocal factor is singular")
            elif isinstance(atom, AdGlobal):
                v = as_matrix(atom.v, square=True)
                if v.shape[0] != self.m * self.n:
                    raise DimMismatch("adGlobal matrix must be mn x mn")
                if _rcond(v) < 1e-10:
                    raise SingularAd("adGlobal matrix is singular")
            elif isinstance(atom, Flip):
                if self.m != self.n:
                    raise DimMismatch("flip needs m == n")
            elif not isinstance(atom, (TransposeLeft, TransposeRight)):
                raise TypeError(f"unknown atom {atom!r}")

    def __add__(self, other: TransformSpec) -> TransformSpec:
        if (self.m, self.n) != (other.m, other.n):
            raise DimMismatch("cannot concatenate specs of different dims")
        return TransformSpec(self.m, self.n, self.atoms + other.atoms)


def atom_function(atom: Atom, m: int, n: int) -> Callable[[np.ndarray], np.ndarray]:
    d = m * n
    if isinstance(atom, AdLocal):
        st = np.kron(np.asarray(atom.s), np.asarray(atom.t))
        return lambda z: dagger(st) @ z @ st
    if isinstance(atom, AdGlobal):
        v = np.asarray(atom.v)
        return lambda z: dagger(v) @ z @ v
    if isinstance(atom, TransposeLeft):
        return lambda z: z.reshape(m, n, m, n).transpose(2, 1, 0, 3).reshape(d, d)
    if isinstance(atom, TransposeRight):
        return lambda z: z.reshape(m, n, m, n).transpose(0, 3, 2, 1).reshape(d, d)
    if isinstance(atom, Flip):
        return lambda z: z.reshape(m, n, m, n).transpose(1, 0, 3, 2).reshape(d, d)
    raise TypeError(f"unknown atom {atom!r}")


def compile_spec(spec: TransformSpec) -> SuperOp:
    theta = identity(spec.m, spec.n)
    for atom in spec.atoms:
        theta = superop_from_function(atom_function(atom, spec.m, spec.n), spec.m, spec.n) @ theta
    return theta


def transpose_both(m: int, n: int) -> SuperOp:
    return compile_spec(TransformSpec(m, n, [TransposeLeft(), TransposeRight()]))


def is_hermiticity_preserving_superop(theta: SuperOp, tol: float = 1e-8) -> bool:
    """Check ``theta(h)* = theta(h)`` on a Hermitian basis of ``M_mn``."""
    d = theta.m * theta.n
    basis = []
    for r in range(d):
        for c in range(r, d):
            e = np.zeros((d, d), dtype=complex)
            if r == c:
                e[r, r] = 1.0
                basis.append(e)
            else:
                e[r, c] = e[c, r] = 1.0
                basis.append(e)
                e2 = np.zeros((d, d), dtype=complex)
                e2[r, c], e2[c, r] = -1j, 1j
                basis.append(e2)
    out = theta.apply_many(np.stack(basis))
    return max_abs(out - dagger(out)) <= tol


def random_nonsingular(d: int, rng: np.random.Generator, min_rcond: float = 1e-3) -> np.ndarray:
    while True:
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        if _rcond(a) >= min_rcond:
            return a


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def exam_atoms(m: int, n: int, rng: np.random.Generator) -> dict[str, TransformSpec]:
    """The separability-preserving generators: local congruence, full transpose, flip."""
    out = {
        "adLocal": TransformSpec(m, n, [AdLocal(random_nonsingular(m, rng), random_nonsingular(n, rng))]),
        "transposeBoth": TransformSpec(m, n, [TransposeLeft(), TransposeRight()]),
    }
    if m == n:
        out["flip"] = TransformSpec(m, n, [Flip()])
    return out



# ---------------------------------------------------------------------------
# sampled cone preservation


@dataclass
class NoCounterexample:
    samples: int
    worst_margin: float


@dataclass
class Counterexample:
    z: TensorMatrix
    member: object  # InCone certificate for z
    image: object  # Refuted certificate for theta(z)
    sample_index: int


def _probe_members(cone, m: int, n: int) -> list:
    """Canonical cone members tried before random ones."""
    from .cones import Certificate, Family, Verdict, gen_kpos_witness

    out = []
    kmax = min(m, n)
    if cone.family in (Family.SCHMIDT, Family.K_SUPERPOSITIVE):
        for j in range(1, cone.k + 1):
            omega = np.zeros(m * n, dtype=complex)
            for i in range(j):
                omega[i * n + i] = 1.0
            cert = Certificate(Verdict.IN_CONE, k=cone.k, dims=(m, n), decomposition=[(1.0, omega)],
                               method="construction")
            out.append((TensorMatrix(m, n, np.outer(omega, omega)), cert))
    else:
        cert = Certificate(Verdict.IN_CONE, k=cone.k, dims=(m, n), method="construction")
        out.append((gen_kpos_witness(m, n, cone.k).choi if cone.k < kmax
                    else TensorMatrix(m, n, np.eye(m * n, dtype=complex)), cert))
    return out


def preserves_cone_sampled(
    theta: SuperOp, cone, samples: int = 200, seed: int = 0, restarts: int = 50
) -> Union[NoCounterexample, Counterexample]:
    """Search for a certified member ``z`` of ``cone`` with ``theta(z)`` refuted.

    Members come from canonical probes and then from the certified
    generators, each with its own deterministic seed. ``NoCounterexample`` is
    evidence, not proof; its margin is the lowest normalised refutation value.
    """
    from .cones import (Certificate, Family, Verdict, block_positivity_certify,
                        gen_bpk_member, gen_sk_state, _refute_schmidt)

    m, n = theta.dims
    cone.check(m, n)
    schmidt_like = cone.family in (Family.SCHMIDT, Family.K_SUPERPOSITIVE)
    members = _probe_members(cone, m, n)
    worst = np.inf
    for idx in range(samples):
        if idx < len(members):
            z, member = members[idx]
        else:
            sub = int(np.random.default_rng([seed, idx]).integers(2**31))
            if schmidt_like:
                terms = 1 + sub % 3
                z, member = gen_sk_state(m, n, cone.k, terms, sub)
            else:
                z, member = gen_bpk_member(m, n, cone.k, sub)
        out = theta(z)
        norm = float(np.linalg.norm(out.mat))
        if max_abs(out.mat - dagger(out.mat)) > 1e-8 * max(1.0, norm):
            cert = Certificate(Verdict.REFUTED, k=cone.k, dims=(m, n), method="non-hermitian",
                               value=float(max_abs(out.mat - dagger(out.mat))))
            return Counterexample(z, member, cert, idx)
        if schmidt_like:
            witness, value = _refute_schmidt(out, cone.k)
            cert = Certificate(Verdict.REFUTED, k=cone.k, dims=(m, n), witness=witness, value=value,
                               method=witness["kind"], seed=seed)
        else:
            cert = block_positivity_certify(out, cone.k, restarts, seed)
            value = cert.value
        if value <= -1e-10:
            return Counterexample(z, member, cert, idx)
        worst = min(worst, value / max(norm, 1e-300))
    return NoCounterexample(samples, float(worst))
