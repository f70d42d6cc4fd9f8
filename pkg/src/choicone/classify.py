"""Constructive classification of separability preservers.

An invertible Hermiticity-preserving ``theta`` maps the separable cone onto
itself exactly when it is a positive multiple of

    (ad_s (x) ad_t) o [t (x) id] o [id (x) t] o [flip]

with nonsingular ``s``, ``t`` and each bracket optional. Given ``theta`` this
module either recovers that factorization or returns a product state whose
image is certified to violate a necessary condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .cones import Certificate, Verdict, _refute_schmidt
from .errors import DimMismatch, NotHermiticityPreserving, SingularTheta
from .matlin import TensorMatrix, dagger, max_abs, partial_trace
from .transforms import (
    AdLocal,
    Flip,
    SuperOp,
    TransformSpec,
    TransposeLeft,
    TransposeRight,
    _inverse,
    compile_spec,
    haar_unitary,
    is_hermiticity_preserving_superop,
)


@dataclass(frozen=True, eq=False)
class CanonicalFactorization:
    s: np.ndarray
    t: np.ndarray
    transpose_left: bool
    transpose_right: bool
    flip: bool
    scale: float

    @property
    def dims(self) -> tuple[int, int]:
        return (self.s.shape[0], self.t.shape[0])

    def spec(self) -> TransformSpec:
        atoms = []
        if self.flip:
            atoms.append(Flip())
        if self.transpose_left:
            atoms.append(TransposeLeft())
        if self.transpose_right:
            atoms.append(TransposeRight())
        atoms.append(AdLocal(self.s, self.t))
        m, n = self.dims
        return TransformSpec(m, n, atoms)

    def superop(self) -> SuperOp:
        return self.scale * compile_spec(self.spec())


@dataclass
class Factored:
    factorization: CanonicalFactorization
    residual: float


@dataclass
class NotPreserving:
    p: np.ndarray
    q: np.ndarray
    image: TensorMatrix
    certificate: Certificate


Result = Union[Factored, NotPreserving]


def verify_factorization(theta: SuperOp, fac: CanonicalFactorization, tol: float = 1e-8) -> float:
    """``max |theta - scale * compile(fac)|``; ``tol`` is accepted for symmetry only."""
    if theta.dims != fac.dims:
        raise DimMismatch(f"factorization dims {fac.dims} for superoperator dims {theta.dims}")
    return max_abs(theta.matrix - fac.superop().matrix)


def normalize(s: np.ndarray) -> tuple[np.ndarray, float]:
    """Frobenius-normalise ``s`` with a real positive leading entry; return the squared norm."""
    nrm = float(np.linalg.norm(s))
    s = s / nrm
    flat = s.reshape(-1)
    lead = flat[np.flatnonzero(np.abs(flat) > 1e-12 * np.abs(flat).max())[0]]
    return s * (abs(lead) / lead), nrm ** 2


# ---------------------------------------------------------------------------
# step 1: images of product pure states


def _unit_projections(d: int) -> list[np.ndarray]:
    """Rank-one projections built from matrix units and their two-term superpositions."""
    eye = np.eye(d, dtype=complex)
    vecs = [eye[i] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            vecs.append((eye[i] + eye[j]) / np.sqrt(2))
            vecs.append((eye[i] + 1j * eye[j]) / np.sqrt(2))
    return [np.outer(v, v.conj()) for v in vecs]


def _haar_projections(d: int, count: int, rng: np.random.Generator) -> list[np.ndarray]:
    return [np.outer(u[:, 0], u[:, 0].conj()) for u in (haar_unitary(d, rng) for _ in range(count))]


def _product_samples(m: int, n: int, seed: int, haar: int = 20) -> list[tuple[np.ndarray, np.ndarray]]:
    rng = np.random.default_rng(seed)
    pu, qu = _unit_projections(m), _unit_projections(n)
    pairs = [(p, q) for p in pu for q in qu]
    pairs += list(zip(_haar_projections(m, haar, rng), _haar_projections(n, haar, rng)))
    return pairs


def _extreme_ray_violation(y: np.ndarray, m: int, n: int) -> float:
    """How far ``y`` is from a positive multiple of ``|a><a| (x) |b><b|``, relative to ``|y|``."""
    nrm = float(np.linalg.norm(y))
    if nrm == 0.0:
        return np.inf
    z = TensorMatrix(m, n, y)
    tr = float(np.real(np.trace(y)))
    if tr <= 1e-12 * nrm:
        return np.inf
    a, b = partial_trace(z, "second"), partial_trace(z, "first")
    worst = max_abs(y - dagger(y)) / nrm
    for marg in (a, b):
        w = np.linalg.eigvalsh((marg + dagger(marg)) / 2)
        # rank one and positive: one eigenvalue carries the whole trace
        worst = max(worst, float(np.sum(np.abs(w[:-1]))) / abs(w[-1]) if w[-1] > 0 else np.inf)
    worst = max(worst, float(np.linalg.norm(y - np.kron(a, b) / tr)) / nrm)
    return worst


def _refutation(p, q, y: np.ndarray, m: int, n: int, violation: float) -> NotPreserving:
    image = TensorMatrix(m, n, (y + dagger(y)) / 2)
    witness, value = _refute_schmidt(image, 1)
    if value <= -1e-10:
        cert = Certificate(Verdict.REFUTED, k=1, dims=(m, n), witness=witness, value=value,
                           method=witness["kind"])
    else:
        cert = Certificate(Verdict.REFUTED, k=1, dims=(m, n), value=violation, method="extreme-ray",
                           evidence={"violation": violation})
    return NotPreserving(p, q, TensorMatrix(m, n, y), cert)


def _step_one(theta: SuperOp, pairs, tol: float) -> Optional[NotPreserving]:
    m, n = theta.dims
    inputs = np.stack([np.kron(p, q) for p, q in pairs])
    images = theta.apply_many(inputs)
    fails = []
    for (p, q), y in zip(pairs, images):
        v = _extreme_ray_violation(y, m, n)
        if v > tol:
            fails.append(_refutation(p, q, y, m, n, v))
    if not fails:
        return None
    # prefer a counterexample refuted by an explicit witness
    for f in fails:
        if f.certificate.method != "extreme-ray":
            return f
    return fails[0]


# ---------------------------------------------------------------------------
# step 2: the marginal maps


def _marginal_outputs(theta: SuperOp, side: str) -> np.ndarray:
    """``A -> tr_2 theta(A (x) e_11)`` (side ``first``) or ``B -> tr_1 theta(e_11 (x) B)`` on units."""
    m, n = theta.dims
    d = m if side == "first" else n
    units = np.zeros((d * d, d, d), dtype=complex)
    for idx in range(d * d):
        units[idx, idx // d, idx % d] = 1.0
    e_other = np.zeros((n, n) if side == "first" else (m, m), dtype=complex)
    e_other[0, 0] = 1.0
    if side == "first":
        inputs = np.stack([np.kron(u, e_other) for u in units])
    else:
        inputs = np.stack([np.kron(e_other, u) for u in units])
    out = theta.apply_many(inputs).reshape(d * d, m, n, m, n)
    if side == "first":
        return np.einsum("xikjk->xij", out)
    return np.einsum("xkikj->xij", out)


def _congruence_factor(outputs: np.ndarray, tol: float) -> Optional[np.ndarray]:
    """``S`` with ``psi(e_ij) = S* e_ij S`` up to a positive scalar, from a rank-one Choi matrix."""
    d = outputs.shape[1]
    c4 = outputs.reshape(d, d, d, d).transpose(0, 2, 1, 3)  # [i, k, j, l]
    c = c4.reshape(d * d, d * d)
    c = (c + dagger(c)) / 2
    w, v = np.linalg.eigh(c)
    if w[-1] <= 0 or np.sum(np.abs(w[:-1])) > tol * w[-1]:
        return None
    k = (np.sqrt(w[-1]) * v[:, -1]).reshape(d, d).T  # Kraus operator S*
    return dagger(k)


def _marginal_form(outputs: np.ndarray, tol: float) -> tuple[str, Optional[np.ndarray]]:
    """Classify as ``B`` (rank-one range), ``A1`` (congruence) or ``A2`` (congruence after transpose)."""
    d = outputs.shape[1]
    flat = outputs.reshape(d * d, d * d)
    sv = np.linalg.svd(flat, compute_uv=False)
    if sv[0] == 0.0:
        return "none", None
    if len(sv) > 1 and sv[1] <= tol * sv[0]:
        return "B", None
    s = _congruence_factor(outputs, tol)
    if s is not None:
        return "A1", s
    # psi o t on e_ij is psi(e_ji)
    perm = np.arange(d * d).reshape(d, d).T.reshape(-1)
    s = _congruence_factor(outputs[perm], tol)
    if s is not None:
        return "A2", s
    return "none", None


def _rcond(a: np.ndarray) -> float:
    sv = np.linalg.svd(a, compute_uv=False)
    return float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0


def _fit(theta: SuperOp, tol: float) -> Optional[tuple[np.ndarray, bool, np.ndarray, bool]]:
    f1, s1 = _marginal_form(_marginal_outputs(theta, "first"), tol)
    f2, s2 = _marginal_form(_marginal_outputs(theta, "second"), tol)
    if f1 not in ("A1", "A2") or f2 not in ("A1", "A2"):
        return None
    return s1, f1 == "A2", s2, f2 == "A2"


# ---------------------------------------------------------------------------


def classify_separability_preserver(theta: SuperOp, tol: float = 1e-8, seed: int = 0) -> Result:
    m, n = theta.dims
    _inverse(theta.matrix)  # raises SingularTheta
    if not is_hermiticity_preserving_superop(theta, tol):
        raise NotHermiticityPreserving("theta does not preserve Hermiticity")

    pairs = _product_samples(m, n, seed)
    bad = _step_one(theta, pairs, tol)
    if bad is not None:
        return bad

    flip = False
    fitted = _fit(theta, tol)
    if fitted is None and m == n:
        flip = True
        fitted = _fit(theta @ compile_spec(TransformSpec(m, n, [Flip()])), tol)
    if fitted is not None:
        s1, tl, s2, tr = fitted
        if min(_rcond(s1), _rcond(s2)) >= tol:
            s, ns = normalize(s1)
            t, nt = normalize(s2)
            trial = CanonicalFactorization(s, t, tl, tr, flip, 1.0)
            g = trial.superop()
            # separation-of-variables constant, read off at e_11 (x) e_11
            probe = np.zeros((m * n, m * n), dtype=complex)
            probe[0, 0] = 1.0
            num = np.real(np.trace(theta(TensorMatrix(m, n, probe)).mat))
            den = np.real(np.trace(g(TensorMatrix(m, n, probe)).mat))
            scale = float(num / den)
            if scale > 0:
                fac = CanonicalFactorization(s, t, tl, tr, flip, scale)
                residual = verify_factorization(theta, fac)
                if residual <= tol * max(1.0, max_abs(theta.matrix)):
                    return Factored(fac, residual)
                return _worst_sample(theta, fac, pairs)
    return _worst_sample(theta, None, pairs)


def _worst_sample(theta: SuperOp, fac: Optional[CanonicalFactorization], pairs) -> NotPreserving:
    """Counterexample for a failed fit: the sample worst reproduced by the best fit."""
    m, n = theta.dims
    inputs = np.stack([np.kron(p, q) for p, q in pairs])
    images = theta.apply_many(inputs)
    if fac is None:
        idx = int(np.argmax([_extreme_ray_violation(y, m, n) for y in images]))
        resid = _extreme_ray_violation(images[idx], m, n)
    else:
        errs = np.abs(images - fac.superop().apply_many(inputs)).max(axis=(1, 2))
        idx = int(np.argmax(errs))
        resid = float(errs[idx])
    p, q = pairs[idx]
    out = _refutation(p, q, images[idx], m, n, resid)
    if out.certificate.method == "extreme-ray":
        out.certificate.method = "factorization"
    return out


def random_factorization(m: int, n: int, rng: np.random.Generator) -> CanonicalFactorization:
    """A random canonical factorization, for round-trip testing."""
    from .transforms import random_nonsingular

    s, _ = normalize(random_nonsingular(m, rng))
    t, _ = normalize(random_nonsingular(n, rng))
    flags = rng.integers(0, 2, size=3).astype(bool)
    return CanonicalFactorization(s, t, bool(flags[0]), bool(flags[1]),
                                  bool(flags[2]) and m == n, float(rng.uniform(0.5, 2.0)))
