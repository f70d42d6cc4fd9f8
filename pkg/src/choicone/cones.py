"""Certificate-based membership for the Schmidt-number and positivity cones.

Four families live on ``M_m (x) M_n`` and on maps ``M_m -> M_n``:

* ``S_k``   unnormalised states of Schmidt number at most ``k``;
* ``BP_k``  ``k``-block-positive matrices;
* ``P_k``   ``k``-positive maps (Choi matrix in ``BP_k``);
* ``SP_k``  ``k``-superpositive maps (Choi matrix in ``S_k``).

Membership is answered with a :class:`Certificate`. ``InCone`` carries an
explicit decomposition or names the exact criterion used, ``Refuted`` carries
a witness operator ``W`` from the dual cone with ``<W, z> < 0`` under the
bilinear trace pairing, and anything else is ``Unknown``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.optimize import nnls

from .errors import BadDims, NotHermitian, ZeroVector
from .mapspace import LinearMap, kraus_to_choi
from .matlin import TensorMatrix, dagger, max_abs, partial_transpose

REFUTE_TOL = 1e-10
PSD_TOL = 1e-10
HERM_TOL = 1e-8
RECON_TOL = 1e-8

#: dimensions where positive partial transpose is equivalent to separability
PPT_EXACT_DIMS = {(2, 2), (2, 3), (3, 2)}


class Verdict(str, Enum):
    IN_CONE = "InCone"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


class Family(str, Enum):
    SCHMIDT = "SchmidtNumber"
    BLOCK_POSITIVE = "BlockPositive"
    K_POSITIVE = "KPositive"
    K_SUPERPOSITIVE = "KSuperpositive"

    @classmethod
    def parse(cls, text: str) -> Family:
        aliases = {
            "schmidt": cls.SCHMIDT, "s": cls.SCHMIDT,
            "bp": cls.BLOCK_POSITIVE, "blockpositive": cls.BLOCK_POSITIVE,
            "block-positive": cls.BLOCK_POSITIVE,
            "p": cls.K_POSITIVE, "kpositive": cls.K_POSITIVE, "k-positive": cls.K_POSITIVE,
            "sp": cls.K_SUPERPOSITIVE, "ksuperpositive": cls.K_SUPERPOSITIVE,
            "k-superpositive": cls.K_SUPERPOSITIVE,
        }
        key = text.strip().lower()
        for fam in cls:
            if fam.value.lower() == key:
                return fam
        if key not in aliases:
            raise ValueError(f"unknown cone family {text!r}")
        return aliases[key]


@dataclass(frozen=True)
class ConeId:
    family: Family
    k: int

    def check(self, m: int, n: int) -> None:
        if not 1 <= self.k <= min(m, n):
            raise BadDims(f"k={self.k} outside 1..{min(m, n)} for {m}x{n}")

    @classmethod
    def parse(cls, text: str) -> ConeId:
        fam, _, k = text.partition(",")
        return cls(Family.parse(fam), int(k))


@dataclass
class Certificate:
    verdict: Verdict
    k: int
    dims: tuple[int, int]
    decomposition: Optional[list] = None  # [(weight, zeta), ...]
    witness: Optional[dict] = None
    value: Optional[float] = None
    method: str = ""
    samples_used: int = 0
    seed: Optional[int] = None
    restarts: int = 0
    evidence: dict = field(default_factory=dict)

    @property
    def in_cone(self) -> bool:
        return self.verdict is Verdict.IN_CONE

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.REFUTED


# ---------------------------------------------------------------------------
# Schmidt rank


def schmidt_coefficients(zeta, m: int, n: int) -> np.ndarray:
    zeta = np.asarray(zeta, dtype=complex).reshape(-1)
    if zeta.size != m * n:
        raise BadDims(f"vector of length {zeta.size} for {m}x{n}")
    return np.linalg.svd(zeta.reshape(m, n), compute_uv=False)


def schmidt_rank(zeta, m: int, n: int, tol: float = 1e-8) -> int:
    s = schmidt_coefficients(zeta, m, n)
    if s[0] == 0.0:
        raise ZeroVector("Schmidt rank of the zero vector")
    return int(np.sum(s > tol * s[0]))


def ky_fan_weight(omega, m: int, n: int, k: int) -> float:
    """Largest ``|<omega|zeta>|^2`` over unit ``zeta`` of Schmidt rank at most ``k``."""
    s = schmidt_coefficients(omega, m, n)
    return float(np.sum(s[:k] ** 2))


def reassemble(decomposition, size: int) -> np.ndarray:
    out = np.zeros((size, size), dtype=complex)
    for w, zeta in decomposition:
        zeta = np.asarray(zeta)
        out += w * np.outer(zeta, zeta.conj())
    return out


def _check_hermitian(z: TensorMatrix) -> None:
    if max_abs(z.mat - dagger(z.mat)) > HERM_TOL:
        raise NotHermitian("cone membership is only defined for Hermitian matrices")


def _hermitian_part(a: np.ndarray) -> np.ndarray:
    return (a + dagger(a)) / 2


def _eigen_decomposition(h: np.ndarray) -> list:
    w, v = np.linalg.eigh(_hermitian_part(h))
    return [(float(lam), v[:, i].copy()) for i, lam in enumerate(w) if lam > 0]


def _witness(kind: str, operator: np.ndarray, z: np.ndarray, **extra) -> tuple[dict, float]:
    value = float(np.real(np.sum(operator * z)))
    return {"kind": kind, "operator": operator, **extra}, value


# ---------------------------------------------------------------------------
# see-saw over Schmidt-rank-k vectors


def _restart_factors(m: int, k: int, restarts: int, seed: int) -> np.ndarray:
    out = np.empty((restarts, m, k), dtype=complex)
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        out[r] = rng.normal(size=(m, k)) + 1j * rng.normal(size=(m, k))
    return out


def seesaw_minimize(
    z: TensorMatrix,
    k: int,
    restarts: int = 50,
    seed: int = 0,
    max_iter: int = 500,
    tol: float = 1e-12,
) -> tuple[np.ndarray, np.ndarray]:
    """Minimise ``<zeta|z|zeta>`` over unit ``zeta`` with Schmidt rank ``<= k``.

    ``zeta`` is parametrised as ``vec(A B)`` with ``A`` of size ``m x k`` and
    ``B`` of size ``k x n``. Each half-step fixes one factor with orthonormal
    columns (rows) and solves the best response exactly as the lowest
    eigenvector of the compressed Hermitian matrix, so the objective never
    increases. All restarts run as one batch.

    Returns ``(values, zetas)`` for every restart.
    """
    m, n = z.dims
    z4 = _hermitian_part(z.mat).reshape(m, n, m, n)
    scale = max(1.0, float(np.linalg.norm(z.mat)))
    a, _ = np.linalg.qr(_restart_factors(m, k, restarts, seed))
    prev = np.full(restarts, np.inf)
    for _ in range(max_iter):
        mb = np.einsum("rip,ilsq,rsk->rplkq", a.conj(), z4, a, optimize=True)
        mb = mb.reshape(restarts, k * n, k * n)
        _, vb = np.linalg.eigh(mb)
        b = vb[:, :, 0].reshape(restarts, k, n)
        q, _ = np.linalg.qr(np.swapaxes(b, 1, 2))
        b = np.swapaxes(q, 1, 2)  # orthonormal rows
        ma = np.einsum("rpl,iljq,rsq->ripjs", b.conj(), z4, b, optimize=True)
        ma = ma.reshape(restarts, m * k, m * k)
        wa, va = np.linalg.eigh(ma)
        vals = wa[:, 0]
        a_full = va[:, :, 0].reshape(restarts, m, k)
        zetas = np.einsum("rik,rkl->ril", a_full, b).reshape(restarts, m * n)
        a, _ = np.linalg.qr(a_full)
        # stationarity of the best restart; the others only seed the search
        done = prev.min() - vals.min() < tol * scale
        prev = vals
        if done:
            break
    return prev, zetas


# ---------------------------------------------------------------------------
# refutation of S_k


def _refute_schmidt(rho: TensorMatrix, k: int) -> tuple[Optional[dict], float]:
    """Best witness found for ``rho`` not in ``S_k``; returns ``(witness, value)``.

    Candidates are, in order: a negative eigenvector (``S_k`` is inside the
    PSD cone), the partial-transpose test for ``k = 1``, and fidelity
    witnesses ``mu_k(omega) I - |omega><omega|`` built on eigenvectors of
    ``rho``, which are ``k``-block-positive by the Ky Fan bound.
    """
    m, n = rho.dims
    h = _hermitian_part(rho.mat)
    best: tuple[Optional[dict], float] = (None, np.inf)

    w, v = np.linalg.eigh(h)
    # <W, rho> with W = |conj v><conj v| equals <v|rho|v>
    wv = np.conj(v[:, 0])
    cand = _witness("eigenvector", np.outer(wv, wv.conj()), h, vector=v[:, 0])
    best = min(best, cand, key=lambda c: c[1])
    if best[1] <= -REFUTE_TOL:
        return best

    if k == 1:
        pt = partial_transpose(TensorMatrix(m, n, h), "second").mat
        wp, vp = np.linalg.eigh(_hermitian_part(pt))
        proj = np.outer(vp[:, 0], vp[:, 0].conj())
        # <v|rho^G|v> = tr(P^G rho) = <(P^G)^t, rho>
        op = partial_transpose(TensorMatrix(m, n, proj), "second").mat.T
        cand = _witness("ppt", op, h, vector=vp[:, 0])
        best = min(best, cand, key=lambda c: c[1])
        if best[1] <= -REFUTE_TOL:
            return best

    d = m * n
    for idx in range(d - 1, -1, -1):
        if w[idx] <= 0:
            break
        omega = np.conj(v[:, idx])
        mu = ky_fan_weight(omega, m, n, k)
        op = mu * np.eye(d) - np.outer(omega, omega.conj())
        cand = _witness("fidelity", op, h, omega=omega, k=k)
        best = min(best, cand, key=lambda c: c[1])
        if best[1] <= -REFUTE_TOL:
            break
    return best


# ---------------------------------------------------------------------------
# decomposition search for S_k


def _local_frame(d: int) -> list[np.ndarray]:
    out = [np.eye(d, dtype=complex)[i] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            for ph in (1, -1, 1j, -1j):
                x = np.zeros(d, dtype=complex)
                x[i], x[j] = 1, ph
                out.append(x / np.sqrt(2))
    return out


def _random_sr_vectors(m: int, n: int, k: int, count: int, rng) -> list[np.ndarray]:
    out = []
    for _ in range(count):
        a = rng.normal(size=(m, k)) + 1j * rng.normal(size=(m, k))
        b = rng.normal(size=(k, n)) + 1j * rng.normal(size=(k, n))
        zeta = (a @ b).reshape(-1)
        out.append(zeta / np.linalg.norm(zeta))
    return out


def _range_projector(h: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    keep = w > rel * max(1.0, abs(w[-1]))
    vk = v[:, keep]
    return vk @ dagger(vk)


def _range_vectors(h: np.ndarray, m: int, n: int, k: int, restarts: int, seed: int) -> list:
    """Schmidt-rank-``k`` vectors in the range of ``h`` (and of ``h^G`` when ``k = 1``)."""
    d = m * n
    penalty = np.eye(d) - _range_projector(h)
    if k == 1:
        pt = partial_transpose(TensorMatrix(m, n, h), "second").mat
        q = np.eye(d) - _range_projector(_hermitian_part(pt))
        penalty = penalty + partial_transpose(TensorMatrix(m, n, q), "second").mat
    if max_abs(penalty) < 1e-12:
        return []
    vals, zetas = seesaw_minimize(TensorMatrix(m, n, penalty), k, restarts, seed)
    proj = _range_projector(h)
    out = []
    for val, z in zip(vals, zetas):
        if val < 1e-10:
            z = _polish(z, proj, m, n, k)
            out.append(z / np.linalg.norm(z))
    return out


def _truncate(zeta: np.ndarray, m: int, n: int, k: int) -> np.ndarray:
    u, s, vh = np.linalg.svd(zeta.reshape(m, n))
    return ((u[:, :k] * s[:k]) @ vh[:k]).reshape(-1)


def _polish(zeta: np.ndarray, proj: np.ndarray, m: int, n: int, k: int, iters: int = 200) -> np.ndarray:
    """Alternate projections onto ``range(proj)`` and Schmidt rank ``<= k``."""
    for _ in range(iters):
        new = _truncate(proj @ zeta, m, n, k)
        new /= np.linalg.norm(new)
        if np.linalg.norm(new - zeta) < 1e-15:
            return new
        zeta = new
    return zeta


def _nnls_decompose(h: np.ndarray, vectors: list) -> Optional[list]:
    if not vectors:
        return None
    cols = []
    for zeta in vectors:
        p = np.outer(zeta, zeta.conj())
        cols.append(np.concatenate([p.real.ravel(), p.imag.ravel()]))
    a = np.stack(cols, axis=1)
    b = np.concatenate([h.real.ravel(), h.imag.ravel()])
    weights, _ = nnls(a, b, maxiter=50 * a.shape[1])
    total = weights.sum()
    if total <= 0:
        return None
    decomposition = [(float(w), vectors[i]) for i, w in enumerate(weights) if w > 1e-14 * total]
    return decomposition


def _pinv_psd(h: np.ndarray, rel: float = 1e-9) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    keep = w > rel * max(1.0, abs(w[-1]))
    return (v[:, keep] / w[keep]) @ dagger(v[:, keep])


def _removable_weight(zeta: np.ndarray, pinv: np.ndarray, proj: np.ndarray) -> float:
    """Largest ``lam`` with ``h - lam |zeta><zeta|`` PSD, given ``h^+`` and its range projector."""
    if np.linalg.norm(zeta - proj @ zeta) > 1e-7 * np.linalg.norm(zeta):
        return 0.0
    q = float(np.real(np.vdot(zeta, pinv @ zeta)))
    return 1.0 / q if q > 0 else 0.0


def _partner(zeta: np.ndarray, m: int, n: int) -> np.ndarray:
    """``a (x) conj(b)`` for a product vector ``a (x) b``: its projector is the partial transpose."""
    u, s, vh = np.linalg.svd(zeta.reshape(m, n))
    return np.kron(u[:, 0] * s[0], vh[0].conj())


def _greedy_decompose(
    h: np.ndarray, m: int, n: int, k: int, seed: int, budget: int, attempts: int = 4
) -> Optional[list]:
    """Peel off Schmidt-rank-``k`` terms from ``h`` one at a time.

    Each step removes the largest multiple of a candidate ``|zeta><zeta|``
    that keeps the remainder PSD (and PPT when ``k = 1``), so one of the two
    ranks drops. Candidates come from the range of the remainder when it is
    rank-deficient, otherwise from a fixed frame. At rank two the choice is
    made so that the last term also has Schmidt rank ``<= k``. Later attempts
    pick candidates at random instead of by largest weight.
    """
    rng = np.random.default_rng([seed, 104729])
    frame = _random_sr_vectors(m, n, k, budget, rng)
    if k == 1:
        frame = [np.kron(a, b) for a in _local_frame(m) for b in _local_frame(n)] + frame
    scale = max(1.0, max_abs(h))
    for attempt in range(attempts):
        terms = _greedy_pass(h, m, n, k, frame, scale, seed + 1000 * attempt,
                             rng if attempt else None)
        if terms is not None:
            return terms
    return None


def _greedy_pass(h, m, n, k, frame, scale, seed, rng) -> Optional[list]:
    rest = h.copy()
    terms = []
    for step in range(4 * m * n):
        size = max_abs(rest)
        if size <= RECON_TOL * scale / 10 or (step > 0 and size <= RECON_TOL * scale):
            return terms
        w = np.linalg.eigvalsh(rest)
        rank = int(np.sum(w > 1e-9 * max(1.0, abs(w[-1]))))
        cands = _range_vectors(rest, m, n, k, restarts=20, seed=seed + step) + frame
        pinv, proj = _pinv_psd(rest), _range_projector(rest)
        if k == 1:
            pt = _hermitian_part(partial_transpose(TensorMatrix(m, n, rest), "second").mat)
            pinv_g, proj_g = _pinv_psd(pt), _range_projector(pt)
        options = []
        for zeta in cands:
            lam = _removable_weight(zeta, pinv, proj)
            if k == 1 and lam > 0:
                lam = min(lam, _removable_weight(_partner(zeta, m, n), pinv_g, proj_g))
            if lam <= 1e-14 * scale:
                continue
            if rank == 2:
                left = rest - lam * np.outer(zeta, zeta.conj())
                wl, vl = np.linalg.eigh(_hermitian_part(left))
                if wl[-1] > RECON_TOL * scale and schmidt_rank(vl[:, -1], m, n) > k:
                    continue
            options.append((lam, zeta))
        if not options:
            return None
        if rng is None:
            lam, zeta = max(options, key=lambda o: o[0])
        else:
            lam, zeta = options[int(rng.integers(len(options)))]
        terms.append((lam, zeta))
        rest = _hermitian_part(rest - lam * np.outer(zeta, zeta.conj()))
    return None


def _refit(h: np.ndarray, terms: Optional[list]) -> Optional[list]:
    return _nnls_decompose(h, [z for _, z in terms]) if terms else terms


def search_decomposition(
    rho: TensorMatrix, k: int, budget: int = 200, seed: int = 0
) -> Optional[list]:
    """Try to write ``rho`` as ``sum w_i |zeta_i><zeta_i|`` with ``SR(zeta_i) <= k``.

    Heuristic: nonnegative least squares over a frame of Schmidt-rank-``k``
    vectors (local frames for ``k = 1``, random vectors, and vectors found in
    the range of ``rho``). Returns ``None`` when no exact fit is found; never
    returns an inexact decomposition.
    """
    m, n = rho.dims
    h = _hermitian_part(rho.mat)
    rng = np.random.default_rng([seed, 7919])
    vectors = []
    if k == 1:
        vectors += [np.kron(a, b) for a in _local_frame(m) for b in _local_frame(n)]
    vectors += _range_vectors(h, m, n, k, restarts=max(10, budget // 10), seed=seed)
    vectors += _random_sr_vectors(m, n, k, budget, rng)
    tol = RECON_TOL * max(1.0, max_abs(h))
    for attempt in (lambda: _nnls_decompose(h, vectors),
                    lambda: _refit(h, _greedy_decompose(h, m, n, k, seed, budget))):
        decomposition = attempt()
        if decomposition and max_abs(reassemble(decomposition, m * n) - h) <= tol:
            return decomposition
    return None


# ---------------------------------------------------------------------------
# certifiers


def schmidt_number_certify(
    rho: TensorMatrix, k: int, budget: int = 200, seed: int = 0, decompose: bool = True
) -> Certificate:
    """Decide ``rho in S_k`` where possible.

    Exact when ``k = min(m, n)`` (positivity) and when ``k = 1`` in ``2x2`` or
    ``2x3`` (partial transpose). Elsewhere the answer is one-sided.
    """
    _check_hermitian(rho)
    m, n = rho.dims
    ConeId(Family.SCHMIDT, k).check(m, n)
    h = _hermitian_part(rho.mat)
    base = dict(k=k, dims=(m, n), seed=seed)

    witness, value = _refute_schmidt(rho, k)
    if value <= -REFUTE_TOL:
        return Certificate(Verdict.REFUTED, witness=witness, value=value,
                           method=witness["kind"], **base)

    if k == min(m, n):
        return Certificate(Verdict.IN_CONE, decomposition=_eigen_decomposition(h),
                           method="psd", value=value, **base)

    decomposition = search_decomposition(rho, k, budget, seed) if decompose else None
    if decomposition is not None:
        return Certificate(Verdict.IN_CONE, decomposition=decomposition, method="decomposition",
                           samples_used=budget, value=value, **base)
    if k == 1 and (m, n) in PPT_EXACT_DIMS:
        # PPT held and is sufficient here; no explicit decomposition was found.
        return Certificate(Verdict.IN_CONE, method="ppt-exact", samples_used=budget,
                           value=value, **base)
    return Certificate(Verdict.UNKNOWN, method="inconclusive", samples_used=budget,
                       value=value, witness=witness, **base)


def block_positivity_certify(
    z: TensorMatrix, k: int, restarts: int = 50, seed: int = 0
) -> Certificate:
    """Decide ``z in BP_k``; refutation by see-saw over Schmidt-rank-``k`` vectors."""
    _check_hermitian(z)
    m, n = z.dims
    ConeId(Family.BLOCK_POSITIVE, k).check(m, n)
    h = _hermitian_part(z.mat)
    base = dict(k=k, dims=(m, n), seed=seed)

    w, v = np.linalg.eigh(h)
    if w[0] >= -PSD_TOL:
        return Certificate(Verdict.IN_CONE, decomposition=_eigen_decomposition(h), method="psd",
                           value=float(w[0]), **base)
    if k == min(m, n):
        zeta = v[:, 0]
        witness, value = _witness("eigenvector", np.outer(zeta.conj(), zeta), h, vector=zeta)
        return Certificate(Verdict.REFUTED, witness=witness, value=value, method="eigenvector",
                           **base)

    vals, zetas = seesaw_minimize(z, k, restarts, seed)
    best = int(np.argmin(vals))
    zeta = zetas[best] / np.linalg.norm(zetas[best])
    witness, value = _witness("seesaw", np.outer(zeta.conj(), zeta), h, vector=zeta)
    verdict = Verdict.REFUTED if value <= -REFUTE_TOL else Verdict.UNKNOWN
    return Certificate(verdict, witness=witness, value=value, method="seesaw",
                       restarts=restarts, **base)


def k_positive_certify(phi: LinearMap, k: int, restarts: int = 50, seed: int = 0) -> Certificate:
    return block_positivity_certify(phi.choi, k, restarts, seed)


def k_superpositive_certify(phi: LinearMap, k: int, budget: int = 200, seed: int = 0) -> Certificate:
    return schmidt_number_certify(phi.choi, k, budget, seed)


def certify(obj, cone: ConeId, *, restarts: int = 50, budget: int = 200, seed: int = 0) -> Certificate:
    fam = cone.family
    if fam is Family.SCHMIDT:
        return schmidt_number_certify(_as_state(obj), cone.k, budget, seed)
    if fam is Family.BLOCK_POSITIVE:
        return block_positivity_certify(_as_state(obj), cone.k, restarts, seed)
    if fam is Family.K_POSITIVE:
        return k_positive_certify(_as_map(obj), cone.k, restarts, seed)
    return k_superpositive_certify(_as_map(obj), cone.k, budget, seed)


def _as_state(obj) -> TensorMatrix:
    return obj.choi if isinstance(obj, LinearMap) else obj


def _as_map(obj) -> LinearMap:
    if isinstance(obj, LinearMap):
        return obj
    return LinearMap(obj.m, obj.n, obj)


def verify_certificate(cert: Certificate, z: TensorMatrix) -> bool:
    """Recheck a certificate against ``z`` without rerunning the search."""
    m, n = z.dims
    if cert.verdict is Verdict.REFUTED:
        op = np.asarray(cert.witness["operator"])
        value = float(np.real(np.sum(op * z.mat)))
        if value > -REFUTE_TOL:
            return False
        vec = cert.witness.get("vector")
        if cert.witness["kind"] in ("seesaw", "eigenvector") and vec is not None:
            return schmidt_rank(vec, m, n) <= (cert.k if cert.witness["kind"] == "seesaw" else min(m, n))
        return True
    if cert.verdict is Verdict.IN_CONE and cert.decomposition is not None:
        if any(w < 0 for w, _ in cert.decomposition):
            return False
        tol = RECON_TOL * max(1.0, max_abs(z.mat))
        if max_abs(reassemble(cert.decomposition, m * n) - z.mat) > tol:
            return False
        if cert.method == "psd":
            return True
        return all(schmidt_rank(zeta, m, n) <= cert.k for _, zeta in cert.decomposition)
    return cert.verdict is not Verdict.IN_CONE or cert.method in ("ppt-exact", "construction")


# ---------------------------------------------------------------------------
# generators


def random_sr_vector(m: int, n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    return _random_sr_vectors(m, n, k, 1, rng)[0]


def gen_sk_state(m: int, n: int, k: int, terms: int, seed: int) -> tuple[TensorMatrix, Certificate]:
    """A random element of ``S_k`` together with its defining decomposition."""
    if terms < 1:
        raise BadDims("terms must be positive")
    ConeId(Family.SCHMIDT, k).check(m, n)
    rng = np.random.default_rng(seed)
    decomposition = []
    for _ in range(terms):
        zeta = random_sr_vector(m, n, k, rng)
        decomposition.append((float(rng.uniform(0.1, 1.0)), zeta))
    rho = TensorMatrix(m, n, reassemble(decomposition, m * n))
    cert = Certificate(Verdict.IN_CONE, k=k, dims=(m, n), decomposition=decomposition,
                       method="construction", seed=seed)
    return rho, cert


def gen_kpos_witness(m: int, n: int, k: int) -> LinearMap:
    """``x -> k tr(x) I_n - J x J*`` with ``J`` the corner embedding ``C^m -> C^n``.

    Its Choi matrix is ``k I - |omega><omega|`` with ``omega = sum_i e_i (x) e_i``
    over ``min(m, n)`` terms: ``k``-positive, and not ``(k+1)``-positive.
    """
    ConeId(Family.K_POSITIVE, k).check(m, n)
    d = m * n
    omega = np.zeros(d, dtype=complex)
    for i in range(min(m, n)):
        omega[i * n + i] = 1.0
    c = k * np.eye(d, dtype=complex) - np.outer(omega, omega)
    return LinearMap(m, n, TensorMatrix(m, n, c))


def gen_cp_map(m: int, n: int, rank: int, seed: int) -> LinearMap:
    if rank < 1:
        raise BadDims("rank must be positive")
    rng = np.random.default_rng(seed)
    kraus = [rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m)) for _ in range(rank)]
    return kraus_to_choi(kraus)


def gen_bpk_member(m: int, n: int, k: int, seed: int) -> tuple[TensorMatrix, Certificate]:
    """A random element of ``BP_k``: a locally congruent witness plus a PSD part.

    Membership follows from the construction: local congruences preserve
    ``BP_k`` and the cone is closed under addition.
    """
    rng = np.random.default_rng(seed)
    w = gen_kpos_witness(m, n, k).choi.mat
    a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    ab = np.kron(a, b)
    psd, _ = gen_sk_state(m, n, min(m, n), 1, int(rng.integers(2**31)))
    eps = float(rng.uniform(0.0, 0.5))
    z = dagger(ab) @ w @ ab
    z = z / np.linalg.norm(z) + eps * psd.mat / np.linalg.norm(psd.mat)
    cert = Certificate(Verdict.IN_CONE, k=k, dims=(m, n), method="construction", seed=seed,
                       evidence={"witness_k": k, "local": [a, b], "psd_weight": eps})
    return TensorMatrix(m, n, z), cert
