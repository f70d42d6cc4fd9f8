"""Self-checking suites keyed to the statements they exercise.

Each entry is a deterministic function of the seed; budgets are moderate so
that ``all`` runs in seconds. The report is plain JSON-ready data.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .choivar import choi_by_assembly, choi_from_basis, detect_left_simple, random_hermitian_basis_pair
from .classify import Factored, NotPreserving, classify_separability_preserver, random_factorization
from .cones import (
    ConeId,
    Family,
    gen_cp_map,
    gen_kpos_witness,
    gen_sk_state,
    k_positive_certify,
)
from .mapspace import LinearMap, ad_map, choi_to_kraus, compose, identity_map, kraus_to_choi
from .matlin import TensorMatrix, max_abs
from .pairing import check_pairing_transform, map_dual, map_state_pair
from .transforms import (
    AdGlobal,
    AdLocal,
    Counterexample,
    Flip,
    NoCounterexample,
    TransformSpec,
    TransposeLeft,
    TransposeRight,
    compile_spec,
    exam_atoms,
    haar_unitary,
    local,
    preserves_cone_sampled,
    random_nonsingular,
)

SUITES = ("all", "choi", "duality", "preserve", "classify")


def _rand_map(m: int, n: int, rng) -> LinearMap:
    d = m * n
    c = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return LinearMap(m, n, TensorMatrix(m, n, c))


def _entry(label: str, check: str, ok: bool, **detail) -> dict:
    return {"label": label, "check": check, "pass": bool(ok), "detail": detail}


# ---------------------------------------------------------------------------
# choi


def _choi_theorem(rng) -> dict:
    worst_eig, worst_rt = np.inf, 0.0
    for (m, n) in ((2, 2), (2, 3), (3, 3)):
        for _ in range(10):
            phi = gen_cp_map(m, n, int(rng.integers(1, m * n + 1)), int(rng.integers(2**31)))
            worst_eig = min(worst_eig, float(np.linalg.eigvalsh(phi.choi.mat)[0]))
            back = kraus_to_choi(choi_to_kraus(phi))
            worst_rt = max(worst_rt, max_abs(back.choi.mat - phi.choi.mat))
    return _entry("Choi thm", "CP maps have PSD Choi matrices; Kraus round trip",
                  worst_eig >= -1e-10 and worst_rt <= 1e-9, min_eig=worst_eig, roundtrip=worst_rt)


def _basis_independence(rng) -> dict:
    worst = 0.0
    for m, n in ((2, 2), (3, 2)):
        bp = random_hermitian_basis_pair(m, rng)
        phi = _rand_map(m, n, rng)
        worst = max(worst, max_abs(choi_from_basis(bp, phi).mat - choi_by_assembly(phi).mat))
    return _entry("Sec 2", "Choi matrix is independent of the dual basis pair", worst <= 1e-9, residual=worst)


def _composition(rng) -> dict:
    worst = 0.0
    for (m, n) in ((2, 2), (2, 3)):
        for _ in range(5):
            s, t = random_nonsingular(m, rng), random_nonsingular(n, rng)
            sigma, tau = ad_map(s), ad_map(t)
            phi = _rand_map(m, n, rng)
            lhs = local(sigma, tau)(phi.choi).mat
            rhs = compose(tau, phi, map_dual(sigma)).choi.mat
            worst = max(worst, max_abs(lhs - rhs) / max(1.0, max_abs(lhs)))
    return _entry("Sec 3", "(sigma x tau)(C_phi) = C_{tau o phi o sigma*}", worst <= 1e-10, residual=worst)


def _left_simple(rng) -> dict:
    worst = 0.0
    for m, n in ((2, 2), (2, 3)):
        for _ in range(5):
            sigma = _rand_map(m, m, rng)
            theta = local(sigma, identity_map(n))
            got = detect_left_simple(theta)
            worst = np.inf if got is None else max(worst, max_abs(got.choi.mat - sigma.choi.mat))
    rejects = [
        detect_left_simple(compile_spec(TransformSpec(2, 2, atoms))) is None
        for atoms in ([TransposeRight()], [TransposeLeft(), TransposeRight()], [Flip()])
    ]
    return _entry("Prop 3.4", "left-simple transforms are detected and recovered",
                  worst <= 1e-9 and all(rejects), residual=float(worst), rejected=sum(rejects))


# ---------------------------------------------------------------------------
# duality


def _pairing_identity(rng) -> dict:
    worst = 0.0
    for _ in range(50):
        m, n = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        phi = _rand_map(m, n, rng)
        x = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        lhs = map_state_pair(phi, TensorMatrix(m, n, np.kron(x, y)))
        rhs = np.trace(phi(x) @ y.T)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return _entry("Eq 13", "<C_phi, x (x) y> = tr(phi(x) y^t)", worst <= 1e-10, residual=worst)


def _dual_atoms(rng) -> dict:
    worst = 0.0
    for _ in range(10):
        s, t = random_nonsingular(2, rng), random_nonsingular(3, rng)
        a = local(ad_map(s), ad_map(t)).dual()
        b = local(ad_map(s.T), ad_map(t.T))
        worst = max(worst, max_abs(a.matrix - b.matrix) / max(1.0, max_abs(b.matrix)))
    tt = compile_spec(TransformSpec(2, 3, [TransposeLeft(), TransposeRight()]))
    fl = compile_spec(TransformSpec(3, 3, [Flip()]))
    exact = bool(np.array_equal(tt.dual().matrix, tt.matrix) and np.array_equal(fl.dual().matrix, fl.matrix))
    return _entry("Sec 4", "(ad_s x ad_t)* = ad_{s^t} x ad_{t^t}; t x t and flip self-dual",
                  worst <= 1e-10 and exact, residual=worst, self_dual_exact=exact)


def _pairing_transform(rng) -> dict:
    tt = compile_spec(TransformSpec(2, 2, [TransposeLeft(), TransposeRight()]))
    tl = compile_spec(TransformSpec(2, 2, [TransposeLeft()]))
    tr = compile_spec(TransformSpec(2, 2, [TransposeRight()]))
    ok = check_pairing_transform(tt, tl, tr, seed=int(rng.integers(2**31)))
    neg = not check_pairing_transform(tt, tl, tt)
    return _entry("Prop 3.5", "<C^{t x id}_phi, z>_{t x t} = <phi, z>_{id x t}", ok and neg)


def _diagram_duality(rng) -> dict:
    worst = np.inf
    for m, n in ((2, 2), (3, 3)):
        for k in range(1, min(m, n) + 1):
            phi = gen_kpos_witness(m, n, k)
            for _ in range(10):
                rho, _ = gen_sk_state(m, n, k, int(rng.integers(1, 4)), int(rng.integers(2**31)))
                worst = min(worst, float(np.real(map_state_pair(phi, rho))))
    return _entry("Diagram 1", "P_k witnesses pair nonnegatively with S_k", worst >= -1e-10, min_value=worst)


def _witness_levels(rng) -> dict:
    phi = gen_kpos_witness(3, 3, 1)
    seed = int(rng.integers(2**31))
    at1 = k_positive_certify(phi, 1, restarts=20, seed=seed)
    at2 = k_positive_certify(phi, 2, restarts=20, seed=seed)
    return _entry("Diagram 1", "tr(x)I - x is 1-positive and not 2-positive",
                  not at1.refuted and at2.refuted, value_k1=at1.value, value_k2=at2.value)


# ---------------------------------------------------------------------------
# preserve


def _sampled(theta, family, k, samples, seed):
    return preserves_cone_sampled(theta, ConeId(family, k), samples=samples, seed=seed, restarts=10)


def _prop43(rng) -> dict:
    seed = int(rng.integers(2**31))
    worst, ok = np.inf, True
    for m, n in ((2, 2), (2, 3), (3, 3)):
        tt = compile_spec(TransformSpec(m, n, [TransposeLeft(), TransposeRight()]))
        for k in range(1, min(m, n) + 1):
            r = _sampled(tt, Family.SCHMIDT, k, 20, seed)
            ok &= isinstance(r, NoCounterexample)
            if isinstance(r, NoCounterexample):
                worst = min(worst, r.worst_margin)
    return _entry("Prop 4.3", "(t x t)(S_k) = S_k for every k", ok, worst_margin=worst)


def _thm44(rng) -> dict:
    seed = int(rng.integers(2**31))
    checked, ok = 0, True
    for m, n in ((2, 2), (3, 3)):
        for name, spec in exam_atoms(m, n, rng).items():
            theta = compile_spec(spec)
            for fam in (Family.SCHMIDT, Family.BLOCK_POSITIVE):
                for k in range(1, min(m, n) + 1):
                    ok &= isinstance(_sampled(theta, fam, k, 10, seed), NoCounterexample)
                    checked += 1
    return _entry("Thm 4.4", "generators preserve S_k and BP_k on samples", ok, cases=checked)


def _partial_transpose(rng) -> dict:
    tl = compile_spec(TransformSpec(2, 2, [TransposeLeft()]))
    seed = int(rng.integers(2**31))
    r2 = _sampled(tl, Family.SCHMIDT, 2, 20, seed)
    r1 = _sampled(tl, Family.SCHMIDT, 1, 20, seed)
    value = r2.image.value if isinstance(r2, Counterexample) else None
    ok = value is not None and abs(value + 1) <= 1e-12 and isinstance(r1, NoCounterexample)
    return _entry("Prop 4.3", "t x id breaks S_2 (eigenvalue -1) and keeps S_1 on 2x2", ok, witness_value=value)


def _thm61_local(rng) -> dict:
    seed = int(rng.integers(2**31))
    ok = True
    for m, n in ((2, 2), (2, 3)):
        s, t = random_nonsingular(m, rng), random_nonsingular(n, rng)
        theta = compile_spec(TransformSpec(m, n, [AdLocal(s, t)]))
        ok &= isinstance(_sampled(theta, Family.SCHMIDT, 1, 20, seed), NoCounterexample)
    return _entry("Thm 6.1", "local congruences preserve S_1 on samples", ok)


# ---------------------------------------------------------------------------
# classify


def _thm61_roundtrip(rng) -> dict:
    worst, failures = 0.0, 0
    for m, n in ((2, 2), (2, 3), (3, 3)):
        for _ in range(5):
            fac = random_factorization(m, n, rng)
            r = classify_separability_preserver(fac.superop(), seed=int(rng.integers(2**31)))
            if isinstance(r, Factored):
                worst = max(worst, r.residual)
            else:
                failures += 1
    return _entry("Thm 6.1", "canonical factorizations are recovered", failures == 0 and worst < 1e-8,
                  residual=worst, failures=failures)


def _thm61_global(rng) -> dict:
    certified = 0
    total = 0
    for m, n in ((2, 2), (2, 3)):
        for _ in range(5):
            v = haar_unitary(m * n, rng)
            r = classify_separability_preserver(compile_spec(TransformSpec(m, n, [AdGlobal(v)])))
            total += 1
            certified += isinstance(r, NotPreserving) and r.certificate.value <= -1e-10
    return _entry("Thm 6.1", "entangling unitaries are refuted with a witness", certified == total,
                  certified=certified, total=total)


_SUITES: dict[str, list[Callable]] = {
    "choi": [_choi_theorem, _basis_independence, _composition, _left_simple],
    "duality": [_pairing_identity, _dual_atoms, _pairing_transform, _diagram_duality, _witness_levels],
    "preserve": [_prop43, _thm44, _partial_transpose, _thm61_local],
    "classify": [_thm61_roundtrip, _thm61_global],
}


def run_suite(name: str, seed: int = 0) -> dict:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    names = list(SUITES[1:]) if name == "all" else [name]
    entries = []
    for suite in names:
        for idx, check in enumerate(_SUITES[suite]):
            rng = np.random.default_rng([seed, SUITES.index(suite), idx])
            entry = check(rng)
            entry["suite"] = suite
            entries.append(entry)
    return {"suite": name, "seed": seed, "pass": all(e["pass"] for e in entries), "entries": entries}
