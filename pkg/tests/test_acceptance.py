"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a PASS/FAIL line; they are printed in the pytest terminal
summary, and directly when this file is run as a script.
"""

import subprocess
import sys

import numpy as np

from choicone.choivar import detect_left_simple
from choicone.classify import Factored, NotPreserving, classify_separability_preserver, random_factorization
from choicone.cones import (
    ConeId,
    Family,
    gen_cp_map,
    gen_kpos_witness,
    gen_sk_state,
    k_positive_certify,
)
from choicone.mapspace import (
    LinearMap,
    ad_map,
    choi_to_kraus,
    compose,
    identity_map,
    kraus_to_choi,
)
from choicone.matlin import TensorMatrix, kron
from choicone.pairing import check_pairing_transform, map_dual, map_state_pair
from choicone.transforms import (
    AdGlobal,
    Counterexample,
    NoCounterexample,
    TransformSpec,
    TransposeLeft,
    TransposeRight,
    Flip,
    compile_spec,
    exam_atoms,
    haar_unitary,
    local,
    preserves_cone_sampled,
    random_nonsingular,
)

from conftest import ACCEPTANCE_LINES

SHAPES = ((2, 2), (2, 3), (3, 3))


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def crandn(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def rand_map(rng, m, n):
    return LinearMap(m, n, TensorMatrix(m, n, crandn(rng, m * n, m * n)))


def spec(m, n, *atoms):
    return compile_spec(TransformSpec(m, n, list(atoms)))


def test_criterion_01_choi_correspondence():
    rng = np.random.default_rng(1)
    min_eig, worst_rt = np.inf, 0.0
    for m, n in SHAPES:
        for _ in range(200):
            phi = gen_cp_map(m, n, int(rng.integers(1, m * n + 1)), int(rng.integers(2**31)))
            min_eig = min(min_eig, float(np.linalg.eigvalsh(phi.choi.mat)[0]))
        for _ in range(200):
            a = crandn(rng, m * n, int(rng.integers(1, m * n + 1)))
            phi = LinearMap(m, n, TensorMatrix(m, n, a @ a.conj().T))
            back = kraus_to_choi(choi_to_kraus(phi))
            worst_rt = max(worst_rt, float(np.abs(back.choi.mat - phi.choi.mat).max()))
    report(1, "Choi correspondence", min_eig >= -1e-10 and worst_rt <= 1e-9,
           f"min eig {min_eig:.2e}, round trip {worst_rt:.2e}")


def test_criterion_02_pairing_identity():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(1000):
        m, n = SHAPES[int(rng.integers(3))]
        phi = rand_map(rng, m, n)
        x, y = crandn(rng, m, m), crandn(rng, n, n)
        lhs = map_state_pair(phi, TensorMatrix(m, n, kron(x, y)))
        worst = max(worst, abs(lhs - np.trace(phi(x) @ y.T)))
    report(2, "pairing identity <C_phi, x(x)y> = tr(phi(x) y^t)", worst <= 1e-10, f"max error {worst:.2e}")


def test_criterion_03_composition_identity():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(100):
        m, n = SHAPES[int(rng.integers(3))]
        sigma, tau, phi = rand_map(rng, m, m), rand_map(rng, n, n), rand_map(rng, m, n)
        lhs = local(sigma, tau)(phi.choi).mat
        rhs = compose(tau, phi, map_dual(sigma)).choi.mat
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    report(3, "composition identity (sigma(x)tau)(C_phi) = C_{tau phi sigma*}", worst <= 1e-10,
           f"max error {worst:.2e}")


def test_criterion_04_dual_identities():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(50):
        m, n = SHAPES[int(rng.integers(3))]
        s, t = random_nonsingular(m, rng), random_nonsingular(n, rng)
        dual = local(ad_map(s), ad_map(t)).dual()
        worst = max(worst, float(np.abs(dual.matrix - local(ad_map(s.T), ad_map(t.T)).matrix).max()))
    exact = all(
        np.array_equal(th.dual().matrix, th.matrix)
        for th in [spec(m, n, TransposeLeft(), TransposeRight()) for m, n in SHAPES]
        + [spec(d, d, Flip()) for d in (2, 3)]
    )
    report(4, "dual identities", worst <= 1e-10 and exact,
           f"ad dual error {worst:.2e}, t(x)t and flip self-dual exactly: {exact}")


def test_criterion_05_pairing_transform():
    tt = spec(2, 2, TransposeLeft(), TransposeRight())
    ok = check_pairing_transform(tt, spec(2, 2, TransposeLeft()), spec(2, 2, TransposeRight())) is True
    report(5, "check_pairing_transform(t(x)t, t(x)id, id(x)t)", ok, f"returned {ok}")


def test_criterion_06_detect_left_simple():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(50):
        m, n = SHAPES[int(rng.integers(3))]
        sigma = rand_map(rng, m, m)
        got = detect_left_simple(local(sigma, identity_map(n)))
        worst = np.inf if got is None else max(worst, float(np.abs(got.choi.mat - sigma.choi.mat).max()))
    absent = [detect_left_simple(spec(m, m, *atoms)) is None
              for m in (2, 3)
              for atoms in ([TransposeRight()], [TransposeLeft(), TransposeRight()], [Flip()])]
    report(6, "detect_left_simple", worst <= 1e-9 and all(absent),
           f"recovery error {worst:.2e}, rejected {sum(absent)}/{len(absent)}")


def test_criterion_07_atoms_preserve_cones():
    rng = np.random.default_rng(7)
    failures, cases = [], 0
    for m, n in SHAPES:
        for name, sp in exam_atoms(m, n, rng).items():
            theta = compile_spec(sp)
            for fam in (Family.SCHMIDT, Family.BLOCK_POSITIVE):
                for k in range(1, min(m, n) + 1):
                    cases += 1
                    res = preserves_cone_sampled(theta, ConeId(fam, k), samples=200, seed=7)
                    if not isinstance(res, NoCounterexample):
                        failures.append(f"{name} {fam.value} {k} at {m}x{n}")
    tl = spec(2, 2, TransposeLeft())
    r2 = preserves_cone_sampled(tl, ConeId(Family.SCHMIDT, 2), samples=200, seed=7)
    r1 = preserves_cone_sampled(tl, ConeId(Family.SCHMIDT, 1), samples=200, seed=7)
    eig = r2.image.value if isinstance(r2, Counterexample) else None
    ok = not failures and eig is not None and abs(eig + 1) <= 1e-12 and isinstance(r1, NoCounterexample)
    report(7, "generators preserve S_k and BP_k; t(x)id breaks S_2 only", ok,
           f"{cases - len(failures)}/{cases} atom cases clean, t(x)id witness eigenvalue {eig}, "
           f"S_1 {'clean' if isinstance(r1, NoCounterexample) else 'counterexample'}")


def test_criterion_08_classification():
    rng = np.random.default_rng(8)
    worst, bad = 0.0, 0
    for m, n in SHAPES:
        for _ in range(100):
            fac = random_factorization(m, n, rng)
            res = classify_separability_preserver(fac.superop())
            if isinstance(res, Factored):
                worst = max(worst, res.residual)
            else:
                bad += 1
    certified, drawn = 0, 0
    for m, n in ((2, 2), (2, 3)):
        got = 0
        while got < 100:
            res = classify_separability_preserver(spec(m, n, AdGlobal(haar_unitary(m * n, rng))))
            drawn += 1
            if isinstance(res, Factored):
                continue  # accidentally local
            got += 1
            certified += isinstance(res, NotPreserving) and res.certificate.method == "ppt"
    ok = bad == 0 and worst < 1e-8 and certified == 200
    report(8, "classification round trip and refutation", ok,
           f"{300 - bad}/300 factored, max residual {worst:.2e}, {certified}/200 PPT-certified "
           f"from {drawn} draws")


def test_criterion_09_diagram_duality():
    rng = np.random.default_rng(9)
    worst = np.inf
    for _ in range(500):
        m, n = SHAPES[int(rng.integers(3))]
        k = int(rng.integers(1, min(m, n) + 1))
        rho, _ = gen_sk_state(m, n, k, int(rng.integers(1, 5)), int(rng.integers(2**31)))
        worst = min(worst, float(map_state_pair(gen_kpos_witness(m, n, k), rho).real))
    w = gen_kpos_witness(3, 3, 1)
    c1 = k_positive_certify(w, 1, restarts=50, seed=9)
    c2 = k_positive_certify(w, 2, restarts=50, seed=9)
    ok = worst >= -1e-10 and not c1.refuted and c2.refuted
    report(9, "k-positive witnesses pair nonnegatively with S_k", ok,
           f"min pairing {worst:.3e}, k=1 best {c1.value:.2e}, k=2 value {c2.value:.3f}")


def test_criterion_10_determinism():
    cmd = [sys.executable, "-m", "choicone.cli", "verify", "--suite", "all", "--seed", "7"]
    runs = [subprocess.run(cmd, capture_output=True, timeout=100) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and len(runs[0].stdout) > 0
    ok = same and all(r.returncode == 0 for r in runs)
    report(10, "verify --suite all --seed 7 is byte-identical", ok,
           f"exit codes {[r.returncode for r in runs]}, {len(runs[0].stdout)} bytes, identical: {same}")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
