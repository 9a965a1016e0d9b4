"""Exit criteria.  Each test prints one PASS/FAIL line with the worst deviation seen."""
import subprocess
import sys

import numpy as np

from qps.field import BasisIndex, basis_indices
from qps.kirkwood import kirkwood, kirkwood_from_wigner, wigner_from_kirkwood
from qps.mub import momentum_state, mub_family
from qps.operators import random_density, random_hermitian, schwinger_x, schwinger_z, xz_power
from qps.probe import ProbeConfig, SimulatedProbes, reconstruct_wigner, w11
from qps.wigner import (line_operator, line_operator_explicit, line_operator_mub, overlap,
                        radon_marginal, wigner_transform, wigner_transform_complex)

from conftest import ACCEPTANCE_LINES


def report(number, title, deviation, tol):
    ok = bool(deviation <= tol)
    line = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: max dev {deviation:.3e} (tol {tol:.0e})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def seeded_states(n, count, base):
    return [random_density(n, base + i) for i in range(count)]


def projector_matrix(vec):
    return np.outer(vec, vec.conj())


def test_01_orthogonality():
    worst = 0.0
    for n in (3, 5, 7):
        ops = [line_operator(q, p, n) for q in range(n) for p in range(n)]
        for i, a in enumerate(ops):
            for j, b in enumerate(ops):
                worst = max(worst, abs(np.trace(a @ b) / n - (i == j)))
    report(1, "line-operator orthogonality, N=3,5,7", worst, 1e-10)


def test_02_closure():
    worst = 0.0
    for n in (3, 5, 7, 11):
        total = sum(line_operator(q, p, n) for q in range(n) for p in range(n)) / n
        worst = max(worst, float(np.abs(total - np.eye(n)).max()))
    report(2, "closure, N=3,5,7,11", worst, 1e-10)


def test_03_three_line_operator_forms():
    worst = 0.0
    for n in (3, 5, 7):
        fam = mub_family(n)
        for q in range(n):
            for p in range(n):
                closed = line_operator(q, p, n)
                mubsum = line_operator_mub(q, p, fam)
                explicit = line_operator_explicit(q, p, fam)
                worst = max(worst, float(np.abs(closed - mubsum).max()), float(np.abs(closed - explicit).max()),
                            float(np.abs(mubsum - explicit).max()))
    report(3, "closed form = basis sum = phase sum, N=3,5,7", worst, 1e-10)


def test_04_product_formula():
    worst = 0.0
    for n in (3, 5, 7):
        for i in range(20):
            a = random_hermitian(n, 4000 + 2 * i)
            b = random_hermitian(n, 4001 + 2 * i)
            worst = max(worst, abs(overlap(wigner_transform(a), wigner_transform(b)) - np.trace(a @ b).real))
    report(4, "product formula, 20 Hermitian pairs per N=3,5,7", worst, 1e-10)


def test_05_marginality():
    worst = 0.0
    for n in (3, 5, 7):
        fam = mub_family(n)
        for rho in seeded_states(n, 20, 5000):
            w = wigner_transform(rho)
            for b in basis_indices(n):
                for m in range(n):
                    direct = (fam.state(m, b).conj() @ rho.matrix @ fam.state(m, b)).real
                    worst = max(worst, abs(radon_marginal(w, m, b) - direct))
            # the two textbook special cases, summed by hand
            for q0 in range(n):
                worst = max(worst, abs(w.values[q0, :].sum() / n - rho.matrix[q0, q0].real))
            for p0 in range(n):
                ket = momentum_state(p0, n)
                worst = max(worst, abs(w.values[:, p0].sum() / n - (ket.conj() @ rho.matrix @ ket).real),
                            abs(radon_marginal(w, (n - p0) % n, BasisIndex.shifted(0)) - w.values[:, p0].sum() / n))
    report(5, "marginality over every (m, b), 20 states per N=3,5,7", worst, 1e-10)


def test_06_reality_and_normalization():
    imag = norm = 0.0
    for n in (3, 5, 7, 11):
        for rho in seeded_states(n, 20, 6000):
            vals = wigner_transform_complex(rho)
            imag = max(imag, float(np.abs(vals.imag).max()))
            norm = max(norm, abs(vals.real.sum() / n - 1))
    report(6, "reality and normalization, N=3,5,7,11", max(imag, norm), 1e-10)


def test_07_wigner_kirkwood_both_directions():
    worst = 0.0
    for n in (3, 5, 7, 11):
        for rho in seeded_states(n, 20, 7000):
            k_direct = np.array([[np.trace(rho.matrix @ projector_matrix(momentum_state(p, n))
                                           @ projector_matrix(np.eye(n)[q]))
                                  for q in range(n)] for p in range(n)])
            w_direct = np.array([[np.trace(rho.matrix @ line_operator_mub(q, p, mub_family(n))).real
                                  for p in range(n)] for q in range(n)])
            w = wigner_transform(rho)
            k_from_w = kirkwood_from_wigner(w).values
            w_from_k = wigner_from_kirkwood(kirkwood(rho)).values
            worst = max(worst, float(np.abs(k_from_w - k_direct).max()),
                        float(np.abs(w_from_k - w_direct).max()),
                        float(np.abs(wigner_from_kirkwood(kirkwood_from_wigner(w)).values - w.values).max()))
    report(7, "W <-> K against direct traces and round trip, N=3,5,7,11", worst, 1e-10)


def test_08_probe_limit_and_error_model():
    limit = model = 0.0
    for n in (3, 5, 7):
        for rho in seeded_states(n, 10, 8000):
            k = kirkwood(rho).values
            for p in range(n):
                for q in range(n):
                    limit = max(limit, abs(w11(rho, p, q, 0.0, 1.0) - k[p, q]))
                    for eps1, s2 in ((1e-3, 1.0), (0.1, 1.0), (0.5, 2.0)):
                        expected = (np.exp(-s2 * eps1 ** 2 / 2) - 1) * (k[p, q] - rho.matrix[q, q].real / n)
                        model = max(model, abs(w11(rho, p, q, eps1, s2) - k[p, q] - expected))
    report(8, "W11(eps1=0) = Kirkwood", limit, 1e-12)
    report(8, "finite-coupling error model", model, 1e-12)


def test_09_reconstruction():
    rho = random_density(5, 9000)
    w = wigner_transform(rho).values
    err = np.abs(reconstruct_wigner(SimulatedProbes(rho), ProbeConfig(1e-3, 1.0, 1.0)).values - w).max()
    report(9, "probe-only reconstruction at eps1=1e-3, N=5", err, 1e-4)
    eps = np.array([1e-2, 5e-3, 2.5e-3])
    errs = [np.abs(reconstruct_wigner(SimulatedProbes(rho), ProbeConfig(e)).values - w).max() for e in eps]
    slope = np.polyfit(np.log(eps), np.log(errs), 1)[0]
    report(9, f"convergence order (slope {slope:.4f}) vs 2", abs(slope - 2.0), 0.1)


def test_10_mub_properties():
    worst = 0.0
    for n in (3, 5, 7, 11):
        fam = mub_family(n)
        w = np.exp(2j * np.pi / n)
        x, z = schwinger_x(n), schwinger_z(n)
        for b in fam.indices:
            u = fam.basis(b)
            worst = max(worst, float(np.abs(u.conj().T @ u - np.eye(n)).max()))
            op = z if b.is_reference else x @ np.linalg.matrix_power(z, b.shift)
            for m in range(n):
                worst = max(worst, float(np.abs(op @ u[:, m] - w ** m * u[:, m]).max()))
        for p in range(n):
            ket = momentum_state(p, n)
            worst = max(worst, float(np.abs(x @ ket - w ** (-p) * ket).max()))
        for i, b1 in enumerate(fam.indices):
            for b2 in fam.indices[i + 1:]:
                ov = np.abs(fam.basis(b1).conj().T @ fam.basis(b2)) ** 2
                worst = max(worst, float(np.abs(ov - 1 / n).max()))
    report(10, "MUB orthonormality, unbiasedness, eigen-relation, N=3,5,7,11", worst, 1e-10)


def test_11_schwinger_identities():
    worst = 0.0
    for n in (3, 5):
        x, z = schwinger_x(n), schwinger_z(n)
        w = np.exp(2j * np.pi / n)
        eye = np.eye(n)
        mp = np.linalg.matrix_power
        worst = max(worst, float(np.abs(z @ x - w * x @ z).max()))
        for b in range(n):
            worst = max(worst, float(np.abs(xz_power(b, n, n) - eye).max()))
            for k in range(1, n):
                lhs = xz_power(b, k, n)
                a = w ** ((k * (k - 1) // 2 * b) % n) * mp(x, k) @ mp(z, k * b)
                c = w ** ((-(k * (k + 1) // 2) * b) % n) * mp(z, k * b) @ mp(x, k)
                worst = max(worst, float(np.abs(lhs - a).max()), float(np.abs(lhs - c).max()))
        for k in range(1, n):
            for l in range(n):
                worst = max(worst, float(np.abs(mp(x, k) @ mp(z, l) - w ** ((-k * l) % n) * mp(z, l) @ mp(x, k)).max()))
    report(11, "Schwinger identities, exhaustive over b, k, l, N=3,5", worst, 1e-12)


def test_12_cli_verify():
    cmd = [sys.executable, "-m", "qps", "verify", "--n", "5", "--trials", "20", "--seed", "7"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    identical = first.stdout == second.stdout
    ok = first.returncode == 0 and second.returncode == 0 and identical
    report(12, f"qps verify exit codes ({first.returncode}, {second.returncode}), "
               f"byte-identical={identical}", 0.0 if ok else 1.0, 0.0)
