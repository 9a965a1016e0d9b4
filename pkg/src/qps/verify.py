"""Property suites run by ``qps verify``.

Each check returns the worst deviation it saw; a check passes when that
deviation is within its tolerance.  Everything is seeded, so a report is
reproducible byte for byte.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .field import Dimension, basis_indices, iter_points, line_point
from .kirkwood import kirkwood, kirkwood_from_wigner, wigner_from_kirkwood
from .mub import mub_family
from .operators import (DEFAULT_TOL, random_density, random_hermitian, schwinger_x,
                        schwinger_z, weyl, xz_power)
from .probe import ProbeConfig, SimulatedProbes, reconstruct_wigner, w11
from .wigner import (line_operator_explicit, line_operator_mub, line_operator_table,
                     overlap, radon_marginal, wigner_transform, wigner_transform_complex)

__all__ = ["CheckResult", "run_suite", "format_report", "convergence_order"]

# reconstruction budget at the default coupling, independent of --tol
RECONSTRUCTION_TOL = 1e-4
ORDER_TOL = 0.1
ORDER_EPS = (1e-2, 5e-3, 2.5e-3)


@dataclass(frozen=True)
class CheckResult:
    name: str
    relation: str
    deviation: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tol)


def _states(dim: Dimension, trials: int, seed: int):
    seeds = np.random.SeedSequence(seed).spawn(trials)
    return [random_density(dim, np.random.default_rng(s)) for s in seeds]


def _hermitians(dim: Dimension, trials: int, seed: int):
    seeds = np.random.SeedSequence([seed, 1]).spawn(2 * trials)
    ops = [random_hermitian(dim, np.random.default_rng(s)) for s in seeds]
    return list(zip(ops[::2], ops[1::2]))


def check_orthogonality(dim: Dimension) -> float:
    n = dim.n
    flat = line_operator_table(dim).reshape(n * n, n, n)
    gram = np.einsum("aij,bji->ab", flat, flat) / n
    return float(np.max(np.abs(gram - np.eye(n * n))))


def check_closure(dim: Dimension) -> float:
    total = line_operator_table(dim).sum(axis=(0, 1)) / dim.n
    return float(np.max(np.abs(total - np.eye(dim.n))))


def check_line_operator_forms(dim: Dimension) -> float:
    mubs = mub_family(dim)
    table = line_operator_table(dim)
    worst = 0.0
    for q, p in iter_points(dim):
        a = line_operator_mub(q, p, mubs)
        b = line_operator_explicit(q, p, mubs)
        worst = max(worst, float(np.max(np.abs(table[q, p] - a))),
                    float(np.max(np.abs(table[q, p] - b))))
    return worst


def check_product_formula(dim: Dimension, trials: int, seed: int) -> float:
    worst = 0.0
    for a, b in _hermitians(dim, trials, seed):
        lhs = overlap(wigner_transform(a), wigner_transform(b))
        worst = max(worst, abs(lhs - np.trace(a @ b).real))
    return worst


def check_marginality(dim: Dimension, states) -> float:
    mubs = mub_family(dim)
    worst = 0.0
    for rho in states:
        w = wigner_transform(rho)
        for b in basis_indices(dim):
            for m in range(dim.n):
                worst = max(worst, abs(radon_marginal(w, m, b) - mubs.expectation(rho, m, b)))
    return worst


def check_reality_normalization(dim: Dimension, states) -> float:
    worst = 0.0
    for rho in states:
        vals = wigner_transform_complex(rho)
        worst = max(worst, float(np.max(np.abs(vals.imag))),
                    abs(vals.real.sum() / dim.n - 1.0))
    return worst


def check_wigner_to_kirkwood(dim: Dimension, states) -> float:
    worst = 0.0
    for rho in states:
        k = kirkwood(rho).values
        worst = max(worst, float(np.max(np.abs(kirkwood_from_wigner(wigner_transform(rho)).values - k))))
    return worst


def check_kirkwood_to_wigner(dim: Dimension, states) -> float:
    worst = 0.0
    for rho in states:
        w = wigner_transform(rho).values
        worst = max(worst, float(np.max(np.abs(wigner_from_kirkwood(kirkwood(rho)).values - w))))
    return worst


def check_probe_limit(dim: Dimension, states) -> float:
    worst = 0.0
    for rho in states:
        k = kirkwood(rho).values
        for q, p in iter_points(dim):
            worst = max(worst, abs(w11(rho, p, q, 0.0, 1.0) - k[p, q]))
    return worst


def check_probe_error_model(dim: Dimension, states, config: ProbeConfig = ProbeConfig(1e-2)) -> float:
    worst = 0.0
    for rho in states:
        k = kirkwood(rho).values
        diag = rho.diagonal
        for q, p in iter_points(dim):
            model = (config.decay - 1.0) * (k[p, q] - diag[q] / dim.n)
            got = w11(rho, p, q, config.eps1, config.sigma_p1_sq) - k[p, q]
            worst = max(worst, abs(got - model))
    return worst


def check_reconstruction(dim: Dimension, states) -> float:
    worst = 0.0
    for rho in states:
        w = wigner_transform(rho).values
        rec = reconstruct_wigner(SimulatedProbes(rho), ProbeConfig()).values
        worst = max(worst, float(np.max(np.abs(rec - w))))
    return worst


def convergence_order(rho, eps_values=ORDER_EPS, sigma_p1_sq: float = 1.0) -> float:
    """Least-squares slope of log(max error) against log(eps1)."""
    w = wigner_transform(rho).values
    provider = SimulatedProbes(rho)
    errs = [float(np.max(np.abs(reconstruct_wigner(provider, ProbeConfig(e, 1.0, sigma_p1_sq)).values - w)))
            for e in eps_values]
    slope, _ = np.polyfit(np.log(eps_values), np.log(errs), 1)
    return float(slope)


def check_convergence_order(dim: Dimension, states) -> float:
    return max(abs(convergence_order(rho) - 2.0) for rho in states)


def check_mub(dim: Dimension) -> float:
    fam = mub_family(dim)
    worst = max(fam.max_violations().values())
    for b in fam.indices:
        u = fam.basis(b)
        worst = max(worst, float(np.max(np.abs(u @ u.conj().T - np.eye(dim.n)))))
    return worst


def check_schwinger(dim: Dimension) -> float:
    n = dim.n
    x, z = schwinger_x(dim), schwinger_z(dim)
    eye = np.eye(n)
    devs = [np.abs(z @ x - dim.omega * x @ z),
            np.abs(np.linalg.matrix_power(x, n) - eye),
            np.abs(np.linalg.matrix_power(z, n) - eye)]
    for b in range(n):
        devs.append(np.abs(xz_power(b, n, dim) - eye))
        for k in range(1, n):
            lhs = xz_power(b, k, dim)
            devs.append(np.abs(lhs - dim.phase(k * (k - 1) // 2 * b) * weyl(k, k * b, dim)))
            zx = np.linalg.matrix_power(z, (k * b) % n) @ np.linalg.matrix_power(x, k)
            devs.append(np.abs(lhs - dim.phase(-(k * (k + 1) // 2) * b) * zx))
    for k in range(1, n):
        for l in range(n):
            zx = np.linalg.matrix_power(z, l) @ np.linalg.matrix_power(x, k)
            devs.append(np.abs(weyl(k, l, dim) - dim.phase(-k * l) * zx))
    return float(max(np.max(d) for d in devs))


def run_suite(n: Dimension, trials: int = 20, seed: int = 0, tol: float = DEFAULT_TOL,
              progress: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    states = _states(n, trials, seed)
    probe_states = states[: max(1, min(trials, 3))]
    plan = [
        ("orthogonality", "(1/N) Tr(P_qp P_q'p') = d d", lambda: check_orthogonality(n), tol),
        ("closure", "(1/N) sum P_qp = I", lambda: check_closure(n), tol),
        ("line-operator forms", "closed form = basis sum = phase sum", lambda: check_line_operator_forms(n), tol),
        ("product formula", "(1/N) sum W_A W_B = Tr(AB)", lambda: check_product_formula(n, trials, seed), tol),
        ("marginality", "(1/N) sum_line W = <m;b|rho|m;b>", lambda: check_marginality(n, states), tol),
        ("reality+normalization", "Im W = 0, (1/N) sum W = 1", lambda: check_reality_normalization(n, states), tol),
        ("W -> K", "K = (1/N) sum W W_PpPq", lambda: check_wigner_to_kirkwood(n, states), tol),
        ("K -> W round trip", "W from K phase sum", lambda: check_kirkwood_to_wigner(n, states), tol),
        ("probe limit", "W11(eps1=0) = K", lambda: check_probe_limit(n, states), tol),
        ("probe error model", "W11 - K = (G - 1)(K - rho_qq/N)", lambda: check_probe_error_model(n, states), tol),
        ("probe reconstruction", "max |W_probe - W| at eps1=1e-3", lambda: check_reconstruction(n, probe_states),
         RECONSTRUCTION_TOL),
        ("convergence order", "|slope - 2| in eps1", lambda: check_convergence_order(n, probe_states), ORDER_TOL),
        ("MUB", "orthonormal, unbiased 1/N, eigen-relation", lambda: check_mub(n), tol),
        ("Schwinger", "ZX = wXZ, (XZ^b)^k identities", lambda: check_schwinger(n), tol),
    ]
    results = []
    for name, relation, fn, t in plan:
        dev = fn()
        if not math.isfinite(dev):
            dev = math.inf
        res = CheckResult(name, relation, dev, t)
        results.append(res)
        if progress is not None:
            progress(res)
    return results


def format_report(n: Dimension, trials: int, seed: int, results: list[CheckResult]) -> str:
    lines = [f"qps verify  N={n.n}  trials={trials}  seed={seed}", ""]
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name:<{width}}  dev={r.deviation:.3e}  tol={r.tol:.1e}  {r.relation}")
    failed = sum(not r.passed for r in results)
    lines.append("")
    lines.append(f"{len(results) - failed}/{len(results)} properties hold" if failed == 0
                 else f"{failed} of {len(results)} properties FAILED")
    return "\n".join(lines) + "\n"
