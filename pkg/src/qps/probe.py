"""Two-probe von Neumann measurement model and Wigner reconstruction from probe data.

Probe 1 couples impulsively to the position projector |q><q| with strength
eps1, probe 2 later to the momentum projector |p><p| with strength eps2.
For Gaussian probes the normalized correlations are

    <Q1 Q2> / (eps1 eps2) = Re W11(eps1)
    <P1 Q2> / (eps1 eps2) = 2 sigma^2 Im W11(eps1)

with W11(eps1) = sum_{q'} G_{q'q}(eps1) Tr(rho |q'><q'| |p><p| |q><q|) and
G_{q'q} = 1 if q' == q else exp(-sigma^2 eps1^2 / 2).  At eps1 = 0 this is
the Kirkwood value K(p, q).

Reconstruction only talks to a :class:`MeasurementProvider`; the state
itself stays behind :class:`SimulatedProbes`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Protocol, runtime_checkable

import numpy as np

from .field import Dimension, as_dimension
from .kirkwood import KirkwoodGrid, kirkwood_phase_sum, real_grid
from .mub import momentum_state
from .operators import DensityMatrix
from .wigner import WignerGrid

__all__ = [
    "ProbeConfig", "CorrelationRecord", "KirkwoodEstimate", "MixedConfigs",
    "MeasurementProvider", "SimulatedProbes", "w11", "w11_error_model",
    "probe_correlations", "correlation_grid", "kirkwood_from_correlations",
    "single_probe_position", "reconstruct_wigner",
]


class MixedConfigs(ValueError):
    pass


@dataclass(frozen=True)
class ProbeConfig:
    """Coupling strengths and probe-1 momentum variance.

    ``eps1 = 0`` is accepted and evaluates the exact weak-coupling limit.
    """

    eps1: float = 1e-3
    eps2: float = 1.0
    sigma_p1_sq: float = 1.0

    def __post_init__(self):
        for name in ("eps1", "eps2", "sigma_p1_sq"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.eps1 < 0:
            raise ValueError(f"eps1 must be >= 0, got {self.eps1}")
        if self.eps2 <= 0:
            raise ValueError(f"eps2 must be > 0, got {self.eps2}")
        if self.sigma_p1_sq <= 0:
            raise ValueError(f"sigma_p1_sq must be > 0, got {self.sigma_p1_sq}")

    @property
    def decay(self) -> float:
        """Off-diagonal weight exp(-sigma^2 eps1^2 / 2)."""
        return math.exp(-0.5 * self.sigma_p1_sq * self.eps1 ** 2)

    def halved(self) -> "ProbeConfig":
        return ProbeConfig(self.eps1 / 2, self.eps2, self.sigma_p1_sq)


@dataclass(frozen=True)
class CorrelationRecord:
    """Normalized probe correlations for one (p, q) pair."""

    p: int
    q: int
    qq_over_eps: float
    pq_over_eps: float
    config: ProbeConfig

    @property
    def raw_qq(self) -> float:
        """<Q1 Q2> before dividing by eps1 eps2."""
        return self.qq_over_eps * self.config.eps1 * self.config.eps2

    @property
    def raw_pq(self) -> float:
        return self.pq_over_eps * self.config.eps1 * self.config.eps2

    def w11(self) -> complex:
        return complex(self.qq_over_eps, self.pq_over_eps / (2 * self.config.sigma_p1_sq))


@dataclass(frozen=True)
class KirkwoodEstimate(KirkwoodGrid):
    """Kirkwood grid inferred from probe data, tagged with how it was obtained."""

    config: ProbeConfig | None = None
    extrapolated: bool = False


def _matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def w11(rho, p: int, q: int, eps1: float, sigma_p1_sq: float, n: Dimension | int | None = None) -> complex:
    """Literal sum over q' of G_{q'q}(eps1) Tr(rho P_{q'} P_p P_q)."""
    m = _matrix(rho)
    dim = as_dimension(m.shape[0] if n is None else n)
    ket_p = momentum_state(p, dim)
    decay = math.exp(-0.5 * sigma_p1_sq * eps1 ** 2)
    # Tr(rho |q'><q'|p><p|q><q|) = <q|rho|q'> <q'|p> <p|q>
    terms = m[q, :] * ket_p * np.conj(ket_p[q])
    weights = np.full(dim.n, decay)
    weights[q] = 1.0
    return complex(np.sum(weights * terms))


def w11_error_model(k_value: complex, diag_q: float, eps1: float, sigma_p1_sq: float, n: Dimension | int) -> complex:
    """W11(eps1) - K(p, q) = (exp(-sigma^2 eps1^2/2) - 1) (K(p, q) - <q|rho|q>/N)."""
    decay = math.exp(-0.5 * sigma_p1_sq * eps1 ** 2)
    return (decay - 1.0) * (k_value - diag_q / int(n))


def probe_correlations(rho, p: int, q: int, config: ProbeConfig, n: Dimension | int | None = None) -> CorrelationRecord:
    val = w11(rho, p, q, config.eps1, config.sigma_p1_sq, n)
    return CorrelationRecord(p, q, val.real, 2 * config.sigma_p1_sq * val.imag, config)


def single_probe_position(rho, projector_q: int, eps: float, n: Dimension | int | None = None) -> float:
    """Pointer displacement eps <q0|rho|q0> of one probe coupled to |q0><q0|."""
    if eps <= 0:
        raise ValueError(f"single-probe coupling must be > 0, got {eps}")
    m = _matrix(rho)
    if n is not None and m.shape[0] != int(n):
        raise ValueError(f"state is {m.shape[0]}-dimensional, expected {int(n)}")
    return float(eps * m[projector_q, projector_q].real)


@runtime_checkable
class MeasurementProvider(Protocol):
    """Source of simulated probe readouts; all that reconstruction may see."""

    dim: Dimension

    def correlations(self, p: int, q: int, config: ProbeConfig) -> CorrelationRecord: ...

    def single_probe_position(self, q: int, eps: float) -> float: ...


class SimulatedProbes:
    """Measurement provider backed by a known density matrix."""

    def __init__(self, rho, n: Dimension | int | None = None):
        self._rho = _matrix(rho)
        self.dim = as_dimension(self._rho.shape[0] if n is None else n)

    def correlations(self, p: int, q: int, config: ProbeConfig) -> CorrelationRecord:
        return probe_correlations(self._rho, p, q, config, self.dim)

    def single_probe_position(self, q: int, eps: float) -> float:
        return single_probe_position(self._rho, q, eps, self.dim)


def correlation_grid(provider: MeasurementProvider, config: ProbeConfig) -> list[list[CorrelationRecord]]:
    """Records for every (p, q), as ``grid[p][q]``."""
    n = provider.dim.n
    return [[provider.correlations(p, q, config) for q in range(n)] for p in range(n)]


def _flatten(records) -> list[CorrelationRecord]:
    out = []
    for r in records:
        if isinstance(r, CorrelationRecord):
            out.append(r)
        else:
            out.extend(_flatten(r))
    return out


def _estimate(records: list[CorrelationRecord], dim: Dimension) -> tuple[np.ndarray, ProbeConfig]:
    configs = {r.config for r in records}
    if len(configs) != 1:
        raise MixedConfigs(f"records span {len(configs)} probe configurations")
    k = np.full((dim.n, dim.n), np.nan + 0j)
    for r in records:
        k[r.p, r.q] = r.w11()
    if np.isnan(k.real).any():
        raise ValueError("correlation records do not cover every (p, q) point")
    return k, configs.pop()


def kirkwood_from_correlations(records: Iterable, n: Dimension | int | None = None,
                               fine_records: Iterable | None = None) -> KirkwoodEstimate:
    """Estimate K(p, q) = Re W11 + i Im W11 from normalized probe correlations.

    If ``fine_records`` taken at half the coupling are supplied, the two
    estimates are combined by Richardson extrapolation in eps1^2,
    ``(4 K(eps1/2) - K(eps1)) / 3``, which cancels the leading error term.
    """
    recs = _flatten(records)
    if not recs:
        raise ValueError("no correlation records")
    dim = as_dimension(n if n is not None else math.isqrt(len(recs)))
    k, config = _estimate(recs, dim)
    if fine_records is None:
        return KirkwoodEstimate(k, dim, config, False)
    k_fine, fine_config = _estimate(_flatten(fine_records), dim)
    if fine_config != config.halved():
        raise MixedConfigs(f"fine records use {fine_config}, expected {config.halved()}")
    return KirkwoodEstimate((4 * k_fine - k) / 3, dim, config, True)


def reconstruct_wigner(source, config: ProbeConfig = ProbeConfig(), n: Dimension | int | None = None,
                       extrapolate: bool = False, single_eps: float = 1.0) -> WignerGrid:
    """Wigner grid assembled purely from probe expectation values.

    ``source`` is a :class:`MeasurementProvider`, or a density matrix that
    gets wrapped in :class:`SimulatedProbes`.  The Kirkwood estimate from the
    two-probe correlations feeds the phase sum; the diagonal terms
    <q|rho|q> - <q+h|rho|q+h> come from separate single-probe runs with
    coupling ``single_eps``.
    """
    provider = source if isinstance(source, MeasurementProvider) else SimulatedProbes(source, n)
    dim = provider.dim
    coarse = correlation_grid(provider, config)
    fine = correlation_grid(provider, config.halved()) if extrapolate else None
    k = kirkwood_from_correlations(coarse, dim, fine)
    diag = np.array([provider.single_probe_position(q, single_eps) / single_eps for q in range(dim.n)])
    idx = np.arange(dim.n)
    vals = kirkwood_phase_sum(k.values, dim) + (diag - diag[(idx + dim.half) % dim.n])[:, None]
    return real_grid(vals, dim)
