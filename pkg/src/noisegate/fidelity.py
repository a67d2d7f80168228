"""Average fidelity of a channel: closed form, Monte Carlo, and per-outcome terms.

For a channel ``E`` on a ``d``-dimensional system the Haar average of
``<psi|E(|psi><psi|)|psi>`` is ``(d + Tr_HS E) / (d (d + 1))``.
:func:`average_fidelity` evaluates that formula; :func:`average_fidelity_mc`
estimates the integral directly by sampling, which makes the two an
independent cross-check of each other.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import CPMap, apply, compose, dual, hs_trace
from .noise_models import dephasing
from .operator_core import DEFAULT_TOL, pauli
from .protocols import Protocol, average_operation
from .sampling import random_pure_states

MC_CHUNK = 10_000


class FidelityMethod(str, enum.Enum):
    FORMULA = "formula"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class FidelityReport:
    value: float
    method: FidelityMethod = FidelityMethod.FORMULA
    n_samples: int = 0
    std_error: float = 0.0

    def __post_init__(self):
        if not -DEFAULT_TOL <= self.value <= 1 + DEFAULT_TOL:
            raise ValueError(f"average fidelity {self.value} outside [0, 1]")

    def __float__(self):
        return self.value


def pure_fidelity(rho, psi) -> float:
    """``<psi|rho|psi>``."""
    rho = np.asarray(rho, dtype=complex)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if rho.shape != (psi.size, psi.size):
        raise ValueError("state and vector dimensions differ")
    return float(np.real(psi.conj() @ rho @ psi))


def average_fidelity(e: CPMap) -> FidelityReport:
    if not e.is_square:
        raise ValueError("average fidelity needs a map from a system to itself")
    d = e.dim_in
    return FidelityReport((d + hs_trace(e)) / (d * (d + 1)))


def _mc_chunk(kraus: np.ndarray, d: int, size: int, seed: int) -> tuple[float, float]:
    psi = random_pure_states(size, d, np.random.default_rng(seed))
    # <psi|E(|psi><psi|)|psi> = sum_j |<psi|K_j|psi>|^2
    amps = np.einsum("na,jab,nb->nj", psi.conj(), kraus, psi)
    vals = np.sum(np.abs(amps) ** 2, axis=1)
    return float(vals.sum()), float((vals ** 2).sum())


def average_fidelity_mc(e: CPMap, n: int, seed: int = 0, workers: int = 1) -> FidelityReport:
    """Monte Carlo estimate over ``n`` Haar-random input states.

    Samples are drawn in chunks of ``MC_CHUNK``; chunk ``c`` uses seed
    ``seed + c``, so the estimate does not depend on ``workers``.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if not e.is_square:
        raise ValueError("average fidelity needs a map from a system to itself")
    sizes = [MC_CHUNK] * (n // MC_CHUNK)
    if n % MC_CHUNK:
        sizes.append(n % MC_CHUNK)
    kraus = e.kraus_array
    jobs = [(kraus, e.dim_in, size, seed + c) for c, size in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda job: _mc_chunk(*job), jobs))
    else:
        parts = [_mc_chunk(*job) for job in jobs]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = s1 / n
    if n > 1:
        var = max(s2 - n * mean * mean, 0.0) / (n - 1)
        err = float(np.sqrt(var / n))
    else:
        err = 0.0
    return FidelityReport(min(max(mean, 0.0), 1.0), FidelityMethod.MONTE_CARLO, n, err)


def protocol_fidelity(p: Protocol, noise: CPMap) -> FidelityReport:
    return average_fidelity(average_operation(p, noise))


@dataclass(frozen=True)
class AppendixTerm:
    """Pauli components for one outcome against the dephasing noise ``E_{0i}``.

    ``C(1) = 1 + a.sigma``, ``C(sigma_i) = b.sigma``,
    ``I*(1) = gamma + delta.sigma``, ``I*(sigma_i) = epsilon + zeta.sigma``
    and ``f = gamma + a.delta + b.zeta``.
    """

    gamma: float
    epsilon: float
    delta: np.ndarray
    zeta: np.ndarray
    a: np.ndarray
    b: np.ndarray
    f: float

    def violations(self, tol: float = DEFAULT_TOL) -> list[str]:
        out = []
        for sign in (1, -1):
            s = "+" if sign > 0 else "-"
            if np.linalg.norm(self.a + sign * self.b) > 1 + tol:
                out.append(f"|a{s}b| > 1")
            if np.linalg.norm(self.delta + sign * self.zeta) > self.gamma + sign * self.epsilon + tol:
                out.append(f"|delta{s}zeta| > gamma{s}epsilon")
        if self.f > 2 * self.gamma + tol:
            out.append("f > 2 gamma")
        return out


@dataclass(frozen=True)
class AppendixDecomposition:
    axis: int
    terms: tuple[AppendixTerm, ...]

    @property
    def total_f(self) -> float:
        return float(sum(t.f for t in self.terms))

    @property
    def total_gamma(self) -> float:
        return float(sum(t.gamma for t in self.terms))

    @property
    def fbar(self) -> float:
        return (2 + self.total_f) / 6

    def violations(self, tol: float = DEFAULT_TOL) -> list[str]:
        out = [f"outcome {w}: {msg}" for w, t in enumerate(self.terms, 1) for msg in t.violations(tol)]
        if self.total_f > 2 + tol:
            out.append(f"sum f = {self.total_f} > 2")
        if abs(self.total_gamma - 1) > tol:
            out.append(f"sum gamma = {self.total_gamma} != 1")
        return out


def _bloch(x: np.ndarray) -> tuple[float, np.ndarray]:
    """Coefficients ``(c0, c)`` of ``x = c0 1 + c.sigma`` for Hermitian qubit ``x``."""
    c = [0.5 * np.real(np.trace(pauli(mu) @ x)) for mu in range(4)]
    return float(c[0]), np.array(c[1:])


def appendix_decompose(p: Protocol, axis: int = 3) -> AppendixDecomposition:
    if p.dim != 2:
        raise ValueError("the dephasing decomposition is defined for qubits only")
    if axis not in (1, 2, 3):
        raise ValueError("axis must be 1, 2 or 3")
    one = np.eye(2, dtype=complex)
    s = pauli(axis)
    terms = []
    for branch, recovery in p.pairs:
        heis = dual(branch)
        _, a = _bloch(apply(recovery, one))
        _, b = _bloch(apply(recovery, s))
        gamma, delta = _bloch(apply(heis, one))
        eps, zeta = _bloch(apply(heis, s))
        f = gamma + a @ delta + b @ zeta
        terms.append(AppendixTerm(gamma, eps, delta, zeta, a, b, float(f)))
    return AppendixDecomposition(axis, tuple(terms))


def outcome_hs_traces(p: Protocol, noise: CPMap) -> list[float]:
    """``Tr_HS C_w o N o I_w`` for each outcome, evaluated directly."""
    return [hs_trace(compose(c, compose(noise, b))) for b, c in p.pairs]


def dephasing_outcome_traces(p: Protocol, axis: int = 3) -> list[float]:
    return outcome_hs_traces(p, dephasing(axis))
