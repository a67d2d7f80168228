"""Numerical search over ante/post protocols.

The instrument is a ``(M r d) x d`` isometry whose ``d x d`` blocks are the
Kraus operators ``K[w, k]`` of the branches; each recovery is an
``(r d) x d`` isometry with blocks ``L[w, l]``. The quantity maximized is

    Tr_HS E = sum_{w,l,j,k} |tr(L[w,l] N_j K[w,k])|**2,

a sum of squared moduli of linear forms, hence convex in the instrument
(recoveries fixed) and in the recoveries (instrument fixed). Each block
update takes a Euclidean gradient step and retracts with the polar factor;
by convexity this never decreases the objective, so the search is an
alternating ascent. The step is doubled after every accepted update and
halved (backtracking) if rounding makes a step fail.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .channels import CPMap, QuantumChannel
from .fidelity import protocol_fidelity
from .geometry import predicted_fidelity
from .protocols import Protocol, discriminate_reprepare, do_nothing, no_measurement
from .sampling import random_isometry

MAX_STEP = 1e6


@dataclass(frozen=True)
class OptimizerConfig:
    n_outcomes: int = 2
    kraus_rank: int = 2
    restarts: int = 20
    max_iters: int = 2000
    step_init: float = 0.1
    grad_tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        for f in fields(self):
            if f.name == "seed":
                continue
            if getattr(self, f.name) <= 0:
                raise ValueError(f"OptimizerConfig.{f.name} must be positive")

    @classmethod
    def default_for(cls, d: int, **overrides) -> "OptimizerConfig":
        return cls(**{"n_outcomes": d, **overrides})

    @classmethod
    def from_dict(cls, data: dict) -> "OptimizerConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown optimizer fields: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class RestartSummary:
    final_fbar: float
    iters: int
    converged: bool
    seed: int


@dataclass
class OptimizationResult:
    best_fbar: float
    best_protocol: Protocol
    per_restart: list[RestartSummary]
    predicted: float | None = None
    gap_to_prediction: float | None = None
    history: list[float] = field(default_factory=list)


def _fbar(value: float, d: int) -> float:
    return (d + value) / (d * (d + 1))


def _polar(y: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(y, full_matrices=False)
    return u @ vh


def _blocks(w: np.ndarray, d: int) -> np.ndarray:
    """View a stacked isometry ``(..., n*d, d)`` as Kraus blocks ``(..., n, d, d)``."""
    return w.reshape(*w.shape[:-2], -1, d, d)


def tr_hs_value(k: np.ndarray, l: np.ndarray, noise_kraus: np.ndarray) -> float:
    """``Tr_HS`` of the average operation for Kraus tensors ``K[w,k]``, ``L[w,l]``."""
    c = np.einsum("wlab,jbc,wkca->wljk", l, noise_kraus, k, optimize=True)
    return float(np.sum(np.abs(c) ** 2))


def tr_hs_gradients(k: np.ndarray, l: np.ndarray, noise_kraus: np.ndarray):
    """Euclidean gradients ``2 df/dconj(K)`` and ``2 df/dconj(L)``.

    With these, ``df = Re sum conj(G) dX`` over both real directions.
    """
    ln = np.einsum("wlab,jbc->wljac", l, noise_kraus)
    c = np.einsum("wljac,wkca->wljk", ln, k)
    gk = 2 * np.einsum("wljk,wljqp->wkpq", c, ln.conj())
    nk = np.einsum("jab,wkbc->wjkac", noise_kraus, k)
    gl = 2 * np.einsum("wljk,wjkqp->wlpq", c, nk.conj())
    return gk, gl


def finite_difference_gradients(k: np.ndarray, l: np.ndarray, noise_kraus: np.ndarray, h: float = 1e-6):
    """Central differences of :func:`tr_hs_value` in every real coordinate."""
    def grad(x, f):
        g = np.zeros_like(x)
        for idx in np.ndindex(x.shape):
            for unit in (1.0, 1j):
                xp = x.copy()
                xm = x.copy()
                xp[idx] += h * unit
                xm[idx] -= h * unit
                g[idx] += unit * (f(xp) - f(xm)) / (2 * h)
        return g

    gk = grad(k, lambda kk: tr_hs_value(kk, l, noise_kraus))
    gl = grad(l, lambda ll: tr_hs_value(k, ll, noise_kraus))
    return gk, gl


def _random_params(d: int, m: int, r: int, rng):
    w = random_isometry(m * r * d, d, rng)
    v = np.stack([random_isometry(r * d, d, rng) for _ in range(m)])
    return w, v


def params_to_protocol(w: np.ndarray, v: np.ndarray, d: int) -> Protocol:
    m = v.shape[0]
    kb = _blocks(w, d).reshape(m, -1, d, d)
    lb = _blocks(v, d)
    return Protocol(tuple((CPMap(kb[i]), QuantumChannel(lb[i], tol=1e-8)) for i in range(m)))


def random_protocol(d: int, cfg: OptimizerConfig, seed: int | None = None) -> Protocol:
    """Protocol from Haar-random instrument and recovery isometries."""
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    w, v = _random_params(d, cfg.n_outcomes, cfg.kraus_rank, rng)
    return params_to_protocol(w, v, d)


def objective(p: Protocol, noise: CPMap) -> float:
    return protocol_fidelity(p, noise).value


class _Ascent:
    def __init__(self, noise_kraus: np.ndarray, d: int, m: int, r: int):
        self.n = noise_kraus
        self.d, self.m, self.r = d, m, r

    def kraus(self, w, v):
        return _blocks(w, self.d).reshape(self.m, self.r, self.d, self.d), _blocks(v, self.d)

    def value(self, w, v) -> float:
        k, l = self.kraus(w, v)
        return tr_hs_value(k, l, self.n)

    def gradients(self, w, v):
        k, l = self.kraus(w, v)
        gk, gl = tr_hs_gradients(k, l, self.n)
        return gk.reshape(w.shape), gl.reshape(v.shape)

    def step(self, x, grad, t, evaluate, f0):
        """Polar-retracted step with backtracking; returns (x, f, t)."""
        for _ in range(60):
            xn = _polar(x + t * grad)
            fn = evaluate(xn)
            if fn >= f0 - 1e-13:
                return xn, fn, min(2 * t, MAX_STEP)
            t *= 0.5
        return x, f0, t

    def run(self, w, v, cfg: OptimizerConfig, record: bool = False):
        f = self.value(w, v)
        tw = tv = cfg.step_init
        history = [f] if record else []
        converged = False
        it = 0
        scale = self.d * (self.d + 1)
        for it in range(1, cfg.max_iters + 1):
            f_start = f
            gw, _ = self.gradients(w, v)
            w, f, tw = self.step(w, gw, tw, lambda x: self.value(x, v), f)
            _, gv = self.gradients(w, v)
            v, f, tv = self.step(v, gv, tv, lambda x: self.value(w, x), f)
            if record:
                history.append(f)
            if (f - f_start) / scale < cfg.grad_tol:
                converged = True
                break
        return w, v, f, it, converged, history


def _run_restart(noise_kraus: np.ndarray, d: int, cfg: OptimizerConfig, index: int, record: bool):
    seed = cfg.seed + index
    rng = np.random.default_rng(seed)
    w, v = _random_params(d, cfg.n_outcomes, cfg.kraus_rank, rng)
    asc = _Ascent(noise_kraus, d, cfg.n_outcomes, cfg.kraus_rank)
    w, v, f, iters, converged, history = asc.run(w, v, cfg, record)
    return index, w, v, _fbar(f, d), iters, converged, seed, [_fbar(h, d) for h in history]


def default_workers() -> int:
    env = os.environ.get("NOISEGATE_THREADS")
    return max(int(env), 1) if env else 1


def optimize(noise: CPMap, cfg: OptimizerConfig | None = None, workers: int | None = None,
             record_history: bool = False) -> OptimizationResult:
    """Best protocol found over ``cfg.restarts`` independent ascents.

    Restart ``i`` is seeded with ``cfg.seed + i``; the best restart is the
    one with the highest fidelity, ties broken by the lowest index, so the
    result does not depend on ``workers``.
    """
    if not noise.is_square:
        raise ValueError("noise must map a system to itself")
    d = noise.dim_in
    cfg = cfg or OptimizerConfig.default_for(d)
    workers = default_workers() if workers is None else workers
    nk = noise.kraus_array
    args = [(nk, d, cfg, i, record_history) for i in range(cfg.restarts)]
    if workers > 1 and cfg.restarts > 1:
        with ProcessPoolExecutor(workers) as pool:
            runs = list(pool.map(_run_restart, *zip(*args)))
    else:
        runs = [_run_restart(*a) for a in args]
    runs.sort(key=lambda r: r[0])
    best = max(runs, key=lambda r: (r[3], -r[0]))
    protocol = params_to_protocol(best[1], best[2], d)
    best_fbar = protocol_fidelity(protocol, noise).value
    predicted = predicted_fidelity(noise)
    return OptimizationResult(
        best_fbar=best_fbar,
        best_protocol=protocol,
        per_restart=[RestartSummary(r[3], r[4], r[5], r[6]) for r in runs],
        predicted=predicted,
        gap_to_prediction=None if predicted is None else predicted - best_fbar,
        history=best[7],
    )


@dataclass(frozen=True)
class UpperBoundReport:
    status: str  # "consistent", "violation" or "exploratory"
    best_fbar: float
    predicted: float | None
    gap: float | None
    baselines: dict

    @property
    def ok(self) -> bool:
        return self.status != "violation"


def classical_baselines(noise: CPMap) -> dict:
    d = noise.dim_in
    out = {"do_nothing": protocol_fidelity(do_nothing(d), noise).value,
           "discriminate_reprepare": protocol_fidelity(discriminate_reprepare(d=d), noise).value}
    if d == 2:
        out["no_measurement"] = max(protocol_fidelity(no_measurement(mu), noise).value for mu in range(4))
    return out


def certify_upper_bound(noise: CPMap, result: OptimizationResult, tol: float = 1e-9) -> UpperBoundReport:
    """Compare the optimizer's best fidelity with the closed-form optimum.

    A best fidelity above the prediction by more than ``tol`` is flagged as
    a violation. Noise with no known optimum is reported as exploratory.
    """
    predicted = predicted_fidelity(noise)
    baselines = classical_baselines(noise)
    if predicted is None:
        return UpperBoundReport("exploratory", result.best_fbar, None, None, baselines)
    gap = predicted - result.best_fbar
    status = "violation" if result.best_fbar > predicted + tol else "consistent"
    return UpperBoundReport(status, result.best_fbar, predicted, gap, baselines)
