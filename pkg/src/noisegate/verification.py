"""Numerical verification suites for the optimality results.

Each ``check_*`` function runs one acceptance criterion and returns a
:class:`Check`. :data:`SUITES` groups them under the names accepted by
``noisegate verify``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .channels import action_distance, compose, same_action, to_choi
from .fidelity import (
    appendix_decompose,
    average_fidelity,
    average_fidelity_mc,
    outcome_hs_traces,
    protocol_fidelity,
)
from .geometry import (
    Region,
    canonical_form,
    classify,
    no_measurement_fidelity,
    predict_optimum,
    symmetry_group,
)
from .noise_models import (
    dephasing,
    depolarizing,
    mixture,
    pauli_channel,
    unital_from_canonical,
    unitary_conjugation,
)
from .optimizer import OptimizerConfig, optimize, random_protocol
from .protocols import discriminate_reprepare, do_nothing, no_measurement
from .sampling import (
    as_rng,
    random_channel,
    random_orthonormal_basis,
    random_pauli_mixture,
    random_unital_qubit_channel,
)
from .separability import QcqStatus, is_qcq, ppt_check


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    elapsed: float = 0.0
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name} ({self.elapsed:.1f}s): {self.detail}"


def _timed(name: str):
    def wrap(fn):
        def run(*args, **kwargs) -> Check:
            t0 = time.perf_counter()
            check = fn(*args, **kwargs)
            check.name = name
            check.elapsed = time.perf_counter() - t0
            return check
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


@_timed("1 fidelity formula vs Monte Carlo")
def check_fidelity_formula(seed: int = 0, n_samples: int = 100_000, time_limit: float = 30.0) -> Check:
    rng = as_rng(seed)
    failures = []
    worst = 0.0
    t0 = time.perf_counter()
    for d, count in ((2, 20), (3, 10)):
        for i in range(count):
            rank = int(rng.integers(1, d * d + 1))
            e = random_channel(d, rng, rank=rank)
            exact = average_fidelity(e).value
            mc = average_fidelity_mc(e, n_samples, seed=int(rng.integers(2 ** 31)))
            z = abs(exact - mc.value) / mc.std_error if mc.std_error > 0 else 0.0
            worst = max(worst, z)
            if abs(exact - mc.value) > 4 * mc.std_error:
                failures.append(f"d={d} #{i}: formula {exact:.6f}, mc {mc.value:.6f} +- {mc.std_error:.2g}")
    runtime = time.perf_counter() - t0
    if runtime >= time_limit:
        failures.append(f"runtime {runtime:.1f}s >= {time_limit}s")
    return Check("", not failures, f"30 channels, worst |z| = {worst:.2f} (limit 4), {runtime:.1f}s", failures=failures)


@_timed("2 DR universality")
def check_dr_universality(seed: int = 0, tol: float = 1e-12) -> Check:
    rng = as_rng(seed)
    failures = []
    worst = 0.0
    for d in (2, 3, 4, 5):
        for i in range(10):
            noise = random_channel(d, rng, rank=int(rng.integers(1, d * d + 1)))
            for _ in range(3):
                p = discriminate_reprepare(random_orthonormal_basis(d, rng))
                err = abs(protocol_fidelity(p, noise).value - 2 / (d + 1))
                worst = max(worst, err)
                if err > tol:
                    failures.append(f"d={d} noise #{i}: error {err:.3g}")
    return Check("", not failures, f"120 (noise, basis) pairs, worst error {worst:.2g} (tol {tol:g})",
                 failures=failures)


def _depolarizing_predictions(d: int, eps_grid, tol: float = 1e-12) -> list[str]:
    failures = []
    thr = d / (d + 1)
    dn = lambda e: 1 - e * (d - 1) / d
    for eps in eps_grid:
        protocol, fbar = predict_optimum(depolarizing(d, eps))
        expected = max(dn(eps), 2 / (d + 1))
        if abs(fbar - expected) > tol:
            failures.append(f"d={d} eps={eps}: predicted {fbar} != {expected}")
        is_dr = len(protocol) == d
        if (eps < thr and is_dr) or (eps > thr and not is_dr):
            failures.append(f"d={d} eps={eps}: wrong protocol family for threshold {thr:.4f}")
    if abs(dn(thr) - 2 / (d + 1)) > tol:
        failures.append(f"d={d}: formulas disagree at the threshold")
    for e in (thr - 1e-6, thr + 1e-6):
        if (dn(e) > 2 / (d + 1)) != (e < thr):
            failures.append(f"d={d}: crossover not at eps = d/(d+1)")
    return failures


def _optimizer_vs_prediction(noise, cfg, label, reach_tol, excess_tol) -> tuple[list[str], float, float]:
    res = optimize(noise, cfg)
    pred = predict_optimum(noise)[1]
    out = []
    if res.best_fbar > pred + excess_tol:
        out.append(f"{label}: optimizer {res.best_fbar:.12f} exceeds prediction {pred:.12f}")
    if res.best_fbar < pred - reach_tol:
        out.append(f"{label}: optimizer {res.best_fbar:.6f} short of prediction {pred:.6f}")
    return out, pred - res.best_fbar, res.best_fbar - pred


@_timed("3 depolarizing phase diagram (M=d, r=2)")
def check_theorem1(seed: int = 0, dims=(2, 3, 4), kraus_rank: int = 2, restarts: int = 20,
                   reach_tol: float = 1e-3, excess_tol: float = 1e-9, time_limit: float = 600.0) -> Check:
    eps_grid = [round(0.1 * k, 10) for k in range(11)]
    failures = []
    worst_gap = 0.0
    worst_excess = -np.inf
    t0 = time.perf_counter()
    for d in dims:
        failures += _depolarizing_predictions(d, eps_grid)
        cfg = OptimizerConfig(n_outcomes=d, kraus_rank=kraus_rank, restarts=restarts, seed=seed)
        for eps in eps_grid:
            f, gap, excess = _optimizer_vs_prediction(depolarizing(d, eps), cfg, f"d={d} eps={eps}",
                                                      reach_tol, excess_tol)
            failures += f
            worst_gap = max(worst_gap, gap)
            worst_excess = max(worst_excess, excess)
    runtime = time.perf_counter() - t0
    if runtime >= time_limit:
        failures.append(f"runtime {runtime:.0f}s >= {time_limit:.0f}s")
    detail = (f"d in {tuple(dims)}, r={kraus_rank}: worst shortfall {worst_gap:.3g} (tol {reach_tol:g}), "
              f"max excess {worst_excess:.2g} (tol {excess_tol:g}), {len(failures)} failing points")
    return Check("", not failures, detail, failures=failures)


def check_theorem1_full_rank(seed: int = 0) -> Check:
    """The depolarizing sweep with recovery rank r = d, enough to express DR."""
    out = Check("", True)
    for d in (2, 3, 4):
        c = check_theorem1(seed=seed, dims=(d,), kraus_rank=d)
        out.failures += c.failures
        out.elapsed += c.elapsed
    out.passed = not out.failures
    out.name = "3b supplementary: depolarizing sweep with r=d"
    out.detail = f"{len(out.failures)} failing points"
    return out


def random_points_in_tetrahedron(rng, n_octahedron: int, n_corners: int) -> list[np.ndarray]:
    """Uniform points of T, by rejection, split between O and the corners."""
    inside, corners = [], []
    while len(inside) < n_octahedron or len(corners) < n_corners:
        dvec = random_pauli_mixture(rng).coords
        s = float(np.sum(np.abs(dvec)))
        if abs(s - 1) < 1e-6:
            continue
        if s < 1 and len(inside) < n_octahedron:
            inside.append(dvec)
        elif s > 1 and len(corners) < n_corners:
            corners.append(dvec)
    return inside + corners


@_timed("4 unital qubit phase diagram (M=2..3, r=2)")
def check_theorem2(seed: int = 0, restarts: int = 20, reach_tol: float = 1e-3,
                   excess_tol: float = 1e-9, formula_tol: float = 1e-12) -> Check:
    rng = as_rng(seed)
    failures = []
    worst_gap = 0.0
    points = random_points_in_tetrahedron(rng, 25, 25)
    configs = [OptimizerConfig(n_outcomes=m, kraus_rank=2, restarts=restarts, seed=seed) for m in (2, 3)]
    for idx, dvec in enumerate(points):
        noise = unital_from_canonical(dvec)
        label = classify(dvec)
        protocol, pred = predict_optimum(noise)
        expected = max(2 / 3, no_measurement_fidelity(dvec))
        tag = f"point {idx} {np.round(dvec, 4).tolist()} [{label}]"
        if abs(pred - expected) > formula_tol:
            failures.append(f"{tag}: predicted {pred} != {expected}")
        nm = [protocol_fidelity(no_measurement(mu), noise).value for mu in range(4)]
        dr = protocol_fidelity(discriminate_reprepare(d=2), noise).value
        best_classical = max(max(nm), dr)
        if abs(best_classical - expected) > formula_tol:
            failures.append(f"{tag}: best classical {best_classical} != formula {expected}")
        if label.kind is Region.O and not dr > max(nm):
            failures.append(f"{tag}: labelled O but a no-measurement protocol ties or wins")
        if label.kind not in (Region.O, Region.BOUNDARY):
            if not (nm[label.mu] > dr and int(np.argmax(nm)) == label.mu):
                failures.append(f"{tag}: labelled T{label.mu} but it is not the unique winner")
        for cfg in configs:
            f, gap, _ = _optimizer_vs_prediction(noise, cfg, f"{tag} M={cfg.n_outcomes}", reach_tol, excess_tol)
            failures += f
            worst_gap = max(worst_gap, gap)
    detail = f"50 points (25 in O), worst optimizer shortfall {worst_gap:.3g} (tol {reach_tol:g})"
    return Check("", not failures, detail, failures=failures)


def _random_small_protocol(rng, d: int = 2):
    m = int(rng.integers(1, 5))
    r = int(rng.integers(1, 3))
    cfg = OptimizerConfig(n_outcomes=m, kraus_rank=r, restarts=1)
    return random_protocol(d, cfg, seed=int(rng.integers(2 ** 31)))


@_timed("5 dephasing optimum and per-outcome bound")
def check_lemma1(seed: int = 0, n_protocols: int = 200, tol: float = 1e-12, bound_tol: float = 1e-9) -> Check:
    rng = as_rng(seed)
    failures = []
    for axis in (1, 2, 3):
        noise = dephasing(axis)
        for name, p in (("do nothing", do_nothing(2)), ("DR", discriminate_reprepare(d=2))):
            err = abs(protocol_fidelity(p, noise).value - 2 / 3)
            if err > tol:
                failures.append(f"E_0{axis} {name}: off 2/3 by {err:.3g}")
    worst = -np.inf
    for i in range(n_protocols):
        p = _random_small_protocol(rng)
        for axis in (1, 2, 3):
            dec = appendix_decompose(p, axis)
            worst = max(worst, dec.total_f)
            for v in dec.violations(bound_tol):
                failures.append(f"protocol {i} axis {axis}: {v}")
            direct = outcome_hs_traces(p, dephasing(axis))
            if max(abs(a - t.f) for a, t in zip(direct, dec.terms)) > 1e-10:
                failures.append(f"protocol {i} axis {axis}: f terms disagree with direct Tr_HS")
    detail = f"{n_protocols} random protocols x 3 axes, max sum f = {worst:.12f} (bound 2)"
    return Check("", not failures, detail, failures=failures)


@_timed("6 EB <=> octahedron; depolarizing PPT threshold")
def check_eb_octahedron(seed: int = 0, n: int = 200, band: float = 1e-9, threshold_tol: float = 1e-10) -> Check:
    rng = as_rng(seed)
    failures = []
    counted = 0
    for i in range(n):
        mixw = random_pauli_mixture(rng)
        s = float(np.sum(np.abs(mixw.coords)))
        if abs(s - 1) <= band:
            continue
        counted += 1
        verdict = is_qcq(pauli_channel(mixw))
        if (verdict.status is QcqStatus.ENTANGLEMENT_BREAKING) != (s < 1):
            failures.append(f"channel {i}: sum|d| = {s:.6f} but verdict {verdict.status.value}")
    for d in (2, 3):
        thr = d / (d + 1)
        lo = ppt_check(to_choi(depolarizing(d, thr - threshold_tol)))[1]
        at = ppt_check(to_choi(depolarizing(d, thr)))[1]
        hi = ppt_check(to_choi(depolarizing(d, thr + threshold_tol)))[1]
        if not (lo < 0 < hi):
            failures.append(f"d={d}: no sign change across eps = {thr:.6f} (min eig {lo:.3g}, {hi:.3g})")
        if abs(at) > threshold_tol:
            failures.append(f"d={d}: min PT eigenvalue {at:.3g} at threshold")
    detail = f"{counted} Pauli channels decided, PPT threshold sign change at d/(d+1) for d=2,3"
    return Check("", not failures, detail, failures=failures)


@_timed("7 convexity in the noise")
def check_convexity(seed: int = 0, trials: int = 10, tol: float = 1e-10) -> Check:
    rng = as_rng(seed)
    failures = []
    worst = 0.0
    for t in range(trials):
        d = 2 if t % 2 == 0 else 3
        cfg = OptimizerConfig(n_outcomes=int(rng.integers(1, 4)), kraus_rank=int(rng.integers(1, 3)), restarts=1)
        p = random_protocol(d, cfg, seed=int(rng.integers(2 ** 31)))
        n1, n2 = random_channel(d, rng), random_channel(d, rng)
        f1, f2 = protocol_fidelity(p, n1).value, protocol_fidelity(p, n2).value
        for a in (0.25, 0.5, 0.75):
            fm = protocol_fidelity(p, mixture([n1, n2], [1 - a, a])).value
            err = abs(fm - ((1 - a) * f1 + a * f2))
            worst = max(worst, err)
            if err > tol:
                failures.append(f"trial {t} a={a}: error {err:.3g}")
    return Check("", not failures, f"{trials} protocols x 3 mixtures, worst error {worst:.2g} (tol {tol:g})",
                 failures=failures)


@_timed("8 geometry round trip and symmetry group")
def check_geometry(seed: int = 0, n: int = 100, tol: float = 1e-8) -> Check:
    rng = as_rng(seed)
    failures = []
    worst = 0.0
    for i in range(n):
        ch = random_unital_qubit_channel(rng)
        err = action_distance(ch, canonical_form(ch).reconstruct())
        worst = max(worst, err)
        if err > tol:
            failures.append(f"channel {i}: reconstruction error {err:.3g}")
    group = symmetry_group()
    keys = {tuple(g.matrix.astype(int).ravel()) for g in group}
    if len(group) != 24 or len(keys) != 24:
        failures.append(f"group has {len(group)} elements ({len(keys)} distinct)")
    for g in group:
        for h in group:
            if tuple(h.compose_after(g).matrix.astype(int).ravel()) not in keys:
                failures.append("group not closed under composition")
                break
    orbit = {g.vertex_permutation()[0] for g in group}
    if orbit != {0, 1, 2, 3}:
        failures.append(f"vertex 0 orbit is {sorted(orbit)}, not transitive")
    samples = random_points_in_tetrahedron(rng, 10, 20)
    for g in group:
        for dvec in samples:
            if classify(g.apply(dvec)) != g.map_region(classify(dvec)):
                failures.append(f"region not permuted correctly at {np.round(dvec, 3).tolist()}")
        dvec = samples[0]
        moved = compose(unitary_conjugation(g.v), compose(unital_from_canonical(dvec), unitary_conjugation(g.u)))
        target = unital_from_canonical(g.apply(dvec))
        if not same_action(moved, target, 1e-9):
            failures.append("a (U, V) pair does not realize its coordinate map")
    detail = f"{n} channels, worst reconstruction error {worst:.2g} (tol {tol:g}); {len(group)} symmetries"
    return Check("", not failures, detail, failures=failures)


SUITES: dict[str, list[Callable[..., Check]]] = {
    "fidelity": [check_fidelity_formula],
    "dr": [check_dr_universality],
    "theorem1": [check_theorem1],
    "theorem2": [check_theorem2],
    "appendix": [check_lemma1],
    "lemma1": [check_lemma1],
    "eb": [check_eb_octahedron],
    "convexity": [check_convexity],
    "geometry": [check_geometry],
    "theorem1_full_rank": [check_theorem1_full_rank],
}
SUITES["all"] = [check_fidelity_formula, check_dr_universality, check_theorem1, check_theorem2,
                 check_lemma1, check_eb_octahedron, check_convexity, check_geometry]


def run_suite(name: str, seed: int = 0) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return [fn(seed=seed) for fn in SUITES[name]]
