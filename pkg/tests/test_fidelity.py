import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import mub_states
from noisegate.channels import apply, identity_channel
from noisegate.fidelity import (
    FidelityMethod,
    FidelityReport,
    appendix_decompose,
    average_fidelity,
    average_fidelity_mc,
    dephasing_outcome_traces,
    protocol_fidelity,
    pure_fidelity,
)
from noisegate.noise_models import dephasing, depolarizing, unital_from_canonical
from noisegate.optimizer import OptimizerConfig, random_protocol
from noisegate.protocols import average_operation, discriminate_reprepare, do_nothing, no_measurement
from noisegate.sampling import random_channel, random_pure_state


def design_average(e, d):
    """Average of <psi|E(psi)|psi> over a complete MUB set (exact 2-design)."""
    vals = [np.vdot(s, apply(e, np.outer(s, s.conj())) @ s).real for s in mub_states(d)]
    return float(np.mean(vals))


def test_pure_fidelity(rng):
    psi = random_pure_state(2, rng)
    assert pure_fidelity(np.outer(psi, psi.conj()), psi) == pytest.approx(1)
    assert pure_fidelity(np.eye(2) / 2, psi) == pytest.approx(0.5)
    perp = np.array([-np.conj(psi[1]), np.conj(psi[0])])
    assert pure_fidelity(np.outer(perp, perp.conj()), psi) == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize("d", [2, 3])
def test_formula_matches_design_oracle(d, rng):
    for _ in range(5):
        e = random_channel(d, rng)
        assert average_fidelity(e).value == pytest.approx(design_average(e, d), abs=1e-12)


def test_average_fidelity_examples(rng):
    r = average_fidelity(identity_channel(2))
    assert r.value == pytest.approx(1) and r.method is FidelityMethod.FORMULA and r.n_samples == 0
    assert average_fidelity(depolarizing(2, 1.0)).value == pytest.approx(0.5)
    e = average_operation(discriminate_reprepare(d=3), random_channel(3, rng))
    assert average_fidelity(e).value == pytest.approx(0.5)


def test_mc_examples():
    r = average_fidelity_mc(identity_channel(2), 1000, seed=1)
    assert r.value == pytest.approx(1) and r.std_error == pytest.approx(0, abs=1e-15)
    r = average_fidelity_mc(depolarizing(2, 0.6), 100_000, seed=2)
    assert abs(r.value - 0.7) <= 4 * r.std_error
    e = average_operation(discriminate_reprepare(d=2), depolarizing(2, 0.3))
    r = average_fidelity_mc(e, 100_000, seed=3)
    assert abs(r.value - 2 / 3) <= 4 * r.std_error


def test_mc_deterministic_and_worker_independent():
    e = depolarizing(3, 0.2)
    a = average_fidelity_mc(e, 25_000, seed=11, workers=1)
    b = average_fidelity_mc(e, 25_000, seed=11, workers=3)
    assert a.value == b.value and a.std_error == b.std_error
    assert average_fidelity_mc(e, 1, seed=0).std_error == 0


def test_report_validation():
    with pytest.raises(ValueError):
        FidelityReport(1.5, FidelityMethod.FORMULA, 0, 0.0)


def test_protocol_fidelity_examples(rng):
    assert protocol_fidelity(do_nothing(3), depolarizing(3, 0.4)).value == pytest.approx(1 - 0.4 * 2 / 3)
    assert protocol_fidelity(discriminate_reprepare(d=2), random_channel(2, rng)).value == pytest.approx(2 / 3)
    n = unital_from_canonical((-0.3, -0.3, 0.9))
    assert protocol_fidelity(no_measurement(3), n).value == pytest.approx(0.75)


def test_do_nothing_monotone_in_eps():
    vals = [protocol_fidelity(do_nothing(3), depolarizing(3, e)).value for e in np.linspace(0, 1, 11)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_appendix_examples():
    dec = appendix_decompose(do_nothing(2), 3)
    assert len(dec.terms) == 1
    assert dec.terms[0].gamma == pytest.approx(1) and dec.terms[0].f == pytest.approx(2)
    assert dec.fbar == pytest.approx(2 / 3)
    dec = appendix_decompose(discriminate_reprepare(d=2), 3)
    for t in dec.terms:
        assert t.gamma == pytest.approx(0.5) and t.f == pytest.approx(1)
    assert dephasing_outcome_traces(discriminate_reprepare(d=2), 3) == pytest.approx([1, 1])


def test_appendix_rejects_bad_input():
    with pytest.raises(ValueError):
        appendix_decompose(do_nothing(3))
    with pytest.raises(ValueError):
        appendix_decompose(do_nothing(2), 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 2), st.sampled_from([1, 2, 3]), st.integers(0, 2 ** 31))
def test_appendix_bounds(m, r, axis, seed):
    p = random_protocol(2, OptimizerConfig(n_outcomes=m, kraus_rank=r), seed=seed)
    dec = appendix_decompose(p, axis)
    assert dec.violations(1e-9) == []
    assert dec.total_gamma == pytest.approx(1)
    assert [t.f for t in dec.terms] == pytest.approx(dephasing_outcome_traces(p, axis), abs=1e-10)
    assert dec.fbar == pytest.approx(protocol_fidelity(p, dephasing(axis)).value)
