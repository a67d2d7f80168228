import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from noisegate.channels import (
    ChoiMatrix,
    CPMap,
    QuantumChannel,
    action_distance,
    apply,
    channel_from_dict,
    channel_from_json,
    channel_to_dict,
    channel_to_json,
    compose,
    dual,
    from_choi,
    hs_trace,
    hs_trace_by_basis,
    identity_channel,
    is_cp,
    is_tp,
    is_unital,
    mix,
    same_action,
    superoperator,
    to_choi,
)
from noisegate.noise_models import amplitude_damping, dephasing, depolarizing, pauli_channel, unitary_conjugation
from noisegate.operator_core import max_entangled_state, orthonormal_operator_basis, pauli, partial_transpose
from noisegate.protocols import average_operation, discriminate_reprepare
from noisegate.sampling import ginibre, random_channel, random_density


def choi_oracle(m, d):
    """sum_ij |i><j| (x) m(|i><j|) / d, built entry by entry."""
    out = np.zeros((d * m.dim_out, d * m.dim_out), dtype=complex)
    for i in range(d):
        for j in range(d):
            eij = np.zeros((d, d))
            eij[i, j] = 1
            out += np.kron(eij, apply(m, eij))
    return out / d


def test_apply_examples(rng):
    rho = random_density(2, rng)
    assert np.allclose(apply(identity_channel(2), rho), rho)
    assert np.allclose(apply(depolarizing(2, 1.0), rho), np.eye(2) / 2)
    assert np.allclose(apply(dephasing(3), pauli(1)), 0)


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        apply(identity_channel(2), np.eye(3))


def test_cpmap_is_read_only(rng):
    m = CPMap([ginibre((2, 2), rng)])
    with pytest.raises(ValueError):
        m.kraus[0][0, 0] = 5


def test_quantum_channel_rejects_non_tp():
    with pytest.raises(ValueError):
        QuantumChannel([2 * np.eye(2)])


@pytest.mark.parametrize("d", [2, 3])
def test_choi_matches_oracle(d, rng):
    ch = random_channel(d, rng)
    assert np.allclose(to_choi(ch).op, choi_oracle(ch, d))


def test_choi_examples():
    psi = max_entangled_state(2)
    assert np.allclose(to_choi(identity_channel(2)).op, np.outer(psi, psi.conj()))
    for d, eps in ((2, 0.3), (3, 0.6)):
        psi = max_entangled_state(d)
        expected = (1 - eps) * np.outer(psi, psi.conj()) + eps * np.eye(d * d) / d ** 2
        assert np.allclose(to_choi(depolarizing(d, eps)).op, expected)


def test_choi_unnormalized_factor(rng):
    ch = random_channel(3, rng)
    c = to_choi(ch)
    assert np.allclose(c.unnormalized(), 3 * c.op)
    assert np.trace(c.op).real == pytest.approx(1)


@pytest.mark.parametrize("d", [2, 3])
def test_choi_roundtrip(d, rng):
    ch = random_channel(d, rng)
    back = from_choi(to_choi(ch))
    for b in orthonormal_operator_basis(d):
        assert np.allclose(apply(back, b), apply(ch, b), atol=1e-9)


def test_from_choi_minimal_rank(rng):
    ch = random_channel(3, rng, rank=2)
    assert len(from_choi(to_choi(ch)).kraus) == 2


def test_from_choi_rejects_non_cp():
    op = np.diag([0.6, 0.5, 0.0, -0.1]).astype(complex)
    choi = ChoiMatrix(op, 2, 2)
    assert not is_cp(choi)
    with pytest.raises(ValueError):
        from_choi(choi)


def test_compose(rng):
    n = random_channel(2, rng)
    assert same_action(compose(identity_channel(2), n), n)
    z = unitary_conjugation(pauli(3))
    assert same_action(compose(z, z), identity_channel(2))
    rho = random_density(2, rng)
    a, b = random_channel(2, rng), random_channel(2, rng)
    assert np.allclose(apply(compose(a, b), rho), apply(a, apply(b, rho)))


def test_compose_dimension_mismatch(rng):
    with pytest.raises(ValueError):
        compose(identity_channel(2), identity_channel(3))


def test_dr_recovery_absorbs_noise(rng):
    dr = discriminate_reprepare(d=2)
    n = random_channel(2, rng)
    for branch, rec in dr.pairs:
        assert same_action(compose(rec, compose(n, branch)), compose(rec, branch))


def test_dual(rng):
    m = random_channel(3, rng)
    x, y = ginibre((3, 3), rng), ginibre((3, 3), rng)
    lhs = np.trace(apply(m, x) @ y)
    rhs = np.trace(x @ apply(dual(m), y))
    assert lhs == pytest.approx(rhs)
    assert np.allclose(apply(dual(m), np.eye(3)), np.eye(3))
    assert np.allclose(apply(dual(dephasing(3)), pauli(3)), pauli(3))
    assert np.allclose(apply(dual(dephasing(3)), pauli(1)), 0)
    assert same_action(dual(dual(m)), m)


def test_hs_trace_examples(rng):
    for d in (2, 3, 4):
        assert hs_trace(identity_channel(d)) == pytest.approx(d * d)
    assert hs_trace(depolarizing(2, 1.0)) == pytest.approx(1)
    for d in (2, 3):
        e = average_operation(discriminate_reprepare(d=d), random_channel(d, rng))
        assert hs_trace(e) == pytest.approx(d)


def test_hs_trace_qubit_pauli_form(rng):
    e = random_channel(2, rng)
    pauli_form = 0.5 * sum(np.trace(pauli(mu) @ apply(e, pauli(mu))) for mu in range(4))
    assert hs_trace(e) == pytest.approx(pauli_form.real)


def test_hs_trace_basis_independent(rng):
    e = random_channel(3, rng)
    assert hs_trace_by_basis(e).real == pytest.approx(hs_trace(e))
    # trace of superoperator is another representation of the same number
    assert np.trace(superoperator(e)).real == pytest.approx(hs_trace(e))


def test_hs_trace_rejects_non_square(rng):
    with pytest.raises(ValueError):
        hs_trace(random_channel(2, rng, d_out=3))


def test_predicates():
    for d, eps in ((2, 0.0), (3, 0.4), (4, 1.0)):
        ch = depolarizing(d, eps)
        assert is_tp(ch) and is_cp(ch) and is_unital(ch)
    ad = amplitude_damping(0.5)
    assert is_tp(ad) and is_cp(ad) and not is_unital(ad)


def test_choi_partial_trace_for_builtins():
    for ch in (depolarizing(3, 0.2), amplitude_damping(0.3), dephasing(1), pauli_channel((0.1, 0.2, 0.3, 0.4))):
        c = to_choi(ch).op.reshape(ch.dim_in, ch.dim_out, ch.dim_in, ch.dim_out)
        reduced = np.einsum("ajbj->ab", c)
        assert np.allclose(reduced, np.eye(ch.dim_in) / ch.dim_in)
        assert is_cp(to_choi(ch))


def test_hs_trace_cyclic_and_linear(rng):
    a, b = CPMap([ginibre((3, 3), rng)]), CPMap(list(ginibre((2, 3, 3), rng)))
    assert hs_trace(compose(a, b)) == pytest.approx(hs_trace(compose(b, a)))
    x, y = random_channel(3, rng), random_channel(3, rng)
    assert hs_trace(mix([x, y], [0.3, 0.7])) == pytest.approx(0.3 * hs_trace(x) + 0.7 * hs_trace(y))


def test_mix_concatenates_weighted_kraus(rng):
    x, y = random_channel(2, rng), random_channel(2, rng)
    m = mix([x, y], [0.25, 0.75])
    assert len(m.kraus) == len(x.kraus) + len(y.kraus)
    rho = random_density(2, rng)
    assert np.allclose(apply(m, rho), 0.25 * apply(x, rho) + 0.75 * apply(y, rho))


def test_json_roundtrip_bit_exact(rng):
    ch = random_channel(3, rng, d_out=2)
    back = channel_from_json(channel_to_json(ch))
    assert back.dim_in == 3 and back.dim_out == 2
    for k1, k2 in zip(ch.kraus, back.kraus):
        assert np.array_equal(k1, k2)
    data = json.loads(channel_to_json(ch))
    assert set(data) == {"dim_in", "dim_out", "kraus"}
    assert isinstance(channel_from_dict(channel_to_dict(ch)), QuantumChannel)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 3), st.integers(1, 4), st.integers(0, 2 ** 31))
def test_choi_roundtrip_property(d, rank, seed):
    ch = random_channel(d, np.random.default_rng(seed), rank=rank)
    assert action_distance(from_choi(to_choi(ch)), ch) < 1e-9
    assert np.min(np.linalg.eigvalsh(to_choi(ch).op)) > -1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_superoperator_acts_row_major(seed):
    r = np.random.default_rng(seed)
    ch = random_channel(2, r)
    rho = random_density(2, r)
    assert np.allclose(superoperator(ch) @ rho.reshape(-1), apply(ch, rho).reshape(-1))


def test_ppt_of_mix_of_ppt_channels():
    a, b = depolarizing(2, 0.7), dephasing(3)
    m = mix([a, b], [0.5, 0.5])
    pt = partial_transpose(to_choi(m).op, (2, 2))
    assert np.min(np.linalg.eigvalsh(pt)) > -1e-12
