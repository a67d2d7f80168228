import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from noisegate.channels import action_distance, compose, same_action
from noisegate.fidelity import protocol_fidelity
from noisegate.geometry import (
    Region,
    bloch_matrix,
    bloch_rotation,
    canonical_form,
    classify,
    in_octahedron,
    in_tetrahedron,
    no_measurement_fidelity,
    predict_optimum,
    predicted_fidelity,
    su2_from_rotation,
    symmetry_generators,
    symmetry_group,
)
from noisegate.noise_models import (
    amplitude_damping,
    dephasing,
    depolarizing,
    pauli_channel,
    unital_from_canonical,
    unitary_conjugation,
    vertex,
)
from noisegate.operator_core import pauli
from noisegate.protocols import discriminate_reprepare, do_nothing, no_measurement
from noisegate.sampling import random_channel, random_pauli_mixture, random_unital_qubit_channel, random_unitary


def test_bloch_rotation_and_lift(rng):
    u = random_unitary(2, rng)
    r = bloch_rotation(u)
    assert np.allclose(r @ r.T, np.eye(3)) and np.linalg.det(r) == pytest.approx(1)
    lifted = su2_from_rotation(r)
    assert np.allclose(bloch_rotation(lifted), r)
    assert lifted[0, 0].real >= 0
    assert same_action(unitary_conjugation(lifted), unitary_conjugation(u))


def test_canonical_form_examples():
    can = canonical_form(depolarizing(2, 0.3))
    assert np.allclose(can.dvec, [0.7] * 3)
    assert np.allclose(canonical_form(pauli_channel((0.7, 0, 0, 0.3))).dvec, (0.4, 0.4, 1.0))
    assert np.allclose(np.abs(canonical_form(vertex(1)).dvec), 1)


def test_canonical_form_rejects():
    with pytest.raises(ValueError):
        canonical_form(amplitude_damping(0.3))
    with pytest.raises(ValueError):
        canonical_form(depolarizing(3, 0.3))


def test_canonical_round_trip(rng):
    for _ in range(100):
        ch = random_unital_qubit_channel(rng)
        can = canonical_form(ch)
        assert in_tetrahedron(can.dvec)
        assert action_distance(can.reconstruct(), ch) < 1e-8
        b = bloch_matrix(can.channel())
        assert np.allclose(b, np.diag(can.dvec))


def test_regions():
    assert classify((0.3, 0.2, 0.1)).kind is Region.O
    assert classify((0.4, 0.4, 1.0)).kind is Region.T0
    label = classify((0, 0, 1))
    assert label.kind is Region.BOUNDARY and 0 in label.tetrahedra
    assert str(label).startswith("boundary(T0")
    assert classify((1, -1, -1)).kind is Region.T1
    with pytest.raises(ValueError):
        classify((1, 1, -1))
    assert in_octahedron((0.5, -0.5, 0)) and not in_octahedron((0.5, 0.5, 0.5))
    assert in_tetrahedron((0.5, 0.5, 0.5)) and not in_tetrahedron((1, 1, -0.5))


def test_symmetry_generator_examples():
    flip = [g for g in symmetry_generators() if np.allclose(g.u, np.eye(2)) and np.allclose(g.v, pauli(3))][0]
    assert np.allclose(flip.apply((0.1, 0.2, 0.3)), (-0.1, -0.2, 0.3))
    half = (np.eye(2) + 1j * pauli(3)) / np.sqrt(2)
    swap = [g for g in symmetry_generators() if np.allclose(g.u, half)][0]
    assert np.allclose(swap.apply((0.1, 0.2, 0.3)), (0.2, 0.1, 0.3))


def test_symmetry_group_structure():
    group = symmetry_group()
    keys = {tuple(g.matrix.ravel()) for g in group}
    assert len(group) == 24 and len(keys) == 24
    for g in group:
        for h in group:
            assert tuple(h.compose_after(g).matrix.ravel()) in keys
    assert {g.vertex_permutation()[0] for g in group} == {0, 1, 2, 3}
    assert {g.vertex_permutation() for g in group} == set(__import__("itertools").permutations(range(4)))


def test_symmetry_realized_by_unitaries(rng):
    dvec = random_pauli_mixture(rng).coords
    n = unital_from_canonical(dvec)
    for g in symmetry_group():
        moved = compose(unitary_conjugation(g.v), compose(n, unitary_conjugation(g.u)))
        assert same_action(moved, unital_from_canonical(g.apply(dvec)))
        assert classify(g.apply(dvec)) == g.map_region(classify(dvec))


def test_predict_optimum_examples():
    p, f = predict_optimum(depolarizing(2, 0.5))
    assert f == pytest.approx(0.75)
    p, f = predict_optimum(depolarizing(4, 0.9))
    assert f == pytest.approx(0.4) and len(p) == 4
    p, f = predict_optimum(depolarizing(3, 0.5))
    assert len(p) == 1 and f == pytest.approx(1 - 0.5 * 2 / 3)
    n = unital_from_canonical((0.4, 0.4, 1.0))
    p, f = predict_optimum(n)
    assert f == pytest.approx(0.8)
    assert protocol_fidelity(p, n).value == pytest.approx(0.8)
    assert predict_optimum(dephasing(3))[1] == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        predict_optimum(amplitude_damping(0.4))
    assert predicted_fidelity(random_channel(3, np.random.default_rng(0))) is None


def test_prediction_continuity():
    for d in (2, 3, 4, 5):
        thr = d / (d + 1)
        assert 1 - thr * (d - 1) / d == pytest.approx(2 / (d + 1))
    dvec = np.array([0.2, -0.5, 0.3])
    assert no_measurement_fidelity(dvec) == pytest.approx(2 / 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_prediction_attained_and_not_beaten_by_classical(seed):
    r = np.random.default_rng(seed)
    n = random_unital_qubit_channel(r)
    protocol, f = predict_optimum(n)
    assert protocol_fidelity(protocol, n).value == pytest.approx(f, abs=1e-10)
    classical = [do_nothing(2), discriminate_reprepare(d=2)] + [no_measurement(mu) for mu in range(4)]
    dvec = canonical_form(n).dvec
    baseline = unital_from_canonical(dvec)
    for c in classical:
        assert protocol_fidelity(c, baseline).value <= f + 1e-10
