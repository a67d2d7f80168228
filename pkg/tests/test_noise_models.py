import numpy as np
import pytest

from noisegate.channels import apply, hs_trace, identity_channel, is_cp, is_tp, is_unital, same_action
from noisegate.noise_models import (
    PauliMixture,
    alpha_to_canonical,
    amplitude_damping,
    canonical_to_alpha,
    dephasing,
    depolarizing,
    depolarizing_parameter,
    edge_midpoint,
    mixture,
    noise_from_spec,
    pauli_channel,
    unital_from_canonical,
    unitary_conjugation,
    vertex,
)
from noisegate.geometry import canonical_form
from noisegate.operator_core import pauli
from noisegate.sampling import random_channel, random_density, random_pauli_mixture, random_unitary


def test_depolarizing_examples(rng):
    assert same_action(depolarizing(3, 0.0), identity_channel(3))
    up = np.diag([1.0, 0.0])
    assert np.allclose(apply(depolarizing(2, 1.0), up), np.eye(2) / 2)
    for i in (1, 2, 3):
        assert np.allclose(apply(depolarizing(2, 0.5), pauli(i)), 0.5 * pauli(i))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_depolarizing_action(d, rng):
    eps = 0.37
    rho = random_density(d, rng)
    assert np.allclose(apply(depolarizing(d, eps), rho), (1 - eps) * rho + eps * np.eye(d) / d)


def test_depolarizing_rejects_bad_eps():
    for eps in (-0.1, 1.1):
        with pytest.raises(ValueError):
            depolarizing(2, eps)
    with pytest.raises(ValueError):
        depolarizing(1, 0.5)


def test_depolarizing_equals_pauli_mixture():
    eps = 0.42
    lhs = depolarizing(2, eps)
    rhs = pauli_channel((1 - 3 * eps / 4, eps / 4, eps / 4, eps / 4))
    assert same_action(lhs, rhs, 1e-12)


def test_depolarizing_parameter_detection(rng):
    assert depolarizing_parameter(depolarizing(3, 0.3)) == pytest.approx(0.3)
    assert depolarizing_parameter(random_channel(3, rng)) is None
    assert depolarizing_parameter(dephasing(3)) is None


def test_pauli_channel_examples():
    assert same_action(pauli_channel((1, 0, 0, 0)), identity_channel(2))
    assert same_action(pauli_channel((0.5, 0, 0, 0.5)), dephasing(3))
    full = pauli_channel((0.25,) * 4)
    for i in (1, 2, 3):
        assert np.allclose(apply(full, pauli(i)), 0)


def test_pauli_mixture_validation():
    with pytest.raises(ValueError):
        PauliMixture((0.5, 0.5, 0.5, -0.5))
    with pytest.raises(ValueError):
        PauliMixture((0.5, 0.5))


def test_unital_from_canonical_examples():
    assert same_action(unital_from_canonical((1, 1, 1)), identity_channel(2))
    assert same_action(unital_from_canonical((0, 0, 1)), dephasing(3))
    assert same_action(unital_from_canonical((0.4, 0.4, 1.0)), pauli_channel((0.7, 0, 0, 0.3)))
    assert np.allclose(canonical_to_alpha((0.4, 0.4, 1.0)), (0.7, 0, 0, 0.3))
    with pytest.raises(ValueError):
        unital_from_canonical((1, 1, -1))


def test_canonical_coordinate_action(rng):
    dvec = random_pauli_mixture(rng).coords
    ch = unital_from_canonical(dvec)
    for i in (1, 2, 3):
        assert np.allclose(apply(ch, pauli(i)), dvec[i - 1] * pauli(i))


def test_coordinate_maps_inverse(rng):
    a = np.array(random_pauli_mixture(rng).alpha)
    assert np.allclose(canonical_to_alpha(alpha_to_canonical(a)), a)


def test_vertices_and_midpoints():
    assert same_action(vertex(0), identity_channel(2))
    assert same_action(edge_midpoint(0, 3), dephasing(3))
    assert np.allclose(canonical_form(edge_midpoint(1, 2)).dvec, (0, 0, -1))
    for mu, coords in enumerate([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]):
        assert np.allclose(canonical_form(vertex(mu)).dvec, coords)
    with pytest.raises(ValueError):
        edge_midpoint(2, 2)


def test_amplitude_damping():
    assert same_action(amplitude_damping(0.0), identity_channel(2))
    ground = np.diag([1.0, 0.0])
    rho = np.array([[0.3, 0.2], [0.2, 0.7]])
    assert np.allclose(apply(amplitude_damping(1.0), rho), ground)
    assert not is_unital(amplitude_damping(0.5))
    with pytest.raises(ValueError):
        amplitude_damping(1.5)


def test_unitary_conjugation(rng):
    u = random_unitary(2, rng)
    assert same_action(unitary_conjugation(np.eye(2)), identity_channel(2))
    assert hs_trace(unitary_conjugation(u)) == pytest.approx(abs(np.trace(u)) ** 2)
    assert hs_trace(unitary_conjugation(pauli(3))) == pytest.approx(0)
    with pytest.raises(ValueError):
        unitary_conjugation(2 * np.eye(2))


def test_quarter_turn_swaps_coordinates():
    half = (np.eye(2) + 1j * pauli(3)) / np.sqrt(2)
    dvec = np.array([0.5, 0.2, -0.1])
    from noisegate.channels import compose
    moved = compose(unitary_conjugation(half.conj().T), compose(unital_from_canonical(dvec), unitary_conjugation(half)))
    assert same_action(moved, unital_from_canonical((0.2, 0.5, -0.1)))


def test_constructors_are_valid_channels():
    built = [depolarizing(3, 0.5), pauli_channel((0.1, 0.2, 0.3, 0.4)), unital_from_canonical((0.1, 0.2, 0.3)),
             vertex(2), edge_midpoint(1, 3), dephasing(2), amplitude_damping(0.3),
             unitary_conjugation(pauli(1))]
    for ch in built:
        assert is_tp(ch) and is_cp(ch)
    for ch in built[:-2] + built[-1:]:
        assert is_unital(ch)


def test_noise_from_spec():
    assert same_action(noise_from_spec({"family": "depolarizing", "d": 3, "eps": 0.2}), depolarizing(3, 0.2))
    assert same_action(noise_from_spec({"family": "pauli", "alpha": [0.5, 0, 0, 0.5]}), dephasing(3))
    assert same_action(noise_from_spec({"family": "canonical", "d1": 0, "d2": 0, "d3": 1}), dephasing(3))
    assert same_action(noise_from_spec({"family": "canonical", "dvec": [0, 0, 1]}), dephasing(3))
    assert same_action(noise_from_spec({"family": "amplitude_damping", "gamma": 0.2}), amplitude_damping(0.2))
    with pytest.raises(ValueError):
        noise_from_spec({"family": "bitflip"})


def test_mixture_of_channels():
    m = mixture([vertex(0), vertex(3)], [0.5, 0.5])
    assert same_action(m, dephasing(3))
