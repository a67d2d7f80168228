"""Random states, unitaries, isometries and channels for tests and searches.

Every sampler takes a ``numpy.random.Generator`` (or a seed) so runs are
reproducible.
"""

from __future__ import annotations

import numpy as np

from .channels import QuantumChannel
from .noise_models import PauliMixture, pauli_channel, unitary_conjugation
from .channels import compose


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def ginibre(shape, rng) -> np.ndarray:
    rng = as_rng(rng)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_isometry(n: int, m: int, rng=None) -> np.ndarray:
    """Haar-random ``n x m`` isometry (``V^dagger V = I_m``), ``n >= m``."""
    if n < m:
        raise ValueError("an isometry needs n >= m")
    q, r = np.linalg.qr(ginibre((n, m), rng))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_unitary(d: int, rng=None) -> np.ndarray:
    return random_isometry(d, d, rng)


def random_pure_state(d: int, rng=None) -> np.ndarray:
    v = ginibre(d, rng)
    return v / np.linalg.norm(v)


def random_pure_states(n: int, d: int, rng=None) -> np.ndarray:
    """``n`` Haar-random pure states as the rows of an ``(n, d)`` array."""
    v = ginibre((n, d), rng)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_density(d: int, rng=None, rank: int | None = None) -> np.ndarray:
    g = ginibre((d, rank or d), rng)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(d: int, rng=None) -> np.ndarray:
    g = ginibre((d, d), rng)
    return 0.5 * (g + g.conj().T)


def random_orthonormal_basis(d: int, rng=None) -> list[np.ndarray]:
    u = random_unitary(d, rng)
    return [u[:, i] for i in range(d)]


def random_channel(d: int, rng=None, rank: int | None = None, d_out: int | None = None) -> QuantumChannel:
    """Channel from a Haar-random Stinespring isometry of the given Kraus rank."""
    d_out = d_out or d
    rank = rank or d * d_out
    w = random_isometry(rank * d_out, d, rng)
    return QuantumChannel(w.reshape(rank, d_out, d))


def random_pauli_mixture(rng=None) -> PauliMixture:
    """Weights drawn uniformly from the probability simplex."""
    a = as_rng(rng).dirichlet(np.ones(4))
    return PauliMixture(tuple(a / a.sum()))


def random_unital_qubit_channel(rng=None) -> QuantumChannel:
    """``A_V o N_alpha o A_U`` with random Pauli weights and Haar ``U``, ``V``."""
    rng = as_rng(rng)
    n = pauli_channel(random_pauli_mixture(rng))
    u = unitary_conjugation(random_unitary(2, rng))
    v = unitary_conjugation(random_unitary(2, rng))
    return compose(v, compose(n, u))
