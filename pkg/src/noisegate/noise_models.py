"""Noise families: depolarizing, Pauli (unital qubit), amplitude damping.

Unital qubit noise is a Pauli mixture ``sum_mu alpha_mu A_{sigma_mu}``. Its
canonical coordinates ``(d1, d2, d3)`` are the Bloch contraction factors,
``N(sigma_i) = d_i sigma_i``, related to the weights by

    d1 = a0 + a1 - a2 - a3,  d2 = a0 - a1 + a2 - a3,  d3 = a0 - a1 - a2 + a3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import QuantumChannel, mix, to_choi
from .operator_core import (
    DEFAULT_TOL,
    as_operator,
    heisenberg_weyl_basis,
    is_unitary,
    max_entangled_state,
    pauli,
)

# rows: (1, d1, d2, d3) as a function of (a0, a1, a2, a3)
_ALPHA_TO_COORDS = np.array([
    [1, 1, 1, 1],
    [1, 1, -1, -1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
], dtype=float)

VERTEX_COORDS = np.array([
    [1, 1, 1],
    [1, -1, -1],
    [-1, 1, -1],
    [-1, -1, 1],
], dtype=float)


@dataclass(frozen=True)
class PauliMixture:
    """Weights ``alpha_mu`` of ``sum_mu alpha_mu sigma_mu rho sigma_mu``."""

    alpha: tuple[float, float, float, float]

    def __post_init__(self):
        a = tuple(float(x) for x in self.alpha)
        if len(a) != 4:
            raise ValueError("a Pauli mixture has exactly four weights")
        if min(a) < -DEFAULT_TOL or abs(sum(a) - 1.0) > DEFAULT_TOL:
            raise ValueError(f"weights must be nonnegative and sum to 1, got {a}")
        object.__setattr__(self, "alpha", a)

    @property
    def coords(self) -> np.ndarray:
        return alpha_to_canonical(self.alpha)


def alpha_to_canonical(alpha) -> np.ndarray:
    return (_ALPHA_TO_COORDS @ np.asarray(alpha, dtype=float))[1:]


def canonical_to_alpha(dvec) -> np.ndarray:
    d1, d2, d3 = (float(x) for x in dvec)
    # _ALPHA_TO_COORDS is a Hadamard matrix: its inverse is its transpose / 4
    return _ALPHA_TO_COORDS.T @ np.array([1.0, d1, d2, d3]) / 4.0


def depolarizing(d: int, eps: float) -> QuantumChannel:
    """``rho -> (1 - eps) rho + eps tr(rho) I/d``.

    Kraus form over the Heisenberg-Weyl basis ``X^a Z^b``: weight
    ``1 - eps + eps/d**2`` on the identity and ``eps/d**2`` on each of the
    other ``d**2 - 1`` elements.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"eps must lie in [0, 1], got {eps}")
    basis = heisenberg_weyl_basis(d)
    w_rest = eps / d ** 2
    weights = [1.0 - eps + w_rest] + [w_rest] * (d * d - 1)
    kraus = [np.sqrt(w) * u for w, u in zip(weights, basis) if w > 0]
    return QuantumChannel(kraus)


def depolarizing_parameter(n, tol: float = 1e-9) -> float | None:
    """Return ``eps`` if ``n`` acts as a depolarizing channel, else ``None``."""
    if not n.is_square:
        return None
    d = n.dim_in
    psi = max_entangled_state(d)
    choi = to_choi(n).op
    overlap = float(np.real(psi.conj() @ choi @ psi))
    eps = (1.0 - overlap) / (1.0 - 1.0 / d ** 2)
    if eps < -tol or eps > 1 + tol:
        return None
    eps = min(max(eps, 0.0), 1.0)
    expected = (1 - eps) * np.outer(psi, psi.conj()) + eps * np.eye(d * d) / d ** 2
    if np.max(np.abs(choi - expected)) > tol:
        return None
    return eps


def pauli_channel(mix_weights) -> QuantumChannel:
    """Unital qubit channel ``sum_mu alpha_mu sigma_mu rho sigma_mu``."""
    m = mix_weights if isinstance(mix_weights, PauliMixture) else PauliMixture(tuple(mix_weights))
    kraus = [np.sqrt(max(a, 0.0)) * pauli(mu) for mu, a in enumerate(m.alpha) if a > 0]
    return QuantumChannel(kraus, 2, 2)


def unital_from_canonical(dvec, tol: float = DEFAULT_TOL) -> QuantumChannel:
    """Pauli channel with ``N(sigma_i) = d_i sigma_i``.

    Raises ``ValueError`` when ``dvec`` lies outside the tetrahedron (the
    map would not be completely positive).
    """
    alpha = canonical_to_alpha(dvec)
    if np.min(alpha) < -tol:
        raise ValueError(f"coordinates {tuple(dvec)} lie outside the tetrahedron; map is not CP")
    alpha = np.clip(alpha, 0.0, None)
    return pauli_channel(alpha / alpha.sum())


def vertex(mu: int) -> QuantumChannel:
    return QuantumChannel([pauli(mu)])


def edge_midpoint(mu: int, nu: int) -> QuantumChannel:
    if mu == nu:
        raise ValueError("edge midpoint needs two distinct vertices")
    alpha = np.zeros(4)
    alpha[mu] = alpha[nu] = 0.5
    return pauli_channel(alpha)


def dephasing(axis: int) -> QuantumChannel:
    """``rho -> (rho + sigma_i rho sigma_i)/2``, the midpoint ``E_{0i}``."""
    if axis not in (1, 2, 3):
        raise ValueError("dephasing axis must be 1, 2 or 3")
    return edge_midpoint(0, axis)


def amplitude_damping(gamma: float) -> QuantumChannel:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return QuantumChannel([k0, k1] if gamma > 0 else [k0])


def unitary_conjugation(u, tol: float = DEFAULT_TOL) -> QuantumChannel:
    """``A_U(rho) = U rho U^dagger``."""
    u = as_operator(u)
    if not is_unitary(u, tol):
        raise ValueError("conjugating operator is not unitary")
    return QuantumChannel([u])


def noise_from_spec(spec: dict) -> QuantumChannel:
    """Build a channel from an experiment-file noise description.

    Accepted forms::

        {"family": "depolarizing", "d": 3, "eps": 0.4}
        {"family": "pauli", "alpha": [a0, a1, a2, a3]}
        {"family": "canonical", "d1": .., "d2": .., "d3": ..}   # or "dvec": [...]
        {"family": "amplitude_damping", "gamma": 0.3}
    """
    family = spec.get("family")
    if family == "depolarizing":
        return depolarizing(int(spec.get("d", 2)), float(spec["eps"]))
    if family == "pauli":
        return pauli_channel(spec["alpha"])
    if family == "canonical":
        dvec = spec.get("dvec") or [spec["d1"], spec["d2"], spec["d3"]]
        return unital_from_canonical([float(x) for x in dvec])
    if family == "amplitude_damping":
        return amplitude_damping(float(spec["gamma"]))
    raise ValueError(f"unknown noise family {family!r}")


def mixture(channels, weights) -> QuantumChannel:
    out = mix(channels, weights)
    return QuantumChannel.from_cpmap(out)
