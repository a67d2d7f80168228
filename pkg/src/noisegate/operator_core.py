"""Dense operator algebra on a finite-dimensional Hilbert space.

Operators are plain complex ``numpy`` arrays of shape ``(d, d)``; pure
states are complex vectors of length ``d``. The helpers here provide the
Hilbert-Schmidt structure, the Pauli and matrix-unit bases, Kronecker
products, partial transposition, and the validation predicates used by
every other module.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOL = 1e-9

_PAULI = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
for _p in _PAULI:
    _p.flags.writeable = False


def as_operator(x) -> np.ndarray:
    """Return ``x`` as a complex square matrix, raising if it is not square."""
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {x.shape}")
    return x


def as_pure_state(psi, tol: float = DEFAULT_TOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"pure state must have unit norm, got {norm}")
    return psi


def ket_to_density(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def hs_inner(x, y) -> complex:
    """Hilbert-Schmidt inner product ``tr(x^dagger y)``."""
    x = as_operator(x)
    y = as_operator(y)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return complex(np.vdot(x, y))


def pauli_basis() -> list[np.ndarray]:
    """The identity followed by the three Pauli matrices (read-only arrays)."""
    return list(_PAULI)


def pauli(mu: int) -> np.ndarray:
    if mu not in (0, 1, 2, 3):
        raise ValueError(f"Pauli index must be 0..3, got {mu}")
    return _PAULI[mu]


def orthonormal_operator_basis(d: int) -> list[np.ndarray]:
    """Normalized matrix units ``|i><j|``, orthonormal under :func:`hs_inner`."""
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d}")
    d = int(d)
    basis = []
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            basis.append(e)
    return basis


def tensor(x, *rest) -> np.ndarray:
    """Kronecker product of one or more operators (or vectors)."""
    out = np.asarray(x, dtype=complex)
    for y in rest:
        out = np.kron(out, np.asarray(y, dtype=complex))
    return out


def partial_transpose(x, dims: tuple[int, int], subsystem: int = 1) -> np.ndarray:
    """Transpose one tensor factor of a bipartite operator.

    ``subsystem`` is 0 for the first factor and 1 for the second.
    """
    x = as_operator(x)
    da, db = (int(v) for v in dims)
    if da * db != x.shape[0]:
        raise ValueError(f"dims {dims} incompatible with operator of side {x.shape[0]}")
    if subsystem not in (0, 1):
        raise ValueError(f"subsystem must be 0 or 1, got {subsystem}")
    t = x.reshape(da, db, da, db)
    if subsystem == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def is_hermitian(x, tol: float = DEFAULT_TOL) -> bool:
    x = as_operator(x)
    return bool(np.max(np.abs(x - x.conj().T), initial=0.0) <= tol)


def hermitian_eigenvalues(x, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian operator."""
    x = as_operator(x)
    if not is_hermitian(x, tol):
        raise ValueError("operator is not Hermitian within tolerance")
    return np.linalg.eigvalsh(0.5 * (x + x.conj().T))


def is_psd(x, tol: float = DEFAULT_TOL) -> bool:
    x = as_operator(x)
    if not is_hermitian(x, tol):
        return False
    return bool(hermitian_eigenvalues(x, tol)[0] >= -tol)


def is_density(rho, tol: float = DEFAULT_TOL) -> bool:
    rho = as_operator(rho)
    return is_psd(rho, tol) and abs(np.trace(rho) - 1.0) <= tol


def check_density(rho, tol: float = DEFAULT_TOL) -> np.ndarray:
    rho = as_operator(rho)
    if not is_density(rho, tol):
        raise ValueError("not a density operator (Hermitian, PSD, unit trace)")
    return rho


def is_unitary(u, tol: float = DEFAULT_TOL) -> bool:
    u = as_operator(u)
    return bool(np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=tol, rtol=0))


def max_entangled_state(d: int) -> np.ndarray:
    """``(1/sqrt d) sum_i |ii>`` as a vector of length ``d**2``."""
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = 1.0 / np.sqrt(d)
    return psi


def heisenberg_weyl_basis(d: int) -> list[np.ndarray]:
    """Generalized Paulis ``X^a Z^b`` for ``a, b = 0..d-1`` (identity first).

    ``X|j> = |j+1 mod d>`` and ``Z|j> = w^j |j>`` with ``w = exp(2 pi i/d)``.
    The ``d**2`` operators are unitary and mutually orthogonal with
    ``tr(A^dagger B) = d delta_AB``.
    """
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    out = []
    for a in range(d):
        xa = np.linalg.matrix_power(shift, a)
        for b in range(d):
            out.append(xa @ np.linalg.matrix_power(clock, b))
    return out
