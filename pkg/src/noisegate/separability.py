"""Entanglement-breaking (measure-and-prepare) certification of channels.

A channel is entanglement breaking iff its Choi state is separable. The
test used is positivity of the partial transpose, which decides
separability for qubit channels (a 2 x 2 Choi state) and, through the
isotropic-state threshold ``eps >= d/(d+1)``, for depolarizing noise in any
dimension. For other channels a PPT pass is reported as undecided.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .channels import ChoiMatrix, CPMap, is_unital, to_choi
from .geometry import canonical_form
from .noise_models import depolarizing_parameter
from .operator_core import DEFAULT_TOL, hermitian_eigenvalues, partial_transpose, pauli
from .protocols import Povm


class QcqStatus(str, enum.Enum):
    ENTANGLEMENT_BREAKING = "entanglement_breaking"
    NOT_EB = "not_eb"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class QcqVerdict:
    status: QcqStatus
    witness: float | None = None

    def __post_init__(self):
        if self.status is QcqStatus.NOT_EB and not (self.witness is not None and self.witness < -DEFAULT_TOL):
            raise ValueError("a not-EB verdict needs a negative partial-transpose eigenvalue")

    @property
    def is_eb(self) -> bool:
        return self.status is QcqStatus.ENTANGLEMENT_BREAKING


def ppt_check(choi: ChoiMatrix, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Whether the partially transposed Choi state is PSD, and its lowest eigenvalue."""
    pt = partial_transpose(choi.op, choi.dims, subsystem=1)
    lam = float(hermitian_eigenvalues(pt, tol=1e-8)[0])
    return lam >= -tol, lam


def is_qcq(n: CPMap, tol: float = DEFAULT_TOL) -> QcqVerdict:
    ok, lam = ppt_check(to_choi(n), tol)
    if not ok:
        return QcqVerdict(QcqStatus.NOT_EB, lam)
    if n.dim_in * n.dim_out <= 6:
        return QcqVerdict(QcqStatus.ENTANGLEMENT_BREAKING, lam)
    eps = depolarizing_parameter(n)
    if eps is not None and n.is_square:
        d = n.dim_in
        # isotropic Choi state: separable iff PPT, which is eps >= d/(d+1)
        if eps >= d / (d + 1) - tol:
            return QcqVerdict(QcqStatus.ENTANGLEMENT_BREAKING, lam)
    return QcqVerdict(QcqStatus.UNDECIDED, lam)


@dataclass(frozen=True)
class QcqDecomposition:
    """``F(rho) = sum_k states[k] tr(povm[k] rho)``."""

    states: tuple[np.ndarray, ...]
    povm: Povm

    def __call__(self, rho) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return sum(s * np.trace(m @ rho) for s, m in zip(self.states, self.povm.elements))


def _axis_projectors(axis: int) -> tuple[np.ndarray, np.ndarray]:
    s = pauli(axis)
    one = pauli(0)
    return 0.5 * (one + s), 0.5 * (one - s)


def octahedron_weights(dvec) -> dict[tuple[int, int], float]:
    """Convex weights of ``dvec`` over the six vertices ``+-e_i`` of the octahedron.

    Keys are ``(axis, sign)``; the leftover ``1 - sum |d_i|`` is spread
    evenly over all six (their average is the origin).
    """
    dvec = np.asarray(dvec, dtype=float)
    rest = max(1.0 - float(np.sum(np.abs(dvec))), 0.0) / 6.0
    w = {}
    for i in range(3):
        for sign in (1, -1):
            w[(i + 1, sign)] = rest + (abs(dvec[i]) if np.sign(dvec[i]) == sign else 0.0)
    total = sum(w.values())
    return {k: v / total for k, v in w.items()}


def qcq_decomposition(n: CPMap, tol: float = DEFAULT_TOL) -> QcqDecomposition | None:
    """Measure-and-prepare form of an entanglement-breaking unital qubit channel.

    The octahedron vertex ``+e_i`` is the dephasing channel, measured and
    reprepared in the ``sigma_i`` eigenbasis; ``-e_i`` reprepares the
    opposite eigenstate. Returns ``None`` when the channel is not
    certified entanglement breaking. Non-unital entanglement-breaking
    channels raise ``NotImplementedError``.
    """
    if n.dim_in != 2 or n.dim_out != 2:
        return None
    if not is_qcq(n, tol).is_eb:
        return None
    if not is_unital(n, tol):
        raise NotImplementedError("measure-and-prepare form is only constructed for unital qubit channels")
    can = canonical_form(n, tol)
    u, v = can.u_in, can.u_out
    states, elements = [], []
    for (axis, sign), w in octahedron_weights(can.dvec).items():
        if w <= 0:
            continue
        p0, p1 = _axis_projectors(axis)
        for meas, prep in ((p0, p0 if sign > 0 else p1), (p1, p1 if sign > 0 else p0)):
            # rho -> V N(U rho U^dag) V^dag: measure U^dag M U, prepare V P V^dag
            elements.append(w * (u.conj().T @ meas @ u))
            states.append(v @ prep @ v.conj().T)
    return QcqDecomposition(tuple(states), Povm(tuple(elements)))
