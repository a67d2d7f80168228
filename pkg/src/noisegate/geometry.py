"""Geometry of unital qubit noise.

Every unital qubit channel can be written ``A_V o N_d o A_U`` where ``N_d``
is the Pauli channel with ``N_d(sigma_i) = d_i sigma_i``. The admissible
``d = (d1, d2, d3)`` fill the tetrahedron ``T`` with vertices at the four
unitary channels ``A_{sigma_mu}``. ``T`` splits into the octahedron ``O``
(``|d1| + |d2| + |d3| <= 1``, the entanglement-breaking part) and four
corner tetrahedra ``T_mu``, where ``T_mu`` contains vertex ``mu``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.transform import Rotation

from .channels import CPMap, apply, compose, is_unital
from .noise_models import VERTEX_COORDS, canonical_to_alpha, depolarizing_parameter, unital_from_canonical, unitary_conjugation
from .operator_core import DEFAULT_TOL, pauli
from .protocols import Protocol, discriminate_reprepare, do_nothing, no_measurement

REGION_TOL = 1e-9


def bloch_matrix(n: CPMap) -> np.ndarray:
    """Real 3x3 matrix ``B_ij = tr[sigma_i n(sigma_j)] / 2``."""
    if n.dim_in != 2 or n.dim_out != 2:
        raise ValueError("Bloch matrix is defined for qubit maps")
    out = np.empty((3, 3))
    for j in range(3):
        img = apply(n, pauli(j + 1))
        for i in range(3):
            out[i, j] = 0.5 * np.real(np.trace(pauli(i + 1) @ img))
    return out


def bloch_rotation(u) -> np.ndarray:
    """SO(3) matrix of the conjugation ``A_U`` on Bloch vectors."""
    return bloch_matrix(unitary_conjugation(u))


def su2_from_rotation(r) -> np.ndarray:
    """Lift ``R`` in SO(3) to ``U`` in SU(2) with ``bloch_rotation(U) == R``.

    The sign of ``U`` is fixed by ``Re U[0, 0] >= 0``.
    """
    x, y, z, w = Rotation.from_matrix(np.asarray(r, dtype=float)).as_quat()
    if w < 0:
        x, y, z, w = -x, -y, -z, -w
    return w * pauli(0) - 1j * (x * pauli(1) + y * pauli(2) + z * pauli(3))


@dataclass(frozen=True)
class UnitalQubitCanonical:
    """``n == A_{u_out} o N_dvec o A_{u_in}``."""

    dvec: np.ndarray
    u_in: np.ndarray
    u_out: np.ndarray

    def channel(self):
        return unital_from_canonical(self.dvec)

    def reconstruct(self):
        inner = compose(self.channel(), unitary_conjugation(self.u_in))
        return compose(unitary_conjugation(self.u_out), inner)


def canonical_form(n: CPMap, tol: float = DEFAULT_TOL) -> UnitalQubitCanonical:
    """Canonical coordinates and frame unitaries of a unital qubit channel.

    A diagonal Bloch matrix is read off directly, keeping the axes and signs
    of a Pauli channel. Otherwise the signed singular value decomposition
    ``B = R_V diag(d) R_U`` is used, with columns matched to the input axes
    as closely as possible, and the sign convention: no negative
    coordinate when ``det B >= 0``, else exactly one, on the coordinate of
    smallest magnitude.
    """
    if n.dim_in != 2 or n.dim_out != 2:
        raise ValueError("canonical form is defined for qubit channels")
    if not is_unital(n, tol):
        raise ValueError("canonical form needs a unital channel")
    b = bloch_matrix(n)
    if np.max(np.abs(b - np.diag(np.diag(b)))) <= 1e-12:
        eye = np.eye(2, dtype=complex)
        return UnitalQubitCanonical(np.diag(b).copy(), eye, eye.copy())
    p, s, qt = np.linalg.svd(b)
    q = qt.T
    _, perm = linear_sum_assignment(-np.abs(q))
    p, q, s = p[:, perm], q[:, perm], s[perm].copy()
    for i in range(3):
        if q[i, i] < 0:
            p[:, i] *= -1
            q[:, i] *= -1
    k = int(np.argmin(np.abs(s)))
    if np.linalg.det(q) < 0:
        q[:, k] *= -1
        s[k] *= -1
    if np.linalg.det(p) < 0:
        p[:, k] *= -1
        s[k] *= -1
    return UnitalQubitCanonical(s, su2_from_rotation(q.T), su2_from_rotation(p))


def tetrahedron_forms(dvec) -> np.ndarray:
    """``s_mu . d`` for the four vertex sign patterns ``s_mu``."""
    return VERTEX_COORDS @ np.asarray(dvec, dtype=float)


def in_tetrahedron(dvec, tol: float = DEFAULT_TOL) -> bool:
    """All of ``1 + s_mu . d`` (even number of minus signs) are ``>= -tol``."""
    return bool(np.min(1.0 + tetrahedron_forms(dvec)) >= -tol)


def in_octahedron(dvec, tol: float = DEFAULT_TOL) -> bool:
    return bool(np.sum(np.abs(dvec)) <= 1 + tol)


class Region(str, enum.Enum):
    T0 = "T0"
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    O = "O"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class RegionLabel:
    kind: Region
    tetrahedra: tuple[int, ...] = ()

    def __str__(self):
        if self.kind is Region.BOUNDARY:
            return "boundary(" + ",".join(f"T{m}" for m in self.tetrahedra) + ",O)"
        return self.kind.value

    @property
    def mu(self) -> int | None:
        """Index of the corner tetrahedron (first one for boundary points)."""
        return self.tetrahedra[0] if self.tetrahedra else None


def classify(dvec, tol: float = REGION_TOL) -> RegionLabel:
    if not in_tetrahedron(dvec, tol):
        raise ValueError(f"{tuple(dvec)} lies outside the tetrahedron")
    forms = tetrahedron_forms(dvec)
    on = tuple(int(m) for m in np.flatnonzero(np.abs(forms - 1.0) <= tol))
    if on:
        return RegionLabel(Region.BOUNDARY, on)
    above = np.flatnonzero(forms > 1.0)
    if above.size:
        mu = int(above[0])
        return RegionLabel(Region(f"T{mu}"), (mu,))
    return RegionLabel(Region.O)


@dataclass(frozen=True)
class SymmetryTransform:
    """Tetrahedral symmetry ``N -> A_V o N o A_U`` and its action ``d -> S d``."""

    matrix: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def apply(self, dvec) -> np.ndarray:
        return self.matrix @ np.asarray(dvec, dtype=float)

    def vertex_permutation(self) -> tuple[int, ...]:
        """``perm[mu]`` is the vertex that vertex ``mu`` is sent to."""
        imgs = VERTEX_COORDS @ self.matrix.T
        return tuple(int(np.argmin(np.linalg.norm(VERTEX_COORDS - img, axis=1))) for img in imgs)

    def map_region(self, label: RegionLabel) -> RegionLabel:
        perm = self.vertex_permutation()
        if label.kind is Region.O:
            return label
        mapped = tuple(sorted(perm[m] for m in label.tetrahedra))
        if label.kind is Region.BOUNDARY:
            return RegionLabel(Region.BOUNDARY, mapped)
        return RegionLabel(Region(f"T{mapped[0]}"), mapped)

    def compose_after(self, first: "SymmetryTransform") -> "SymmetryTransform":
        """This transform applied after ``first``."""
        return SymmetryTransform(self.matrix @ first.matrix, first.u @ self.u, self.v @ first.v)


def _transform(u, v) -> SymmetryTransform:
    ru, rv = bloch_rotation(u), bloch_rotation(v)
    s = rv * ru.T  # S_ik = Rv_ik Ru_ki
    s = np.round(s)
    return SymmetryTransform(s, np.asarray(u, dtype=complex), np.asarray(v, dtype=complex))


def symmetry_generators() -> list[SymmetryTransform]:
    gens = []
    for i in (1, 2, 3):
        gens.append(_transform(pauli(0), pauli(i)))
        half = (pauli(0) + 1j * pauli(i)) / np.sqrt(2)  # exp(i pi sigma_i / 4)
        gens.append(_transform(half, half.conj().T))
    return gens


def symmetry_group() -> list[SymmetryTransform]:
    """The 24 tetrahedral symmetries generated by ``(1, sigma_i)`` and
    ``(exp(i pi sigma_i/4), exp(-i pi sigma_i/4))``."""
    gens = symmetry_generators()
    identity = _transform(pauli(0), pauli(0))
    key = lambda g: tuple(g.matrix.astype(int).ravel())
    found = {key(identity): identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for g, h in itertools.product(frontier, gens):
            gh = h.compose_after(g)
            k = key(gh)
            if k not in found:
                found[k] = gh
                nxt.append(gh)
        frontier = nxt
    return sorted(found.values(), key=key, reverse=True)


def no_measurement_fidelity(dvec) -> float:
    return 0.5 + float(np.sum(np.abs(dvec))) / 6.0


def predict_optimum(n: CPMap) -> tuple[Protocol, float]:
    """Optimal classical protocol and its average fidelity.

    Unital qubit noise: a no-measurement protocol (in the channel's frame)
    when the canonical point lies in a corner tetrahedron, otherwise
    discriminate-and-reprepare with fidelity 2/3. Depolarizing noise in any
    dimension: do nothing for ``eps <= d/(d+1)``, else discriminate and
    reprepare. Raises ``ValueError`` for other noise.
    """
    d = n.dim_in
    if d == 2 and n.is_square and is_unital(n):
        can = canonical_form(n)
        label = classify(can.dvec)
        if label.kind in (Region.O, Region.BOUNDARY):
            return discriminate_reprepare(d=2), 2.0 / 3.0
        proto = no_measurement(label.mu).conjugated(can.u_in, can.u_out)
        return proto, no_measurement_fidelity(can.dvec)
    eps = depolarizing_parameter(n)
    if eps is not None:
        if eps <= d / (d + 1):
            return do_nothing(d), 1.0 - eps * (d - 1) / d
        return discriminate_reprepare(d=d), 2.0 / (d + 1)
    raise ValueError("no theoretical optimum known: noise is neither unital-qubit nor depolarizing")


def predicted_fidelity(n: CPMap) -> float | None:
    try:
        return predict_optimum(n)[1]
    except ValueError:
        return None
