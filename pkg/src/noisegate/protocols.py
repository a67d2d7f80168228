"""CP instruments and ante/post control protocols.

A protocol is a list of pairs ``(I_w, C_w)``: the instrument branch applied
before the noise and the recovery channel applied after it when outcome
``w`` occurred. Outcomes are labelled ``1..M``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import (
    CPMap,
    QuantumChannel,
    apply,
    channel_from_dict,
    channel_to_dict,
    compose,
    dual,
    identity_channel,
    is_cp,
)
from .noise_models import unitary_conjugation
from .operator_core import DEFAULT_TOL, is_psd, pauli

INSTRUMENT_TOL = 1e-9


@dataclass(frozen=True)
class Povm:
    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        els = tuple(np.array(e, dtype=complex) for e in self.elements)
        if not els:
            raise ValueError("a POVM needs at least one element")
        if not all(is_psd(e) for e in els):
            raise ValueError("POVM elements must be positive semidefinite")
        total = sum(els)
        if np.max(np.abs(total - np.eye(total.shape[0]))) > DEFAULT_TOL:
            raise ValueError("POVM elements must sum to the identity")
        for e in els:
            e.flags.writeable = False
        object.__setattr__(self, "elements", els)

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class Instrument:
    """Finite family of CP maps whose sum is trace preserving."""

    branches: tuple[CPMap, ...]

    def __post_init__(self):
        branches = tuple(self.branches)
        if not branches:
            raise ValueError("an instrument needs at least one outcome")
        d_in = branches[0].dim_in
        if any(b.dim_in != d_in for b in branches):
            raise ValueError("all branches must share the input dimension")
        total = sum(apply(dual(b), np.eye(b.dim_out)) for b in branches)
        if np.max(np.abs(total - np.eye(d_in))) > INSTRUMENT_TOL:
            raise ValueError("instrument branches do not sum to a trace-preserving map")
        object.__setattr__(self, "branches", branches)

    def __len__(self):
        return len(self.branches)

    @property
    def dim(self) -> int:
        return self.branches[0].dim_in

    def branch(self, omega: int) -> CPMap:
        if not 1 <= omega <= len(self.branches):
            raise IndexError(f"outcome {omega} not in 1..{len(self.branches)}")
        return self.branches[omega - 1]


def outcome_probability(inst: Instrument, omega: int, rho) -> float:
    return float(np.real(np.trace(apply(inst.branch(omega), rho))))


def induced_povm(inst: Instrument) -> Povm:
    return Povm(tuple(apply(dual(b), np.eye(b.dim_out)) for b in inst.branches))


@dataclass(frozen=True)
class Protocol:
    """Outcome-indexed pairs ``(branch, recovery)``."""

    pairs: tuple[tuple[CPMap, QuantumChannel], ...]

    def __post_init__(self):
        pairs = tuple((b, QuantumChannel.from_cpmap(c)) for b, c in self.pairs)
        inst = Instrument(tuple(b for b, _ in pairs))
        d = inst.dim
        for b, c in pairs:
            if b.dim_out != d or c.dim_in != d or c.dim_out != d:
                raise ValueError("protocol maps must all act on one system dimension")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)

    @property
    def dim(self) -> int:
        return self.pairs[0][0].dim_in

    @property
    def instrument(self) -> Instrument:
        return Instrument(tuple(b for b, _ in self.pairs))

    @property
    def recoveries(self) -> tuple[QuantumChannel, ...]:
        return tuple(c for _, c in self.pairs)

    def conjugated(self, u, v) -> "Protocol":
        """Protocol adapted to the noise ``A_V o N o A_U``.

        If this protocol achieves average operation ``E`` against ``N``, the
        returned one achieves ``A_U^dagger o E o A_U`` against ``A_V o N o A_U``,
        which has the same Hilbert-Schmidt trace.
        """
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        au = unitary_conjugation(u)
        au_inv = unitary_conjugation(u.conj().T)
        av_inv = unitary_conjugation(v.conj().T)
        pairs = [(compose(au_inv, compose(b, au)), compose(au_inv, compose(c, av_inv)))
                 for b, c in self.pairs]
        return Protocol(tuple(pairs))


def average_operation(p: Protocol, noise: CPMap) -> QuantumChannel:
    """``E = sum_w C_w o N o I_w``."""
    if noise.dim_in != p.dim or noise.dim_out != p.dim:
        raise ValueError(f"noise dimension {noise.dim_in}->{noise.dim_out} does not match protocol dim {p.dim}")
    kraus = []
    for b, c in p.pairs:
        kraus.extend(compose(c, compose(noise, b)).kraus)
    return QuantumChannel(kraus, p.dim, p.dim, tol=1e-8)


def do_nothing(d: int = 2) -> Protocol:
    ident = identity_channel(d)
    return Protocol(((ident, ident),))


def no_measurement(mu: int) -> Protocol:
    """Qubit protocol with trivial instrument and recovery ``A_{sigma_mu}``."""
    return Protocol(((identity_channel(2), QuantumChannel([pauli(mu)])),))


def discriminate_reprepare(basis: Sequence | None = None, d: int | None = None,
                           tol: float = DEFAULT_TOL) -> Protocol:
    """Measure in an orthonormal basis, then reprepare the observed basis state.

    ``basis`` is a sequence of ``d`` orthonormal vectors; when omitted the
    computational basis of dimension ``d`` is used.
    """
    if basis is None:
        if d is None:
            raise ValueError("give either a basis or a dimension")
        basis = list(np.eye(d, dtype=complex))
    vecs = np.array([np.asarray(b, dtype=complex).reshape(-1) for b in basis])
    d = vecs.shape[1]
    if vecs.shape[0] != d:
        raise ValueError(f"need {d} basis vectors, got {vecs.shape[0]}")
    if np.max(np.abs(vecs.conj() @ vecs.T - np.eye(d))) > tol:
        raise ValueError("basis is not orthonormal")
    pairs = []
    for phi in vecs:
        proj = np.outer(phi, phi.conj())
        branch = CPMap([proj])
        recovery = QuantumChannel([np.outer(phi, e) for e in np.eye(d)])
        pairs.append((branch, recovery))
    return Protocol(tuple(pairs))


def protocol_to_dict(p: Protocol) -> dict:
    return {"dim": p.dim,
            "outcomes": [{"branch": channel_to_dict(b), "recovery": channel_to_dict(c)} for b, c in p.pairs]}


def protocol_from_dict(data: dict) -> Protocol:
    pairs = []
    for item in data["outcomes"]:
        branch = channel_from_dict(item["branch"], tp=False)
        recovery = channel_from_dict(item["recovery"], tp=True)
        pairs.append((branch, recovery))
    p = Protocol(tuple(pairs))
    if "dim" in data and int(data["dim"]) != p.dim:
        raise ValueError("protocol 'dim' field disagrees with its maps")
    return p


def protocol_to_json(p: Protocol) -> str:
    return json.dumps(protocol_to_dict(p))


def protocol_from_json(text: str) -> Protocol:
    return protocol_from_dict(json.loads(text))


def instrument_is_valid(inst_branches: Sequence[CPMap], tol: float = INSTRUMENT_TOL) -> bool:
    """True when every branch is CP and the branches sum to a TP map."""
    try:
        Instrument(tuple(inst_branches))
    except ValueError:
        return False
    return all(is_cp(b, tol) for b in inst_branches)
