"""Completely positive maps in Kraus form, with Choi and superoperator views.

A :class:`CPMap` stores its Kraus operators; every other representation is
derived on demand. :class:`QuantumChannel` adds the trace-preservation
check. Choi matrices use the normalized convention

    C = (id (x) E)(|Psi><Psi|),   |Psi> = d_in**-1/2 sum_i |ii>,

so a channel's Choi matrix is a density operator. Multiply by ``d_in`` to
get the unnormalized ``sum_ij |i><j| (x) E(|i><j|)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .operator_core import DEFAULT_TOL, as_operator, hs_inner, orthonormal_operator_basis

KRAUS_CUTOFF = 1e-12


def _freeze(ops) -> tuple[np.ndarray, ...]:
    out = []
    for k in ops:
        a = np.array(k, dtype=complex, copy=True)
        a.flags.writeable = False
        out.append(a)
    return tuple(out)


class CPMap:
    """A completely positive map ``rho -> sum_j K_j rho K_j^dagger``.

    Trace preservation is not required; instrument branches are CP maps
    whose sum is trace preserving.
    """

    def __init__(self, kraus: Sequence, dim_in: int | None = None, dim_out: int | None = None):
        ops = [np.atleast_2d(np.asarray(k, dtype=complex)) for k in kraus]
        if not ops:
            if dim_in is None or dim_out is None:
                raise ValueError("empty Kraus list needs explicit dimensions")
            ops = [np.zeros((dim_out, dim_in), dtype=complex)]
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise ValueError("Kraus operators must share one shape")
        if dim_in is not None and shape[1] != dim_in or dim_out is not None and shape[0] != dim_out:
            raise ValueError(f"Kraus shape {shape} does not match ({dim_out}, {dim_in})")
        self._kraus = _freeze(ops)
        self.dim_out, self.dim_in = shape

    @property
    def kraus(self) -> tuple[np.ndarray, ...]:
        return self._kraus

    @property
    def kraus_array(self) -> np.ndarray:
        """Kraus operators stacked into shape ``(rank, dim_out, dim_in)``."""
        return np.stack(self._kraus)

    @property
    def is_square(self) -> bool:
        return self.dim_in == self.dim_out

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim_in={self.dim_in}, dim_out={self.dim_out}, rank={len(self._kraus)})"


class QuantumChannel(CPMap):
    """A trace-preserving :class:`CPMap`."""

    def __init__(self, kraus: Sequence, dim_in: int | None = None, dim_out: int | None = None,
                 tol: float = DEFAULT_TOL):
        super().__init__(kraus, dim_in, dim_out)
        if not is_tp(self, tol):
            raise ValueError("Kraus operators are not trace preserving (sum K^dagger K != I)")

    @classmethod
    def from_cpmap(cls, m: CPMap, tol: float = DEFAULT_TOL) -> "QuantumChannel":
        if isinstance(m, QuantumChannel):
            return m
        return cls(m.kraus, m.dim_in, m.dim_out, tol=tol)


@dataclass(frozen=True)
class ChoiMatrix:
    """Normalized Choi matrix on ``C^dim_in (x) C^dim_out`` (input factor first)."""

    op: np.ndarray
    dim_in: int
    dim_out: int

    def __post_init__(self):
        op = as_operator(self.op)
        if op.shape[0] != self.dim_in * self.dim_out:
            raise ValueError("Choi matrix side must equal dim_in * dim_out")
        op = op.copy()
        op.flags.writeable = False
        object.__setattr__(self, "op", op)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_in, self.dim_out)

    def unnormalized(self) -> np.ndarray:
        return self.dim_in * self.op


def apply(m: CPMap, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (m.dim_in, m.dim_in):
        raise ValueError(f"input of shape {rho.shape} does not match dim_in={m.dim_in}")
    k = m.kraus_array
    return np.einsum("jab,bc,jdc->ad", k, rho, k.conj())


def identity_channel(d: int) -> QuantumChannel:
    return QuantumChannel([np.eye(d)])


def to_choi(m: CPMap) -> ChoiMatrix:
    # (id (x) K)|Psi~> has components K[b, a] at index (a, b)
    vecs = m.kraus_array.transpose(0, 2, 1).reshape(len(m.kraus), -1)
    op = np.einsum("ja,jb->ab", vecs, vecs.conj()) / m.dim_in
    return ChoiMatrix(op, m.dim_in, m.dim_out)


def from_choi(choi: ChoiMatrix, tol: float = DEFAULT_TOL, cutoff: float = KRAUS_CUTOFF) -> CPMap:
    """Minimal Kraus form of the map with the given (normalized) Choi matrix.

    Raises ``ValueError`` if the Choi matrix has an eigenvalue below ``-tol``.
    """
    j = choi.unnormalized()
    j = 0.5 * (j + j.conj().T)
    w, v = np.linalg.eigh(j)
    if w[0] < -tol:
        raise ValueError(f"Choi matrix is not PSD (min eigenvalue {w[0]:.3g}); map is not CP")
    keep = w > cutoff
    kraus = [np.sqrt(lam) * vec.reshape(choi.dim_in, choi.dim_out).T
             for lam, vec in zip(w[keep], v[:, keep].T)]
    return CPMap(kraus, choi.dim_in, choi.dim_out)


def superoperator(m: CPMap) -> np.ndarray:
    """Matrix ``S`` with ``vec(E(X)) = S vec(X)`` for row-major ``vec``."""
    k = m.kraus_array
    return np.einsum("jab,jcd->acbd", k, k.conj()).reshape(m.dim_out ** 2, m.dim_in ** 2)


def compose(outer: CPMap, inner: CPMap) -> CPMap:
    """``outer o inner``: apply ``inner`` first."""
    if inner.dim_out != outer.dim_in:
        raise ValueError(f"cannot compose: inner dim_out={inner.dim_out}, outer dim_in={outer.dim_in}")
    kraus = np.einsum("iab,jbc->ijac", outer.kraus_array, inner.kraus_array)
    kraus = kraus.reshape(-1, outer.dim_out, inner.dim_in)
    cls = QuantumChannel if isinstance(outer, QuantumChannel) and isinstance(inner, QuantumChannel) else CPMap
    if cls is QuantumChannel:
        return QuantumChannel(kraus, tol=1e-8)
    return CPMap(kraus)


def dual(m: CPMap) -> CPMap:
    """Heisenberg-picture map with Kraus operators ``K_j^dagger``."""
    return CPMap([k.conj().T for k in m.kraus], m.dim_out, m.dim_in)


def mix(maps: Sequence[CPMap], weights: Sequence[float]) -> CPMap:
    """Convex (or nonnegative) combination ``sum_i w_i E_i`` via scaled Kraus lists."""
    if len(maps) != len(weights) or not maps:
        raise ValueError("need one nonnegative weight per map")
    if any(w < 0 for w in weights):
        raise ValueError("mixing weights must be nonnegative")
    dims = {(m.dim_in, m.dim_out) for m in maps}
    if len(dims) != 1:
        raise ValueError("all mixed maps must share dimensions")
    kraus = [np.sqrt(w) * k for m, w in zip(maps, weights) if w > 0 for k in m.kraus]
    dim_in, dim_out = dims.pop()
    if all(isinstance(m, QuantumChannel) for m in maps) and abs(sum(weights) - 1.0) <= DEFAULT_TOL:
        return QuantumChannel(kraus, dim_in, dim_out)
    return CPMap(kraus, dim_in, dim_out)


def hs_trace(m: CPMap) -> float:
    """Hilbert-Schmidt trace ``sum_i <V_i, E(V_i)>`` of a square map.

    For Kraus form this equals ``sum_j |tr K_j|**2``, which is what is
    evaluated; :func:`hs_trace_by_basis` evaluates the defining sum.
    """
    if not m.is_square:
        raise ValueError("Hilbert-Schmidt trace needs dim_in == dim_out")
    traces = np.einsum("jaa->j", m.kraus_array)
    return float(np.sum(np.abs(traces) ** 2))


def hs_trace_by_basis(m: CPMap, basis: Sequence | None = None) -> complex:
    if not m.is_square:
        raise ValueError("Hilbert-Schmidt trace needs dim_in == dim_out")
    if basis is None:
        basis = orthonormal_operator_basis(m.dim_in)
    return sum(hs_inner(v, apply(m, v)) for v in basis)


def is_tp(m: CPMap, tol: float = DEFAULT_TOL) -> bool:
    k = m.kraus_array
    s = np.einsum("jba,jbc->ac", k.conj(), k)
    return bool(np.max(np.abs(s - np.eye(m.dim_in))) <= tol)


def is_cp(m: CPMap | ChoiMatrix, tol: float = DEFAULT_TOL) -> bool:
    choi = m if isinstance(m, ChoiMatrix) else to_choi(m)
    j = choi.op
    if np.max(np.abs(j - j.conj().T)) > tol:
        return False
    return bool(np.linalg.eigvalsh(0.5 * (j + j.conj().T))[0] >= -tol)


def is_unital(m: CPMap, tol: float = DEFAULT_TOL) -> bool:
    if not m.is_square:
        return False
    out = apply(m, np.eye(m.dim_in))
    return bool(np.max(np.abs(out - np.eye(m.dim_in))) <= tol)


def same_action(a: CPMap, b: CPMap, tol: float = DEFAULT_TOL) -> bool:
    return action_distance(a, b) <= tol


def action_distance(a: CPMap, b: CPMap) -> float:
    """Largest entrywise difference of the two maps' superoperators."""
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        return float("inf")
    return float(np.max(np.abs(superoperator(a) - superoperator(b))))


def _encode_matrix(k: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in k]


def _decode_matrix(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def channel_to_dict(m: CPMap) -> dict:
    return {"dim_in": m.dim_in, "dim_out": m.dim_out, "kraus": [_encode_matrix(k) for k in m.kraus]}


def channel_from_dict(data: dict, tp: bool | None = None) -> CPMap:
    """Inverse of :func:`channel_to_dict`.

    ``tp=None`` returns a :class:`QuantumChannel` when the Kraus set is trace
    preserving and a plain :class:`CPMap` otherwise.
    """
    kraus = [_decode_matrix(k) for k in data["kraus"]]
    m = CPMap(kraus, int(data["dim_in"]), int(data["dim_out"]))
    if tp or (tp is None and is_tp(m)):
        return QuantumChannel(m.kraus, m.dim_in, m.dim_out)
    return m


def channel_to_json(m: CPMap) -> str:
    return json.dumps(channel_to_dict(m))


def channel_from_json(text: str, tp: bool | None = None) -> CPMap:
    return channel_from_dict(json.loads(text), tp=tp)
