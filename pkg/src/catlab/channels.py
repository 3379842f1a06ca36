"""Qubit noise channels in Kraus form, channel application and Choi states."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qmat import (
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DensityOperator,
    DimensionError,
    as_density,
    max_entangled,
)

KRAUS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus_ops: tuple[np.ndarray, ...]
    name: str = "channel"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise DimensionError("Kraus operators must share one 2-D shape")
        for k in ops:
            k.setflags(write=False)
        completeness = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(completeness - np.eye(shape[1]))) > KRAUS_TOL:
            raise ValueError(f"{self.name}: Kraus operators are not trace preserving")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def d_in(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.kraus_ops[0].shape[0]

    def __call__(self, rho):
        return apply(self, rho)


def _check_unit(p: float, what: str) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{what} must lie in [0, 1], got {p}")
    return p


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(d),), "identity", {"d": d})


def dephasing(p: float) -> KrausChannel:
    """p id + (1 - p) Z . Z on a qubit."""
    p = _check_unit(p, "dephasing parameter")
    return KrausChannel((math.sqrt(p) * PAULI_I, math.sqrt(1 - p) * PAULI_Z), "dephasing", {"p": p})


def amplitude_damping(p: float) -> KrausChannel:
    p = _check_unit(p, "damping parameter")
    k0 = np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=complex)
    k1 = np.array([[0, math.sqrt(p)], [0, 0]], dtype=complex)
    return KrausChannel((k0, k1), "amplitude_damping", {"p": p})


def depolarizing_weight(alpha: float, length: float) -> float:
    """Surviving weight exp(-alpha * length) of the length-dependent depolarizing channel."""
    if alpha < 0 or length < 0:
        raise ValueError("alpha and length must be non-negative")
    return math.exp(-alpha * length)


def depolarizing_length(alpha: float, length: float) -> KrausChannel:
    """rho -> q rho + (1 - q) I/2 with q = exp(-alpha * length).

    Realised with five Kraus operators: sqrt(q) I and sqrt((1-q)/4) times each
    Pauli, using sum_P P rho P / 4 = Tr[rho] I / 2.
    """
    q = depolarizing_weight(alpha, length)
    r = math.sqrt((1 - q) / 4)
    ops = (math.sqrt(q) * PAULI_I, r * PAULI_I, r * PAULI_X, r * PAULI_Y, r * PAULI_Z)
    return KrausChannel(ops, "depolarizing", {"alpha": alpha, "length": length, "weight": q})


def apply(ch: KrausChannel, rho, subsystem: int | None = None) -> DensityOperator:
    """Apply ``ch`` to one subsystem of ``rho`` (the last one by default)."""
    rho = as_density(rho)
    dims = rho.dims
    if subsystem is None:
        subsystem = len(dims) - 1
    if not 0 <= subsystem < len(dims):
        raise IndexError(f"subsystem {subsystem} out of range for dims {dims}")
    if dims[subsystem] != ch.d_in:
        raise DimensionError(f"channel expects input dimension {ch.d_in}, subsystem has {dims[subsystem]}")
    n = len(dims)
    t = rho.mat.reshape(dims + dims)
    out_dims = dims[:subsystem] + (ch.d_out,) + dims[subsystem + 1:]
    acc = 0
    for k in ch.kraus_ops:
        # K on the row index, K^* on the column index of the chosen subsystem.
        x = np.moveaxis(np.tensordot(k, t, axes=([1], [subsystem])), 0, subsystem)
        x = np.moveaxis(np.tensordot(k.conj(), x, axes=([1], [n + subsystem])), 0, n + subsystem)
        acc = acc + x
    d = int(np.prod(out_dims))
    return DensityOperator(acc.reshape(d, d), out_dims, validate=False)


def choi(ch: KrausChannel) -> DensityOperator:
    """(id (x) N) applied to the maximally entangled state on dims [d_in, d_in]."""
    return apply(ch, max_entangled(ch.d_in).density(), subsystem=1)


def is_trace_preserving(ch: KrausChannel, tol: float = KRAUS_TOL) -> bool:
    completeness = sum(k.conj().T @ k for k in ch.kraus_ops)
    return bool(np.max(np.abs(completeness - np.eye(ch.d_in))) <= tol)


def make_channel(family: str, noise: float, alpha: float | None = None) -> KrausChannel:
    """Construct a channel by family name; for ``depolarizing`` the noise value is the length."""
    if family == "dephasing":
        return dephasing(noise)
    if family == "amplitude_damping":
        return amplitude_damping(noise)
    if family == "depolarizing":
        return depolarizing_length(1.0 if alpha is None else alpha, noise)
    raise ValueError(f"unknown channel family {family!r}")
