"""Quantum channel construction and application.

Channels are stored as Kraus operator lists and validated to be trace
preserving at construction.  The erasure channel enlarges the output space by
one level; the flag state sits at index ``d`` of the output basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InvalidStateError
from .linalg import (
    PROB_TOL,
    TP_TOL,
    as_complex_matrix,
    validate_density_matrix,
)


@dataclass(frozen=True)
class QuantumChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    dim_in: int
    dim_out: int
    kraus: tuple[np.ndarray, ...]
    label: str = field(default="channel", compare=False)

    def __post_init__(self):
        if not self.kraus:
            raise InvalidStateError("channel needs at least one Kraus operator")
        ops = tuple(as_complex_matrix(k) for k in self.kraus)
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise DimensionMismatchError(
                    f"Kraus operator shape {k.shape} != ({self.dim_out}, {self.dim_in})"
                )
        object.__setattr__(self, "kraus", ops)
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(self.dim_in))) > TP_TOL:
            raise InvalidStateError("Kraus operators are not trace preserving")


def weyl_unitary(d: int, m: int, n: int) -> np.ndarray:
    """Shift-and-phase unitary: sum_k exp(2 pi i k m / d) |k><(k+n) mod d|."""
    if not (0 <= m < d and 0 <= n < d):
        raise ValueError(f"Weyl indices ({m}, {n}) out of range for d={d}")
    u = np.zeros((d, d), dtype=complex)
    phases = np.exp(2j * np.pi * m * np.arange(d) / d)
    for k in range(d):
        u[k, (k + n) % d] = phases[k]
    return u


def pauli_channel(probs, label: str | None = None) -> QuantumChannel:
    """Random-unitary channel mixing the d^2 Weyl unitaries with weights probs[m, n]."""
    p = np.asarray(probs, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise InvalidStateError(f"probability grid must be square, got shape {p.shape}")
    d = p.shape[0]
    if p.min() < 0.0:
        raise InvalidStateError(f"negative Weyl weight {p.min()}")
    if abs(p.sum() - 1.0) > PROB_TOL:
        raise InvalidStateError(f"Weyl weights sum to {p.sum()}, not 1")
    kraus = tuple(
        np.sqrt(p[m, n]) * weyl_unitary(d, m, n) for m in range(d) for n in range(d)
    )
    return QuantumChannel(d, d, kraus, label or f"pauli(d={d})")


def depolarizing_channel(d: int, p: float) -> QuantumChannel:
    """Identity with weight 1-p, all other Weyl unitaries with weight p/(d^2-1)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing strength {p} outside [0, 1]")
    grid = np.full((d, d), p / (d * d - 1))
    grid[0, 0] = 1.0 - p
    return pauli_channel(grid, label=f"depolarizing(d={d}, p={p:g})")


def erasure_channel(d: int, p: float) -> QuantumChannel:
    """Replace the input with an orthogonal flag state with probability p.

    Output dimension is d+1; the flag is the output basis state at index d.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    embed = np.zeros((d + 1, d), dtype=complex)
    embed[:d, :] = np.eye(d)
    kraus = [np.sqrt(1.0 - p) * embed]
    for i in range(d):
        flip = np.zeros((d + 1, d), dtype=complex)
        flip[d, i] = np.sqrt(p)
        kraus.append(flip)
    return QuantumChannel(d, d + 1, tuple(kraus), label=f"erasure(d={d}, p={p:g})")


def apply_channel(ch: QuantumChannel, rho) -> np.ndarray:
    """sum_k K rho K^dagger, validated as a density matrix."""
    rho = validate_density_matrix(rho)
    if rho.shape[0] != ch.dim_in:
        raise DimensionMismatchError(f"state dim {rho.shape[0]} != channel input dim {ch.dim_in}")
    out = np.zeros((ch.dim_out, ch.dim_out), dtype=complex)
    for k in ch.kraus:
        out += k @ rho @ k.conj().T
    return validate_density_matrix(out)


def apply_extended_channel(ch: QuantumChannel, sigma, dim_ref: int) -> np.ndarray:
    """Apply identity-on-reference tensor the channel to a bipartite state."""
    sigma = validate_density_matrix(sigma)
    if sigma.shape[0] != dim_ref * ch.dim_in:
        raise DimensionMismatchError(
            f"state dim {sigma.shape[0]} does not factor as {dim_ref} x {ch.dim_in}"
        )
    eye_ref = np.eye(dim_ref)
    out = np.zeros((dim_ref * ch.dim_out,) * 2, dtype=complex)
    for k in ch.kraus:
        ext = np.kron(eye_ref, k)
        out += ext @ sigma @ ext.conj().T
    return validate_density_matrix(out)
