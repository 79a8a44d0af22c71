"""Detectable capacity bound, exact oracles and closed forms.

The measured lower bound is

    qdet = S[E(rho)] - H(p) - log2(t . p)

with p the POVM outcome distribution, t the channel-independent outcome
weights, and S[E(rho)] the output entropy of the reduced probe state.  It
never exceeds the single-use coherent information of the channel at the same
input, which :func:`certify` verifies against the exact oracle on every call.
The same number lower-bounds the private information, and adding the input
entropy S(rho) gives a lower bound on the entanglement-assisted classical
capacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import QuantumChannel, apply_channel, apply_extended_channel
from .errors import (
    DegenerateMeasurementError,
    DimensionMismatchError,
    InternalConsistencyError,
    InvalidStateError,
)
from .linalg import (
    PINV_CUTOFF,
    RECON_TOL,
    binary_entropy,
    double_ket,
    hermitian_eigen,
    matrix_sqrt,
    pseudo_inverse,
    shannon_entropy,
    validate_density_matrix,
    von_neumann_entropy,
)
from .measurement import Povm, coarse_grain, iter_partitions, outcome_probabilities, t_vector
from .probes import BipartiteProbeState, reduced_system_state

CHAIN_TOL = 1e-9
EXHAUSTIVE_GROUPING_LIMIT = 6  # enumerate all partitions up to this many outcomes


@dataclass(frozen=True)
class CertificationResult:
    """Detected capacity bound and every ingredient that produced it."""

    qdet: float
    output_entropy: float  # S[E(rho)], bits
    prob_entropy: float  # H(p) after grouping, bits
    log_tp: float  # log2(t . p) after grouping, bits
    input_entropy: float  # S(rho), bits
    private_lower: float  # lower bound on the private information
    ea_classical_lower: float  # lower bound on the entanglement-assisted capacity
    grouping: tuple[tuple[int, ...], ...]
    probe_label: str = field(default="", compare=False)
    channel_label: str = field(default="", compare=False)
    povm_label: str = field(default="povm", compare=False)


def entropy_exchange(rho, ch: QuantumChannel, purification: np.ndarray | None = None) -> float:
    """Entropy of the joint reference/output state of a purified input.

    The purification double-ket is built from the PSD square root of rho^T,
    optionally rotated by a unitary on the purifying reference; the result is
    independent of that choice.
    """
    rho = validate_density_matrix(rho)
    if rho.shape[0] != ch.dim_in:
        raise DimensionMismatchError(f"state dim {rho.shape[0]} != channel input dim {ch.dim_in}")
    amp = matrix_sqrt(rho.T)
    if purification is not None:
        v = np.asarray(purification, dtype=complex)
        if v.shape != rho.shape:
            raise DimensionMismatchError(f"purification unitary shape {v.shape} != {rho.shape}")
        if np.max(np.abs(v @ v.conj().T - np.eye(v.shape[0]))) > RECON_TOL:
            raise InvalidStateError("purification rotation is not unitary")
        amp = v @ amp
    psi = double_ket(amp)
    joint = apply_extended_channel(ch, np.outer(psi, psi.conj()), rho.shape[0])
    return von_neumann_entropy(joint)


def coherent_information(rho, ch: QuantumChannel) -> float:
    """S[E(rho)] - S_e(rho, E); may be negative."""
    rho = validate_density_matrix(rho)
    return von_neumann_entropy(apply_channel(ch, rho)) - entropy_exchange(rho, ch)


def qdet_from_statistics(p, t, output_entropy: float) -> float:
    """Detected bound from an outcome distribution and its weights."""
    p = np.asarray(p, dtype=float).reshape(-1)
    t = np.asarray(t, dtype=float).reshape(-1)
    if p.shape != t.shape:
        raise DimensionMismatchError("probability and weight vectors differ in length")
    tp = float(t @ p)
    if tp <= 0.0:
        raise DegenerateMeasurementError(f"t . p = {tp} is not positive")
    return output_entropy - shannon_entropy(p) - math.log2(tp)


def _best_grouping(p: np.ndarray, t: np.ndarray, output_entropy: float):
    """Search coarse-grainings for the largest detected bound.

    Exhaustive over all set partitions for small POVMs, greedy pairwise
    merging otherwise.  The trivial partition is always a candidate, so the
    optimized bound can never fall below the raw one.
    """
    n = p.size
    singletons = tuple((i,) for i in range(n))
    best = (qdet_from_statistics(p, t, output_entropy), singletons)
    if n <= EXHAUSTIVE_GROUPING_LIMIT:
        for groups in iter_partitions(n):
            pm, tm = coarse_grain(p, t, groups)
            val = qdet_from_statistics(pm, tm, output_entropy)
            if val > best[0]:
                best = (val, groups)
        return best
    groups = [list(g) for g in singletons]
    while len(groups) > 1:
        gain = None
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                trial = [g for k, g in enumerate(groups) if k not in (a, b)]
                trial.append(groups[a] + groups[b])
                pm, tm = coarse_grain(p, t, trial)
                val = qdet_from_statistics(pm, tm, output_entropy)
                if val > best[0] and (gain is None or val > gain[0]):
                    gain = (val, a, b)
        if gain is None:
            break
        val, a, b = gain
        merged = groups[a] + groups[b]
        groups = [g for k, g in enumerate(groups) if k not in (a, b)] + [merged]
        best = (val, tuple(tuple(g) for g in groups))
    return best


def certify(
    probe: BipartiteProbeState,
    ch: QuantumChannel,
    povm: Povm,
    optimize: bool = False,
) -> CertificationResult:
    """Run the full detection pipeline for one probe/channel/POVM triple.

    Computes the outcome distribution, the channel-independent weights and
    the exact output entropy of the model, optionally optimizes over merged
    outcomes, and cross-checks the result against the coherent-information
    oracle (cheap at these dimensions).
    """
    rho = reduced_system_state(probe)
    output_entropy = von_neumann_entropy(apply_channel(ch, rho))
    p = outcome_probabilities(probe, ch, povm)
    t = t_vector(probe, povm)
    if optimize:
        qdet, grouping = _best_grouping(p, t, output_entropy)
    else:
        grouping = tuple((i,) for i in range(p.size))
        qdet = qdet_from_statistics(p, t, output_entropy)
    oracle = coherent_information(rho, ch)
    if qdet > oracle + CHAIN_TOL:
        raise InternalConsistencyError(
            f"detected bound {qdet} exceeds the coherent information {oracle}"
        )
    pm, tm = coarse_grain(p, t, grouping)
    prob_entropy = shannon_entropy(pm)
    log_tp = math.log2(float(tm @ pm))
    input_entropy = von_neumann_entropy(rho)
    qdet = output_entropy - prob_entropy - log_tp  # definitional identity, exact
    return CertificationResult(
        qdet=qdet,
        output_entropy=output_entropy,
        prob_entropy=prob_entropy,
        log_tp=log_tp,
        input_entropy=input_entropy,
        private_lower=qdet,
        ea_classical_lower=input_entropy + qdet,
        grouping=grouping,
        probe_label=probe.label,
        channel_label=ch.label,
        povm_label=povm.name,
    )


def hashing_bound(d: int, p: float) -> float:
    """Detected bound for a depolarizing channel probed with a perfect
    maximally entangled state: log2 d - H2(p) - p log2(d^2 - 1)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing strength {p} outside [0, 1]")
    return math.log2(d) - binary_entropy(p) - p * math.log2(d * d - 1)


def depolarizing_isotropic_qdet(d: int, p: float, fidelity: float) -> float:
    """Closed form for a depolarizing channel with an isotropic probe.

    The Bell statistics see an effective error weight
    p_eff = (d^2 [1 - F(1-p)] + F - p - 1) / (d^2 - 1), which reduces to p at
    perfect fidelity.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing strength {p} outside [0, 1]")
    if not 1.0 / d**2 <= fidelity <= 1.0:
        raise ValueError(f"fidelity {fidelity} outside [{1.0 / d ** 2}, 1]")
    p_eff = (d * d * (1.0 - fidelity * (1.0 - p)) + fidelity - p - 1.0) / (d * d - 1.0)
    p_eff = min(max(p_eff, 0.0), 1.0)
    return math.log2(d) - binary_entropy(p_eff) - p_eff * math.log2(d * d - 1)


def erasure_qdet_closed_form(d: int, p: float, fidelity: float) -> float:
    """Closed form for an erasure channel with an isotropic probe and the
    flag-adapted measurement; equals the exact capacity expression at F = 1."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    if not 1.0 / d**2 <= fidelity <= 1.0:
        raise ValueError(f"fidelity {fidelity} outside [{1.0 / d ** 2}, 1]")
    penalty = binary_entropy(fidelity) + (1.0 - fidelity) * math.log2(d * d - 1)
    return (1.0 - 2.0 * p) * math.log2(d) - (1.0 - p) * penalty


def erasure_exact_capacity(d: int, p: float) -> float:
    """(1 - 2p) log2 d for p <= 1/2, zero beyond."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    return max(0.0, (1.0 - 2.0 * p)) * math.log2(d)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(fn, lo: float, hi: float, tol: float = 1e-8) -> float:
    """Golden-section maximization of a unimodal scalar function."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d_ = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d_)
    while b - a > tol:
        if fc >= fd:
            b, d_, fd = d_, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + _GOLDEN * (b - a)
            fd = fn(d_)
    return max(fc, fd)


def _max_over_noise(fn) -> float:
    """Maximum of fn over p in [0, 1]: coarse grid, then local refinement."""
    grid = np.linspace(0.0, 1.0, 2001)
    vals = np.array([fn(p) for p in grid])
    k = int(np.argmax(vals))
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid.size - 1)]
    return max(float(vals[k]), _golden_max(fn, lo, hi))


def threshold_fidelity(channel_family: str, d: int) -> float:
    """Largest probe fidelity at which no noise level yields a positive
    detected bound, located by bisection on the closed forms."""
    if channel_family == "depolarizing":
        closed = lambda p, f: depolarizing_isotropic_qdet(d, p, f)
    elif channel_family == "erasure":
        closed = lambda p, f: erasure_qdet_closed_form(d, p, f)
    else:
        raise ValueError(f"unsupported channel family {channel_family!r}")
    best_at = lambda f: _max_over_noise(lambda p: closed(p, f))
    lo, hi = 1.0 / d**2, 1.0
    if best_at(lo) > 0.0:
        raise InternalConsistencyError("detected bound positive even at minimal fidelity")
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if best_at(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def measurement_diagnostics(
    probe: BipartiteProbeState, ch: QuantumChannel, povm: Povm
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Conditional-outcome diagnostic.

    Returns (r, t, cond) where cond[i, j] is the outcome-i probability
    conditioned on the j-th spectral component of the purified channel
    output, r_i sums cond over components, and t is the outcome weight
    vector.  Componentwise r <= t, and the spectral mixture of cond
    reproduces the outcome distribution.
    """
    rho = reduced_system_state(probe)
    root = matrix_sqrt(rho.T)
    root_inv = pseudo_inverse(root)
    psi = double_ket(root)
    joint = apply_extended_channel(ch, np.outer(psi, psi.conj()), probe.d)
    evals, evecs = hermitian_eigen(joint)
    keep = evals > PINV_CUTOFF * max(evals.max(), 0.0)
    basis = evecs[:, keep]
    eye_out = np.eye(ch.dim_out)
    cond = np.zeros((len(povm), int(keep.sum())))
    for i, element in enumerate(povm.elements):
        m = np.zeros_like(element)
        for a, op in zip(probe.weights, probe.operators):
            side = np.kron(op @ root_inv, eye_out)
            m += a * (side.conj().T @ element @ side)
        cond[i, :] = np.einsum("sj,st,tj->j", basis.conj(), m, basis).real
    return cond.sum(axis=1), t_vector(probe, povm), cond
