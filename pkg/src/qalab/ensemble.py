"""Quantum states and the statistical bridge from individual outcomes.

A quantum state is a density operator; it evaluates observables linearly
through the trace.  The sample machinery draws a fresh physical state per
trial (never reusing one), with per-trial seeds derived from a master seed
by splitmix hashing, so trials are independent and order-free: results are
identical no matter how a trial range is split or scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import algebra, kernels
from ._rng import MASK64, derive_seed
from .algebra import AlgebraElement
from .contexts import context_diagonal, context_from_observable
from .errors import (
    ArgumentError,
    DimensionError,
    InvalidStateError,
    NotObservableError,
    NumericalError,
)
from .physical import born_weights, outcome_cumulative

_HERM_TOL = 1e-10
_TRACE_TOL = 1e-10
_EIG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Density operator: Hermitian, unit trace, positive semidefinite."""

    dim: int
    rho: np.ndarray

    def __post_init__(self):
        m = np.array(self.rho, dtype=np.complex128)
        if m.ndim != 2 or m.shape != (self.dim, self.dim):
            raise InvalidStateError(f"density matrix must be {self.dim}x{self.dim}")
        if float(np.max(np.abs(m - m.conj().T))) > _HERM_TOL:
            raise InvalidStateError("density matrix is not Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > _TRACE_TOL:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        eigs = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        if float(eigs.min()) < -_EIG_TOL:
            raise InvalidStateError(f"negative eigenvalue {eigs.min():.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "rho", m)

    def rank(self, tol: float = _EIG_TOL) -> int:
        eigs = np.linalg.eigvalsh(self.rho)
        top = float(eigs.max())
        return int(np.sum(eigs > tol * max(top, 1.0)))

    def __repr__(self):
        return f"QuantumState(dim={self.dim})"


def density_state(rho) -> QuantumState:
    """Quantum state from an explicit density matrix (validated)."""
    m = np.asarray(rho, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got {m.shape}")
    return QuantumState(m.shape[0], m)


def pure_state(psi) -> QuantumState:
    """Rank-1 state |psi><psi| from a (not necessarily normalized) vector."""
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    norm = float(np.linalg.norm(v))
    if norm <= 1e-300:
        raise InvalidStateError("cannot normalize a zero vector")
    v = v / norm
    return QuantumState(len(v), np.outer(v, v.conj()))


def mixed_state(weights, vectors) -> QuantumState:
    """Convex mixture of pure states with nonnegative weights."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or len(w) != len(vectors):
        raise InvalidStateError("need one weight per vector")
    if float(w.min()) < 0.0:
        raise InvalidStateError(f"negative weight {w.min()!r}")
    total = float(w.sum())
    if total <= 0.0:
        raise InvalidStateError("weights sum to zero")
    w = w / total
    dim = len(np.asarray(vectors[0]).reshape(-1))
    rho = np.zeros((dim, dim), dtype=np.complex128)
    for wi, vi in zip(w, vectors):
        rho += wi * pure_state(vi).rho
    return QuantumState(dim, rho)


def maximally_mixed(dim: int) -> QuantumState:
    return QuantumState(dim, np.eye(dim, dtype=np.complex128) / dim)


def quantum_average(rho: QuantumState, a: AlgebraElement) -> float:
    """Exact ensemble average Tr(rho A) of an observable."""
    if rho.dim != a.dim:
        raise DimensionError(f"state dim {rho.dim} vs element dim {a.dim}")
    if not algebra.is_hermitian(a):
        raise NotObservableError("quantum_average requires a Hermitian element")
    val = complex(np.trace(rho.rho @ a.entries))
    if abs(val.imag) > 1e-10 * (1.0 + abs(val.real)):
        raise NumericalError(f"trace has imaginary residue {val.imag:.3e}")
    return float(val.real)


@dataclass(frozen=True)
class SampleStats:
    """Running statistics of a Monte-Carlo sample."""

    n: int
    mean: float
    variance: float
    history: tuple[tuple[int, float], ...] | None = None


def _counted_stats(counts: np.ndarray, values: np.ndarray, n: int) -> tuple[float, float]:
    mean = float(np.dot(counts.astype(np.float64), values) / n)
    var = float(np.dot(counts.astype(np.float64), (values - mean) ** 2) / n)
    return mean, max(var, 0.0)


def sample_mean(
    rho: QuantumState,
    a: AlgebraElement,
    n: int,
    seed: int,
    checkpoints: Sequence[int] | None = None,
) -> SampleStats:
    """Sample mean of ``a`` over ``n`` fresh physical states.

    Each trial draws a brand-new physical state (seed derived from the master
    seed and the trial index) and evaluates it once in the canonical context
    of ``a``.  ``checkpoints`` optionally records the running mean at the
    given ascending trial counts.
    """
    if n < 1:
        raise ArgumentError(f"trial count must be >= 1, got {n}")
    seed = int(seed) & MASK64
    ctx = context_from_observable(a)
    values = context_diagonal(ctx, a)
    cw = outcome_cumulative(born_weights(rho, ctx))

    marks: list[int] = []
    if checkpoints is not None:
        marks = sorted({int(c) for c in checkpoints if 1 <= int(c) <= n})
    if not marks or marks[-1] != n:
        marks.append(n)

    counts = np.zeros(len(cw), dtype=np.int64)
    history = []
    prev = 0
    for mark in marks:
        counts += kernels.sample_counts(cw, seed, ctx.key, prev, mark)
        prev = mark
        history.append((mark, _counted_stats(counts, values, mark)[0]))
    mean, var = _counted_stats(counts, values, n)
    return SampleStats(
        n=n,
        mean=mean,
        variance=var,
        history=tuple(history) if checkpoints is not None else None,
    )


def outcome_distribution(rho: QuantumState, a: AlgebraElement) -> tuple[np.ndarray, np.ndarray]:
    """Spectral outcome values (ascending) and their exact probabilities."""
    ctx = context_from_observable(a)
    diag = context_diagonal(ctx, a)
    weights = born_weights(rho, ctx)
    order = np.argsort(diag, kind="stable")
    diag, weights = diag[order], weights[order]
    scale = 1.0 + float(np.max(np.abs(diag), initial=0.0))
    values, probs = [], []
    start = 0
    for i in range(1, len(diag) + 1):
        if i == len(diag) or diag[i] - diag[i - 1] > algebra.TAU_SPEC * scale:
            chunk_w = float(weights[start:i].sum())
            chunk_v = diag[start:i]
            if chunk_w > 0.0:
                values.append(float(np.dot(weights[start:i], chunk_v) / chunk_w))
            else:
                values.append(float(np.mean(chunk_v)))
            probs.append(chunk_w)
            start = i
    return np.array(values), np.array(probs)


def exact_outcome_std(rho: QuantumState, a: AlgebraElement) -> float:
    """Exact standard deviation of a single measured outcome."""
    values, probs = outcome_distribution(rho, a)
    mean = float(np.dot(probs, values))
    var = float(np.dot(probs, (values - mean) ** 2))
    return float(np.sqrt(max(var, 0.0)))


def outcome_cdf(rho: QuantumState, a: AlgebraElement, x: float) -> float:
    """P(outcome <= x), exact, via spectral projections."""
    if not algebra.is_hermitian(a):
        raise NotObservableError("outcome_cdf requires a Hermitian element")
    values, probs = outcome_distribution(rho, a)
    return float(probs[values <= x].sum())


@dataclass(frozen=True)
class LinearityReport:
    """Additivity of the ensemble average for a (possibly noncommuting) pair."""

    exact_a: float
    exact_b: float
    exact_sum: float
    exact_residual: float
    sampled_a: float
    sampled_b: float
    sampled_sum: float
    sampled_residual: float
    sigma_combined: float
    n: int

    @property
    def exact_passed(self) -> bool:
        return self.exact_residual <= 1e-10

    @property
    def sampled_passed(self) -> bool:
        return self.sampled_residual <= 5.0 * self.sigma_combined

    @property
    def passed(self) -> bool:
        return self.exact_passed and self.sampled_passed


def linearity_check(
    rho: QuantumState, a: AlgebraElement, b: AlgebraElement, n: int, seed: int
) -> LinearityReport:
    """Check mean(A+B) = mean(A) + mean(B): exactly for the trace average,
    and within five combined standard errors for independent samples drawn
    in three separate contexts (one per observable)."""
    total = algebra.add(a, b)
    stats_a = sample_mean(rho, a, n, derive_seed(seed, 0))
    stats_b = sample_mean(rho, b, n, derive_seed(seed, 1))
    stats_ab = sample_mean(rho, total, n, derive_seed(seed, 2))
    exact_a = quantum_average(rho, a)
    exact_b = quantum_average(rho, b)
    exact_sum = quantum_average(rho, total)
    sigma = float(
        np.sqrt(
            (
                exact_outcome_std(rho, a) ** 2
                + exact_outcome_std(rho, b) ** 2
                + exact_outcome_std(rho, total) ** 2
            )
            / n
        )
    )
    return LinearityReport(
        exact_a=exact_a,
        exact_b=exact_b,
        exact_sum=exact_sum,
        exact_residual=abs(exact_sum - exact_a - exact_b),
        sampled_a=stats_a.mean,
        sampled_b=stats_b.mean,
        sampled_sum=stats_ab.mean,
        sampled_residual=abs(stats_ab.mean - stats_a.mean - stats_b.mean),
        sigma_combined=sigma,
        n=n,
    )


def separation_check(a1: AlgebraElement, a2: AlgebraElement) -> bool:
    """True iff the two observables are equal as algebra elements.

    In finite dimension, agreement of every character in every context forces
    matrix equality, so the norm test realizes the separation axiom exactly.
    """
    if a1.dim != a2.dim:
        raise DimensionError(f"dimension mismatch: {a1.dim} vs {a2.dim}")
    diff = algebra.add(a1, algebra.scale(-1.0, a2))
    return algebra.operator_norm(diff) <= 1e-10 * (1.0 + algebra.operator_norm(a1))


def separation_witness(a1: AlgebraElement, a2: AlgebraElement):
    """A (context, index) witnessing a1 != a2, or None if they are equal.

    The eigenbasis of the difference makes the basis-diagonal expectations
    <u_k|A1|u_k> and <u_k|A2|u_k> differ maximally at the returned index.
    """
    if separation_check(a1, a2):
        return None
    diff = algebra.add(a1, algebra.scale(-1.0, a2))
    ctx = context_from_observable(diff)
    u = ctx.basis
    gap = np.abs(np.diag(u.conj().T @ diff.entries @ u))
    return ctx, int(np.argmax(gap))
