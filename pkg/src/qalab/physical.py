"""Physical states: seeded per-context outcome samplers.

A physical state assigns, lazily and reproducibly, one basis index to every
context it is evaluated in; the value of an observable is then the character
of that index.  The assignment is drawn from the context's Born weights with
a counter-based stream keyed by (state seed, context id), so replay never
depends on evaluation order.  Values of a degenerate observable MAY disagree
between two contexts that both contain it: only the restriction to a single
context is required to be single-valued.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from . import algebra
from ._rng import MASK64, context_draw, unit_double
from .contexts import Context, contains, context_diagonal
from .errors import DimensionError, InvalidStateError, NotInContextError

if TYPE_CHECKING:
    from .ensemble import QuantumState

# Weight clamp band: matches the density-operator positivity tolerance.
_NEG_TOL = 1e-10
_SUM_TOL = 1e-9


def born_weights(rho: "QuantumState", ctx: Context) -> np.ndarray:
    """Outcome distribution of a context: the diagonal of U* rho U.

    Entries in [-1e-10, 0) are clamped to zero (zero-probability branches are
    never sampled); the vector is renormalized if the total drifted by at
    most 1e-9, otherwise the state is rejected.
    """
    if rho.dim != ctx.dim:
        raise DimensionError(f"state dim {rho.dim} vs context dim {ctx.dim}")
    p = np.diag(ctx.basis.conj().T @ rho.rho @ ctx.basis).real.copy()
    if float(p.min()) < -_NEG_TOL:
        raise InvalidStateError(f"negative Born weight {p.min():.3e}")
    p[p < 0.0] = 0.0
    total = float(p.sum())
    if abs(total - 1.0) > _SUM_TOL:
        raise InvalidStateError(f"Born weights sum to {total!r}, expected 1")
    return p / total


def outcome_cumulative(weights: np.ndarray) -> np.ndarray:
    """Cumulative weights with the endpoint pinned to exactly 1.0.

    Zero-weight branches stay as flat steps, which the samplers never select.
    """
    cw = np.cumsum(np.asarray(weights, dtype=np.float64))
    if cw[-1] <= 0.0:
        raise InvalidStateError("all outcome weights vanish")
    return cw / cw[-1]


def select_index(cumweights: np.ndarray, u: float) -> int:
    """First index whose cumulative weight exceeds u (matches the kernels)."""
    k = int(np.searchsorted(cumweights, u, side="right"))
    return min(k, len(cumweights) - 1)


@dataclass(eq=False)
class PhysicalState:
    """One individual measurement's outcome functional.

    Single-owner mutable: the cache grows as contexts are visited.  Distinct
    states are independent and may be evaluated in parallel.
    """

    rho: "QuantumState"
    seed: int
    _cache: dict[str, int] = field(default_factory=dict)

    def cache_dump(self) -> dict[str, int]:
        """Debugging snapshot: context id -> sampled basis index."""
        return dict(self._cache)


def new_physical_state(rho: "QuantumState", seed: int) -> PhysicalState:
    """Fresh physical state; deterministic given (rho, seed)."""
    return PhysicalState(rho=rho, seed=int(seed) & MASK64)


def context_index(phi: PhysicalState, ctx: Context) -> int:
    """Basis index of ``phi`` in ``ctx``, sampling and caching on first use."""
    if ctx.id in phi._cache:
        return phi._cache[ctx.id]
    weights = born_weights(phi.rho, ctx)
    u = unit_double(context_draw(phi.seed, ctx.key))
    k = select_index(outcome_cumulative(weights), u)
    phi._cache[ctx.id] = k
    return k


def evaluate(phi: PhysicalState, ctx: Context, a: algebra.AlgebraElement) -> float:
    """Value of observable ``a`` for this physical state, measured in ``ctx``.

    Single-valued within a context (repeat evaluations are bit-identical);
    a different context containing ``a`` may yield a different value.
    """
    if not contains(ctx, a):
        raise NotInContextError("observable is not in the measured context")
    diag = context_diagonal(ctx, a)
    return float(diag[context_index(phi, ctx)])


@dataclass(frozen=True)
class CharacterReport:
    """Checks of the character laws for one (state, context, observable)."""

    zero_value: float
    identity_value: float
    square_value: float
    observable_value: float
    in_spectrum: bool
    attained_branches: int
    positive_branches: int

    @property
    def passed(self) -> bool:
        return (
            abs(self.zero_value) <= 1e-12
            and abs(self.identity_value - 1.0) <= 1e-12
            and self.square_value >= -1e-9
            and self.in_spectrum
            and self.attained_branches == self.positive_branches
        )


def verify_character_properties(
    phi: PhysicalState,
    ctx: Context,
    a: algebra.AlgebraElement,
    attainment_trials: int = 10_000,
) -> CharacterReport:
    """Check zero/unit values, positivity of squares, spectrum membership,
    and (over fresh states from the same ensemble) spectral attainment."""
    from ._rng import derive_seed
    from . import kernels

    d = a.dim
    zero_v = evaluate(phi, ctx, algebra.zero(d))
    one_v = evaluate(phi, ctx, algebra.identity(d))
    sq_v = evaluate(phi, ctx, algebra.multiply(a, a))
    val = evaluate(phi, ctx, a)
    spec = algebra.spectrum(a)
    in_spec = spec.contains(val, 1e-8)

    diag = context_diagonal(ctx, a)
    weights = born_weights(phi.rho, ctx)
    positive = 0
    attained = 0
    if attainment_trials > 0:
        counts = kernels.sample_counts(
            outcome_cumulative(weights), derive_seed(phi.seed, 0), ctx.key, 0, attainment_trials
        )
        for value in spec.values:
            branch = np.abs(diag - value) <= 1e-8 * (1.0 + abs(value))
            if float(weights[branch].sum()) > 1e-12:
                positive += 1
                if int(counts[branch].sum()) > 0:
                    attained += 1
    return CharacterReport(
        zero_value=zero_v,
        identity_value=one_v,
        square_value=sq_v,
        observable_value=val,
        in_spectrum=in_spec,
        attained_branches=attained,
        positive_branches=positive,
    )
