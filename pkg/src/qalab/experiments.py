"""Bell/CHSH and magic-square contextuality experiments.

The CHSH run measures a singlet pair event by event: each trial draws one
shared physical state and reads both local observables from a single
character of the tensor-product context, which is exactly the "correlated
variables" requirement of a local-variables account.  The magic-square pair
of routines contrasts the impossibility of a global noncontextual sign
assignment (exhaustive enumeration) with per-context sampling that satisfies
every product constraint trial by trial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from ._rng import derive_seed
from .algebra import AlgebraElement, identity
from .contexts import Context, context_diagonal, context_from_observable, joint_context, tensor_context
from .ensemble import QuantumState, maximally_mixed, pure_state, quantum_average
from .errors import ArgumentError
from .kernels import sample_counts
from .paulis import IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z, kron, spin_at
from .physical import born_weights, evaluate, new_physical_state, outcome_cumulative

CLASSICAL_BOUND = 2.0


def singlet_state() -> QuantumState:
    """Two-qubit singlet (|01> - |10>)/sqrt(2)."""
    return pure_state(np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0))


@dataclass(frozen=True)
class ChshConfig:
    """Angles (theta_a, theta_a2, theta_b, theta_b2), trials per setting pair,
    and the master seed."""

    angles: tuple[float, float, float, float]
    trials: int
    master_seed: int

    def __post_init__(self):
        if len(self.angles) != 4:
            raise ArgumentError("expected exactly four angles")
        if self.trials < 1:
            raise ArgumentError(f"trials must be >= 1, got {self.trials}")


_PAIR_LABELS = ("ab", "ab'", "a'b", "a'b'")
_PAIR_SIGNS = (1.0, -1.0, 1.0, 1.0)


def _setting_pairs(angles):
    a, a2, b, b2 = angles
    return ((a, b), (a, b2), (a2, b), (a2, b2))


@dataclass(frozen=True)
class ChshCorrelation:
    label: str
    angle_a: float
    angle_b: float
    sampled: float
    exact: float
    closed_form: float
    std_error: float
    n: int


@dataclass(frozen=True)
class ChshReport:
    correlations: tuple[ChshCorrelation, ...]
    s_sampled: float
    s_exact: float
    s_closed_form: float
    s_std_error: float
    trials_per_pair: int
    master_seed: int

    @property
    def violation_sigmas(self) -> float:
        """How many standard errors |S| exceeds the classical bound by."""
        return (abs(self.s_sampled) - CLASSICAL_BOUND) / self.s_std_error


def chsh_run(cfg: ChshConfig) -> ChshReport:
    """Event-by-event CHSH on the singlet.

    Per setting pair, each trial draws a fresh shared physical state and
    evaluates both local observables in the tensor context; the correlation
    is the mean of their +-1 product.  S = E(ab) - E(ab') + E(a'b) + E(a'b').
    """
    rho = singlet_state()
    sampled = []
    for pair_idx, (ta, tb) in enumerate(_setting_pairs(cfg.angles)):
        obs_a, obs_b = spin_at(ta), spin_at(tb)
        joint = tensor_context(context_from_observable(obs_a), context_from_observable(obs_b))
        va = context_diagonal(joint, kron(obs_a, IDENTITY2))
        vb = context_diagonal(joint, kron(IDENTITY2, obs_b))
        products = va * vb
        cw = outcome_cumulative(born_weights(rho, joint))
        counts = sample_counts(cw, derive_seed(cfg.master_seed, pair_idx), joint.key, 0, cfg.trials)
        e_sampled = float(np.dot(counts.astype(np.float64), products) / cfg.trials)
        e_exact = quantum_average(rho, kron(obs_a, obs_b))
        sampled.append(
            ChshCorrelation(
                label=_PAIR_LABELS[pair_idx],
                angle_a=ta,
                angle_b=tb,
                sampled=e_sampled,
                exact=e_exact,
                closed_form=-np.cos(ta - tb),
                std_error=float(np.sqrt(max(1.0 - e_sampled**2, 0.0) / cfg.trials)),
                n=cfg.trials,
            )
        )
    s_sampled = sum(sign * c.sampled for sign, c in zip(_PAIR_SIGNS, sampled))
    s_exact = sum(sign * c.exact for sign, c in zip(_PAIR_SIGNS, sampled))
    s_closed = sum(sign * c.closed_form for sign, c in zip(_PAIR_SIGNS, sampled))
    s_err = float(np.sqrt(sum(c.std_error**2 for c in sampled)))
    return ChshReport(
        correlations=tuple(sampled),
        s_sampled=float(s_sampled),
        s_exact=float(s_exact),
        s_closed_form=float(s_closed),
        s_std_error=s_err,
        trials_per_pair=cfg.trials,
        master_seed=cfg.master_seed,
    )


@dataclass(frozen=True)
class NoSignalingReport:
    exact_residual: float
    sampled_residual: float
    sampled_bound: float
    n: int

    @property
    def passed(self) -> bool:
        return self.exact_residual <= 1e-10 and self.sampled_residual <= self.sampled_bound


def no_signaling_check(cfg: ChshConfig, rho: QuantumState | None = None) -> NoSignalingReport:
    """Marginals of either side must not depend on the far setting.

    Exact: Born weights of the joint context, summed over the far index,
    agree across far settings to 1e-10.  Sampled: frequency marginals agree
    within five standard errors.
    """
    if rho is None:
        rho = singlet_state()
    a, a2, b, b2 = cfg.angles
    n = cfg.trials

    def marginals(ta, tb, pair_idx):
        obs_a, obs_b = spin_at(ta), spin_at(tb)
        joint = tensor_context(context_from_observable(obs_a), context_from_observable(obs_b))
        p = born_weights(rho, joint).reshape(2, 2)
        counts = sample_counts(
            outcome_cumulative(p.reshape(-1)),
            derive_seed(cfg.master_seed, pair_idx),
            joint.key,
            0,
            n,
        ).reshape(2, 2)
        freq = counts.astype(np.float64) / n
        return p, freq

    exact_res = 0.0
    sampled_res = 0.0
    pairs = list(_setting_pairs(cfg.angles))
    table = {pair: marginals(*pair, idx) for idx, pair in enumerate(pairs)}
    # Alice marginal across Bob settings, for both Alice settings.
    for ta in (a, a2):
        p1, f1 = table[(ta, b)]
        p2, f2 = table[(ta, b2)]
        exact_res = max(exact_res, float(np.max(np.abs(p1.sum(axis=1) - p2.sum(axis=1)))))
        sampled_res = max(sampled_res, float(np.max(np.abs(f1.sum(axis=1) - f2.sum(axis=1)))))
    # Bob marginal across Alice settings.
    for tb in (b, b2):
        p1, f1 = table[(a, tb)]
        p2, f2 = table[(a2, tb)]
        exact_res = max(exact_res, float(np.max(np.abs(p1.sum(axis=0) - p2.sum(axis=0)))))
        sampled_res = max(sampled_res, float(np.max(np.abs(f1.sum(axis=0) - f2.sum(axis=0)))))
    return NoSignalingReport(
        exact_residual=exact_res,
        sampled_residual=sampled_res,
        sampled_bound=5.0 * float(np.sqrt(0.5 / n)),
        n=n,
    )


def classical_bound_bruteforce() -> float:
    """Max |S| over all 16 deterministic local strategies; certifies the
    classical bound 2.  Mixtures cannot exceed it (S is linear in the local
    response functions, so the max over the convex hull sits at a vertex)."""
    best = 0.0
    for va in (-1, 1):
        for va2 in (-1, 1):
            for vb in (-1, 1):
                for vb2 in (-1, 1):
                    s = va * vb - va * vb2 + va2 * vb + va2 * vb2
                    best = max(best, abs(float(s)))
    return best


def deterministic_strategy_values() -> list[float]:
    """S of every deterministic local strategy, in enumeration order."""
    out = []
    for va in (-1, 1):
        for va2 in (-1, 1):
            for vb in (-1, 1):
                for vb2 in (-1, 1):
                    out.append(float(va * vb - va * vb2 + va2 * vb + va2 * vb2))
    return out


@dataclass(frozen=True)
class MagicSquare:
    """3x3 grid of two-qubit +-1 observables with row/column contexts.

    Within each row and each column the three observables commute and their
    ordered product is +I for every row and the first two columns, -I for
    the third column.
    """

    observables: tuple[tuple[AlgebraElement, ...], ...]
    row_targets: tuple[int, int, int] = (1, 1, 1)
    col_targets: tuple[int, int, int] = (1, 1, -1)

    def row(self, i: int) -> list[AlgebraElement]:
        return list(self.observables[i])

    def col(self, j: int) -> list[AlgebraElement]:
        return [self.observables[i][j] for i in range(3)]

    def row_context(self, i: int) -> Context:
        return joint_context(self.row(i))

    def col_context(self, j: int) -> Context:
        return joint_context(self.col(j))


def magic_square() -> MagicSquare:
    """The standard two-qubit square used by every check in this module."""
    z, x, y, i2 = SIGMA_Z, SIGMA_X, SIGMA_Y, IDENTITY2
    grid = (
        (kron(i2, z), kron(z, i2), kron(z, z)),
        (kron(x, i2), kron(i2, x), kron(x, x)),
        (kron(x, z), kron(z, x), kron(y, y)),
    )
    return MagicSquare(observables=grid)


@dataclass(frozen=True)
class MagicSquareStructure:
    square_residual: float
    commute_residual: float
    product_residual: float

    @property
    def passed(self) -> bool:
        return max(self.square_residual, self.commute_residual, self.product_residual) <= 1e-10


def verify_magic_square(sq: MagicSquare) -> MagicSquareStructure:
    """Structural invariants: squares to I, contexts commute, products hit
    their +-1 targets."""
    eye = identity(4)
    sq_res = 0.0
    comm_res = 0.0
    prod_res = 0.0
    for line, target in [(sq.row(i), sq.row_targets[i]) for i in range(3)] + [
        (sq.col(j), sq.col_targets[j]) for j in range(3)
    ]:
        prod = eye
        for obs in line:
            prod = algebra.multiply(prod, obs)
        prod_res = max(
            prod_res,
            algebra.operator_norm(algebra.add(prod, algebra.scale(-float(target), eye))),
        )
        for m in range(3):
            for l in range(m + 1, 3):
                comm_res = max(comm_res, algebra.commutator_norm(line[m], line[l]))
    for i in range(3):
        for j in range(3):
            obs = sq.observables[i][j]
            sq_res = max(
                sq_res,
                algebra.operator_norm(
                    algebra.add(algebra.multiply(obs, obs), algebra.scale(-1.0, eye))
                ),
            )
    return MagicSquareStructure(
        square_residual=sq_res, commute_residual=comm_res, product_residual=prod_res
    )


def count_noncontextual_assignments(
    row_targets: tuple[int, int, int], col_targets: tuple[int, int, int]
) -> int:
    """Number of global +-1 assignments to the 9 cells satisfying all six
    product constraints (exhaustive over 2^9 = 512)."""
    count = 0
    for bits in range(512):
        v = [1 if bits & (1 << c) else -1 for c in range(9)]
        rows_ok = all(
            v[3 * i] * v[3 * i + 1] * v[3 * i + 2] == row_targets[i] for i in range(3)
        )
        cols_ok = all(v[j] * v[j + 3] * v[j + 6] == col_targets[j] for j in range(3))
        if rows_ok and cols_ok:
            count += 1
    return count


def mermin_peres_bruteforce() -> int:
    """Satisfying noncontextual assignments for the standard square: 0."""
    sq = magic_square()
    return count_noncontextual_assignments(sq.row_targets, sq.col_targets)


@dataclass(frozen=True)
class ContextualRunReport:
    trials: int
    constraint_violations: int
    witness_trials: int
    witness_example: tuple[int, int, int, float, float] | None

    @property
    def witness_rate(self) -> float:
        return self.witness_trials / self.trials

    @property
    def passed(self) -> bool:
        return self.constraint_violations == 0 and self.witness_trials > 0


def mermin_peres_contextual_run(n: int, seed: int) -> ContextualRunReport:
    """Sample the square per context and check every product constraint.

    Per trial one physical state (maximally mixed ensemble) is evaluated in
    all six contexts; each context's three character values multiply to the
    context's +-1 target by the homomorphism law, every trial.  A witness is
    a cell whose value differs between its row context and column context
    within a single trial; noncontextual value assignments would forbid it.
    """
    if n < 1:
        raise ArgumentError(f"trials must be >= 1, got {n}")
    sq = magic_square()
    rho = maximally_mixed(4)
    row_ctx = [sq.row_context(i) for i in range(3)]
    col_ctx = [sq.col_context(j) for j in range(3)]

    violations = 0
    witness_trials = 0
    example = None
    for t in range(n):
        phi = new_physical_state(rho, derive_seed(seed, t))
        row_vals = np.empty((3, 3))
        col_vals = np.empty((3, 3))
        for i in range(3):
            for j in range(3):
                row_vals[i, j] = evaluate(phi, row_ctx[i], sq.observables[i][j])
                col_vals[i, j] = evaluate(phi, col_ctx[j], sq.observables[i][j])
        for i in range(3):
            if abs(np.prod(row_vals[i]) - sq.row_targets[i]) > 1e-6:
                violations += 1
            if abs(np.prod(col_vals[:, i]) - sq.col_targets[i]) > 1e-6:
                violations += 1
        diffs = np.abs(row_vals - col_vals) > 0.5
        if diffs.any():
            witness_trials += 1
            if example is None:
                i, j = map(int, np.argwhere(diffs)[0])
                example = (t, i, j, float(row_vals[i, j]), float(col_vals[i, j]))
    return ContextualRunReport(
        trials=n,
        constraint_violations=violations,
        witness_trials=witness_trials,
        witness_example=example,
    )
