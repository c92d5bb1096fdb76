"""Randomized verification suite for the model's five axioms.

Drives the checks the package exists to demonstrate: square-root and
faithfulness of the involution, character homomorphism laws on commuting
families, the value properties of individual outcomes (zero, unit,
positivity of squares, spectrum membership and attainment), separation of
distinct observables, and linearity of the ensemble average for
noncommuting pairs.  Used by the ``postulates`` CLI subcommand and the
acceptance tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import algebra
from ._rng import derive_seed
from .algebra import AlgebraElement
from .contexts import context_diagonal, context_from_basis, context_from_observable
from .ensemble import linearity_check, maximally_mixed, pure_state, separation_check
from .physical import new_physical_state, verify_character_properties


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_residual: float
    tolerance: float
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class SuiteReport:
    seed: int
    dims: tuple[int, ...]
    pairs_per_dim: int
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "dims": list(self.dims),
            "pairs_per_dim": self.pairs_per_dim,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "max_residual": c.max_residual,
                    "tolerance": c.tolerance,
                    "pass": c.passed,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }


def random_hermitian(rng: np.random.Generator, d: int) -> AlgebraElement:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return AlgebraElement(d, 0.5 * (g + g.conj().T))


def random_element(rng: np.random.Generator, d: int) -> AlgebraElement:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return AlgebraElement(d, g)


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases.conj()


def check_square_roots(rng, dims, per_dim) -> CheckResult:
    """Every element's R*R has a Hermitian positive square root."""
    worst = 0.0
    ok = True
    for d in dims:
        for _ in range(per_dim):
            report = algebra.verify_postulate1(random_element(rng, d), tol=1e-9)
            worst = max(worst, report.residual)
            ok = ok and report.passed
    return CheckResult("square_root_and_faithfulness", worst, 1e-9, ok and worst <= 1e-9)


def check_character_homomorphism(rng, dims, per_dim) -> CheckResult:
    """Characters are multiplicative and additive on commuting pairs."""
    worst = 0.0
    for d in dims:
        for _ in range(per_dim):
            ctx = context_from_basis(random_unitary(rng, d))
            u = ctx.basis
            da, db = rng.standard_normal(d), rng.standard_normal(d)
            a = AlgebraElement(d, (u * da) @ u.conj().T)
            b = AlgebraElement(d, (u * db) @ u.conj().T)
            ca = context_diagonal(ctx, a)
            cb = context_diagonal(ctx, b)
            cab = context_diagonal(ctx, algebra.multiply(a, b))
            csum = context_diagonal(ctx, algebra.add(a, b))
            worst = max(worst, float(np.max(np.abs(cab - ca * cb))))
            worst = max(worst, float(np.max(np.abs(csum - ca - cb))))
    return CheckResult("character_homomorphism", worst, 1e-9, worst <= 1e-9)


def check_value_properties(rng, dims, per_dim, attainment_trials=10_000) -> CheckResult:
    """Outcome values: zero, unit, nonnegative squares, spectrum membership,
    attainment of every positively weighted branch."""
    worst = 0.0
    ok = True
    for d in dims:
        rho = maximally_mixed(d)
        for _ in range(per_dim):
            a = random_hermitian(rng, d)
            ctx = context_from_observable(a)
            phi = new_physical_state(rho, int(rng.integers(0, 2**63)))
            report = verify_character_properties(phi, ctx, a, attainment_trials)
            worst = max(
                worst,
                abs(report.zero_value),
                abs(report.identity_value - 1.0),
                max(-report.square_value, 0.0),
            )
            ok = ok and report.passed
    return CheckResult("outcome_value_properties", worst, 1e-9, ok)


def check_spectrum_attainment_exact(rng, dims, per_dim) -> CheckResult:
    """The character values of an observable's own context reproduce its
    spectrum with multiplicity."""
    worst = 0.0
    for d in dims:
        for _ in range(per_dim):
            a = random_hermitian(rng, d)
            ctx = context_from_observable(a)
            diag = np.sort(context_diagonal(ctx, a))
            spec = algebra.spectrum(a)
            expanded = np.repeat(spec.values, spec.multiplicities)
            worst = max(worst, float(np.max(np.abs(diag - expanded))))
    return CheckResult("spectrum_attainment", worst, 1e-8, worst <= 1e-8)


def check_separation(rng, dims, per_dim) -> CheckResult:
    ok = True
    for d in dims:
        for _ in range(per_dim):
            a = random_hermitian(rng, d)
            b = random_hermitian(rng, d)
            ok = ok and separation_check(a, a)
            ok = ok and separation_check(a, algebra.add(a, algebra.scale(1e-15, algebra.identity(d))))
            if algebra.operator_norm(algebra.add(a, algebra.scale(-1.0, b))) > 1e-6:
                ok = ok and not separation_check(a, b)
    return CheckResult("separation", 0.0 if ok else 1.0, 0.5, ok)


def check_linearity(rng, dims, cases_per_dim, mc_trials, mc_seed) -> CheckResult:
    """Exact additivity of the ensemble average on noncommuting pairs plus
    the sampled three-context comparison within five sigma."""
    worst = 0.0
    ok = True
    case = 0
    for d in dims:
        for _ in range(cases_per_dim):
            a = random_hermitian(rng, d)
            b = random_hermitian(rng, d)
            psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            rho = maximally_mixed(d) if case % 2 else pure_state(psi)
            report = linearity_check(rho, a, b, mc_trials, derive_seed(mc_seed, case))
            worst = max(worst, report.exact_residual)
            ok = ok and report.passed
            case += 1
    return CheckResult("ensemble_linearity", worst, 1e-10, ok and worst <= 1e-10)


def run_postulate_suite(
    seed: int,
    dims: tuple[int, ...] = (2, 3, 4, 8),
    pairs_per_dim: int = 50,
    attainment_trials: int = 10_000,
    mc_trials: int = 20_000,
    linearity_cases_per_dim: int = 3,
) -> SuiteReport:
    """Run every axiom check on seeded random inputs."""
    rng = np.random.default_rng(seed)
    checks = (
        check_square_roots(rng, dims, pairs_per_dim),
        check_character_homomorphism(rng, dims, pairs_per_dim),
        check_value_properties(rng, dims, pairs_per_dim, attainment_trials),
        check_spectrum_attainment_exact(rng, dims, pairs_per_dim),
        check_separation(rng, dims, pairs_per_dim),
        check_linearity(rng, dims, linearity_cases_per_dim, mc_trials, derive_seed(seed, 99)),
    )
    return SuiteReport(seed=seed, dims=tuple(dims), pairs_per_dim=pairs_per_dim, checks=checks)
