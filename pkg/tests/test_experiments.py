import numpy as np
import pytest

from qalab.contexts import contains
from qalab.ensemble import maximally_mixed, pure_state, quantum_average
from qalab.errors import ArgumentError
from qalab.experiments import (
    ChshConfig,
    chsh_run,
    classical_bound_bruteforce,
    count_noncontextual_assignments,
    deterministic_strategy_values,
    magic_square,
    mermin_peres_bruteforce,
    mermin_peres_contextual_run,
    no_signaling_check,
    singlet_state,
    verify_magic_square,
)
from qalab.paulis import kron, spin_at

OPTIMAL_ANGLES = (0.0, np.pi / 2, np.pi / 4, 3 * np.pi / 4)


def _gf2_solution_count(row_targets, col_targets):
    """Independent oracle: solve the sign constraints as a GF(2) system.

    Writing each cell as (-1)^x, the six product constraints become linear
    equations over GF(2); the count is 2^(9 - rank) if consistent, else 0.
    """
    rows = []
    rhs = []
    for i in range(3):
        eq = [0] * 9
        for j in range(3):
            eq[3 * i + j] = 1
        rows.append(eq)
        rhs.append(0 if row_targets[i] == 1 else 1)
    for j in range(3):
        eq = [0] * 9
        for i in range(3):
            eq[3 * i + j] = 1
        rows.append(eq)
        rhs.append(0 if col_targets[j] == 1 else 1)
    m = np.array(rows, dtype=np.int64)
    b = np.array(rhs, dtype=np.int64)
    rank = 0
    for col in range(9):
        pivot = None
        for r in range(rank, len(m)):
            if m[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        b[[rank, pivot]] = b[[pivot, rank]]
        for r in range(len(m)):
            if r != rank and m[r, col]:
                m[r] = (m[r] + m[rank]) % 2
                b[r] = (b[r] + b[rank]) % 2
        rank += 1
    for r in range(rank, len(m)):
        if b[r] % 2:
            return 0
    return 2 ** (9 - rank)


class TestClassicalBound:
    def test_bound_is_two(self):
        assert classical_bound_bruteforce() == 2.0

    def test_every_strategy_in_zero_two(self):
        assert set(abs(s) for s in deterministic_strategy_values()) <= {0.0, 2.0}

    def test_sixteen_strategies(self):
        assert len(deterministic_strategy_values()) == 16


class TestMagicSquareStructure:
    def test_invariants(self):
        report = verify_magic_square(magic_square())
        assert report.square_residual <= 1e-10
        assert report.commute_residual <= 1e-10
        assert report.product_residual <= 1e-10
        assert report.passed

    def test_contexts_contain_their_lines(self):
        sq = magic_square()
        for i in range(3):
            ctx = sq.row_context(i)
            for obs in sq.row(i):
                assert contains(ctx, obs)
            ctx = sq.col_context(i)
            for obs in sq.col(i):
                assert contains(ctx, obs)


class TestBruteForce:
    def test_no_noncontextual_assignment(self):
        assert mermin_peres_bruteforce() == 0

    def test_matches_gf2_oracle(self):
        sq = magic_square()
        assert _gf2_solution_count(sq.row_targets, sq.col_targets) == 0

    def test_relaxed_column_target_admits_solutions(self):
        count = count_noncontextual_assignments((1, 1, 1), (1, 1, 1))
        assert count == _gf2_solution_count((1, 1, 1), (1, 1, 1))
        assert count > 0

    def test_single_row_admits_four(self):
        # product of three signs = +1: 4 of the 8 assignments
        satisfying = [
            (a, b, c)
            for a in (-1, 1)
            for b in (-1, 1)
            for c in (-1, 1)
            if a * b * c == 1
        ]
        assert len(satisfying) == 4


class TestContextualRun:
    def test_no_violations_and_witness(self):
        report = mermin_peres_contextual_run(300, seed=5)
        assert report.constraint_violations == 0
        assert report.witness_trials > 0
        assert report.witness_rate > 0.9
        assert report.passed

    def test_witness_example_recorded(self):
        report = mermin_peres_contextual_run(50, seed=1)
        t, i, j, v_row, v_col = report.witness_example
        assert 0 <= t < 50 and 0 <= i < 3 and 0 <= j < 3
        assert abs(v_row - v_col) > 0.5

    def test_deterministic(self):
        a = mermin_peres_contextual_run(100, seed=9)
        b = mermin_peres_contextual_run(100, seed=9)
        assert a == b

    def test_zero_trials_rejected(self):
        with pytest.raises(ArgumentError):
            mermin_peres_contextual_run(0, seed=0)


class TestChsh:
    def test_exact_value_two_formulas(self):
        cfg = ChshConfig(angles=OPTIMAL_ANGLES, trials=100, master_seed=0)
        report = chsh_run(cfg)
        assert abs(report.s_exact) == pytest.approx(2 * np.sqrt(2), abs=1e-10)
        assert report.s_exact == pytest.approx(report.s_closed_form, abs=1e-10)

    def test_correlations_match_trace_oracle(self):
        cfg = ChshConfig(angles=(0.3, 1.1, 0.7, 2.0), trials=100, master_seed=0)
        report = chsh_run(cfg)
        rho = singlet_state()
        for corr in report.correlations:
            oracle = quantum_average(rho, kron(spin_at(corr.angle_a), spin_at(corr.angle_b)))
            assert corr.exact == pytest.approx(oracle, abs=1e-12)
            assert corr.exact == pytest.approx(-np.cos(corr.angle_a - corr.angle_b), abs=1e-10)

    def test_degenerate_settings(self):
        # all angles equal: S = 2 E(0,0) = -2
        cfg = ChshConfig(angles=(0.0, 0.0, 0.0, 0.0), trials=100, master_seed=0)
        report = chsh_run(cfg)
        assert report.s_exact == pytest.approx(-2.0, abs=1e-10)

    def test_sampled_within_band(self):
        n = 40_000
        cfg = ChshConfig(angles=OPTIMAL_ANGLES, trials=n, master_seed=77)
        report = chsh_run(cfg)
        assert abs(report.s_sampled - report.s_exact) <= 5 * report.s_std_error

    def test_violation_excess(self):
        cfg = ChshConfig(angles=OPTIMAL_ANGLES, trials=40_000, master_seed=3)
        report = chsh_run(cfg)
        assert report.violation_sigmas > 10

    def test_config_validation(self):
        with pytest.raises(ArgumentError):
            ChshConfig(angles=(0.0, 1.0, 2.0), trials=10, master_seed=0)
        with pytest.raises(ArgumentError):
            ChshConfig(angles=OPTIMAL_ANGLES, trials=0, master_seed=0)

    def test_deterministic(self):
        cfg = ChshConfig(angles=OPTIMAL_ANGLES, trials=5000, master_seed=123)
        assert chsh_run(cfg) == chsh_run(cfg)


class TestNoSignaling:
    def test_singlet_marginals_uniform(self):
        cfg = ChshConfig(angles=OPTIMAL_ANGLES, trials=20_000, master_seed=5)
        report = no_signaling_check(cfg)
        assert report.exact_residual <= 1e-10
        assert report.sampled_residual <= report.sampled_bound
        assert report.passed

    def test_marginals_match_partial_trace_oracle(self):
        # independent oracle: Alice's outcome distribution is the diagonal of
        # the reduced state Tr_B(rho) in Alice's eigenbasis
        from qalab.contexts import context_from_observable, tensor_context
        from qalab.physical import born_weights

        rho = singlet_state()
        rho_a = np.trace(rho.rho.reshape(2, 2, 2, 2), axis1=1, axis2=3)
        for ta in (0.0, 0.7, np.pi / 2):
            ctx_a = context_from_observable(spin_at(ta))
            oracle = np.diag(ctx_a.basis.conj().T @ rho_a @ ctx_a.basis).real
            for tb in (0.3, 1.9):
                joint = tensor_context(ctx_a, context_from_observable(spin_at(tb)))
                marginal = born_weights(rho, joint).reshape(2, 2).sum(axis=1)
                np.testing.assert_allclose(marginal, oracle, atol=1e-12)
                np.testing.assert_allclose(marginal, [0.5, 0.5], atol=1e-12)

    def test_product_state(self):
        cfg = ChshConfig(angles=(0.0, 1.0, 0.5, 2.5), trials=5000, master_seed=6)
        report = no_signaling_check(cfg, rho=pure_state([1, 0, 0, 0]))
        assert report.exact_residual <= 1e-10

    def test_maximally_mixed(self):
        cfg = ChshConfig(angles=(0.2, 0.9, 1.4, 2.2), trials=5000, master_seed=7)
        report = no_signaling_check(cfg, rho=maximally_mixed(4))
        assert report.exact_residual <= 1e-10
