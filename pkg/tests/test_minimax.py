"""Worst-case solver: convexity of the objective, closed-form agreement,
stationarity at the start point, and the non-convergence contract."""

import numpy as np
import pytest

from fusionframes.duality import left_inverses_parametrization
from fusionframes.errors import NonConvergence
from fusionframes.minimax import (
    SolverConfig,
    _phi,
    minimize_max_group_norms,
)

from conftest import random_fusion_frame, random_parseval_uniform_equidim


def _family_problem(ff):
    family = left_inverses_parametrization(ff)
    groups = [np.arange(sl.start, sl.stop) for sl in ff.block_slices()]
    return family.pinv_member, family.kernel_projector, groups, list(ff.weights)


class TestObjective:
    def test_convexity_at_midpoints(self, rng):
        ff = random_fusion_frame(rng, 4, 3)
        a0, proj, groups, coeffs = _family_problem(ff)
        for _ in range(20):
            z1 = rng.normal(size=a0.shape)
            z2 = rng.normal(size=a0.shape)
            phi1 = _phi(a0 + z1 @ proj, groups, coeffs)
            phi2 = _phi(a0 + z2 @ proj, groups, coeffs)
            mid = _phi(a0 + 0.5 * (z1 + z2) @ proj, groups, coeffs)
            assert mid <= 0.5 * (phi1 + phi2) + 1e-12


class TestSolver:
    def test_already_optimal_start_stays_put(self, rng):
        # uniform equi-dimensional Parseval: the start point is the unique
        # minimizer, so the solver must return it unchanged (within jitter)
        ff = random_parseval_uniform_equidim(rng, 6, 2, copies=2)
        a0, proj, groups, coeffs = _family_problem(ff)
        result = minimize_max_group_norms(a0, proj, groups, coeffs,
                                          SolverConfig(max_iters=2000))
        assert result.converged
        assert np.max(np.abs(result.a - a0)) <= 1e-4
        w = ff.weights[0]
        n = ff.dims[0]
        assert abs(result.phi - w ** 2 * np.sqrt(n)) <= 1e-6

    def test_two_group_closed_form(self):
        # minimize max(||first column group||, 2*||second||) subject to a
        # one-dimensional kernel family: solved by equalizing the groups
        w1, w2 = 1.0, 2.0
        b1 = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        b2 = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
        synth = np.hstack([w1 * b1, w2 * b2])
        s = synth @ synth.T
        a0 = np.linalg.solve(s, synth)
        proj = np.eye(4) - synth.T @ np.linalg.solve(s, synth)
        result = minimize_max_group_norms(
            a0, proj, [[0, 1], [2, 3]], [w1, w2], SolverConfig(max_iters=5000))
        expected = np.array([[0, 0, 1 / w2, 0],
                             [1 / w1, 0, 0, 0],
                             [0, 1 / (2 * w1), 0, 1 / (2 * w2)]])
        assert np.max(np.abs(result.a - expected)) <= 1e-8
        assert abs(result.phi - np.sqrt(5.0) / 2.0) <= 1e-10

    def test_complex_problem_keeps_left_inverse(self, rng):
        ff = random_fusion_frame(rng, 4, 3, complex_field=True)
        a0, proj, groups, coeffs = _family_problem(ff)
        result = minimize_max_group_norms(a0, proj, groups, coeffs,
                                          SolverConfig(max_iters=3000))
        analysis = ff.analysis_matrix()
        assert np.max(np.abs(result.a @ analysis - np.eye(4))) <= 1e-9
        assert result.phi <= result.phi_start + 1e-12

    def test_monotone_improvement_reported(self, rng):
        ff = random_fusion_frame(rng, 5, 3)
        a0, proj, groups, coeffs = _family_problem(ff)
        result = minimize_max_group_norms(a0, proj, groups, coeffs,
                                          SolverConfig(max_iters=2000))
        assert result.phi <= result.phi_subgradient <= result.phi_start + 1e-12

    def test_nonconvergence_raised_when_budget_too_small(self, rng):
        ff = random_fusion_frame(rng, 4, 2, weight_span=(0.3, 3.0))
        a0, proj, groups, coeffs = _family_problem(ff)
        if abs(coeffs[0] - coeffs[1]) < 0.3:
            coeffs = [1.0, 3.0]
        config = SolverConfig(max_iters=3, patience=1000, polish=False,
                              tol=1e-300)
        with pytest.raises(NonConvergence):
            minimize_max_group_norms(a0, proj, groups, coeffs, config)
