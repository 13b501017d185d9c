import math

import numpy as np
import pytest

from staticlab.elliptic import (
    DirichletProblem,
    MeshOperator,
    NewtonStagnationError,
    SlopeCapError,
    comparison_check,
    divergence_telescope,
    export_solution_csv,
    import_solution_csv,
    newton_solve,
    residual,
    strongmax_probe,
)
from staticlab.numerics import Grid, quad

W_ONE = lambda s: np.ones_like(np.asarray(s, dtype=float))


@pytest.fixture(scope="module")
def catenoid_op(euclid_annulus):
    grid = Grid.uniform(1.0, 2.0, 401)
    return MeshOperator.from_model(euclid_annulus, grid)


def catenoid_exact(nodes):
    return np.arcsinh(nodes) - np.arcsinh(1.0)


class TestOperator:
    def test_degenerate_mesh_rejected(self, euclid_annulus):
        nodes = np.concatenate([np.linspace(1.0, 1.5, 200), np.linspace(1.6, 2.0, 5)])
        grid = Grid(np.unique(nodes), "uniform")
        with pytest.raises(ValueError, match="10x"):
            MeshOperator.from_model(euclid_annulus, grid)

    def test_cap_range(self, euclid_annulus):
        grid = Grid.uniform(1.0, 2.0, 101)
        with pytest.raises(ValueError):
            MeshOperator.from_model(euclid_annulus, grid, slope_cap=1.5)


class TestResidual:
    def test_slice_gives_minus_load(self, catenoid_op):
        load = 0.7 * np.ones(len(catenoid_op.grid))
        r = residual(catenoid_op, np.full(len(catenoid_op.grid), 2.0), load)
        assert np.allclose(r, -0.7)

    def test_catenoid_second_order(self, euclid_annulus):
        def resid_norm(n):
            grid = Grid.uniform(1.0, 2.0, n + 1)
            op = MeshOperator.from_model(euclid_annulus, grid)
            r = residual(op, catenoid_exact(grid.nodes), np.zeros(n + 1))
            return float(np.max(np.abs(r)))

        r400, r800 = resid_norm(400), resid_norm(800)
        assert r400 <= 5e-4
        assert r800 <= 1.3e-4
        assert r400 / r800 >= 3.5

    def test_linear_flat_weight_exact(self):
        # constant flux telescopes: no discretization error, only last-ulp noise
        grid = Grid.uniform(0.0, 1.0, 101)
        op = MeshOperator.from_functions(grid, W_ONE, W_ONE)
        u = 0.3 * grid.nodes + 0.1
        r = residual(op, u, np.zeros(101))
        assert np.max(np.abs(r)) <= 1e-12

    def test_cap_violation_lists_faces(self, catenoid_op):
        u = np.zeros(len(catenoid_op.grid))
        u[37] = 1.0
        with pytest.raises(SlopeCapError) as exc:
            residual(catenoid_op, u, np.zeros(len(catenoid_op.grid)))
        assert 36 in exc.value.faces and 37 in exc.value.faces


class TestTelescoping:
    def test_divergence_theorem(self, catenoid_op):
        rng = np.random.default_rng(4)
        u = catenoid_exact(catenoid_op.grid.nodes) + 0.01 * np.sin(catenoid_op.grid.nodes * 5)
        rhs = rng.uniform(-1, 1, len(catenoid_op.grid))
        assert divergence_telescope(catenoid_op, u, rhs) <= 1e-12


class TestNewton:
    def test_catenoid(self, catenoid_op):
        exact = catenoid_exact(catenoid_op.grid.nodes)
        prob = DirichletProblem(catenoid_op, np.zeros(len(catenoid_op.grid)), (0.0, float(exact[-1])))
        u = newton_solve(prob)
        assert np.max(np.abs(u.values - exact)) <= 1e-6

    def test_constant_solution(self, catenoid_op):
        prob = DirichletProblem(catenoid_op, np.zeros(len(catenoid_op.grid)), (0.8, 0.8))
        u = newton_solve(prob)
        assert np.all(u.values == 0.8)

    def test_hyperbolic_cmc(self, hyperbolic_model):
        grid = Grid.uniform(0.5, 4.0, 701)
        op = MeshOperator.from_model(hyperbolic_model, grid)
        slope = lambda t: math.tanh(t / 2.0) / math.sqrt(1.0 + math.tanh(t / 2.0) ** 2)
        top = quad(slope, 0.5, 4.0, 1e-13)
        u = newton_solve(DirichletProblem(op, np.ones(len(grid)), (0.0, top)))
        mid = len(grid) // 2
        exact_mid = quad(slope, 0.5, float(grid.nodes[mid]), 1e-13)
        assert abs(u.values[mid] - exact_mid) <= 1e-6

    def test_second_order_accuracy(self, euclid_annulus):
        def err(n):
            grid = Grid.uniform(1.0, 2.0, n + 1)
            op = MeshOperator.from_model(euclid_annulus, grid)
            exact = catenoid_exact(grid.nodes)
            u = newton_solve(DirichletProblem(op, np.zeros(n + 1), (0.0, float(exact[-1]))))
            return float(np.max(np.abs(u.values - exact)))

        assert err(400) / err(800) >= 3.5

    def test_non_spacelike_bc_rejected(self, catenoid_op):
        prob = DirichletProblem(catenoid_op, np.zeros(len(catenoid_op.grid)), (0.0, 2.0))
        with pytest.raises(ValueError, match="spacelike"):
            newton_solve(prob)

    def test_continuation_with_tight_budget(self, hyperbolic_model):
        # the cold start needs 17 iterations here; a 14-iteration budget forces
        # the load continuation, which succeeds with warm starts
        grid = Grid.uniform(0.5, 4.0, 701)
        op = MeshOperator.from_model(hyperbolic_model, grid)
        prob = DirichletProblem(op, 6.0 * np.ones(len(grid)), (0.0, 0.0))
        u = newton_solve(prob, tol=1e-7, max_iter=14)
        assert np.max(np.abs(residual(op, u.values, prob.rhs))) <= 1e-7

    def test_stagnation_reported(self, hyperbolic_model):
        grid = Grid.uniform(0.5, 4.0, 701)
        op = MeshOperator.from_model(hyperbolic_model, grid)
        prob = DirichletProblem(op, 6.0 * np.ones(len(grid)), (0.0, 0.0))
        with pytest.raises(NewtonStagnationError):
            newton_solve(prob, tol=1e-13, max_iter=200)

    def test_monotone_ellipticity(self, catenoid_op):
        # raising one interior value strictly lowers its own residual entry
        # (the facewise coercivity Phi' > 0; the operator is monotone)
        u = catenoid_exact(catenoid_op.grid.nodes)
        r0 = residual(catenoid_op, u, np.zeros(len(catenoid_op.grid)))
        k = 200
        u2 = u.copy()
        u2[k] += 1e-4
        r1 = residual(catenoid_op, u2, np.zeros(len(catenoid_op.grid)))
        assert r1[k - 1] < r0[k - 1]


class TestComparison:
    def test_equal_functions(self, catenoid_op):
        u = catenoid_exact(catenoid_op.grid.nodes)
        rep = comparison_check(catenoid_op, u, u)
        assert rep.verdict

    def test_ordered_translates(self, catenoid_op):
        u = catenoid_exact(catenoid_op.grid.nodes)
        rep = comparison_check(catenoid_op, u, u - 0.1)
        assert rep.verdict and rep.margin == pytest.approx(0.1)

    def test_ordering_violation_is_precondition_failure(self, catenoid_op):
        u = catenoid_exact(catenoid_op.grid.nodes)
        s = catenoid_op.grid.nodes
        v = u + 0.05 * np.sin(np.pi * (s - 1.0)) ** 2
        rep = comparison_check(catenoid_op, u, v)
        assert rep.status == "precondition-failure"
        assert not rep.verdict

    def test_cap_violation_is_precondition_failure(self, catenoid_op):
        u = catenoid_exact(catenoid_op.grid.nodes)
        v = u.copy()
        v[100] += 1.0
        rep = comparison_check(catenoid_op, u, v)
        assert rep.status == "precondition-failure"


class TestStrongMax:
    def test_zero_function(self, catenoid_op):
        rep = strongmax_probe(catenoid_op, np.zeros(len(catenoid_op.grid)))
        assert rep.verdict and "constancy" in rep.notes[0]

    def test_positive_constant(self, catenoid_op):
        rep = strongmax_probe(catenoid_op, np.full(len(catenoid_op.grid), 3.0))
        assert rep.verdict and "no interior zero" in rep.notes[0]

    def test_injected_zero_flagged(self, catenoid_op):
        # supersolution with an interior zero injected by hand: the probe
        # flags the broken supersolution property as a diagnostic
        exact = catenoid_exact(catenoid_op.grid.nodes)
        u = float(exact[-1]) - exact + 0.05
        u[200] = 0.0
        rep = strongmax_probe(catenoid_op, u)
        assert rep.status == "precondition-failure" or not rep.verdict

    def test_negative_values_are_precondition_failure(self, catenoid_op):
        u = np.full(len(catenoid_op.grid), -1.0)
        rep = strongmax_probe(catenoid_op, u)
        assert rep.status == "precondition-failure"


def test_csv_round_trip(tmp_path, catenoid_op):
    exact = catenoid_exact(catenoid_op.grid.nodes)
    rhs = np.zeros(len(catenoid_op.grid))
    path = tmp_path / "solution.csv"
    export_solution_csv(catenoid_op, exact, rhs, path)
    s, u = import_solution_csv(path)
    assert np.allclose(s, catenoid_op.grid.nodes)
    assert np.allclose(u, exact)
    assert (tmp_path / "solution.csv.meta.txt").exists()
