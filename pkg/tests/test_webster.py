"""Webster product solver.

The g(x) = x instance is the gamma function: the oracle is an independent
Lanczos evaluation (math.gamma), never the product itself.  Constant g and
g = (x+1)/x have closed-form solutions that pin the plumbing exactly.
"""

import math

import pytest

from cmtk.builtins import webster_constant, webster_exp_neg_cm, webster_identity
from cmtk.errors import DomainError
from cmtk.funcops import make_handle
from cmtk.webster import (
    WebsterProblem,
    WebsterSolution,
    solve_webster,
    verify_functional_equation,
)


def gamma_problem(n_terms, accel="aitken"):
    return WebsterProblem(webster_identity(), n_terms=n_terms, acceleration=accel)


class TestGammaInstance:
    def test_half_integer_value(self):
        res = solve_webster(gamma_problem(10**5), 0.5)
        assert abs(res.value - math.sqrt(math.pi)) <= 1e-5

    def test_truncation_monotonicity(self):
        errors = [
            abs(solve_webster(gamma_problem(n), 0.5).value - math.sqrt(math.pi))
            for n in (10**3, 10**4, 10**5)
        ]
        assert errors[0] > errors[1] > errors[2]
        assert errors[1] <= 1e-4
        assert errors[2] <= 1e-5

    def test_gamma_constant_estimate(self):
        # gamma_g for g(x)=x is the Euler-Mascheroni constant
        sol = WebsterSolution(gamma_problem(10**4))
        sol.result(0.5)
        assert sol.gamma == pytest.approx(0.5772156649015329, abs=1e-8)
        # the raw partial lags by ~1/(2N)
        assert sol.gamma_raw == pytest.approx(0.5772156649015329, abs=1e-4)

    def test_matches_lanczos_on_grid(self):
        sol = WebsterSolution(gamma_problem(10**4))
        for x in (0.3, 1.0, 1.7, 3.2, 4.9):
            assert sol(x) == pytest.approx(math.gamma(x), rel=1e-4)

    def test_functional_equation_residual(self):
        sol = WebsterSolution(gamma_problem(10**5))
        g = webster_identity()
        grid = [0.1 + 0.2 * i for i in range(25)]
        assert verify_functional_equation(sol, g, grid) <= 1e-6

    def test_log_convexity(self):
        sol = WebsterSolution(gamma_problem(10**4))
        xs = [0.2 * i for i in range(1, 30)]
        for a, b in zip(xs, xs[2:]):
            mid = 0.5 * (a + b)
            lhs = math.log(sol(mid))
            rhs = 0.5 * (math.log(sol(a)) + math.log(sol(b)))
            assert lhs <= rhs + 1e-8

    def test_uniqueness_surrogate(self):
        # solutions from N and 2N agree within twice the tail estimate
        r1 = solve_webster(gamma_problem(2000), 0.5)
        r2 = solve_webster(gamma_problem(4000), 0.5)
        assert abs(r1.value - r2.value) <= 2.0 * r1.tail_estimate

    def test_rejects_nonpositive_x(self):
        with pytest.raises(DomainError):
            solve_webster(gamma_problem(100), 0.0)


class TestClosedForms:
    def test_constant_g_is_exponential(self):
        c = 0.8
        problem = WebsterProblem(webster_constant(c), n_terms=500)
        sol = WebsterSolution(problem)
        for x in (0.25, 1.0, 2.5, 6.0):
            assert sol(x) == pytest.approx(math.exp(c * (x - 1.0)), rel=1e-12)

    def test_trivial_g_gives_one(self):
        problem = WebsterProblem(webster_constant(0.0), n_terms=200)
        sol = WebsterSolution(problem)
        for x in (0.1, 1.0, 3.7):
            assert sol(x) == pytest.approx(1.0, abs=1e-13)

    def test_exp_neg_cm_closed_form(self):
        # g = exp(-e^{-x}): Psi(x) = e^{-x}/(1 - e^{-1}) solves
        # Psi(x) - Psi(x+1) = e^{-x}, so f = exp(Psi(x) - Psi(1))
        problem = WebsterProblem(
            webster_exp_neg_cm(), n_terms=2000, g_limit_one=True
        )
        sol = WebsterSolution(problem)
        scale = 1.0 - math.exp(-1.0)
        for x in (0.3, 1.0, 2.4, 5.5):
            expected = math.exp((math.exp(-x) - math.exp(-1.0)) / scale)
            assert sol(x) == pytest.approx(expected, rel=1e-9)

    def test_shifted_ratio(self):
        # f(x) = x solves f(x+1) = ((x+1)/x) f(x), f(1) = 1
        g = make_handle(lambda x: (x + 1.0) / x, "ratio", open_at_zero=True)
        assert verify_functional_equation(lambda x: x, g, [0.5, 1.0, 2.5]) == 0.0

    def test_power_of_two(self):
        g = webster_constant(math.log(2.0))
        assert (
            verify_functional_equation(
                lambda x: 2.0 ** (x - 1.0), g, [0.3, 1.1, 4.0]
            )
            <= 1e-15
        )


class TestHypothesisChecks:
    def test_log_concavity_warning(self):
        # log(1 + x^2) is convex near zero, so the midpoint spot-check trips
        g = make_handle(lambda x: 1.0 + x * x, "logconvex")
        problem = WebsterProblem(g, n_terms=50)
        res = solve_webster(problem, 0.5)
        assert not res.log_concave_ok
        assert any("log-concavity" in w for w in res.warnings)

    def test_positivity_required(self):
        g = make_handle(lambda x: x - 10.0, "signed")
        with pytest.raises(DomainError):
            solve_webster(WebsterProblem(g, n_terms=50), 0.5)
