"""The iterative functional equation f(x+1) = g(x) f(x), f(1) = 1, for
log-concave g, solved by the infinite-product representation

    f(x) = e^{-gamma_g x} / g(x) * prod_{n>=1} [g(n) / g(n+x)] e^{a_n x},

with a_n = g'(n)/g(n) and gamma_g = lim (sum_{j<=n} a_j - log g(n)).
When lim g = 1 is declared the product simplifies to
f(x) = (1/g(x)) prod g(n)/g(n+x) and no gamma is needed.

With g(x) = x this is the Weierstrass product for the gamma function;
truncation at N terms carries an O(x^2 / 2N)-scale error on the base
interval.  Values for x > 1 are obtained from the base interval through
the recursion itself, so the functional equation holds to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .funcops import FunctionHandle

DEFAULT_N = 100_000


def _central_derivative(g, x, n):
    """Central difference with one Richardson step (h = max(1e-6, 1e-8 n))."""
    h = max(1e-6, 1e-8 * n)
    d1 = (g(x + h) - g(x - h)) / (2.0 * h)
    d2 = (g(x + h / 2) - g(x - h / 2)) / h
    return (4.0 * d2 - d1) / 3.0


@dataclass
class WebsterProblem:
    """Problem data: g (assumed log-concave, spot-checked), the product
    truncation N, the gamma acceleration mode and whether lim g = 1 was
    declared (enabling the simplified product)."""

    g: FunctionHandle
    n_terms: int = DEFAULT_N
    acceleration: str = "aitken"  # "aitken" | "none"
    g_limit_one: bool = False
    concavity_grid: tuple = tuple(0.25 * (i + 1) for i in range(32))


@dataclass(frozen=True)
class WebsterResult:
    value: float
    x: float
    gamma: float | None
    gamma_raw: float | None
    last_increment: float
    tail_estimate: float
    log_concave_ok: bool
    n_terms: int
    warnings: tuple = ()

    def to_dict(self):
        return {
            "value": self.value,
            "x": self.x,
            "gamma": self.gamma,
            "gamma_raw": self.gamma_raw,
            "last_increment": self.last_increment,
            "tail_estimate": self.tail_estimate,
            "log_concave_ok": self.log_concave_ok,
            "n_terms": self.n_terms,
            "warnings": list(self.warnings),
        }


class WebsterSolution:
    """Callable solution with precomputed product data shared across x."""

    def __init__(self, problem: WebsterProblem):
        self.problem = problem
        self._base_cache = {}
        self._prepared = False
        self.gamma = None       # populated on first evaluation
        self.gamma_raw = None
        self.log_concave_ok = True

    # -- preparation ---------------------------------------------------

    def _derivative_ratio(self, n):
        g = self.problem.g
        if g.derivative is not None:
            return g.derivative(n) / g(n)
        return _central_derivative(g, n, n) / g(n)

    def _prepare(self):
        if self._prepared:
            return
        p, g, N = self.problem, self.problem.g, self.problem.n_terms
        g.reset_budget()

        self.log_concave_ok = True
        for t in p.concavity_grid:
            lo, mid, hi = g(t), g(1.5 * t), g(2.0 * t)
            if min(lo, mid, hi) <= 0:
                raise DomainError("g must be positive on the sampled points")
            slack = 1e-9 * (1.0 + abs(math.log(mid)))
            if math.log(mid) < 0.5 * (math.log(lo) + math.log(hi)) - slack:
                self.log_concave_ok = False

        self.log_g = [0.0] * (N + 1)  # log g(n), n = 1..N
        for n in range(1, N + 1):
            self.log_g[n] = math.log(g(n))

        self.gamma = None
        self.gamma_raw = None
        self.a = None
        self.sum_a = 0.0
        if not p.g_limit_one:
            self.a = [0.0] * (N + 1)
            checkpoints = sorted({max(1, N // 4), max(1, N // 2), N})
            partials = {}
            run = 0.0
            for n in range(1, N + 1):
                self.a[n] = float(self._derivative_ratio(n))
                run += self.a[n]
                if n in checkpoints:
                    partials[n] = run - self.log_g[n]
            self.sum_a = run
            self.gamma_raw = partials[N]
            if p.acceleration == "aitken" and len(partials) == 3:
                s0, s1, s2 = (partials[c] for c in checkpoints)
                den = (s2 - s1) - (s1 - s0)
                self.gamma = s2 - (s2 - s1) ** 2 / den if den != 0.0 else s2
            else:
                self.gamma = self.gamma_raw
        self._prepared = True

    # -- evaluation ----------------------------------------------------

    def _base_value(self, b):
        """Truncated product at b in (0, 1]; returns (value, last_increment)."""
        if b in self._base_cache:
            return self._base_cache[b]
        p, g, N = self.problem, self.problem.g, self.problem.n_terms
        g.reset_budget()
        terms = [self.log_g[n] - math.log(g(n + b)) for n in range(1, N + 1)]
        if p.g_limit_one:
            head = -math.log(g(b))
            last = terms[-1] if terms else 0.0
        else:
            head = -self.gamma * b - math.log(g(b)) + self.sum_a * b
            last = (terms[-1] + self.a[N] * b) if terms else 0.0
        value = math.exp(head + math.fsum(terms))
        out = (value, abs(last))
        self._base_cache[b] = out
        return out

    def result(self, x) -> WebsterResult:
        """Evaluate at x > 0 with the full convergence report."""
        x = float(x)
        if x <= 0:
            raise DomainError("x must be positive")
        self._prepare()
        p, g, N = self.problem, self.problem.g, self.problem.n_terms
        # reduce to the base interval (0, 1]: f(b + m) = f(b) prod_j g(b + j)
        m = max(0, math.ceil(x) - 1)
        b = x - m
        base, last_inc = self._base_value(b)
        value = base
        for j in range(m):
            value *= g(b + j)
        # tail of sum_{n>N} ~ C/n^2 estimated as N * |last increment|
        tail = N * last_inc * abs(value)
        warnings = ()
        if not self.log_concave_ok:
            warnings = ("log-concavity spot-check failed: theorem hypotheses unmet",)
        return WebsterResult(
            value, x, self.gamma, self.gamma_raw, last_inc, tail,
            self.log_concave_ok, N, warnings,
        )

    def __call__(self, x):
        return self.result(x).value

    def as_handle(self) -> FunctionHandle:
        return FunctionHandle(self, name="webster-solution", open_at_zero=True)


def solve_webster(problem: WebsterProblem, x) -> WebsterResult:
    """One-shot solve; build a WebsterSolution directly to evaluate at many x."""
    return WebsterSolution(problem).result(x)


def verify_functional_equation(f, g, x_grid) -> float:
    """max over the grid of |f(x+1) - g(x) f(x)| / (1 + |f(x+1)|)."""
    worst = 0.0
    for x in x_grid:
        lhs = f(x + 1.0)
        rhs = g(x) * f(x)
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs)))
    return worst
