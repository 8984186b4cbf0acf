"""Operator algebra on black-box function handles, limit decompositions and
lattice membership checks.

Operators on f : [0, inf) -> R, each with parameter c > 0:

    sigma_c f(x) = f(cx)              iterates: sigma_c^n = sigma_{c^n}
    tau_c   f(x) = f(x + c)           iterates: tau_c^n   = tau_{cn}
    delta_c f(x) = f(x + c) - f(x)    iterates: binomial sum
    theta_c f(x) = f(c) - f(0) + f(x) - f(x + c)
                                      iterates: (-1)^n (delta_c^n f - delta_c^n f(0))
    rho_c   f(x) = f(x) - f(cx)       (c in (0, 1); iterates by composition)

Decompositions recover the structure theorems at desk scale: a completely
monotone function splits as its value at infinity plus a limit of
-delta_{nc} images; a Bernstein-type function splits as value at zero plus
drift plus a limit of theta_{nc} images, with the drift read off far-field
first differences.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from . import classify
from .errors import BudgetExceededError, DomainError
from .seqcore import Sequence

DEFAULT_BUDGET = 10**6
DEFAULT_C_PAIR = (1.0, 1.0 / math.sqrt(2.0))


def _budget_from_env():
    raw = os.environ.get("CMTK_MAX_EVALS")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_BUDGET


class FunctionHandle:
    """Deterministic callable on [0, inf) (or (0, inf) when open at zero),
    with an evaluation budget and an optional known derivative.

    ``noise_scale``, when set, maps x to a magnitude M(x) such that the
    absolute evaluation error is at most EPS * M(x); operator-composed
    handles set it to the magnitude sum of their alternating terms.  None
    means correctly rounded (error within half an ulp of the value).
    """

    def __init__(self, fn, name="f", open_at_zero=False, derivative=None,
                 budget=None, base=None, noise_scale=None):
        self.fn = fn
        self.name = name
        self.open_at_zero = open_at_zero
        self.derivative = derivative
        self.budget = _budget_from_env() if budget is None else budget
        self.calls = 0
        self.base = base  # composed handles charge the underlying handle
        self.noise_scale = noise_scale

    def __call__(self, x):
        if self.open_at_zero and x <= 0:
            raise DomainError(f"{self.name} is only defined for x > 0")
        self.calls += 1
        if self.base is None and self.calls > self.budget:
            raise BudgetExceededError(
                f"evaluation budget {self.budget} exhausted for {self.name}"
            )
        return self.fn(x)

    def reset_budget(self):
        self.calls = 0
        if self.base is not None:
            self.base.reset_budget()

    def sample(self, points):
        return [self(x) for x in points]

    def sample_integers(self, count, scale=1):
        """(f(scale * k))_{k=0..count}; integer arguments are passed as ints
        when scale == 1 so exact-valued handles can stay exact."""
        if scale == 1:
            return [self(k) for k in range(count + 1)]
        return [self(scale * k) for k in range(count + 1)]


def make_handle(fn, name="f", open_at_zero=False, derivative=None, budget=None):
    return FunctionHandle(fn, name, open_at_zero, derivative, budget)


def apply_operator(f: FunctionHandle, op: str, c, iterate: int = 1) -> FunctionHandle:
    """Compose f with an operator iterate; returns a new handle charging f's
    budget.  theta and rho need f(0), so they reject open-at-zero handles;
    rho additionally requires c in (0, 1)."""
    if c <= 0:
        raise ValueError("c must be positive")
    n = iterate
    if n < 0:
        raise ValueError("iterate must be nonnegative")
    if op in ("theta", "rho") and f.open_at_zero:
        raise DomainError(f"{op} needs the value at 0; handle is open at zero")
    if op == "rho" and not c < 1:
        raise ValueError("rho requires c in (0, 1)")
    if n == 0:
        return FunctionHandle(f, f"{f.name}", f.open_at_zero, base=f)

    noise = None
    if op == "sigma":
        ceff = c**n
        fn = lambda x: f(ceff * x)
        open_at_zero = f.open_at_zero
    elif op == "tau":
        ceff = c * n
        fn = lambda x: f(x + ceff)
        open_at_zero = False
    elif op == "delta":
        coef = [math.comb(n, i) * (-1 if (n - i) % 2 else 1) for i in range(n + 1)]
        fn = lambda x: math.fsum(coef[i] * f(x + i * c) for i in range(n + 1))
        noise = lambda x: 2.0 * math.fsum(
            abs(coef[i] * f(x + i * c)) for i in range(n + 1)
        )
        open_at_zero = f.open_at_zero
    elif op == "theta":
        coef = [math.comb(n, i) * (-1 if i % 2 else 1) for i in range(n + 1)]
        fn = lambda x: math.fsum(
            coef[i] * (f(x + i * c) - f(i * c)) for i in range(n + 1)
        )
        noise = lambda x: 2.0 * math.fsum(
            abs(coef[i]) * (abs(f(x + i * c)) + abs(f(i * c)))
            for i in range(n + 1)
        )
        open_at_zero = False
    elif op == "rho":
        coef = [math.comb(n, i) * (-1 if i % 2 else 1) for i in range(n + 1)]
        fn = lambda x: math.fsum(coef[i] * f(c**i * x) for i in range(n + 1))
        noise = lambda x: 2.0 * math.fsum(
            abs(coef[i] * f(c**i * x)) for i in range(n + 1)
        )
        open_at_zero = False
    else:
        raise ValueError(f"unknown operator {op!r}")
    name = f"{op}_{c:g}^{n}({f.name})"
    return FunctionHandle(fn, name, open_at_zero, base=f, noise_scale=noise)


def sampled_sequence(f: FunctionHandle, points, step=1) -> Sequence:
    """Sample a handle into a Sequence, attaching the handle's noise scale
    as per-value input error bounds (exact values stay exact)."""
    values = f.sample(points)
    from .scalars import EPS, is_exact

    if all(is_exact(v) for v in values):
        return Sequence.from_values(values, step=step)
    bounds = None
    if f.noise_scale is not None:
        bounds = [EPS * f.noise_scale(x) for x in points]
    return Sequence.from_values(values, step=step, value_bounds=bounds)


def default_lambda_grid(n_points: int = 64, include_zero: bool = True):
    """Geometric grid on (0, 10], optionally with 0 prepended."""
    lo, hi = 1e-3, 10.0
    ratio = (hi / lo) ** (1.0 / (n_points - 1))
    grid = [lo * ratio**i for i in range(n_points)]
    grid[-1] = hi
    return ([0.0] if include_zero else []) + grid


@dataclass(frozen=True)
class CMDecomposition:
    """Psi(lam) ~ psi_inf + (-delta_{n_max c}) Psi(lam), per probed c."""

    psi_inf: float
    limit_samples: tuple      # (lam, value) for the first c
    residual: float           # sup over grid and cs of the reconstruction gap
    c_discrepancy: float      # sup discrepancy between the probed c's
    cs: tuple
    n_max: int

    def to_dict(self):
        return {
            "psi_inf": self.psi_inf,
            "residual": self.residual,
            "c_discrepancy": self.c_discrepancy,
            "cs": list(self.cs),
            "n_max": self.n_max,
            "limit_samples": [[l, v] for l, v in self.limit_samples],
        }


def cm_limit_decompose(psi: FunctionHandle, c=DEFAULT_C_PAIR, n_max: int = 64,
                       lam_grid=None) -> CMDecomposition:
    """Estimate Psi(inf) and the limit of (-delta_{nc}) Psi on a grid.

    Requires Psi nonnegative and nonincreasing on the grid (checked).  The
    limit function must not depend on c; the discrepancy across the probed
    c values is reported.
    """
    cs = tuple(c) if isinstance(c, (tuple, list)) else (float(c),)
    psi.reset_budget()
    if lam_grid is None:
        lam_grid = default_lambda_grid(include_zero=not psi.open_at_zero)
    vals = psi.sample(lam_grid)
    if any(v < 0 for v in vals):
        raise DomainError("not CM-like on grid: negative value")
    if any(b > a + 1e-12 * max(abs(a), 1.0) for a, b in zip(vals, vals[1:])):
        raise DomainError("not CM-like on grid: not nonincreasing")

    per_c = []
    residual = 0.0
    for cj in cs:
        shift = n_max * cj
        inf_j = psi(shift)
        samples = [(lam, v - psi(lam + shift)) for lam, v in zip(lam_grid, vals)]
        res_j = max(
            abs(v - (inf_j + s)) for (lam, s), v in zip(samples, vals)
        )
        residual = max(residual, res_j)
        per_c.append((inf_j, samples))
    disc = 0.0
    for inf_j, samples in per_c[1:]:
        disc = max(disc, abs(inf_j - per_c[0][0]))
        disc = max(
            disc,
            max(abs(s - s0) for (_, s), (_, s0) in zip(samples, per_c[0][1])),
        )
    return CMDecomposition(
        per_c[0][0], tuple(per_c[0][1]), residual, disc, cs, n_max
    )


@dataclass(frozen=True)
class BFDecomposition:
    """Phi(lam) ~ q + d lam + theta_{n_max c} Phi(lam), per probed c."""

    q: float
    d: float
    theta_samples: tuple
    residual: float
    telescoping_residual: float
    c_discrepancy: float
    cs: tuple
    n_max: int

    def to_dict(self):
        return {
            "q": self.q,
            "d": self.d,
            "residual": self.residual,
            "telescoping_residual": self.telescoping_residual,
            "c_discrepancy": self.c_discrepancy,
            "cs": list(self.cs),
            "n_max": self.n_max,
            "theta_samples": [[l, v] for l, v in self.theta_samples],
        }


def bf_limit_decompose(phi: FunctionHandle, c=DEFAULT_C_PAIR, n_max: int = 64,
                       lam_grid=None, telescope_n: int = 5) -> BFDecomposition:
    """Read off q = Phi(0), the drift d as the far first difference
    (Phi((n+1)c) - Phi(nc))/c, and theta_{nc} Phi samples; verify the
    reconstruction and the telescoping identity

        theta_{mc} Phi(lam) = sum_{k<m} [theta_c Phi(lam + kc) - theta_c Phi(kc)].
    """
    if phi.open_at_zero:
        raise DomainError("decomposition needs the value at 0")
    cs = tuple(c) if isinstance(c, (tuple, list)) else (float(c),)
    phi.reset_budget()
    if lam_grid is None:
        lam_grid = default_lambda_grid()
    vals = phi.sample(lam_grid)
    if any(v < 0 for v in vals):
        raise DomainError("not Bernstein-like on grid: negative value")
    q = phi(0.0)

    per_c = []
    residual = 0.0
    for cj in cs:
        shift = n_max * cj
        d_j = (phi(shift + cj) - phi(shift)) / cj
        base = phi(shift) - q
        samples = [(lam, base + v - phi(lam + shift)) for lam, v in zip(lam_grid, vals)]
        res_j = max(
            abs(v - (q + d_j * lam + s)) for (lam, s), v in zip(samples, vals)
        )
        residual = max(residual, res_j)
        per_c.append((d_j, samples))

    # telescoping identity at a small iterate count m = telescope_n
    tele = 0.0
    for cj in cs:
        m = min(telescope_n, n_max)
        th_m = apply_operator(phi, "theta", cj * m)
        th_1 = apply_operator(phi, "theta", cj)
        for lam in lam_grid:
            rhs = math.fsum(th_1(lam + k * cj) - th_1(k * cj) for k in range(m))
            tele = max(tele, abs(th_m(lam) - rhs))

    disc = 0.0
    for d_j, samples in per_c[1:]:
        disc = max(disc, abs(d_j - per_c[0][0]))
        disc = max(
            disc,
            max(abs(s - s0) for (_, s), (_, s0) in zip(samples, per_c[0][1])),
        )
    return BFDecomposition(
        q, per_c[0][0], tuple(per_c[0][1]), residual, tele, disc, cs, n_max
    )


@dataclass(frozen=True)
class LatticeEntry:
    alpha: float
    certificate: classify.Certificate
    minimality: classify.MinimalityReport | None

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "certificate": self.certificate.to_dict(),
            "minimality": self.minimality.to_dict() if self.minimality else None,
        }


@dataclass(frozen=True)
class LatticeReport:
    entries: tuple
    overall_pass: bool
    all_minimal: bool
    partial: bool = False  # budget ran out before all alphas were checked

    def to_dict(self):
        return {
            "entries": [e.to_dict() for e in self.entries],
            "overall_pass": self.overall_pass,
            "all_minimal": self.all_minimal,
            "partial": self.partial,
        }


def lattice_check(f: FunctionHandle, kind: str, alphas, depth: int = 20,
                  tol=None, extra: int = 5) -> LatticeReport:
    """Certify (f(alpha k))_k (shifted to (k+1)alpha for open-at-zero handles)
    for each alpha, with minimality, on depth + extra samples.

    Overall pass requires every per-alpha certificate to pass; budget
    exhaustion yields a partial report over the alphas already done.
    """
    from .scalars import EPS, is_exact

    entries = []
    partial = False
    f.reset_budget()
    for alpha in alphas:
        alpha = float(alpha)
        try:
            count = depth + extra
            if f.open_at_zero:
                pts = [alpha * (k + 1) for k in range(count + 1)]
            else:
                pts = [alpha * k for k in range(count + 1)]
            raw = f.sample(pts)
            if all(is_exact(v) for v in raw):
                seq = Sequence.from_values(raw, step=alpha)
            else:
                # the rounding of alpha*k shifts the sample point; budget
                # for it with the local slope estimated from the neighbours
                vals = [float(v) for v in raw]
                bounds = []
                for i, x in enumerate(pts):
                    lo, hi = vals[max(0, i - 1)], vals[min(len(vals) - 1, i + 1)]
                    slope = abs(hi - lo) / (2.0 * alpha)
                    bounds.append(EPS * (abs(vals[i]) + slope * abs(x)))
                seq = Sequence.from_values(vals, step=alpha, value_bounds=bounds)
            cert = classify.certify(seq, kind, depth)
            minim = None
            if not cert.failed:
                minim = classify.is_minimal(seq, kind, depth, tol)
            entries.append(LatticeEntry(alpha, cert, minim))
        except BudgetExceededError:
            partial = True
            break
    overall = bool(entries) and all(e.certificate.passed for e in entries) and not partial
    minimal = overall and all(e.minimality and e.minimality.minimal for e in entries)
    return LatticeReport(tuple(entries), overall, minimal, partial)


@dataclass(frozen=True)
class SubaffineReport:
    supremum: float
    bound: float
    ok: bool
    arg_sup: float

    def to_dict(self):
        return {
            "supremum": self.supremum,
            "bound": self.bound,
            "ok": self.ok,
            "arg_sup": self.arg_sup,
        }


def subaffine_check(phi: FunctionHandle, c: float, bound: float,
                    x_grid=None) -> SubaffineReport:
    """Real-axis surrogate of the bounded-increment condition:
    sup over the grid of |Phi(x + c) - Phi(x)| <= bound, up to the
    rounding floor of the evaluated increments."""
    if c <= 0:
        raise ValueError("c must be positive")
    phi.reset_budget()
    if x_grid is None:
        x_grid = default_lambda_grid(include_zero=not phi.open_at_zero)
    eps = 2.0 ** -52
    sup, arg, slack = -math.inf, float("nan"), 0.0
    for x in x_grid:
        hi, lo = phi(x + c), phi(x)
        inc = abs(hi - lo)
        if inc > sup:
            sup, arg = inc, x
        slack = max(slack, 4.0 * eps * max(abs(hi), abs(lo)))
    return SubaffineReport(sup, float(bound), sup <= bound + slack, arg)
