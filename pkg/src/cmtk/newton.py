"""Gregory-Newton interpolation machinery.

Falling factorials, Stirling-number basis conversion between power and
falling-factorial coefficients, series construction from integer samples
(coefficients Delta^k f(0) / k!), truncated evaluation with a heuristic
tail estimate, and the exponential-type growth check on the real axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .scalars import EXACT, is_exact, scalar_to_json
from .seqcore import Sequence, difference_table


def falling_factorial(z, k: int):
    """z(z-1)...(z-k+1); equals 1 for k = 0.  Generic over int, Fraction,
    float and complex."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = 1
    for i in range(k):
        out = out * (z - i)
    return out


class StirlingTable:
    """Signed Stirling numbers of the first kind and Stirling numbers of the
    second kind, grown on demand.

    first[n][k] = s(n, k) with s(n+1, k) = s(n, k-1) - n s(n, k), so that
    z^{falling n} = sum_k s(n, k) z^k; second[n][k] = S(n, k) with
    S(n+1, k) = k S(n, k) + S(n, k-1), so that z^n = sum_k S(n, k) z^{falling k}.
    """

    def __init__(self, size: int = 0):
        self.first = [[1]]
        self.second = [[1]]
        self.extend(size)

    @property
    def size(self) -> int:
        return len(self.first) - 1

    def extend(self, size: int):
        while self.size < size:
            n = self.size
            srow, Srow = self.first[n], self.second[n]
            self.first.append(
                [
                    (srow[k - 1] if k >= 1 else 0) - n * (srow[k] if k <= n else 0)
                    for k in range(n + 2)
                ]
            )
            self.second.append(
                [
                    k * (Srow[k] if k <= n else 0) + (Srow[k - 1] if k >= 1 else 0)
                    for k in range(n + 2)
                ]
            )

    def bell_numbers(self):
        """Row sums of the second kind (a cross-check on the recurrences)."""
        return [sum(row) for row in self.second]


_SHARED_TABLE = StirlingTable(0)


def basis_convert(coeffs, direction: str, table: StirlingTable = None):
    """Convert polynomial coefficients between the power basis and the
    falling-factorial basis (index = degree).  Exact both ways; the two
    directions are mutually inverse.

    direction: "power-to-falling" or "falling-to-power".
    """
    coeffs = list(coeffs)
    deg = len(coeffs) - 1
    if deg < 0:
        raise ValueError("empty coefficient list")
    if table is None:
        table = _SHARED_TABLE
    table.extend(deg)
    out = [0] * (deg + 1)
    if direction == "power-to-falling":
        conv = table.second
    elif direction == "falling-to-power":
        conv = table.first
    else:
        raise ValueError(f"unknown direction {direction!r}")
    for n, c in enumerate(coeffs):
        if c == 0:
            continue
        for k in range(n + 1):
            out[k] = out[k] + c * conv[n][k]
    return out


@dataclass(frozen=True)
class NewtonSeries:
    """Gregory-Newton coefficients c_k = Delta^k f(0) / k!, with the origin
    samples retained for audit (c_0 = f(0); the partial sums interpolate
    every retained sample index exactly)."""

    coeffs: tuple
    samples: tuple
    mode: str = EXACT

    def __len__(self):
        return len(self.coeffs)

    def forward_differences(self):
        """(Delta^k f(0))_k, i.e. coefficients times k!."""
        return [c * math.factorial(k) for k, c in enumerate(self.coeffs)]

    def to_dict(self):
        return {
            "coefficients": [scalar_to_json(c) for c in self.coeffs],
            "n_samples": len(self.samples),
            "mode": self.mode,
        }


def series_from_samples(samples: Sequence) -> NewtonSeries:
    """Build the Newton series of f from the samples (f(0), ..., f(N))."""
    N = samples.last_index
    table = difference_table(samples, N)
    coeffs = []
    for n in range(N + 1):
        delta = table.rows[n][0] * (-1 if n % 2 else 1)  # undo the sign fold
        fact = math.factorial(n)
        if samples.mode == EXACT:
            coeffs.append(delta / Fraction(fact))
        else:
            coeffs.append(delta / fact)
    return NewtonSeries(tuple(coeffs), samples.values, samples.mode)


@dataclass(frozen=True)
class SeriesValue:
    """Truncated evaluation: the partial sum, the heuristic tail estimate
    (magnitude of the last three included terms; not a bound), and warnings."""

    value: object
    tail_estimate: float
    n_terms: int
    warnings: tuple = ()

    def __float__(self):
        return float(self.value)


def eval_series(series: NewtonSeries, z, n_terms: int = None) -> SeriesValue:
    """Partial sum  sum_{k < n_terms} c_k z^{falling k}.

    Exact when both the series and z are exact; otherwise float/complex.
    Emits a divergence warning when term magnitudes grow for five
    consecutive k, and a half-plane warning for Re(z) <= 0 (convergence is
    only expected on Re(z) > 0 away from the sample range).
    """
    if n_terms is None:
        n_terms = len(series.coeffs)
    if n_terms > len(series.coeffs):
        raise ValueError(
            f"n_terms {n_terms} exceeds available coefficients {len(series.coeffs)}"
        )
    warnings = []
    re_z = z.real if isinstance(z, complex) else z
    is_node = not isinstance(z, complex) and z == int(z) and 0 <= z < len(series.samples)
    if re_z <= 0 and not is_node:
        warnings.append("outside half-plane Re(z) > 0: convergence not expected")

    exact = series.mode == EXACT and is_exact(z)
    total = Fraction(0) if exact else 0.0
    ff = Fraction(1) if exact else (1.0 + 0.0j if isinstance(z, complex) else 1.0)
    mags = []
    growth = 0
    diverging = False
    for k in range(n_terms):
        term = series.coeffs[k] * ff
        total = total + term
        mags.append(float(abs(term)))
        if k >= 1 and mags[-1] > mags[-2] > 0:
            growth += 1
            if growth >= 5 and not diverging:
                diverging = True
                warnings.append(
                    "divergence suspected: term magnitudes grew for 5 consecutive k"
                )
        else:
            growth = 0
        ff = ff * (z - k)
    tail = max(mags[-3:], default=0.0)
    return SeriesValue(total, tail, n_terms, tuple(warnings))


@dataclass(frozen=True)
class GrowthReport:
    """Pointwise exponential-type check |f(x_i)| <= C e^{D |x_i|}."""

    ok: bool
    worst_log_excess: float
    first_violation: tuple | None
    C: float
    D: float

    def to_dict(self):
        fv = None
        if self.first_violation is not None:
            x, v = self.first_violation
            fv = {"x": x, "value": v}
        return {
            "ok": self.ok,
            "worst_log_excess": self.worst_log_excess,
            "first_violation": fv,
            "C": self.C,
            "D": self.D,
        }


def exponential_type_check(xs, values, C: float, D: float) -> GrowthReport:
    """Check the growth bound at the sample points (a necessary-condition
    surrogate on the real axis: the genuine condition is complex-analytic)."""
    if C <= 0 or D < 0:
        raise ValueError("need C > 0 and D >= 0")
    worst = -math.inf
    first = None
    logC = math.log(C)
    for x, v in zip(xs, values):
        av = abs(float(v))
        excess = (math.log(av) if av > 0 else -math.inf) - (logC + D * abs(float(x)))
        if excess > worst:
            worst = excess
        if excess > 0 and first is None:
            first = (float(x), float(v))
    return GrowthReport(first is None, worst, first, C, D)
