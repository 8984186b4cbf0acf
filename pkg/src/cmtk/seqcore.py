"""Difference calculus on finite sequences, plus the binomial/Euler transforms.

The central object is the sign-folded difference table

    D[n][k] = (-1)^n Delta^n a(k),   n + k <= K,

built by the recurrence D[n][k] = D[n-1][k] - D[n-1][k+1].  Entries are
exact when the sequence is exact; in float mode every entry carries a
running error bound (inputs assumed correctly rounded, half an ulp each,
plus one rounding per subtraction) so that sign decisions downstream can
distinguish "certified" from "undecidable".
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .scalars import EPS, EXACT, FLOAT, coerce_values, parse_scalar


@dataclass(frozen=True)
class Sequence:
    """Finite prefix (a_0..a_K) of a real sequence on a lattice of given step.

    ``value_bounds``, float mode only, carries per-entry absolute input
    error bounds for values that are noisier than correctly rounded
    (e.g. samples assembled from several function evaluations); None means
    half an ulp each.
    """

    values: tuple
    step: Fraction | float = 1
    mode: str = EXACT
    value_bounds: tuple | None = None

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("sequence must be nonempty")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.value_bounds is not None:
            if self.mode == EXACT:
                raise ValueError("exact sequences carry no error bounds")
            if len(self.value_bounds) != len(self.values):
                raise ValueError("value_bounds length mismatch")

    @classmethod
    def from_values(cls, values, step=1, mode=None, value_bounds=None):
        vals, m = coerce_values(values, mode)
        if m == EXACT:
            value_bounds = None
        elif value_bounds is not None:
            value_bounds = tuple(float(b) for b in value_bounds)
        return cls(vals, step, m, value_bounds)

    @classmethod
    def from_text(cls, tokens, step=1, mode=None):
        return cls.from_values([parse_scalar(t) for t in tokens], step, mode)

    @property
    def last_index(self) -> int:
        return len(self.values) - 1

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def shift(self, j: int = 1) -> "Sequence":
        """Drop the first j terms: (a_{k+j})_k."""
        bounds = self.value_bounds[j:] if self.value_bounds else None
        return Sequence(self.values[j:], self.step, self.mode, bounds)

    def as_floats(self):
        return [float(v) for v in self.values]


def read_sequence(path, step=1, mode=None) -> Sequence:
    """Read a sequence from CSV (one value per line) or a JSON array.

    CSV cells accept "p/q" rationals and decimal literals.  A file whose
    first non-space byte is '[' is treated as JSON.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    values = []
    if stripped.startswith("["):
        for i, item in enumerate(json.loads(stripped)):
            if isinstance(item, str):
                values.append(parse_scalar(item))
            elif isinstance(item, bool):
                raise ValueError(f"entry {i}: boolean is not a scalar")
            elif isinstance(item, int):
                values.append(Fraction(item))
            elif isinstance(item, float):
                values.append(item)
            else:
                raise ValueError(f"entry {i}: cannot parse {item!r}")
    else:
        for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
            cells = [c for c in row if c.strip()]
            if not cells:
                continue
            if len(cells) != 1:
                raise ValueError(f"line {lineno}: expected one value per line")
            try:
                values.append(parse_scalar(cells[0]))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from exc
    if not values:
        raise ValueError("no values found in input")
    return Sequence.from_values(values, step, mode)


@dataclass(frozen=True)
class DifferenceTable:
    """Triangular array rows[n][k] = (-1)^n Delta^n a(k), n <= depth, n+k <= K.

    ``bounds`` mirrors ``rows`` with per-entry absolute error bounds in float
    mode and is None in exact mode.
    """

    rows: tuple
    bounds: tuple | None
    mode: str
    depth: int
    last_index: int

    def entry(self, n: int, k: int):
        return self.rows[n][k]

    def error_bound(self, n: int, k: int) -> float:
        if self.bounds is None:
            return 0.0
        return self.bounds[n][k]

    def row(self, n: int):
        return self.rows[n]

    def column_zero(self):
        """The k = 0 column (the atom-at-zero trail lives here)."""
        return [self.rows[n][0] for n in range(self.depth + 1)]


def difference_table(a: Sequence, depth: int) -> DifferenceTable:
    """Build the sign-folded difference table of ``a`` down to ``depth`` rows."""
    K = a.last_index
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > K:
        raise ValueError(
            f"insufficient data: depth {depth} exceeds last index {K}"
        )
    rows = [list(a.values)]
    if a.mode == EXACT:
        for n in range(1, depth + 1):
            prev = rows[-1]
            rows.append([prev[k] - prev[k + 1] for k in range(K - n + 1)])
        return DifferenceTable(tuple(map(tuple, rows)), None, EXACT, depth, K)

    if a.value_bounds is not None:
        bounds = [list(a.value_bounds)]
    else:
        bounds = [[EPS * abs(v) for v in rows[0]]]
    for n in range(1, depth + 1):
        prev, eprev = rows[-1], bounds[-1]
        row, erow = [], []
        for k in range(K - n + 1):
            v = prev[k] - prev[k + 1]
            row.append(v)
            erow.append(eprev[k] + eprev[k + 1] + EPS * abs(v))
        rows.append(row)
        bounds.append(erow)
    return DifferenceTable(
        tuple(map(tuple, rows)), tuple(map(tuple, bounds)), FLOAT, depth, K
    )


def closed_form_entry(a: Sequence, n: int, k: int):
    """(-1)^n Delta^n a(k) by the direct binomial sum (no recurrence).

    Used as the independent cross-check of the table recurrence.
    """
    if n + k > a.last_index:
        raise ValueError("insufficient data")
    terms = [
        math.comb(n, i) * a.values[k + i] * (-1 if i % 2 else 1)
        for i in range(n + 1)
    ]
    if a.mode == EXACT:
        return sum(terms, Fraction(0))
    return math.fsum(terms)


def binomial_transform(a: Sequence) -> Sequence:
    """b_n = (-1)^n Delta^n a(0) = sum_i C(n,i)(-1)^i a_i.  Involutive."""
    table = difference_table(a, a.last_index)
    return Sequence(
        tuple(table.rows[n][0] for n in range(a.last_index + 1)), a.step, a.mode
    )


def euler_transform(a: Sequence) -> Sequence:
    """(Delta^n a(0))_n.  One-to-one with ``a`` (inverse below)."""
    table = difference_table(a, a.last_index)
    out = []
    for n in range(a.last_index + 1):
        v = table.rows[n][0]
        out.append(-v if n % 2 else v)
    return Sequence(tuple(out), a.step, a.mode)


def inverse_euler_transform(e: Sequence) -> Sequence:
    """Recover a from its Euler transform: a_n = sum_i C(n,i) e_i."""
    vals = []
    for n in range(e.last_index + 1):
        terms = [math.comb(n, i) * e.values[i] for i in range(n + 1)]
        vals.append(sum(terms, Fraction(0)) if e.mode == EXACT else math.fsum(terms))
    return Sequence(tuple(vals), e.step, e.mode)
