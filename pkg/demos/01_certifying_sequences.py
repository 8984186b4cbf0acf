"""Certifying complete monotonicity from a finite prefix.

A sequence is completely monotone (CM) when every sign-folded difference
(-1)^n Delta^n a(k) is nonnegative, and completely alternating (CA) when
those quantities are nonpositive for n >= 1.  With rational inputs the
whole difference table is exact, so verdicts at finite depth are proofs
about the given prefix.
"""

from fractions import Fraction

from cmtk import (
    Sequence,
    atom_at_zero,
    certify,
    degenerate_classify,
    difference_table,
    is_minimal,
)

# The harmonic-tail sequence a_k = 1/(k+1) is the moment sequence of
# Lebesgue measure on [0,1]; its k = 0 difference column is 1/(n+1).
a = Sequence.from_values([Fraction(1, k + 1) for k in range(31)])
table = difference_table(a, 30)
print("first entries of the k=0 column:",
      [str(table.rows[n][0]) for n in range(6)])

cert = certify(a, "cm", 30)
print(f"certify(cm, depth=30): {cert.verdict}, min margin {cert.min_margin}")

# Perturbing a_0 downward by eps = 1/20 destroys complete monotonicity
# exactly when 1/(n+1) drops below eps, i.e. at n = 20.
eps = Fraction(1, 20)
perturbed = Sequence.from_values(
    [Fraction(1) - eps] + [Fraction(1, k + 1) for k in range(1, 31)]
)
bad = certify(perturbed, "cm", 30)
print(f"perturbed by 1/20: {bad.verdict} with witness (n, k, value) = {bad.witness}")

# Minimality: does the representing measure put mass at zero?  The trail
# (-1)^n Delta^n a(0) converges down to that mass.
est = atom_at_zero(a, "cm", 30)
print("atom trail tail:", [str(v) for v in est.trail[-3:]],
      "-> estimate", est.estimate)
print("is_minimal(tol=0.05):", is_minimal(a, "cm", 30, tol=0.05).minimal)

# A point mass at zero shows up as a constant trail.
point = Sequence.from_values([1] + [0] * 20)
print("pure atom estimate:", atom_at_zero(point, "cm", 20).estimate)

# Strict alternation vs the degenerate tails: a CM sequence either keeps
# every entry strictly positive or is constant from index 1 on.
print("degeneracy of (5,3,3,3,3):",
      degenerate_classify(Sequence.from_values([5, 3, 3, 3, 3]), "cm", 4))
print("degeneracy of 2^-k:",
      degenerate_classify(Sequence.from_values(
          [Fraction(1, 2**k) for k in range(11)]), "cm", 10))

# Float inputs carry error bounds; verdicts degrade to "inconclusive"
# rather than guessing when entries sink below the accumulated noise.
noisy = Sequence.from_values([1.0 / (k + 1) for k in range(41)])
print("float mode at depth 30:", certify(noisy, "cm", 30).verdict)
