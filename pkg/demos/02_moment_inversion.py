"""Hausdorff moment inversion: from a finite moment sequence back to a
representing measure, and from the measure to the function it transforms.

a_k = integral u^k nu(du) on [0,1] is fitted by nonnegative least squares
on a uniform grid; mapping the support through x = -ln u turns the fit
into a sum of decaying exponentials evaluable at any lambda >= 0.
"""

from fractions import Fraction

from cmtk import (
    Sequence,
    evaluate,
    extend_from_integer_samples,
    invert_ca,
    invert_cm,
    to_exponential,
)

# Moments of the point mass at u = 1/2 are a_k = 2^-k; the grid contains
# 0.5, so the fit recovers the atom to solver precision.
geometric = Sequence.from_values([Fraction(1, 2**k) for k in range(21)])
measure, fit = invert_cm(geometric, grid_m=200)
heavy = [(u, w) for u, w in measure.atoms if w > 1e-6]
print("dominant atoms:", heavy)
print(f"residual {fit.residual:.2e}, KKT gap {fit.kkt_gap:.2e}")

# Lebesgue measure: moments 1/(k+1).  The fitted measure is a quadrature
# rule, and the reconstructed function matches 1/(1+lambda) off-lattice.
harmonic = Sequence.from_values([Fraction(1, k + 1) for k in range(21)])
measure2, fit2 = invert_cm(harmonic)
for lam, truth in ((0.5, 2 / 3), (3.0, 0.25)):
    val = evaluate(measure2, lam)
    print(f"reconstruction at {lam}: {val:.6f}  (truth {truth:.6f})")

# The exponential picture: u = 0 becomes the designated infinity atom,
# counted only at lambda = 0 (the a_0 = total mass convention).
point = Sequence.from_values([1] + [0] * 15)
m3, _ = invert_cm(point)
e3 = to_exponential(m3)
print("mass at infinity:", e3.mass_at_infinity,
      "| value at 0:", e3.laplace(0.0), "| value at 1:", e3.laplace(1.0))

# Completely alternating sequences get a (q, d, mu) triplet instead:
# q = a_0, drift from the last first difference, measure on [0, 1).
drifted = Sequence.from_values([Fraction(5, 2) + 2 * k for k in range(21)])
triplet, fit3 = invert_ca(drifted)
print(f"pure drift fit: q = {triplet.q}, d = {triplet.d}, "
      f"levy mass = {triplet.measure.total_mass:.2e}")

# One call does certify + invert + wrap: the unique CM interpolant of the
# samples, per the uniqueness of moment representations.
f = extend_from_integer_samples(harmonic, "cm")
print(f"interpolant of 1/(1+k) at 0.5: {f(0.5):.6f}")
