"""Gregory-Newton interpolation from integer samples.

f(z) ~ sum_k [Delta^k f(0) / k!] z(z-1)...(z-k+1): the discrete Taylor
series.  Partial sums interpolate the samples exactly; between integers
the convergence rate depends strongly on the function.
"""

from fractions import Fraction

from cmtk import (
    Sequence,
    basis_convert,
    eval_series,
    exponential_type_check,
    falling_factorial,
    series_from_samples,
)

# 2^-z: forward differences (-1/2)^k, so terms shrink geometrically.
geometric = Sequence.from_values([Fraction(1, 2**k) for k in range(60)])
s_geo = series_from_samples(geometric)
print("coefficients c_0..c_3:", [str(c) for c in s_geo.coeffs[:4]])

at_node = eval_series(s_geo, 7)
print("value at the node z=7 (exact):", at_node.value)

half = eval_series(s_geo, Fraction(1, 2))
print(f"2^-z at z=1/2: {float(half.value):.12f}  "
      f"(truth {2**-0.5:.12f}, tail est {half.tail_estimate:.1e})")

# 1/(1+z): terms decay only like k^(-5/2), all one sign past k=1, so the
# 60-term partial sum still misses 2/3 by ~4e-4.
reciprocal = Sequence.from_values([Fraction(1, k + 1) for k in range(60)])
s_rec = series_from_samples(reciprocal)
v = eval_series(s_rec, Fraction(1, 2))
print(f"1/(1+z) at z=1/2 with 60 terms: {float(v.value):.8f} "
      f"(truth {2 / 3:.8f})")
for n in (20, 40, 80):
    seq = Sequence.from_values([Fraction(1, k + 1) for k in range(n)])
    err = abs(float(eval_series(series_from_samples(seq), Fraction(1, 2)).value) - 2 / 3)
    print(f"  {n:3d} terms -> error {err:.2e}  (~0.19 n^-1.5 = {0.19 * n**-1.5:.2e})")

# Falling factorials and the Stirling change of basis.
print("falling_factorial(5, 3) =", falling_factorial(5, 3))
print("z^3 in the falling basis:", basis_convert([0, 0, 0, 1], "power-to-falling"))
print("and back:", basis_convert(
    basis_convert([0, 0, 0, 1], "power-to-falling"), "falling-to-power"))

# Off the right half-plane the series has no business converging.
warned = eval_series(s_geo, -2.5)
print("warnings at z=-2.5:", warned.warnings)

# Norlund's growth condition |f(x)| <= C e^{D|x|}, spot-checked on samples.
xs = [0.1 * i for i in range(1, 500)]
ok = exponential_type_check(xs, [x**0.5 for x in xs], C=1.0, D=1.0)
print("sqrt is exponential type (C=1, D=1):", ok.ok)
