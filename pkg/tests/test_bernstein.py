"""Bernstein triplets: evaluation, extraction, theta membership, the
self-decomposability suite and the EGF identity."""

import math
import random
from fractions import Fraction

import pytest

from cmtk.bernstein import (
    BernsteinTriplet,
    check_bf_via_theta,
    check_selfdecomposable,
    egf_validate,
    eval_bernstein,
    extract_triplet,
    triplet_handle,
)
from cmtk.builtins import (
    linear_handle,
    log1p_handle,
    one_minus_exp_handle,
    ratio_bf_handle,
    sqrt_triplet_handle,
    square_handle,
)
from cmtk.errors import CertificationError
from cmtk.funcops import make_handle
from cmtk.moments import invert_ca
from cmtk.seqcore import Sequence


def random_triplet(rng, max_atoms=8, x_range=(0.1, 3.0)):
    """Random rational triplet with atoms inside the grid-resolvable band
    (the M = 200 u-grid covers x up to ln 200 ~ 5.3)."""
    n = rng.randint(0, max_atoms)
    q = Fraction(rng.randint(0, 12), rng.randint(1, 6))
    d = Fraction(rng.randint(0, 8), rng.randint(1, 4)) if rng.random() < 0.7 else Fraction(0)
    xs = sorted(
        Fraction(rng.randint(int(x_range[0] * 100), int(x_range[1] * 100)), 100)
        for _ in range(n)
    )
    atoms = tuple(
        (float(x), float(Fraction(rng.randint(1, 40), 20))) for x in set(xs)
    )
    return BernsteinTriplet(float(q), float(d), tuple(sorted(atoms)))


class TestEval:
    def test_single_atom(self):
        t = BernsteinTriplet(0.0, 0.0, ((1.0, 1.0),))
        assert eval_bernstein(t, 1.0) == pytest.approx(-math.expm1(-1.0), rel=1e-15)

    def test_affine(self):
        t = BernsteinTriplet(2.0, 3.0, ())
        assert eval_bernstein(t, 4.0) == 14.0

    def test_bounded_saturation(self):
        t = BernsteinTriplet(0.5, 0.0, ((1.0, 0.5), (2.0, 0.25)))
        assert eval_bernstein(t, 1e9) == pytest.approx(0.5 + 0.75, rel=1e-12)

    def test_nondecreasing_and_concave_on_samples(self):
        t = BernsteinTriplet(0.25, 0.5, ((0.5, 1.0), (2.0, 0.75)))
        vals = [eval_bernstein(t, 0.1 * k) for k in range(200)]
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        assert all(d >= 0 for d in diffs)
        assert all(b <= a + 1e-12 for a, b in zip(diffs, diffs[1:]))

    def test_negative_lambda(self):
        from cmtk.errors import DomainError

        with pytest.raises(DomainError):
            eval_bernstein(BernsteinTriplet(0.0, 1.0, ()), -1.0)

    def test_handle_derivative_is_exact(self):
        t = BernsteinTriplet(0.0, 0.5, ((2.0, 1.5),))
        h = triplet_handle(t)
        for lam in (0.0, 0.3, 2.0):
            expected = 0.5 + 1.5 * 2.0 * math.exp(-2.0 * lam)
            assert h.derivative(lam) == pytest.approx(expected, rel=1e-15)


class TestExtract:
    def test_single_atom_model(self):
        phi = one_minus_exp_handle()
        t, rep = extract_triplet(phi, tol=1e-6)
        assert t.q == 0.0
        assert t.d <= 1e-6
        near = [w for x, w in t.levy if abs(x - 1.0) <= 0.02]
        assert sum(near) == pytest.approx(1.0, abs=2e-2)

    def test_affine(self):
        phi = make_handle(lambda lam: 2.0 + 3.0 * lam, "affine")
        t, rep = extract_triplet(phi)
        assert t.q == 2.0
        assert t.d == pytest.approx(3.0, abs=1e-6)
        assert t.total_levy_mass <= 1e-8

    def test_ratio_bf_roundtrip(self):
        phi = ratio_bf_handle()
        t, rep = extract_triplet(phi, tol=1e-6)
        assert t.q == 0.0
        assert t.d <= 1e-6
        for k in range(21):
            assert eval_bernstein(t, k) == pytest.approx(k / (1.0 + k), abs=1e-6)

    def test_rejects_non_ca(self):
        with pytest.raises(CertificationError):
            extract_triplet(square_handle())

    def test_roundtrip_ensemble(self):
        # sample -> extract -> evaluate on the integer lattice in [0, 20]:
        # q exact, d within 1e-3, sup error within 10x the fit residual
        rng = random.Random(20250811)
        for trial in range(50):
            truth = random_triplet(rng)
            phi = triplet_handle(truth)
            got, rep = extract_triplet(phi, tol=1e-4)
            assert got.q == eval_bernstein(truth, 0.0)
            assert abs(got.d - truth.d) <= 1e-3
            floor = 64 * 2.0**-52 * max(1.0, eval_bernstein(truth, 20.0))
            allowance = max(10.0 * rep.fit.residual, floor)
            for k in range(21):
                recon = eval_bernstein(got, k)
                assert abs(recon - eval_bernstein(truth, k)) <= allowance


class TestThetaMembership:
    def test_drift_annihilated(self):
        rep = check_bf_via_theta(linear_handle())
        assert rep.overall_pass
        for e in rep.entries:
            assert e.theta_at_zero == 0.0
            assert e.sup_estimate == 0.0

    def test_bounded_bf_passes(self):
        # theta_1 Phi for Phi = 1-e^-lam is (1-e^-1)(1-e^-lam): a bounded
        # Bernstein function null at zero, checked by direct algebra
        phi = one_minus_exp_handle()
        theta_direct = lambda lam: (1.0 - math.exp(-1.0)) * -math.expm1(-lam)
        from cmtk.funcops import apply_operator

        th = apply_operator(phi, "theta", 1.0)
        for lam in (0.0, 0.5, 2.0, 9.0):
            assert th(lam) == pytest.approx(theta_direct(lam), abs=1e-14)
        assert check_bf_via_theta(phi).overall_pass

    def test_ratio_and_sqrt_pass(self):
        assert check_bf_via_theta(ratio_bf_handle()).overall_pass
        assert check_bf_via_theta(sqrt_triplet_handle()).overall_pass

    def test_square_fails_at_depth_one(self):
        # theta_1 lam^2 = 1 + lam^2 - (lam+1)^2 = -2 lam: CA fails at n=1
        rep = check_bf_via_theta(square_handle(), cs=(1.0,))
        assert not rep.overall_pass
        entry = rep.entries[0]
        assert entry.certificate.failed
        assert entry.certificate.witness[0] == 1

    def test_theta_mass_identity(self):
        # total fitted mass of theta_c Phi equals Phi(c) - Phi(0) - d c
        truth = BernsteinTriplet(1.5, 0.75, ((0.5, 1.0), (2.0, 0.5)))
        phi = triplet_handle(truth)
        from cmtk.funcops import apply_operator

        for c in (0.5, 1.0):
            th = apply_operator(phi, "theta", c)
            t, rep = extract_triplet(th, tol=1e-5)
            expected = eval_bernstein(truth, c) - truth.q - truth.d * c
            fitted = t.total_levy_mass + rep.nonminimal_mass
            assert fitted == pytest.approx(expected, abs=1e-4)


class TestSelfDecomposable:
    def test_log1p_passes(self):
        rep = check_selfdecomposable(log1p_handle(), depth=30, tol=0.05)
        assert rep.sd_pass
        b = rep.derivative_test
        assert b.certificate.passed
        assert b.minimality.minimal
        # exact path: the derivative is rational at integers
        assert b.certificate.mode == "exact"
        assert b.minimality.atom.estimate == Fraction(1, 31)

    def test_one_minus_exp_fails_with_witness(self):
        rep = check_selfdecomposable(one_minus_exp_handle(), depth=30)
        assert rep.verdict == "fail"
        cert = rep.derivative_test.certificate
        assert cert.failed
        n, k, value = cert.witness
        assert (n, k) == (1, 1)
        # D[1][1] = -(b_2 - b_1) = e^-1 - 2 e^-2 ~ 0.0972
        assert value == pytest.approx(math.exp(-1) - 2 * math.exp(-2), rel=1e-12)

    def test_pure_drift_passes(self):
        rep = check_selfdecomposable(linear_handle(), depth=30)
        assert rep.sd_pass
        assert rep.derivative_test.certificate.mode == "exact"

    def test_consistency_b_implies_a(self):
        # anything passing the derivative test passes every probed scale test
        for h in (log1p_handle(), linear_handle()):
            rep = check_selfdecomposable(h, depth=30, tol=0.05)
            if rep.derivative_test.passed:
                assert all(e.passed for e in rep.scale_tests)

    def test_caveat_always_present(self):
        rep = check_selfdecomposable(linear_handle())
        assert any("holomorphic" in c for c in rep.caveats)

    def test_central_difference_fallback(self):
        phi = make_handle(lambda lam: math.log1p(lam), "log1p-noderiv")
        rep = check_selfdecomposable(phi, depth=12, tol=0.2)
        assert rep.derivative_test is not None
        assert rep.derivative_error is not None and rep.derivative_error < 1e-6
        assert rep.derivative_test.certificate.verdict in ("pass", "inconclusive")


class TestEGF:
    def test_pure_drift_identity(self):
        a = Sequence.from_values([Fraction(k) for k in range(21)])
        t, _ = invert_ca(a)
        assert egf_validate(a, t) <= 1e-12

    def test_geometric_identity(self):
        a = Sequence.from_values([1 - Fraction(1, 2**k) for k in range(21)])
        # default drift floor estimate 2^-20 biases the identity at ~1e-6
        t, _ = invert_ca(a, tol=1e-6)
        assert egf_validate(a, t) <= 2e-6
        # with the true drift the fitted measure is delta_{1/2} and the
        # identity closes to solver precision
        t0, _ = invert_ca(a, tol=1e-6, drift=0.0)
        assert egf_validate(a, t0) <= 1e-8

    def test_constant_identity(self):
        a = Sequence.from_values([Fraction(5, 4)] * 15)
        t, _ = invert_ca(a)
        assert egf_validate(a, t) <= 1e-12
