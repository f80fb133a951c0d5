import dataclasses
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as sstats

from pearson_triage.pearson import (
    LOG_FLOOR,
    FamilyType,
    Moments,
    PearsonError,
    PearsonType1Model,
    ShapeStats,
    central_moments,
    fit_type1,
    log_pdf,
    model_moments,
    normalization,
    ode_coefficients,
    pdf,
    select_type,
    shape_stats,
)

from conftest import beta_moments


def _rel(a, b):
    return abs(a - b) / abs(b)


def from_shape(sk, ku, mu1=0.0, mu2=1.0):
    return Moments(mu1, mu2, sk * mu2**1.5, ku * mu2**2, n=0)


class TestCentralMoments:
    def test_constant(self):
        m = central_moments([2.5, 2.5, 2.5])
        assert (m.mu1, m.mu2, m.mu3, m.mu4, m.n) == (2.5, 0.0, 0.0, 0.0, 3)

    def test_one_to_five(self):
        m = central_moments([1, 2, 3, 4, 5])
        assert m.mu1 == 3 and m.mu2 == 2 and m.mu3 == 0
        assert m.mu4 == pytest.approx(6.8, rel=1e-15)

    def test_zero_zero_one(self):
        m = central_moments([0, 0, 1])
        assert m.mu1 == pytest.approx(1 / 3, rel=1e-15)
        assert m.mu2 == pytest.approx(2 / 9, rel=1e-15)
        assert m.mu3 == pytest.approx(2 / 27, rel=1e-14)
        assert m.mu4 == pytest.approx(2 / 27, rel=1e-14)

    def test_empty(self):
        with pytest.raises(PearsonError, match="empty sample"):
            central_moments([])

    @pytest.mark.filterwarnings("ignore:Precision loss")
    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=50))
    def test_against_scipy(self, xs):
        m = central_moments(xs)
        for k, mine in ((2, m.mu2), (3, m.mu3), (4, m.mu4)):
            ref = sstats.moment(xs, moment=k)
            assert mine == pytest.approx(ref, rel=1e-7, abs=1e-6)
        assert m.mu2 >= 0 and m.mu4 >= 0
        assert m.mu4 >= m.mu2**2 * (1 - 1e-9) - 1e-9


class TestShapeStats:
    def test_symmetric(self):
        s = shape_stats(Moments(0, 2.0, 0.0, 9.0))
        assert s.skewness == 0 and s.kappa == 0

    def test_zero_zero_one(self):
        s = shape_stats(central_moments([0, 0, 1]))
        assert s.skewness == pytest.approx(1 / math.sqrt(2), rel=1e-12)
        assert s.kurtosis == pytest.approx(1.5, rel=1e-12)
        assert s.kappa == pytest.approx(-0.125, rel=1e-12)

    def test_beta23(self, beta23):
        s = shape_stats(beta23)
        assert s.skewness == pytest.approx(2 / 7, rel=1e-12)
        assert s.kurtosis == pytest.approx(33 / 14, rel=1e-12)
        assert s.kappa == pytest.approx(-1 / 24, rel=1e-12)

    def test_zero_variance(self):
        with pytest.raises(PearsonError, match="zero variance"):
            shape_stats(Moments(1.0, 0.0, 0.0, 0.0))

    def test_kappa_denominator_reported_distinctly(self):
        # normal-distribution ratios: 2*K - 3*S^2 - 6 = 0
        with pytest.raises(PearsonError) as info:
            shape_stats(from_shape(0.0, 3.0))
        assert info.value.reason == "kappa denominator zero"

    @given(st.lists(st.floats(-100, 100), min_size=2, max_size=40))
    def test_kurtosis_at_least_one(self, xs):
        m = central_moments(xs)
        if m.mu2 > 1e-6:
            try:
                s = shape_stats(m)
            except PearsonError:
                return
            assert s.kurtosis >= 1 - 1e-9


class TestSelectType:
    @pytest.mark.parametrize(
        "kappa, expected",
        [
            (-0.125, FamilyType.TYPE_I),
            (0.0, FamilyType.BOUNDARY),
            (0.5, FamilyType.TYPE_IV),
            (1.0, FamilyType.BOUNDARY),
            (2.5, FamilyType.TYPE_VI),
            (-1e-10, FamilyType.BOUNDARY),
        ],
    )
    def test_thresholds(self, kappa, expected):
        assert select_type(ShapeStats(0.1, 2.0, kappa)) is expected

    def test_from_data(self):
        assert select_type(shape_stats(central_moments([0, 0, 1]))) is FamilyType.TYPE_I
        assert select_type(shape_stats(from_shape(1.0, 6.0))) is FamilyType.TYPE_IV
        assert select_type(shape_stats(from_shape(2.0, 10.0))) is FamilyType.TYPE_VI


def beta_logpdf_derivative(a, b, x, h=1e-6):
    """Central difference of the closed-form Beta log density."""
    f = lambda t: (a - 1) * math.log(t) + (b - 1) * math.log(1 - t)
    return (f(x + h) - f(x - h)) / (2 * h)


class TestOdeCoefficients:
    def test_symmetric(self):
        c = ode_coefficients(beta_moments(3, 3))
        assert c.b == 0 and c.a1 == 0

    def test_beta23_against_closed_form(self, beta23):
        c = ode_coefficients(beta23)
        for x in np.linspace(0.01, 0.99, 100):
            expected = beta_logpdf_derivative(2, 3, x)
            assert c.log_derivative(x - beta23.mu1) == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_quadratic_roots_at_support(self, seed):
        rng = np.random.default_rng(seed)
        m = central_moments(rng.beta(2.5, 4.0, 20_000))
        model = fit_type1(m)
        c = ode_coefficients(m)
        roots = sorted(np.roots([c.a2, c.a1, c.a0]).real)
        lo, hi = model.support
        assert roots[0] == pytest.approx(lo - m.mu1, abs=1e-9)
        assert roots[1] == pytest.approx(hi - m.mu1, abs=1e-9)

    def test_zero_variance(self):
        with pytest.raises(PearsonError):
            ode_coefficients(Moments(0, 0, 0, 0))


class TestFitType1:
    def test_beta23_exact(self, beta23):
        m = fit_type1(beta23)
        for got, want in [
            (m.h, 5), (m.g1, 1), (m.g2, 2), (m.c1, 1 / 3), (m.c2, 2 / 3),
            (m.m0, 1 / 3), (m.A0, 16 / 9),
        ]:
            assert _rel(got, want) < 1e-9
        lo, hi = m.support
        assert abs(lo) < 1e-9 and abs(hi - 1) < 1e-9

    def test_mirror_is_left_skewed(self):
        m = fit_type1(beta_moments(3, 2))
        assert m.g1 == pytest.approx(2, rel=1e-9) and m.g2 == pytest.approx(1, rel=1e-9)
        assert m.m0 == pytest.approx(2 / 3, rel=1e-9)
        assert m.support == pytest.approx((0, 1), abs=1e-9)

    @pytest.mark.parametrize("ab", [(3, 3), (0.5, 0.5), (1.5, 1.5), (7, 7)])
    def test_symmetric(self, ab):
        mom = beta_moments(*ab)
        mom = dataclasses.replace(mom, mu3=0.0)
        m = fit_type1(mom)
        assert m.g1 == m.g2 and m.c1 == m.c2 and m.m0 == mom.mu1
        assert m.g1 == pytest.approx(ab[0] - 1, rel=1e-9)

    def test_monte_carlo(self):
        rng = np.random.default_rng(12345)
        m = fit_type1(central_moments(rng.beta(2, 3, 100_000)))
        assert m.stats.kappa < 0
        assert abs(m.g1 - 1) < 0.15 and abs(m.g2 - 2) < 0.3
        lo, hi = m.support
        assert abs(lo) < 0.05 and abs(hi - 1) < 0.05

    @pytest.mark.parametrize("a", [2, 3, 4, 5])
    @pytest.mark.parametrize("b", [2, 3, 4, 5])
    def test_type_soundness_samples(self, a, b):
        rng = np.random.default_rng(1000 * a + b)
        s = shape_stats(central_moments(rng.beta(a, b, 100_000)))
        assert select_type(s) is FamilyType.TYPE_I

    def test_rejects_type_iv_and_vi(self):
        for sk, ku in [(1.0, 6.0), (2.0, 10.0)]:
            with pytest.raises(PearsonError, match="not type I"):
                fit_type1(from_shape(sk, ku))

    def test_rejects_boundary_with_heavy_tails(self):
        # symmetric, kappa = 0, but kurtosis above 3 gives exponents below -1
        with pytest.raises(PearsonError) as info:
            fit_type1(from_shape(0.0, 4.0))
        assert info.value.reason == "invalid exponents"

    def test_rejects_opposite_sign_exponents(self):
        with pytest.raises(PearsonError) as info:
            fit_type1(beta_moments(Fraction(7, 10), 3))
        assert info.value.reason == "degenerate support"

    @settings(deadline=None, max_examples=40)
    @given(
        st.sampled_from([(2, 3), (3, 5), (4, 2), (1.5, 2.5), (0.6, 0.8)]),
        st.floats(0.01, 100),
        st.floats(-100, 100),
    )
    def test_scale_equivariance(self, ab, s, shift):
        base = fit_type1(beta_moments(*ab))
        scaled = fit_type1(beta_moments(*ab, scale=s, shift=shift))
        assert scaled.g1 == pytest.approx(base.g1, rel=1e-9, abs=1e-9)
        assert scaled.g2 == pytest.approx(base.g2, rel=1e-9, abs=1e-9)
        assert scaled.stats.kappa == pytest.approx(base.stats.kappa, rel=1e-9, abs=1e-12)
        assert scaled.c1 == pytest.approx(s * base.c1, rel=1e-9)
        assert scaled.c2 == pytest.approx(s * base.c2, rel=1e-9)
        assert scaled.m0 == pytest.approx(s * base.m0 + shift, rel=1e-9, abs=1e-9 * (1 + abs(shift)))


BETA_GRID = [(2, 3), (3, 2), (3, 3), (2, 5), (4, 1.5), (0.5, 0.5), (0.7, 0.9), (1, 1), (6, 9)]


class TestDensity:
    def test_beta23_values(self, beta23):
        m = fit_type1(beta23)
        assert pdf(m, 1 / 3) == pytest.approx(16 / 9, rel=1e-12)
        assert pdf(m, 0.5) == pytest.approx(1.5, rel=1e-9)
        assert pdf(m, m.m0 - m.c1 - 1) == 0.0
        assert pdf(m, m.m0 + m.c2 + 1) == 0.0

    def test_log_pdf(self, beta23):
        m = fit_type1(beta23)
        assert log_pdf(m, m.m0) == math.log(m.A0)
        assert log_pdf(m, -3.0) == LOG_FLOOR
        assert log_pdf(m, -3.0, floor=-10) == -10
        assert math.exp(log_pdf(m, 0.5)) == pytest.approx(pdf(m, 0.5), rel=1e-12)

    @pytest.mark.parametrize("ab", BETA_GRID)
    def test_against_scipy_beta(self, ab):
        m = fit_type1(beta_moments(*ab))
        lo, hi = m.support
        for x in np.linspace(lo, hi, 23)[1:-1]:
            ref = sstats.beta.pdf(x, m.g1 + 1, m.g2 + 1, loc=lo, scale=hi - lo)
            assert pdf(m, x) == pytest.approx(ref, rel=1e-9)

    @pytest.mark.parametrize("ab", BETA_GRID)
    def test_mode_identity(self, ab):
        m = fit_type1(beta_moments(*ab))
        assert _rel(pdf(m, m.m0), m.A0) < 1e-12

    @pytest.mark.parametrize("ab", BETA_GRID)
    def test_normalization_and_moment_recovery(self, ab):
        mom = beta_moments(*ab)
        m = fit_type1(mom)
        assert normalization(m) == pytest.approx(1.0, abs=1e-6)
        rec = model_moments(m)
        assert rec.mu1 == pytest.approx(mom.mu1, abs=1e-6)
        assert rec.mu2 == pytest.approx(mom.mu2, abs=1e-6)
        assert rec.mu3 == pytest.approx(mom.mu3, abs=1e-5)

    def test_normalization_linear_in_a0(self, beta23):
        m = fit_type1(beta23)
        doubled = dataclasses.replace(m, A0=2 * m.A0)
        assert normalization(doubled) == pytest.approx(2.0, abs=2e-6)

    @pytest.mark.parametrize("ab", [(2, 3), (3, 2), (2, 5), (6, 9), (4, 1.5)])
    def test_ode_consistency(self, ab):
        mom = beta_moments(*ab)
        m = fit_type1(mom)
        c = ode_coefficients(mom)
        lo, hi = m.support
        step = 1e-6 * (hi - lo)
        for x in np.linspace(lo, hi, 102)[1:-1]:
            fd = (log_pdf(m, x + step) - log_pdf(m, x - step)) / (2 * step)
            assert fd == pytest.approx(c.log_derivative(x - mom.mu1), abs=1e-5)


class TestSerialization:
    @pytest.mark.parametrize("ab", BETA_GRID)
    def test_json_roundtrip(self, ab):
        m = fit_type1(beta_moments(*ab))
        back = PearsonType1Model.from_json(m.to_json())
        for f in ("m0", "c1", "c2", "g1", "g2", "A0", "h"):
            a, b = getattr(m, f), getattr(back, f)
            assert a == b or _rel(b, a) <= 1e-15
        assert back.stats == m.stats and back.n == m.n

    def test_field_names(self, beta23):
        d = fit_type1(beta23).to_dict()
        assert set(d) == {"m0", "c1", "c2", "g1", "g2", "a0_norm", "skewness", "kurtosis", "kappa", "h", "n"}
