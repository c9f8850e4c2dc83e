#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <gtest/gtest.h>

#include "spectral/heat_trace.hpp"
#include "spectral/spectral_zeta.hpp"

using namespace spectral;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <class F>
Errc error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return Errc::InvariantViolation;
}

}  // namespace

TEST(ZetaValue, ThetaIsRiemannAtDoubleArgument) {
    for (double s : {1.0, 2.0, -0.75, 3.3, 0.2, -4.1}) {
        const auto v = zeta_value(catalog::theta(), s);
        EXPECT_LT(std::abs(v.value - boost::math::zeta(2.0 * s)), 1e-13 * std::max(1.0, std::abs(v.value))) << s;
    }
    EXPECT_EQ(zeta_value(catalog::theta(), 1.0).status, ValueStatus::ConvergentSum);
    EXPECT_EQ(zeta_value(catalog::theta(), -0.75).status, ValueStatus::Continuation);
    EXPECT_EQ(zeta_value(catalog::theta(), 0.5).status, ValueStatus::Pole);
}

TEST(ZetaValue, RiemannPole) {
    const auto v = zeta_value(catalog::riemann(), 1.0);
    EXPECT_EQ(v.status, ValueStatus::Pole);
    EXPECT_NEAR(v.residue, 1.0, 1e-15);
    EXPECT_NEAR(v.principal_part, std::numbers::egamma, 1e-13);
    // zeta(1 + e) - 1/e = gamma - gamma_1 e + O(e^2), gamma_1 = -0.0728158454836767
    const double e = 1e-4;
    const double s = 1.0 + e;
    EXPECT_NEAR(zeta_value(catalog::riemann(), s).value - 1.0 / (s - 1.0), v.principal_part + 0.0728158454836767 * (s - 1.0),
                1e-10);
}

TEST(ZetaValue, Hurwitz) {
    const auto v = zeta_value(catalog::hurwitz(0.5), 2.0);
    EXPECT_NEAR(v.value, kPi * kPi / 2.0, 1e-13);
    EXPECT_EQ(v.status, ValueStatus::ConvergentSum);
}

TEST(ZetaValue, GeneralPowerMatchesMpmath) {
    const auto spec = SpectrumSpec::power({2.0, 0.3, 1.5, 0.0, 1});
    EXPECT_LT(rel(zeta_value(spec, -2.2).value, -0.083100487391726712654), 1e-12);
    EXPECT_LT(rel(zeta_value(spec, 0.4).value, -1.7565056423230328156), 1e-12);
    EXPECT_LT(rel(zeta_value(spec, 1.9).value, 0.1727990380587406005), 1e-12);
}

TEST(ZetaValue, ConvergentStatusIffPastAbscissa) {
    for (const auto& spec : {catalog::theta(), catalog::epstein_hurwitz(), catalog::power_family(0.5), catalog::epstein_2d()}) {
        const double a = pole_structure(spec).abscissa;
        for (double ds : {-0.7, -0.3, 0.3, 1.1}) {
            const auto v = zeta_value(spec, a + ds);
            if (ds > 0) {
                EXPECT_EQ(v.status, ValueStatus::ConvergentSum);
            } else {
                EXPECT_NE(v.status, ValueStatus::ConvergentSum);
            }
        }
    }
}

// Bessel-expansion values of sum_{n>=1} (n^2 + 1)^-s (frozen from mpmath).
TEST(ZetaValue, EpsteinHurwitzContinuation) {
    const std::pair<double, double> ref[] = {
        {2.0, 0.30683697542290869392},   {1.5, 0.5124349215502030648},   {0.25, -1.6974632069434217643},
        {-0.25, 0.3737260947646587971},  {-1.3, 0.34903809808236679916}, {-2.7, -1.1560495264168786156},
    };
    for (auto [s, v] : ref) EXPECT_LT(rel(zeta_value(catalog::epstein_hurwitz(), s).value, v), 1e-11) << s;
}

TEST(ZetaValue, LargeShiftUsesPeeledLevels) {
    // q = 2.5 exceeds the lowest unshifted level
    const auto spec = catalog::epstein_hurwitz(1.0, 0.0, 2.5);
    EXPECT_LT(rel(zeta_value(spec, 0.3).value, -2.4511072727003308191), 1e-11);
    const auto g = SpectrumSpec::power({0.5, 0.25, 2.0, 0.7, 1});
    EXPECT_LT(rel(zeta_value(g, 1.3).value, 1.0894206536371382326), 1e-12);
    EXPECT_LT(rel(zeta_value(g, 3.0).value, 0.34364461659884154679), 1e-12);
}

TEST(ZetaValue, EpsteinHurwitzPoles) {
    for (double loc : {0.5, -0.5, -1.5}) {
        const auto v = zeta_value(catalog::epstein_hurwitz(), loc);
        EXPECT_EQ(v.status, ValueStatus::Pole) << loc;
        EXPECT_NEAR(v.residue, residue_at(catalog::epstein_hurwitz(), loc), 1e-14);
        EXPECT_NEAR(residue_numeric(catalog::epstein_hurwitz(), loc), v.residue, 1e-6);
    }
}

// zeta(s) beta(s) - zeta_R(2s), frozen from mpmath.
TEST(ZetaValue, TwoDimensionalEpstein) {
    const std::pair<double, double> ref[] = {
        {3, 0.14738534191651172033},     {2, 0.42437977621184683937},     {1.5, 1.056348517615643291},
        {0.75, -5.1317652183837765409},  {0.25, 0.9799322035146042505},   {-0.5, 0.026127255739028594996},
        {-1.5, -0.00098476292259683200345}, {-2.5, -0.000075379862930768811945}, {-0.3, 0.065297358829798821993},
        {-1.7, -0.00047304545522732109043},
    };
    for (auto [s, v] : ref) {
        const auto z = zeta_value(catalog::epstein_2d(), s);
        EXPECT_LE(std::abs(z.value - v), 1e-9 * std::max(1.0, std::abs(v))) << s;
    }
    const auto p1 = zeta_value(catalog::epstein_2d(), 1.0);
    EXPECT_EQ(p1.status, ValueStatus::Pole);
    EXPECT_NEAR(p1.residue, kPi / 4.0, 1e-12);
    EXPECT_NEAR(p1.principal_part, -0.99868863376135577994, 1e-8);
    const auto ph = zeta_value(catalog::epstein_2d(), 0.5);
    EXPECT_NEAR(ph.residue, -0.5, 1e-12);
    EXPECT_NEAR(ph.principal_part, -1.5522818949020218313, 1e-8);
    EXPECT_NEAR(zeta_value(catalog::epstein_2d(), 0.0).value, 0.25, 1e-12);
    EXPECT_NEAR(zeta_value(catalog::epstein_2d(), -1.0).value, 0.0, 1e-12);
}

TEST(ZetaValue, ExplicitLevels) {
    const auto spec = SpectrumSpec::explicit_levels({{1.0, 2.0, 4.0}, std::nullopt});
    EXPECT_NEAR(zeta_value(spec, 1.0).value, 1.75, 1e-15);
    EXPECT_NEAR(zeta_value(spec, -2.0).value, 21.0, 1e-13);
    const auto tailed = SpectrumSpec::explicit_levels({{0.5}, PowerSpec{1.0, 0.0, 2.0, 0.0, 1}});
    EXPECT_NEAR(zeta_value(tailed, 1.0).value, 2.0 + kPi * kPi / 6.0, 1e-13);
    const auto p = zeta_value(tailed, 0.5);
    EXPECT_EQ(p.status, ValueStatus::Pole);
    EXPECT_NEAR(p.principal_part, std::sqrt(2.0) + std::numbers::egamma, 1e-12);
}

TEST(ZetaValue, ContinuationRoutesAgree) {
    for (const auto& spec : {catalog::theta(), SpectrumSpec::power({1.7, 0.4, 1.5, 0.0, 1}), catalog::power_family(3.0),
                             catalog::hurwitz(0.5)}) {
        const double a = pole_structure(spec).abscissa;
        for (double s = -5.0 + 0.37; s < a; s += 0.61) {
            if (pole_structure(spec).find(s, 1e-6)) continue;
            SpectralValue m;
            try {
                m = zeta_mellin(spec, s);
            } catch (const Error& e) {
                ASSERT_EQ(e.code(), Errc::UnsupportedContinuation);
                continue;
            }
            const auto d = zeta_value(spec, s);
            EXPECT_LE(std::abs(m.value - d.value), 1e-8 * std::max(1.0, std::abs(d.value))) << s;
        }
    }
}

TEST(ZetaValue, MellinAgreesWithBinomialSeries) {
    const auto spec = catalog::epstein_hurwitz(1.0, 0.0, 0.6);
    for (double s : {-2.3, -0.7, 0.1, 0.8, 2.0}) {
        const auto m = zeta_mellin(spec, s);
        const auto d = zeta_value(spec, s);
        EXPECT_LE(std::abs(m.value - d.value), 1e-9 * std::max(1.0, std::abs(d.value))) << s;
    }
}

TEST(ZetaValue, MellinIdentityByQuadrature) {
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double s : {1.5, 2.0, 3.0}) {
        auto f = [&](double t) { return std::pow(t, s - 1.0) * heat_trace(catalog::theta(), t); };
        const double T = 60.0;
        const double body = ts.integrate(f, 0.0, T);
        const double tail = std::pow(T, s - 1.0) * heat_trace(catalog::theta(), T) * 2.0;
        const double m = body / boost::math::tgamma(s);
        EXPECT_NEAR(m, zeta_value(catalog::theta(), s).value, 1e-7 + tail) << s;
    }
}

TEST(ZetaValue, UncertifiableContinuationRaises) {
    // small-t series of sum exp(-t n^3) is only asymptotic; far-left values cannot be certified
    EXPECT_EQ(error_of([] { zeta_mellin(catalog::power_family(3.0), -4.7); }), Errc::UnsupportedContinuation);
}

TEST(Residue, ClosedFormAndNumeric) {
    EXPECT_NEAR(residue_at(catalog::theta(), 0.5), 0.5, 1e-15);
    EXPECT_NEAR(residue_numeric(catalog::theta(), 0.5), 0.5, 1e-8);
    EXPECT_NEAR(residue_at(catalog::riemann(), 1.0), 1.0, 1e-15);
    EXPECT_NEAR(residue_numeric(catalog::riemann(), 1.0), 1.0, 1e-8);
    EXPECT_NEAR(residue_numeric(catalog::epstein_2d(), 1.0), kPi / 4.0, 1e-6);
    EXPECT_EQ(error_of([] { residue_at(catalog::theta(), 2.0); }), Errc::NotAPole);
    EXPECT_EQ(error_of([] { residue_at(SpectrumSpec::explicit_levels({{1.0}, std::nullopt}), 1.0); }),
              Errc::UnsupportedSpec);
}

TEST(Moments, Theta) {
    const auto e0 = partition_moment(catalog::theta(), 0);
    EXPECT_NEAR(e0.value, kPi * kPi / 6.0, 1e-14);
    EXPECT_EQ(e0.status, MomentStatus::Convergent);
    EXPECT_NEAR(partition_moment(catalog::theta(), 1).value, std::pow(kPi, 4) / 90.0, 1e-14);
    EXPECT_EQ(error_of([] { partition_moment(catalog::riemann(), 0); }), Errc::MomentAtPole);
}

TEST(Moments, MatchQuadrature) {
    boost::math::quadrature::tanh_sinh<double> ts;
    for (int n = 0; n <= 6; ++n) {
        const double T = 80.0 + 10.0 * n;
        const double q = ts.integrate([&](double t) { return std::pow(t, n) * heat_trace(catalog::theta(), t); }, 0.0, T);
        const double e = partition_moment(catalog::theta(), n).value;
        EXPECT_NEAR(q, e, 1e-7 * std::max(1.0, e)) << n;
    }
}

TEST(Moments, RegularizedBelowPole) {
    // pole at s = 2: E_0 = zeta(1) is a continuation value, E_1 sits on the pole
    const auto spec = catalog::power_family(0.5);
    EXPECT_EQ(partition_moment(spec, 0).status, MomentStatus::Regularized);
    EXPECT_EQ(error_of([&] { partition_moment(spec, 1); }), Errc::MomentAtPole);
    EXPECT_EQ(partition_moment(spec, 2).status, MomentStatus::Convergent);
    const auto m = partition_moments(spec, 6);
    EXPECT_EQ(m.find(1), nullptr);
    ASSERT_NE(m.find(0), nullptr);
    EXPECT_EQ(m.find(0)->status, MomentStatus::Regularized);
}

TEST(Moments, GrowthEnvelopeTheta) {
    const auto m = partition_moments(catalog::theta(), 20);
    ASSERT_TRUE(m.growth_fit.has_value());
    EXPECT_NEAR(m.growth_fit->C, kPi * kPi / 6.0, 1e-10);
    EXPECT_NEAR(m.growth_fit->R, 1.0, 1e-6);
    double prev = 10.0;
    for (const auto& e : m.entries) {
        const double r = e.value / std::tgamma(e.n + 1.0);
        EXPECT_GT(r, 1.0);
        EXPECT_LE(r, kPi * kPi / 6.0 + 1e-15);
        EXPECT_LT(r, prev);
        prev = r;
    }
}

TEST(DensityMoments, Values) {
    EXPECT_NEAR(density_moment(catalog::theta(), 1).value, 0.0, 1e-15);
    EXPECT_NEAR(density_moment(catalog::theta(), 0).value, -0.5, 1e-15);
    EXPECT_NEAR(density_moment(catalog::riemann(), 1).value, -1.0 / 12.0, 1e-15);
    EXPECT_EQ(density_moment(catalog::theta(), 0).status, MomentStatus::Regularized);
    EXPECT_EQ(density_moment(SpectrumSpec::explicit_levels({{1.0, 2.0}, std::nullopt}), 2).status,
              MomentStatus::Convergent);
    EXPECT_NEAR(density_moment(SpectrumSpec::explicit_levels({{1.0, 2.0}, std::nullopt}), 2).value, 5.0, 1e-14);
}

TEST(DensityMoments, ThetaFromPositiveValuesByReflection) {
    for (int j = 0; j <= 8; ++j) {
        EXPECT_NEAR(density_moment(catalog::theta(), j).value, reflect_riemann(-2.0 * j), 1e-12) << j;
        EXPECT_NEAR(density_moment(catalog::riemann(), j).value, reflect_riemann(-double(j)),
                    1e-10 * std::max(1.0, std::abs(reflect_riemann(-double(j)))))
            << j;
    }
}

TEST(ZetaGrid, OrderAndValues) {
    const std::vector<double> ss{3.0, -1.0, 0.5, 2.0};
    const auto g = zeta_grid(catalog::theta(), ss);
    for (std::size_t i = 0; i < ss.size(); ++i) EXPECT_EQ(g[i].value, zeta_value(catalog::theta(), ss[i]).value);
}
