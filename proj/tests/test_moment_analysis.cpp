#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "spectral/heat_trace.hpp"
#include "spectral/moment_analysis.hpp"

using namespace spectral;

namespace {

constexpr double kPi = std::numbers::pi;

MomentSequence factorials(long n_max) {
    std::vector<double> logs;
    for (long n = 0; n <= n_max; ++n) logs.push_back(std::lgamma(n + 1.0));
    return MomentSequence::from_logs(logs);
}

// sqrt(pi) exp((n+1)^2 / 4): the log-normal moments
MomentSequence lognormal(long n_max) {
    std::vector<double> logs;
    for (long n = 0; n <= n_max; ++n) logs.push_back(0.5 * std::log(kPi) + (n + 1.0) * (n + 1.0) / 4.0);
    return MomentSequence::from_logs(logs);
}

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

TEST(GrowthBound, ThetaMoments) {
    const auto g = growth_bound_check(partition_moments(catalog::theta(), 20), MomentMode::Hamburger);
    EXPECT_TRUE(g.passed);
    EXPECT_NEAR(g.C, kPi * kPi / 6.0, 1e-10);
    EXPECT_NEAR(g.R, 1.0, 1e-6);
}

TEST(GrowthBound, Factorials) {
    const auto g = growth_bound_check(factorials(20), MomentMode::Hamburger);
    EXPECT_TRUE(g.passed);
    EXPECT_NEAR(g.C, 1.0, 1e-12);
    EXPECT_NEAR(g.R, 1.0, 1e-12);
}

TEST(GrowthBound, LogNormalFails) {
    EXPECT_FALSE(growth_bound_check(lognormal(20), MomentMode::Hamburger).passed);
    EXPECT_FALSE(growth_bound_check(lognormal(20), MomentMode::Stieltjes).passed);
}

TEST(GrowthBound, StieltjesModeUsesDoubleFactorialScale) {
    std::vector<double> logs;
    for (long n = 0; n <= 20; ++n) logs.push_back(std::lgamma(2.0 * n + 1.0) + n * std::log(3.0));
    const auto g = growth_bound_check(MomentSequence::from_logs(logs), MomentMode::Stieltjes);
    EXPECT_TRUE(g.passed);
    EXPECT_NEAR(g.R, 3.0, 1e-9);
    EXPECT_FALSE(growth_bound_check(MomentSequence::from_logs(logs), MomentMode::Hamburger).passed);
}

TEST(GrowthBound, InsufficientData) {
    EXPECT_EQ(error_of([] { growth_bound_check(factorials(3), MomentMode::Hamburger); }), Errc::InsufficientData);
}

TEST(Carleman, ThetaHamburger) {
    const auto m = partition_moments(catalog::theta(), 100);
    const auto c = carleman_check(m, MomentMode::Hamburger, 50);
    EXPECT_TRUE(c.diverges);
    EXPECT_NEAR(c.c, std::numbers::e / 2.0, 0.1 * std::numbers::e / 2.0);
    // the partial sum itself, term by term
    double s = 0.0;
    for (long n = 1; n <= 50; ++n) s += std::exp(-m.find(2 * n)->log_abs / (2.0 * n));
    EXPECT_NEAR(c.partial_sum, s, 1e-12 * s);
}

TEST(Carleman, UnitMoments) {
    const auto m = MomentSequence::from_values(std::vector<double>(201, 1.0));
    const auto c = carleman_check(m, MomentMode::Hamburger, 100);
    EXPECT_DOUBLE_EQ(c.partial_sum, 100.0);
    EXPECT_TRUE(c.diverges);
}

TEST(Carleman, LogNormalConverges) {
    const auto c = carleman_check(lognormal(60), MomentMode::Stieltjes, 50);
    EXPECT_FALSE(c.diverges);
    const auto sums = carleman_partial_sums(lognormal(200), MomentMode::Stieltjes, {50, 100, 200});
    // terms fall like exp(-n/8): the block from 100 to 200 is about 8 exp(-12.5)
    EXPECT_LT(sums[2] - sums[1], 1e-4);
    EXPECT_LT(sums[2] - sums[1], 0.01 * (sums[1] - sums[0]));
}

TEST(Carleman, MissingEntries) {
    EXPECT_EQ(error_of([] { carleman_check(factorials(20), MomentMode::Hamburger, 50); }), Errc::InsufficientData);
    EXPECT_EQ(error_of([] { carleman_check(factorials(20), MomentMode::Hamburger, 4); }), Errc::InsufficientData);
}

TEST(Carleman, CoherentWithGrowthBound) {
    for (const auto& spec : {catalog::theta(), catalog::epstein_hurwitz(), catalog::power_family(3.0)}) {
        const auto m = partition_moments(spec, 128);
        MomentSequence head;
        for (const auto& e : m.entries)
            if (e.n <= 20) head.entries.push_back(e);
        if (growth_bound_check(head, MomentMode::Hamburger).passed) {
            EXPECT_TRUE(carleman_check(m, MomentMode::Hamburger, 64).diverges);
            EXPECT_TRUE(carleman_check(m, MomentMode::Stieltjes, 64).diverges);
        }
    }
}

// Moments of exp(-|x|^alpha): just past factorial growth for alpha < 1.
TEST(Carleman, NearOptimalityProbe) {
    for (double alpha : {0.5, 0.8}) {
        const auto m = stretched_exponential_moments(alpha, 128);
        EXPECT_FALSE(growth_bound_check(m, MomentMode::Hamburger).passed) << alpha;
        EXPECT_FALSE(carleman_check(m, MomentMode::Hamburger, 64).diverges) << alpha;
    }
    for (double alpha : {1.5, 2.0}) {
        const auto m = stretched_exponential_moments(alpha, 128);
        EXPECT_TRUE(growth_bound_check(m, MomentMode::Hamburger).passed) << alpha;
        EXPECT_TRUE(carleman_check(m, MomentMode::Hamburger, 64).diverges) << alpha;
    }
    // E_2 of exp(-x^2) on the line is sqrt(pi)/2
    EXPECT_NEAR(stretched_exponential_moments(2.0, 2).find(2)->value, std::sqrt(kPi) / 2.0, 1e-14);
}

TEST(Krein, ThetaDiverges) {
    const auto r = krein_check(catalog::theta(), KreinSupport::HalfLine, {1e2, 1e3, 1e4});
    EXPECT_TRUE(r.diverges);
    EXPECT_NEAR(r.slope, -2.0, 0.1);
    EXPECT_NEAR(r.e1_estimate, 1.0, 0.05);
    EXPECT_LT(r.relative_residual, 0.05);
    EXPECT_TRUE(r.quadrature_ok);
    for (std::size_t i = 1; i < r.partial_values.size(); ++i)
        EXPECT_LT(r.partial_values[i].second, r.partial_values[i - 1].second);
}

TEST(Krein, SingleLevelClosedForm) {
    // log K = -2t: I(T) = -2 int_0^T sqrt(t)/(1+t) dt = -4 (sqrt T - arctan sqrt T)
    const auto spec = SpectrumSpec::explicit_levels({{2.0}, PowerSpec{1.0, 0.0, 2.0, 0.0, 2}});
    const auto single = [](double t) { return -2.0 * t; };
    const auto r = krein_check(single, KreinSupport::HalfLine, {1e2, 1e3, 1e4});
    for (const auto& [T, I] : r.partial_values) {
        const double exact = -4.0 * (std::sqrt(T) - std::atan(std::sqrt(T)));
        EXPECT_NEAR(I, exact, 1e-8 * std::abs(exact)) << T;
    }
    EXPECT_TRUE(r.diverges);
    EXPECT_NEAR(r.e1_estimate, 2.0, 0.05);
    EXPECT_TRUE(krein_check(spec, KreinSupport::HalfLine, {1e2, 1e3, 1e4}).diverges);
}

TEST(Krein, SubcriticalDensityConverges) {
    const auto r = krein_check([](double t) { return -std::pow(t, 0.25); }, KreinSupport::HalfLine, {1e2, 1e3, 1e4});
    EXPECT_FALSE(r.diverges);
}

TEST(Krein, FullLine) {
    EXPECT_TRUE(krein_check([](double t) { return -std::abs(t); }, KreinSupport::FullLine, {1e2, 1e3, 1e4}).diverges);
    EXPECT_FALSE(
        krein_check([](double t) { return -std::sqrt(std::abs(t)); }, KreinSupport::FullLine, {1e2, 1e3, 1e4}).diverges);
    EXPECT_EQ(error_of([] { krein_check(catalog::theta(), KreinSupport::FullLine, {1e2, 1e3, 1e4}); }),
              Errc::UnsupportedSpec);
}

TEST(Krein, NeedsThreeCutoffs) {
    EXPECT_EQ(error_of([] { krein_check(catalog::theta(), KreinSupport::HalfLine, {1e2, 1e3}); }), Errc::InsufficientData);
}

TEST(Shift, Identity) {
    const auto m = partition_moments(catalog::theta(), 8);
    const auto s = shift_moments(m, 0.0);
    for (const auto& e : m.entries) EXPECT_EQ(s.find(e.n)->value, e.value);
}

TEST(Shift, KnownEntries) {
    const auto s = shift_moments(partition_moments(catalog::theta(), 3), 1.0);
    EXPECT_NEAR(s.find(1)->value, std::pow(kPi, 4) / 90.0 + kPi * kPi / 6.0, 1e-13);
    for (double c : {0.5, 2.0, -1.0}) {
        const auto f = shift_moments(factorials(4), c);
        EXPECT_NEAR(f.find(2)->value, 2.0 + 2.0 * c + c * c, 1e-13);
    }
}

TEST(Shift, MatchesShiftedQuadrature) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const auto m = partition_moments(catalog::theta(), 6);
    for (double c : {0.5, 1.0}) {
        const auto s = shift_moments(m, c);
        for (int n = 0; n <= 6; ++n) {
            const double q = ts.integrate(
                [&](double t) { return std::pow(t + c, n) * heat_trace(catalog::theta(), t); }, 0.0, 120.0);
            EXPECT_NEAR(s.find(n)->value, q, 1e-7 * std::max(1.0, q)) << c << " " << n;
        }
    }
}

TEST(Stieltjes, Examples) {
    EXPECT_NEAR(stieltjes_demo(0, 0.0), std::sqrt(kPi) * std::exp(0.25), 1e-12);
    EXPECT_NEAR(stieltjes_demo(0, 0.0), 2.2758757944687472355, 1e-12);
    EXPECT_NEAR(stieltjes_demo(0, 1.0) - stieltjes_demo(0, -1.0), 0.0, 1e-8);
    EXPECT_NEAR(stieltjes_demo(2, 0.5), 16.816573919527935756, 1e-11);
}

TEST(Stieltjes, ThetaIndependence) {
    for (int k = 0; k <= 4; ++k) {
        const double base = stieltjes_demo(k, 0.0);
        for (double th = -1.0; th <= 1.0; th += 0.125) EXPECT_LE(std::abs(stieltjes_demo(k, th) - base), 1e-8 * std::max(1.0, base));
    }
    EXPECT_EQ(error_of([] { stieltjes_demo(0, 1.5); }), Errc::DomainError);
}

TEST(Classify, Catalog) {
    for (const auto& spec : {catalog::riemann(), catalog::hurwitz(0.5), catalog::power_family(1.0)}) {
        const auto v = classify(spec);
        EXPECT_EQ(v.verdict, Verdict::Indeterminate);
        EXPECT_EQ(v.find(Criterion::Normalization)->outcome, Outcome::Failed);
    }
    for (const auto& spec : {catalog::theta(), catalog::epstein_hurwitz(), catalog::power_family(3.0)}) {
        const auto v = classify(spec);
        EXPECT_EQ(v.verdict, Verdict::Determinate);
        EXPECT_EQ(v.find(Criterion::PoleTheorem)->outcome, Outcome::Passed);
        EXPECT_EQ(v.find(Criterion::GrowthBound)->outcome, Outcome::Passed);
        EXPECT_EQ(v.find(Criterion::Carleman)->outcome, Outcome::Passed);
        EXPECT_EQ(v.find(Criterion::Krein)->outcome, Outcome::Failed);
    }
    EXPECT_EQ(classify(catalog::epstein_2d()).verdict, Verdict::Indeterminate);
}

TEST(Classify, PowerSpecsPastOneAreDeterminate) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ua(0.3, 4.0), uc(0.0, 2.0), ual(1.05, 4.0);
    for (int i = 0; i < 8; ++i) {
        const auto spec = SpectrumSpec::power({ua(rng), uc(rng), ual(rng), 0.0, 1});
        const auto v = classify(spec);
        EXPECT_EQ(v.verdict, Verdict::Determinate) << spec.as_power().alpha;
        EXPECT_EQ(v.find(Criterion::PoleTheorem)->outcome, Outcome::Passed);
    }
}

TEST(Classify, IntegerPolesNeverDeterminateByPoleTheorem) {
    for (double alpha : {1.0, 0.5, 1.0 / 3.0}) {
        const auto v = classify(SpectrumSpec::power({1.3, 0.2, alpha, 0.0, 1}));
        EXPECT_NE(v.verdict, Verdict::Determinate) << alpha;
        EXPECT_EQ(v.find(Criterion::PoleTheorem)->outcome, Outcome::Failed);
    }
    EXPECT_EQ(classify(catalog::power_family(0.5)).verdict, Verdict::Inconclusive);
}

TEST(Classify, FiniteSpectrum) {
    const auto v = classify(SpectrumSpec::explicit_levels({{1.0, 2.0, 3.0}, std::nullopt}));
    EXPECT_EQ(v.verdict, Verdict::Determinate);
    EXPECT_EQ(v.find(Criterion::Krein)->outcome, Outcome::Inapplicable);
}
