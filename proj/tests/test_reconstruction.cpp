#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "spectral/reconstruction.hpp"

using namespace spectral;

namespace {

constexpr double kPi = std::numbers::pi;

double theta_char(double beta) {
    const double r = std::sqrt(beta);
    return (kPi * r / std::tanh(kPi * r) - 1.0) / (2.0 * beta);
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

// sqrt(pi/t) sum_n exp(-pi^2 n^2 / t)
double dual_sum(double t) {
    double s = 0.0;
    for (int n = 1; n < 40; ++n) s += std::exp(-kPi * kPi * n * n / t);
    return std::sqrt(kPi / t) * s;
}

}  // namespace

TEST(CharSeries, ThetaClosedForm) {
    EXPECT_NEAR(char_series(catalog::theta(), 0.5, 60).value, theta_char(0.5), 1e-12);
    EXPECT_NEAR(char_series(catalog::theta(), 0.0, 1).value, kPi * kPi / 6.0, 1e-15);
    const auto slow = char_series(catalog::theta(), 0.9, 200);
    EXPECT_NEAR(slow.value, laplace_transform(catalog::theta(), 0.9).value, 1e-9);
    for (double b : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const auto a = char_series(catalog::theta(), b);
        EXPECT_TRUE(a.converged);
        EXPECT_FALSE(a.radius_exceeded);
        EXPECT_NEAR(a.value, theta_char(b), 1e-12) << b;
    }
}

TEST(CharSeries, RadiusFlag) {
    const auto r = char_series(catalog::theta(), 1.2, 300);
    EXPECT_TRUE(r.radius_exceeded);
    EXPECT_FALSE(r.converged);
    const auto a = char_series(catalog::theta(), 1.2);
    EXPECT_FALSE(a.converged);
    EXPECT_EQ(a.terms_used, kCharSeriesMaxTerms);
}

TEST(CharSeries, PoleTermRejected) {
    EXPECT_EQ(error_of([] { char_series(catalog::riemann(), 0.1, 5); }), Errc::MomentAtPole);
}

TEST(Commutation, ThetaValid) {
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(0.1 * i);
    const auto r = verify_commutation(catalog::theta(), grid);
    EXPECT_TRUE(r.commutation_valid);
    EXPECT_DOUBLE_EQ(r.radius, 1.0);
    for (const auto& p : r.eval_points) EXPECT_LE(p.abs_err, 1e-9) << p.x;
}

TEST(Commutation, TwoRouteEqualityOnDenseGrid) {
    for (double b = 0.05; b <= 0.95 + 1e-12; b += 0.05) {
        EXPECT_LE(std::abs(char_series(catalog::theta(), b).value - laplace_transform(catalog::theta(), b).value), 1e-9) << b;
    }
}

TEST(Commutation, RegularizedIndicesPastOne) {
    const auto r = verify_commutation(catalog::power_family(0.5), {0.1, 0.3});
    EXPECT_FALSE(r.commutation_valid);
    EXPECT_EQ(r.regularized_indices, (std::vector<long>{0}));
    EXPECT_EQ(r.pole_indices, (std::vector<long>{1}));
}

TEST(Commutation, SingleLevelGeometric) {
    const auto r = verify_commutation(SpectrumSpec::explicit_levels({{1.0}, std::nullopt}), {0.1, 0.5, 0.8});
    EXPECT_TRUE(r.commutation_valid);
    for (const auto& p : r.eval_points) {
        EXPECT_NEAR(p.direct, 1.0 / (1.0 + p.x), 1e-15);
        EXPECT_NEAR(p.reconstructed, 1.0 / (1.0 + p.x), 1e-12);
    }
}

TEST(Commutation, RiemannRejected) {
    EXPECT_EQ(error_of([] { verify_commutation(catalog::riemann(), {0.5}); }), Errc::DivergentAtS1);
}

TEST(Commutation, LaplaceSingularitiesAtSquares) {
    for (int n = 1; n <= 4; ++n) {
        const auto v = laplace_transform(catalog::theta(), -double(n * n));
        EXPECT_EQ(v.status, ValueStatus::Pole);
    }
    for (double b : {-0.5, -2.0, -7.5}) EXPECT_NE(laplace_transform(catalog::theta(), b).status, ValueStatus::Pole);
}

TEST(NegativeZeta, AlphaTwo) {
    const auto r = negative_zeta_reconstruction(2.0, 1.0);
    EXPECT_NEAR(r.value, 0.3863186, 1e-7);
    EXPECT_NEAR(r.value, heat_trace(catalog::theta(), 1.0, 1e-15), 1e-14);
    EXPECT_NEAR(-r.report.delta_correction, std::sqrt(kPi) * (std::exp(-kPi * kPi) + std::exp(-4.0 * kPi * kPi)), 1e-18);
    EXPECT_NEAR(-r.report.delta_correction, 9.168e-5, 1e-8);
    EXPECT_FALSE(r.report.commutation_valid);
}

TEST(NegativeZeta, AlphaOne) {
    const auto r = negative_zeta_reconstruction(1.0, 1.0, 40);
    EXPECT_NEAR(r.value, 1.0 / (std::numbers::e - 1.0), 1e-10);
    EXPECT_EQ(r.report.delta_correction, 0.0);
    EXPECT_TRUE(r.report.commutation_valid);
}

TEST(NegativeZeta, AlphaHalf) {
    const auto r = negative_zeta_reconstruction(0.5, 2.0, 60);
    EXPECT_NEAR(r.value, heat_trace(catalog::power_family(0.5), 2.0), 1e-8);
    EXPECT_NEAR(r.value, 0.28144620112511961807, 1e-10);
    EXPECT_NEAR(negative_zeta_reconstruction(0.5, 1.0).value, 1.6704068179663397212, 1e-10);
}

TEST(NegativeZeta, OutsideValiditySet) {
    for (double a : {3.0, 1.5, 4.0}) EXPECT_EQ(error_of([a] { negative_zeta_reconstruction(a, 1.0); }), Errc::UnsupportedAlpha);
    EXPECT_EQ(error_of([] { negative_zeta_reconstruction(1.0, 7.0); }), Errc::NonConvergent);
}

TEST(Gap, Values) {
    EXPECT_NEAR(naive_commutation_gap(2.0, 1.0), std::sqrt(kPi) * std::exp(-kPi * kPi), 1e-13);
    EXPECT_LE(naive_commutation_gap(1.0, 1.0), 1e-10);
    EXPECT_LE(naive_commutation_gap(0.5, 2.0), 1e-9);
    // value frozen from a 30-digit evaluation
    EXPECT_NEAR(naive_commutation_gap(2.0, 0.5), 6.70595252120745688e-09, 1e-17);
    for (double t : {0.5, 1.0, 2.0}) EXPECT_NEAR(naive_commutation_gap(2.0, t), dual_sum(t), 1e-10 * dual_sum(t)) << t;
    EXPECT_EQ(error_of([] { naive_commutation_gap(3.0, 1.0); }), Errc::UnsupportedAlpha);
    EXPECT_GT(naive_commutation_gap(4.0, 1.0), 1e-6);
}

TEST(Delta, Scaling) {
    for (double t : {0.5, 1.0, 2.0}) {
        const double scaled = -commutation_delta(2.0, t) * std::exp(kPi * kPi / t);
        EXPECT_NEAR(scaled / std::sqrt(kPi / t), 1.0, 2.0 * std::exp(-3.0 * kPi * kPi / t)) << t;
    }
    EXPECT_EQ(commutation_delta(0.7, 1.0), 0.0);
}

TEST(NegativeZeta, ConsumedValuesMatchReflection) {
    for (double alpha : {0.5, 1.0, 2.0})
        for (int a = 1; a <= 30; ++a) {
            const double s = -a * alpha;
            const double z = riemann_zeta(s);
            EXPECT_LE(std::abs(z - reflect_riemann(s)), 1e-10 * std::max(1.0, std::abs(z))) << s;
        }
}

TEST(NegativeZeta, ReportsAlternativeLeadingForm) {
    const auto r = negative_zeta_reconstruction(2.0, 1.0);
    ASSERT_FALSE(r.report.notes.empty());
    EXPECT_NE(r.report.notes.front().find("(1/alpha) Gamma(alpha)"), std::string::npos);
}
