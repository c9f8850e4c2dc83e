#pragma once

// Rebuilding K(t) and its Laplace transform from zeta values:
//   L(beta) = sum_k zeta(k+1) (-beta)^k         for |beta| < e_1
//   K(t)    = leading + zeta(0) + sum_a (-t)^a / a! zeta(-a alpha) - Delta(alpha, t)
// and the correction Delta picked up when the two sums are swapped.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "spectral/error.hpp"
#include "spectral/heat_kernel.hpp"
#include "spectral/heat_trace.hpp"
#include "spectral/parallel.hpp"
#include "spectral/special_functions.hpp"
#include "spectral/spectral_zeta.hpp"
#include "spectral/spectrum.hpp"

namespace spectral {

enum class ReconstructionMethod { CharSeries, NegativeZeta };

struct EvalPoint {
    double x;
    double reconstructed;
    double direct;
    double abs_err;
};

struct ReconstructionReport {
    ReconstructionMethod method = ReconstructionMethod::CharSeries;
    std::vector<EvalPoint> eval_points;
    double radius = std::numeric_limits<double>::infinity();
    bool commutation_valid = false;
    double delta_correction = 0.0;
    std::vector<long> regularized_indices;  // k with zeta(k+1) a continuation value
    std::vector<long> pole_indices;         // k with zeta(k+1) at a pole
    std::vector<std::string> notes;
};

struct CharSeriesResult {
    double value = 0.0;
    long terms_used = 0;
    bool radius_exceeded = false;
    bool converged = false;
};

inline constexpr long kCharSeriesMaxTerms = 10000;

/// sum_{k < terms} zeta(k+1) (-beta)^k. With terms <= 0 the sum stops once a
/// term falls below 1e-15 of the partial sum, or after 10^4 terms.
inline CharSeriesResult char_series(const SpectrumSpec& spec, double beta, long terms = 0) {
    CharSeriesResult out;
    out.radius_exceeded = std::abs(beta) >= spec.lowest_level();
    const bool adaptive = terms <= 0;
    const long n = adaptive ? kCharSeriesMaxTerms : terms;
    double w = 1.0;
    for (long k = 0; k < n; ++k) {
        const auto z = zeta_value(spec, static_cast<double>(k) + 1.0);
        if (z.status == ValueStatus::Pole)
            raise(Errc::MomentAtPole, "char_series: zeta(" + std::to_string(k + 1) + ") is a pole");
        const double term = z.value * w;
        out.value += term;
        out.terms_used = k + 1;
        if (adaptive && std::abs(term) < 1e-15 * std::abs(out.value)) {
            out.converged = true;
            break;
        }
        w *= -beta;
        if (w == 0.0 && k > 0) {
            out.converged = true;
            break;
        }
    }
    if (!adaptive) out.converged = !out.radius_exceeded;
    if (beta == 0.0) out.converged = true;
    return out;
}

/// Compares char_series with laplace_transform over a grid of beta.
inline ReconstructionReport verify_commutation(const SpectrumSpec& spec, const std::vector<double>& beta_grid) {
    const auto ps = pole_structure(spec);
    if (std::abs(ps.rightmost - 1.0) < kPoleTolerance)
        raise(Errc::DivergentAtS1, "verify_commutation: rightmost pole at s = 1");
    ReconstructionReport rep;
    rep.method = ReconstructionMethod::CharSeries;
    rep.radius = spec.lowest_level();
    for (long k = 0; static_cast<double>(k) + 1.0 <= ps.rightmost + kPoleTolerance; ++k) {
        if (ps.find(static_cast<double>(k) + 1.0, kPoleTolerance)) {
            rep.pole_indices.push_back(k);
        } else {
            rep.regularized_indices.push_back(k);
        }
    }
    bool agree = true;
    const bool has_pole_terms = !rep.pole_indices.empty();
    const auto rows = detail::parallel_map(beta_grid, [&](double beta) {
        EvalPoint p{beta, std::numeric_limits<double>::quiet_NaN(), 0.0, std::numeric_limits<double>::quiet_NaN()};
        p.direct = laplace_transform(spec, beta).value;
        if (!has_pole_terms) {
            p.reconstructed = char_series(spec, beta).value;
            p.abs_err = std::abs(p.reconstructed - p.direct);
        }
        return p;
    });
    for (const auto& p : rows) {
        rep.eval_points.push_back(p);
        if (std::abs(p.x) < rep.radius && !(p.abs_err <= 1e-8)) agree = false;
    }
    rep.commutation_valid = ps.rightmost < 1.0 && agree;
    if (has_pole_terms) rep.notes.push_back("some zeta(k+1) sit on poles; the moment series cannot be formed");
    if (!rep.regularized_indices.empty())
        rep.notes.push_back("zeta(k+1) for the listed regularized indices is a continuation value, not a convergent sum");
    return rep;
}

namespace detail {

inline bool negzeta_alpha_ok(double alpha) {
    return (alpha > 0.0 && alpha <= 1.0) || std::abs(alpha - 2.0) < 1e-12;
}

inline bool gap_alpha_ok(double alpha) {
    return (alpha > 0.0 && alpha <= 1.0) ||
           (alpha >= 2.0 && near_integer(alpha / 2.0));
}

// sum_{a=1}^{terms or convergence} (-t)^a / a! zeta_R(-a alpha)
inline double negative_zeta_sum(double alpha, double t, long terms) {
    if (alpha > 1.0 && near_integer(alpha / 2.0)) return 0.0;  // trivial zeros
    if (alpha == 1.0 && t >= 2.0 * std::numbers::pi)
        raise(Errc::NonConvergent, "negative-zeta series diverges for alpha = 1, t >= 2 pi");
    const bool adaptive = terms <= 0;
    const long n = adaptive ? 400 : terms;
    double sum = 0.0, w = 1.0;
    int small = 0;
    for (long a = 1; a <= n; ++a) {
        w *= -t / static_cast<double>(a);
        const double term = w * riemann_zeta(-static_cast<double>(a) * alpha);
        sum += term;
        if (adaptive) {
            if (std::abs(term) < 1e-17 * std::abs(sum)) {
                if (++small >= 3) break;
            } else {
                small = 0;
            }
        }
    }
    return sum;
}

inline double leading_term(double alpha, double t) { return std::tgamma(1.0 + 1.0 / alpha) * std::pow(t, -1.0 / alpha); }

// K(t) - leading - zeta(0) for e_n = n^alpha in extended precision: at small
// t this is a tiny difference of O(t^(-1/alpha)) numbers.
inline long double heat_minus_leading_extended(double alpha, double t) {
    const long N = power_truncation(1.0, 0.0, alpha, 1, t, 1e-22);
    const long double lt = t, la = alpha;
    const long double lead = std::tgamma(1.0L + 1.0L / la) * std::pow(lt, -1.0L / la) - 0.5L;
    if (N > 20000000L) return static_cast<long double>(heat_trace(catalog::power_family(alpha), t, 1e-15)) - lead;
    long double k = 0.0L;
    for (long n = N; n >= 1; --n) k += std::exp(-lt * std::pow(static_cast<long double>(n), la));
    return k - lead;
}

}  // namespace detail

/// Delta(alpha, t): 0 for alpha in (0, 1]; -sqrt(pi/t) sum_n exp(-pi^2 n^2 / t) at alpha = 2.
inline double commutation_delta(double alpha, double t) {
    if (!(t > 0.0)) raise(Errc::DomainError, "commutation_delta: t must be > 0");
    if (!detail::negzeta_alpha_ok(alpha)) raise(Errc::UnsupportedAlpha, "no correction formula for this alpha");
    if (alpha <= 1.0) return 0.0;
    double dual = 0.0;
    for (int n = 1; n < 100; ++n) {
        const double term = std::exp(-std::numbers::pi * std::numbers::pi * n * n / t);
        dual += term;
        if (term < 1e-300 || term < 1e-18 * dual) break;
    }
    return -std::sqrt(std::numbers::pi / t) * dual;
}

struct NegativeZetaResult {
    double value;
    ReconstructionReport report;
};

/// K(t) for e_n = n^alpha from negative zeta values plus the correction.
inline NegativeZetaResult negative_zeta_reconstruction(double alpha, double t, long terms = 0) {
    if (!detail::negzeta_alpha_ok(alpha))
        raise(Errc::UnsupportedAlpha, "negative-zeta reconstruction needs alpha in (0, 1] or alpha = 2");
    if (!(t > 0.0)) raise(Errc::DomainError, "negative_zeta_reconstruction: t must be > 0");
    const double delta = commutation_delta(alpha, t);
    const double body = detail::leading_term(alpha, t) + riemann_zeta(0.0) + detail::negative_zeta_sum(alpha, t, terms);
    const double value = body - delta;
    const double direct = heat_trace(catalog::power_family(alpha), t, 1e-15);
    NegativeZetaResult out{value, {}};
    auto& rep = out.report;
    rep.method = ReconstructionMethod::NegativeZeta;
    rep.eval_points.push_back({t, value, direct, std::abs(value - direct)});
    rep.delta_correction = delta;
    rep.commutation_valid = delta == 0.0;
    rep.radius = alpha == 1.0 ? 2.0 * std::numbers::pi : std::numeric_limits<double>::infinity();
    rep.notes.push_back("leading term Gamma(1+1/alpha) t^(-1/alpha) with zeta(0) as the a = 0 term; "
                        "alternative t-independent form (1/alpha) Gamma(alpha) = " +
                        std::to_string(std::tgamma(alpha) / alpha));
    return out;
}

/// |K(t) - (leading + zeta(0) + sum_a (-t)^a / a! zeta(-a alpha))| for e_n = n^alpha:
/// the size of the commutation correction. alpha in (0, 1] or an even integer.
inline double naive_commutation_gap(double alpha, double t) {
    if (!detail::gap_alpha_ok(alpha)) raise(Errc::UnsupportedAlpha, "alpha outside (0, 1] and the even integers");
    if (!(t > 0.0)) raise(Errc::DomainError, "naive_commutation_gap: t must be > 0");
    const long double rest = detail::heat_minus_leading_extended(alpha, t);
    return static_cast<double>(std::abs(rest - static_cast<long double>(detail::negative_zeta_sum(alpha, t, 0))));
}

}  // namespace spectral
