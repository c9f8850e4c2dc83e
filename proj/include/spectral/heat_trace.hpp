#pragma once

// K(t) = sum_n exp(-t e_n).
//
// Every family is evaluated in scaled form S(t) = K(t) exp(t e_min), so large
// t never underflows and log K(t) = -t e_min + log S(t) stays accurate.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "spectral/error.hpp"
#include "spectral/parallel.hpp"
#include "spectral/spectrum.hpp"

namespace spectral {

struct HeatOptions {
    double tol = 1e-12;
    /// Power spectra needing more direct terms switch to an Euler-Maclaurin tail.
    long direct_cap = 200000;
    /// a t below which the alpha = 2, c = 0 family uses the Jacobi dual.
    double jacobi_crossover = 0.2;
    bool allow_jacobi = true;
};

namespace detail {

struct Scaled {
    double value;  // S(t)
    double error;  // absolute, on S
};

inline constexpr int kEmDirectTerms = 32;

// sum_{n >= M} exp(-lambda (n + c)^alpha) with Euler-Maclaurin from x = M.
// The result is scaled by exp(lambda e0) where e0 = base^alpha.
inline Scaled power_em_tail(double lambda, double c, double alpha, long M, double log_scale, double tol) {
    const double y = static_cast<double>(M) + c;
    const double nu = 1.0 / alpha;
    const double z = lambda * std::pow(y, alpha);
    // integral_M^inf exp(-lambda (x+c)^alpha) dx = nu lambda^-nu Gamma(nu, z)
    const double integral =
        std::exp(log_scale + std::log(nu) - nu * std::log(lambda)) * boost::math::tgamma(nu, z);
    const double fM = std::exp(log_scale - z);
    // Derivatives of f = exp(g), g(x) = -lambda (x+c)^alpha, via
    // f^(n+1) = sum_k C(n,k) g^(k+1) f^(n-k).
    constexpr int kOrders = 24;
    double g[kOrders + 2];
    {
        double fall = 1.0;
        for (int k = 1; k <= kOrders + 1; ++k) {
            fall *= (alpha - (k - 1));
            g[k] = -lambda * fall * std::pow(y, alpha - k);
        }
    }
    double f[kOrders + 1];
    f[0] = fM;
    for (int n = 0; n < kOrders; ++n) {
        double sum = 0.0;
        double binom = 1.0;
        for (int k = 0; k <= n; ++k) {
            sum += binom * g[k + 1] * f[n - k];
            binom = binom * (n - k) / (k + 1);
        }
        f[n + 1] = sum;
    }
    double total = integral + 0.5 * fM;
    const auto& bf = bernoulli_over_factorial();
    double last = std::abs(fM);
    double err = std::numeric_limits<double>::infinity();
    for (int k = 1; 2 * k - 1 <= kOrders; ++k) {
        const double term = -bf[k] * f[2 * k - 1];
        if (std::abs(term) > last && k > 1) break;
        total += term;
        last = std::abs(term);
        if (2 * k + 1 <= kOrders) {
            err = std::abs(bf[k + 1] * f[2 * k + 1]);
        } else {
            err = last;
        }
        if (err <= tol) break;
    }
    return {total, err};
}

// Scaled trace of one Power term with q = 0:
//   S = sum_{n >= n0} exp(-t a ((n+c)^alpha - (n0+c)^alpha)).
inline Scaled power_term_scaled(double a, double c, double alpha, long n0, double t, double tol,
                                const HeatOptions& opt) {
    const double lambda = a * t;
    const double base = static_cast<double>(n0) + c;
    const double e0 = std::pow(base, alpha);
    if (alpha == 1.0) {
        return {-1.0 / std::expm1(-lambda), 4.0 * std::numeric_limits<double>::epsilon() / -std::expm1(-lambda)};
    }
    if (opt.allow_jacobi && alpha == 2.0 && c == 0.0 && lambda < opt.jacobi_crossover) {
        // sum_{n>=1} exp(-lambda n^2) = (sqrt(pi/lambda) - 1)/2 + sqrt(pi/lambda) sum_m exp(-pi^2 m^2 / lambda)
        const double r = std::sqrt(std::numbers::pi / lambda);
        double dual = 0.0;
        for (int m = 1; m < 50; ++m) {
            const double term = std::exp(-std::numbers::pi * std::numbers::pi * m * m / lambda);
            dual += term;
            if (term < 1e-300) break;
        }
        double full = 0.5 * (r - 1.0) + r * dual;
        for (long n = 1; n < n0; ++n) full -= std::exp(-lambda * static_cast<double>(n) * static_cast<double>(n));
        const double scale = std::exp(lambda * e0);
        return {full * scale, 8.0 * std::numeric_limits<double>::epsilon() * (r + 1.0) * scale};
    }
    // exp(-lambda x^alpha) reaches tol near x = reach; far past the cap, go straight to EM
    const double reach = std::pow(std::max(1.0, -std::log(0.5 * tol)) / lambda, 1.0 / alpha);
    if (reach - base < 4.0 * static_cast<double>(opt.direct_cap)) {
        const long N = power_truncation(a, c, alpha, n0, t, 0.5 * tol, true);
        if (N - n0 + 1 <= opt.direct_cap) {
            double s = 0.0;
            for (long n = N; n >= n0; --n) s += std::exp(-lambda * (std::pow(static_cast<double>(n) + c, alpha) - e0));
            return {s, 0.5 * tol + 4.0 * std::numeric_limits<double>::epsilon() * s};
        }
    }
    // Too many terms: sum the head directly and the rest by Euler-Maclaurin.
    long M = n0 + kEmDirectTerms;
    Scaled best{0.0, std::numeric_limits<double>::infinity()};
    while (true) {
        double head = 0.0;
        for (long n = M - 1; n >= n0; --n) head += std::exp(-lambda * (std::pow(static_cast<double>(n) + c, alpha) - e0));
        auto tail = power_em_tail(lambda, c, alpha, M, lambda * e0, tol);
        const double val = head + tail.value;
        const double err = tail.error + 8.0 * std::numeric_limits<double>::epsilon() * std::abs(val);
        if (err < best.error) best = {val, err};
        if (tail.error <= tol || M - n0 >= opt.direct_cap) break;
        M = n0 + 2 * (M - n0);
    }
    return best;
}

struct ScaledTrace {
    double e0;      // lowest level
    Scaled scaled;  // K = exp(-t e0) S
};

inline ScaledTrace scaled_trace(const SpectrumSpec& spec, double t, const HeatOptions& opt) {
    if (!(t > 0.0) || !std::isfinite(t)) raise(Errc::NonConvergent, "heat_trace: t must be > 0");
    const double e0 = spec.lowest_level();
    // Absolute tolerance on K translated to S, floored at a relative 1e-17.
    const double tol_s = std::max(opt.tol * std::exp(std::min(t * e0, 700.0)), 1e-17);
    switch (spec.family()) {
        case Family::Power: {
            const auto& p = spec.as_power();
            return {e0, power_term_scaled(p.a, p.c, p.alpha, p.n_start, t, tol_s, opt)};
        }
        case Family::MultiPower: {
            const auto& m = spec.as_multipower();
            double s = 1.0, rel = 0.0;
            for (const auto& term : m.terms) {
                auto f = power_term_scaled(term.a, term.c, term.alpha, term.n_start, t, 1e-17, opt);
                s *= f.value;
                rel += f.error / f.value;
            }
            return {e0, {s, rel * s}};
        }
        case Family::Explicit: {
            const auto& e = spec.as_explicit();
            double s = 0.0, err = 0.0;
            for (auto it = e.levels.rbegin(); it != e.levels.rend(); ++it) s += std::exp(-t * (*it - e0));
            err += 4.0 * std::numeric_limits<double>::epsilon() * s;
            if (e.tail) {
                const auto& p = *e.tail;
                const double te0 = p.level(p.n_start);
                const double w = std::exp(-t * (te0 - e0));
                auto f = power_term_scaled(p.a, p.c, p.alpha, p.n_start, t, tol_s / std::max(w, 1e-300), opt);
                s += w * f.value;
                err += w * f.error;
            }
            return {e0, {s, err}};
        }
    }
    return {e0, {0.0, 0.0}};
}

}  // namespace detail

struct HeatValue {
    double value;
    double abs_error;
};

inline HeatValue heat_trace_detailed(const SpectrumSpec& spec, double t, const HeatOptions& opt = {}) {
    const auto r = detail::scaled_trace(spec, t, opt);
    const double w = std::exp(-t * r.e0);
    return {w * r.scaled.value, w * r.scaled.error};
}

/// K(t) to absolute error <= tol.
inline double heat_trace(const SpectrumSpec& spec, double t, double tol = 1e-12) {
    HeatOptions opt;
    opt.tol = tol;
    return heat_trace_detailed(spec, t, opt).value;
}

/// log K(t); accurate where K(t) itself underflows.
inline double log_heat_trace(const SpectrumSpec& spec, double t, double tol = 1e-12) {
    HeatOptions opt;
    opt.tol = tol;
    const auto r = detail::scaled_trace(spec, t, opt);
    return -t * r.e0 + std::log(r.scaled.value);
}

/// K at each t, evaluated concurrently; results follow input order.
inline std::vector<HeatValue> heat_trace_grid(const SpectrumSpec& spec, const std::vector<double>& ts,
                                              double tol = 1e-12) {
    HeatOptions opt;
    opt.tol = tol;
    return detail::parallel_map(ts, [&](double t) { return heat_trace_detailed(spec, t, opt); });
}

}  // namespace spectral
