#pragma once

// Laplace transform of K(t) (the shifted zeta at s = 1) and the small-t
// asymptotic expansion of K(t) generated from zeta pole data.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "spectral/error.hpp"
#include "spectral/heat_trace.hpp"
#include "spectral/spectral_zeta.hpp"
#include "spectral/spectrum.hpp"

namespace spectral {

namespace detail {

struct LevelPoles {
    int count = 0;       // levels with e_n + beta == 0
    double rest = 0.0;   // sum over the remaining head levels
};

// Head sum of 1 / (e + beta), setting aside levels sitting on -beta.
template <class Levels>
LevelPoles head_sum(const Levels& levels, double beta) {
    LevelPoles out;
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        const double d = *it + beta;
        if (std::abs(d) <= kPoleTolerance * std::max(1.0, std::abs(beta))) {
            ++out.count;
            continue;
        }
        out.rest += 1.0 / d;
    }
    return out;
}

// sum_{n >= n_start} 1 / (a (n+c)^alpha + q') with alpha > 1 and any real q'
// keeping the levels off zero:
//   head up to n1, then sum_k (-q')^k a^(-1-k) zeta_H(alpha (k+1), n1 + c).
inline SpectralValue laplace_power_convergent(const PowerSpec& p, double qprime) {
    long n1 = p.n_start;
    while (std::abs(qprime) > 0.25 * p.a * std::pow(static_cast<double>(n1) + p.c, p.alpha)) ++n1;
    std::vector<double> head;
    for (long n = p.n_start; n < n1; ++n) head.push_back(p.a * std::pow(static_cast<double>(n) + p.c, p.alpha));
    const auto h = head_sum(head, qprime);
    const double b = static_cast<double>(n1) + p.c;
    double tail = 0.0, scale = std::abs(h.rest);
    double w = 1.0 / p.a;
    for (int k = 0; k < 400; ++k) {
        const double term = w * hurwitz_zeta(p.alpha * (k + 1), b);
        tail += term;
        scale = std::max(scale, std::abs(term));
        if (std::abs(term) <= 1e-17 * std::abs(tail)) break;
        w *= -qprime / p.a;
    }
    SpectralValue v;
    v.value = h.rest + tail;
    v.abs_error = 1e-14 * std::max(scale, std::abs(v.value));
    if (h.count > 0) {
        v.status = ValueStatus::Pole;
        v.residue = h.count;
        v.principal_part = v.value;
    }
    return v;
}

}  // namespace detail

/// L(beta) = integral_0^inf exp(-beta t) K(t) dt = sum_n 1 / (e_n + beta).
/// A convergent sum when the rightmost pole lies below 1; otherwise the
/// regularized value of the shifted zeta at s = 1. Negative beta is accepted
/// in the convergent case; at beta = -e_n the result has Pole status with the
/// level multiplicity as residue.
inline SpectralValue laplace_transform(const SpectrumSpec& spec, double beta) {
    if (!std::isfinite(beta)) raise(Errc::DomainError, "laplace_transform: beta must be finite");
    const auto ps = pole_structure(spec);
    if (std::abs(ps.rightmost - 1.0) < kPoleTolerance)
        raise(Errc::DivergentAtS1, "laplace_transform: rightmost pole at s = 1, the series diverges");
    const bool convergent = ps.rightmost < 1.0;
    if (beta < 0.0 && !convergent)
        raise(Errc::DomainError, "laplace_transform: negative beta needs a convergent spectrum");

    auto regularized = [&](SpectralValue v) {
        if (v.status == ValueStatus::ConvergentSum) v.status = ValueStatus::Continuation;
        return v;
    };

    switch (spec.family()) {
        case Family::Power: {
            auto p = spec.as_power();
            if (convergent) return detail::laplace_power_convergent(p, p.q + beta);
            p.q += beta;
            return regularized(zeta_value(SpectrumSpec::power(p), 1.0));
        }
        case Family::MultiPower: {
            auto m = spec.as_multipower();
            m.q += beta;
            if (m.q < 0.0) raise(Errc::DomainError, "laplace_transform: beta below -q for a multi-term spectrum");
            auto v = zeta_value(SpectrumSpec::multipower(m), 1.0);
            return convergent ? v : regularized(v);
        }
        case Family::Explicit: {
            const auto& e = spec.as_explicit();
            const auto h = detail::head_sum(e.levels, beta);
            SpectralValue v;
            if (e.tail) {
                auto p = *e.tail;
                if (convergent) {
                    v = detail::laplace_power_convergent(p, p.q + beta);
                } else {
                    p.q += beta;
                    v = regularized(zeta_value(SpectrumSpec::power(p), 1.0));
                }
            }
            v.value += h.rest;
            v.abs_error += 1e-15 * std::abs(h.rest);
            if (h.count > 0 || v.status == ValueStatus::Pole) {
                v.status = ValueStatus::Pole;
                v.residue += h.count;
                v.principal_part = v.value;
            }
            return v;
        }
    }
    return {};
}

/// laplace_transform at each beta, evaluated concurrently.
inline std::vector<SpectralValue> laplace_grid(const SpectrumSpec& spec, const std::vector<double>& betas) {
    return detail::parallel_map(betas, [&](double b) { return laplace_transform(spec, b); });
}

struct ExpansionTerm {
    double exponent;     // power_terms: pole s_j, multiplying t^(-s_j); taylor_terms: k in t^k
    double coefficient;
};

struct LogTerm {
    int k;               // multiplies t^k ln t
    double coefficient;  // beta_k
};

/// K(t) ~ sum_j alpha_j t^(-s_j) + constant + sum_k (alpha_k t^k + beta_k t^k ln t).
struct HeatKernelExpansion {
    double constant_term = 0.0;
    std::vector<ExpansionTerm> power_terms;   // non-integer or positive poles
    std::vector<LogTerm> log_terms;
    std::vector<ExpansionTerm> taylor_terms;  // k >= 1
    int order = 0;                            // retained terms, by increasing power of t
    /// First omitted term as (power of t, coefficient); logs count as power k.
    std::optional<ExpansionTerm> next_omitted;

    double evaluate(double t) const {
        double sum = constant_term;
        for (const auto& p : power_terms) sum += p.coefficient * std::pow(t, -p.exponent);
        for (const auto& l : log_terms) sum += l.coefficient * std::pow(t, l.k) * std::log(t);
        for (const auto& k : taylor_terms) sum += k.coefficient * std::pow(t, k.exponent);
        return sum;
    }

    /// Magnitude of the first omitted term at t; 0 when nothing was omitted.
    double remainder_estimate(double t) const {
        return next_omitted ? std::abs(next_omitted->coefficient) * std::pow(t, next_omitted->exponent) : 0.0;
    }
};

/// The first `order` terms of the small-t expansion, in increasing power of t.
/// Taylor terms whose coefficient vanishes exactly are not counted.
inline HeatKernelExpansion asymptotic_expansion(const SpectrumSpec& spec, int order) {
    if (order < 0) raise(Errc::DomainError, "asymptotic_expansion: order must be >= 0");
    const int k_max = std::max(order, 1) + 1;
    const auto ps = pole_structure(spec, -static_cast<double>(std::max(10, k_max + 1)));

    enum class Kind { Power, Constant, Taylor, Log };
    struct Candidate {
        double t_power;
        Kind kind;
        double coefficient;
        int k;
        double pole;
    };
    std::vector<Candidate> cands;
    for (const auto& p : ps.poles) {
        const bool nonpos_int = p.location <= 1e-12 && detail::near_integer(p.location);
        if (nonpos_int) continue;
        cands.push_back({-p.location, Kind::Power, gamma(p.location) * p.residue, 0, p.location});
    }
    double harmonic = 0.0;
    double fact = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) {
            harmonic += 1.0 / k;
            fact *= k;
        }
        const double sign = (k % 2) ? -1.0 : 1.0;
        const auto z = zeta_value(spec, -static_cast<double>(k));
        double alpha_k;
        if (z.status == ValueStatus::Pole) {
            alpha_k = sign / fact * (z.principal_part + (harmonic - detail::kEulerGamma) * z.residue);
            cands.push_back({static_cast<double>(k), Kind::Log, -sign / fact * z.residue, k, 0.0});
        } else {
            alpha_k = sign / fact * z.value;
        }
        if (k == 0) {
            cands.push_back({0.0, Kind::Constant, alpha_k, 0, 0.0});
        } else if (alpha_k != 0.0) {
            cands.push_back({static_cast<double>(k), Kind::Taylor, alpha_k, k, 0.0});
        }
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& x, const Candidate& y) { return x.t_power < y.t_power; });

    HeatKernelExpansion out;
    int kept = 0;
    for (const auto& c : cands) {
        if (kept == order) {
            out.next_omitted = ExpansionTerm{c.t_power, c.coefficient};
            break;
        }
        switch (c.kind) {
            case Kind::Power: out.power_terms.push_back({c.pole, c.coefficient}); break;
            case Kind::Constant: out.constant_term = c.coefficient; break;
            case Kind::Taylor: out.taylor_terms.push_back({static_cast<double>(c.k), c.coefficient}); break;
            case Kind::Log: out.log_terms.push_back({c.k, c.coefficient}); break;
        }
        ++kept;
    }
    out.order = kept;
    return out;
}

}  // namespace spectral
