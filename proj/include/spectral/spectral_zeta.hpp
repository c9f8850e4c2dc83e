#pragma once

// zeta(s) = sum_n e_n^{-s} on the real line, with continuation, plus the
// partition-function moments E_n = zeta(n+1) n! and the density-of-states
// moments zeta(-j).

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "spectral/error.hpp"
#include "spectral/heat_trace.hpp"
#include "spectral/parallel.hpp"
#include "spectral/quadrature.hpp"
#include "spectral/special_functions.hpp"
#include "spectral/spectrum.hpp"

namespace spectral {

enum class ValueStatus { ConvergentSum, Continuation, Pole };

inline constexpr const char* status_name(ValueStatus s) {
    switch (s) {
        case ValueStatus::ConvergentSum: return "ConvergentSum";
        case ValueStatus::Continuation: return "Continuation";
        case ValueStatus::Pole: return "Pole";
    }
    return "?";
}

/// A zeta evaluation. At a pole, value holds the principal part (the finite
/// part left after removing residue / (s - s0)).
struct SpectralValue {
    double value = 0.0;
    ValueStatus status = ValueStatus::ConvergentSum;
    double abs_error = 0.0;
    double residue = 0.0;
    double principal_part = 0.0;
};

inline constexpr double kPoleTolerance = 1e-9;

namespace detail {

inline SpectralValue make_value(const PoleStructure& ps, double s, double value, double err) {
    SpectralValue v;
    v.value = value;
    v.abs_error = err;
    v.status = s > ps.abscissa ? ValueStatus::ConvergentSum : ValueStatus::Continuation;
    return v;
}

inline SpectralValue make_pole(double residue, double pp, double err) {
    SpectralValue v;
    v.status = ValueStatus::Pole;
    v.residue = residue;
    v.principal_part = pp;
    v.value = pp;
    v.abs_error = err;
    return v;
}

// a^-s zeta_H(alpha s, b), q = 0.
inline SpectralValue zeta_power_plain(const PowerSpec& p, const PoleStructure& ps, double s) {
    const double b = p.base();
    const double s0 = 1.0 / p.alpha;
    if (std::abs(s - s0) < kPoleTolerance) {
        const double as = std::pow(p.a, -s0);
        const double pp = -as * digamma(b) - as * std::log(p.a) / p.alpha;
        return make_pole(as / p.alpha, pp, 1e-14 * (std::abs(pp) + 1.0));
    }
    const double v = std::pow(p.a, -s) * hurwitz_zeta(p.alpha * s, b);
    return make_value(ps, s, v, 1e-14 * std::abs(v));
}

// Power with q > 0. The first levels are summed exactly until
// q <= a (n1 + c)^alpha / 4; the rest is
//   sum_k C(-s,k) q^k a^(-s-k) zeta_H(alpha (s+k), n1 + c).
inline SpectralValue zeta_power_shifted(const PowerSpec& p, const PoleStructure& ps, double s) {
    long n1 = p.n_start;
    while (p.q > 0.25 * p.a * std::pow(static_cast<double>(n1) + p.c, p.alpha)) ++n1;
    double head = 0.0;
    for (long n = n1 - 1; n >= p.n_start; --n) head += std::pow(p.level(n), -s);
    const double b = static_cast<double>(n1) + p.c;

    double sum = 0.0, scale = std::abs(head);
    bool at_pole = false;
    double residue = 0.0;
    double binom = 1.0;  // C(-s, k)
    int small = 0;
    for (int k = 0; k < 2000; ++k) {
        if (k > 0) binom *= (-s - (k - 1)) / k;
        if (k > 0 && binom == 0.0) break;
        const double arg = p.alpha * (s + k);
        const double qa = std::pow(p.q, k) * std::pow(p.a, -s - k);
        double term;
        if (std::abs(arg - 1.0) < p.alpha * kPoleTolerance) {
            const double sk = 1.0 / p.alpha - k;
            // g(s) = C(-s,k) q^k a^(-s-k) near s_k; zeta_H(alpha(s+k)) = 1/(alpha (s - s_k)) - psi(b).
            double dlog = -std::log(p.a);
            double g = 1.0;
            double gprime_zero = 0.0;  // g' when one factor (s_k + i) vanishes
            int zeros = 0;
            for (int i = 0; i < k; ++i) {
                const double f = sk + i;
                if (std::abs(f) < 1e-12) {
                    ++zeros;
                    continue;
                }
                g *= f;
                dlog += 1.0 / f;
            }
            const double sign = (k % 2) ? -1.0 : 1.0;
            double fact = 1.0;
            for (int i = 2; i <= k; ++i) fact *= i;
            const double pref = sign * std::pow(p.q, k) * std::pow(p.a, -sk - k) / fact;
            if (zeros == 0) {
                const double gk = pref * g;
                at_pole = true;
                residue = gk / p.alpha;
                term = gk * dlog / p.alpha - gk * digamma(b);
            } else {
                gprime_zero = pref * g;
                term = gprime_zero / p.alpha;
            }
        } else {
            term = binom * qa * hurwitz_zeta(arg, b);
        }
        sum += term;
        scale = std::max(scale, std::abs(term));
        if (std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++small >= 3 && k > -s) break;
        } else {
            small = 0;
        }
    }
    const double total = head + sum;
    const double err = 1e-14 * std::max(scale, std::abs(total));
    if (at_pole) return make_pole(residue, total, err);
    return make_value(ps, s, total, err);
}

}  // namespace detail

struct MellinOptions {
    double accept = 1e-14;  // |K(tau) - series(tau)| / K(tau)
    double quad_rel = 1e-13;
};

namespace detail {

struct MellinCut {
    double tau = 1.0;
    std::size_t count = 0;  // series terms kept
    double mismatch = std::numeric_limits<double>::infinity();  // relative, at tau
    double estimate = std::numeric_limits<double>::infinity();  // on Gamma(s) zeta(s)
};

// Picks tau and the number of subtracted series terms minimising the error of
// dropping integral_0^tau t^(s-1) (K - series) dt, plus rounding in the
// subtracted terms.
inline MellinCut choose_cut(const SpectrumSpec& spec, const SmallTimeSeries& series, double s,
                            const MellinOptions& opt) {
    MellinCut best;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int i = 0; i <= 12; ++i) {
        const double tau = std::ldexp(1.0, -i);
        HeatOptions ho;
        ho.tol = 1e-17;
        const double K = heat_trace_detailed(spec, tau, ho).value;
        const double tau_s = std::pow(tau, s);
        double partial = 0.0, rounding = K * tau_s;
        for (std::size_t j = 0; j < series.terms.size(); ++j) {
            const auto& term = series.terms[j];
            partial += term.coeff * std::pow(tau, term.exponent);
            const double d = s + term.exponent;
            if (std::abs(d) > kPoleTolerance) rounding += std::abs(term.coeff * std::pow(tau, d) / d);
            const double next = j + 1 < series.terms.size() ? series.terms[j + 1].exponent : term.exponent + 1.0;
            // the dropped remainder ~ t^next must stay integrable against t^(s-1)
            if (s + next <= 1e-12) continue;
            const double mis = std::abs(K - partial);
            const double est = mis * tau_s / std::min(s + next, 1.0) + 4.0 * eps * rounding;
            if (est < best.estimate) best = {tau, j + 1, mis / K, est};
        }
        if (best.mismatch <= opt.accept && i >= 2 && best.tau > tau) break;
    }
    return best;
}

inline double mellin_integrand(const SpectrumSpec& spec, double s, double t) {
    return std::exp((s - 1.0) * std::log(t) + log_heat_trace(spec, t, 1e-300));
}

// integral_tau^inf t^(s-1) K(t) dt
inline quad::Result mellin_upper(const SpectrumSpec& spec, double s, double tau, const MellinOptions& opt) {
    const double e1 = spec.lowest_level();
    auto f = [&](double t) { return mellin_integrand(spec, s, t); };
    const auto first = quad::integrate(f, tau, 2.0 * tau, 0.0, opt.quad_rel);
    const double floor = std::abs(first.value);
    // K(t) <= K(T) exp(-e1 (t - T)) for t >= T.
    auto log_tail = [&](double T) {
        double lt = log_heat_trace(spec, T, 1e-300) + (s - 1.0) * std::log(T) - std::log(e1);
        if (s > 1.0) {
            const double r = (s - 1.0) / (e1 * T);
            if (r >= 0.5) return std::numeric_limits<double>::infinity();
            lt -= std::log1p(-r);
        }
        return lt;
    };
    std::vector<double> breaks{tau, 2.0 * tau};
    while (log_tail(breaks.back()) > std::log(1e-17 * floor)) {
        breaks.push_back(2.0 * breaks.back());
        if (breaks.size() > 80) raise(Errc::QuadratureFailure, "mellin: tail bound not reached");
    }
    std::vector<double> rest(breaks.begin() + 1, breaks.end());
    auto r = quad::integrate_pieces(f, rest, 1e-17 * floor, opt.quad_rel);
    r.value += first.value;
    r.abs_error += first.abs_error + std::exp(log_tail(breaks.back()));
    r.converged = r.converged && first.converged;
    return r;
}

}  // namespace detail

/// zeta(s) through Gamma(s) zeta(s) = integral_0^inf t^(s-1) K(t) dt, with the
/// small-t series of K subtracted below a cut tau. Valid for every real s.
inline SpectralValue zeta_mellin(const SpectrumSpec& spec, double s, const MellinOptions& opt = {}) {
    if (spec.is_finite()) raise(Errc::UnsupportedSpec, "zeta_mellin: finite spectrum");
    const auto ps = pole_structure(spec, std::min(-10.0, s - 1.0));
    const auto series = small_time_series(spec, std::max(40.0, -s + 10.0));
    const auto cut = detail::choose_cut(spec, series, s, opt);

    const auto upper = detail::mellin_upper(spec, s, cut.tau, opt);
    const double tau = cut.tau;
    const double log_tau = std::log(tau);

    // Gamma(s) zeta(s) = upper + sum_e c_e tau^(s+e) / (s+e); collect the
    // singular index if s sits on one of the 1/(s+e) poles.
    double m_reg = upper.value;
    std::optional<double> singular;
    for (std::size_t j = 0; j < cut.count; ++j) {
        const auto& term = series.terms[j];
        const double d = s + term.exponent;
        if (std::abs(d) < kPoleTolerance) {
            singular = term.coeff;
            continue;
        }
        const double v = term.coeff * std::exp(d * log_tau) / d;
        m_reg += v;
    }
    const double err_m = upper.abs_error + cut.estimate;
    auto certify = [&](SpectralValue v) {
        if (!(v.abs_error <= 1e-8 * std::max(1.0, std::abs(v.value))))
            raise(Errc::UnsupportedContinuation, "zeta_mellin: cannot certify the continuation to 1e-8");
        return v;
    };

    const bool at_gamma_pole = s <= kPoleTolerance && detail::near_integer(s, kPoleTolerance);
    if (singular) {
        const double c = *singular;
        if (at_gamma_pole) {
            // Gamma(s) ~ (-1)^j / (j! (s + j)) cancels the simple pole of M.
            const int j = static_cast<int>(std::round(-s));
            double fact = 1.0;
            for (int i = 2; i <= j; ++i) fact *= i;
            const double v = c * ((j % 2) ? -1.0 : 1.0) * fact;
            return detail::make_value(ps, s, v, 1e-14 * std::abs(v) + 1e-16);  // exact from the series
        }
        const double s0 = std::round(s * 1e9) / 1e9;
        const Pole* pole = ps.find(s);
        const double center = pole ? pole->location : s0;
        const double rg = rgamma(center);
        const double pp = rg * (m_reg + c * log_tau - c * digamma(center));
        return certify(detail::make_pole(c * rg, pp, std::abs(rg) * err_m));
    }
    if (at_gamma_pole) {
        // zeta regular with no matching series term: coefficient of t^j is zero.
        return detail::make_value(ps, s, 0.0, 1e-16);
    }
    const double rg = rgamma(s);
    const double v = rg * m_reg;
    return certify(detail::make_value(ps, s, v, std::abs(rg) * err_m));
}

/// zeta(s) for every real s. Convergent status iff s exceeds the abscissa.
inline SpectralValue zeta_value(const SpectrumSpec& spec, double s) {
    if (!std::isfinite(s)) raise(Errc::DomainError, "zeta_value: s must be finite");
    switch (spec.family()) {
        case Family::Power: {
            const auto& p = spec.as_power();
            const auto ps = pole_structure(spec, std::min(-10.0, s - 1.0));
            if (p.q == 0.0) return detail::zeta_power_plain(p, ps, s);
            return detail::zeta_power_shifted(p, ps, s);
        }
        case Family::MultiPower: return zeta_mellin(spec, s);
        case Family::Explicit: {
            const auto& e = spec.as_explicit();
            double head = 0.0;
            for (auto it = e.levels.rbegin(); it != e.levels.rend(); ++it) head += std::pow(*it, -s);
            if (!e.tail) {
                SpectralValue v;
                v.value = head;
                v.abs_error = 1e-15 * std::abs(head);
                return v;
            }
            auto v = zeta_value(SpectrumSpec::power(*e.tail), s);
            v.value += head;
            v.principal_part += v.status == ValueStatus::Pole ? head : 0.0;
            return v;
        }
    }
    return {};
}

/// Residue from closed-form pole data.
inline double residue_at(const SpectrumSpec& spec, double s0) {
    if (spec.is_finite()) raise(Errc::UnsupportedSpec, "residue_at: finite spectrum has no poles");
    const auto ps = pole_structure(spec, std::min(-10.0, s0 - 1.0));
    const Pole* p = ps.find(s0, kPoleTolerance);
    if (!p) raise(Errc::NotAPole, "residue_at: s0 is a regular point");
    return p->residue;
}

/// Residue estimated numerically from eps zeta(s0 + eps), Richardson over
/// eps in {1e-2, 5e-3, 2.5e-3}.
inline double residue_numeric(const SpectrumSpec& spec, double s0) {
    auto r = [&](double eps) { return eps * zeta_value(spec, s0 + eps).value; };
    const double r1 = r(1e-2), r2 = r(5e-3), r3 = r(2.5e-3);
    const double a1 = 2.0 * r2 - r1, a2 = 2.0 * r3 - r2;
    return (4.0 * a2 - a1) / 3.0;
}

enum class MomentStatus { Convergent, Regularized };

inline constexpr const char* moment_status_name(MomentStatus s) {
    return s == MomentStatus::Convergent ? "Convergent" : "Regularized";
}

struct MomentValue {
    double value;
    MomentStatus status;
    double log_abs;  // log |value|, finite even when value overflows
};

/// E_n = zeta(n+1) n!.
inline MomentValue partition_moment(const SpectrumSpec& spec, long n) {
    if (n < 0) raise(Errc::DomainError, "partition_moment: n must be >= 0");
    const double s = static_cast<double>(n) + 1.0;
    const auto z = zeta_value(spec, s);
    if (z.status == ValueStatus::Pole) raise(Errc::MomentAtPole, "partition_moment: zeta has a pole at n+1");
    const double lf = std::lgamma(s);
    const double log_abs = z.value == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(z.value)) + lf;
    const double value = z.value * std::exp(lf);
    return {value, z.status == ValueStatus::ConvergentSum ? MomentStatus::Convergent : MomentStatus::Regularized,
            log_abs};
}

/// zeta(-j), the regularized j-th moment of the density of states.
inline MomentValue density_moment(const SpectrumSpec& spec, long j) {
    if (j < 0) raise(Errc::DomainError, "density_moment: j must be >= 0");
    const auto z = zeta_value(spec, -static_cast<double>(j));
    if (z.status == ValueStatus::Pole) raise(Errc::MomentAtPole, "density_moment: zeta has a pole at -j");
    const auto status = spec.is_finite() ? MomentStatus::Convergent : MomentStatus::Regularized;
    return {z.value, status, z.value == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(z.value))};
}

struct MomentEntry {
    long n;
    double value;
    double log_abs;
    MomentStatus status;
};

struct GrowthFit {
    double C;
    double R;
};

struct MomentSequence {
    std::vector<MomentEntry> entries;
    std::optional<GrowthFit> growth_fit;

    /// Plain values indexed from `first`; all marked Convergent.
    static MomentSequence from_values(const std::vector<double>& values, long first = 0) {
        MomentSequence m;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double v = values[i];
            m.entries.push_back({first + static_cast<long>(i), v,
                                 v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(v)),
                                 MomentStatus::Convergent});
        }
        return m;
    }

    /// Entries given by log |value| (positive values), for sequences too large
    /// for double.
    static MomentSequence from_logs(const std::vector<double>& logs, long first = 0) {
        MomentSequence m;
        for (std::size_t i = 0; i < logs.size(); ++i)
            m.entries.push_back({first + static_cast<long>(i), std::exp(logs[i]), logs[i], MomentStatus::Convergent});
        return m;
    }

    const MomentEntry* find(long n) const {
        for (const auto& e : entries)
            if (e.n == n) return &e;
        return nullptr;
    }
};

namespace detail {

// Envelope |E_n| <= C R^n n! over the given entries: R from the largest
// increment of log|E_n|/n! over the second half, C the smallest constant
// covering every entry.
inline GrowthFit envelope_fit(const std::vector<std::pair<long, double>>& x) {
    double log_r = -std::numeric_limits<double>::infinity();
    const std::size_t half = x.size() / 2;
    for (std::size_t i = std::max<std::size_t>(half, 1); i < x.size(); ++i)
        log_r = std::max(log_r, (x[i].second - x[i - 1].second) / static_cast<double>(x[i].first - x[i - 1].first));
    if (!std::isfinite(log_r)) log_r = 0.0;
    double log_c = -std::numeric_limits<double>::infinity();
    for (const auto& [n, v] : x) log_c = std::max(log_c, v - static_cast<double>(n) * log_r);
    return {std::exp(log_c), std::exp(log_r)};
}

}  // namespace detail

/// E_0 .. E_{n_max}; entries whose n+1 is a pole are omitted.
inline MomentSequence partition_moments(const SpectrumSpec& spec, long n_max) {
    std::vector<long> ns;
    for (long n = 0; n <= n_max; ++n) ns.push_back(n);
    auto values = detail::parallel_map(ns, [&](long n) -> std::optional<MomentValue> {
        try {
            return partition_moment(spec, n);
        } catch (const Error& e) {
            if (e.code() == Errc::MomentAtPole) return std::nullopt;
            throw;
        }
    });
    MomentSequence m;
    std::vector<std::pair<long, double>> x;
    for (long n = 0; n <= n_max; ++n) {
        const auto& v = values[static_cast<std::size_t>(n)];
        if (!v) continue;
        m.entries.push_back({n, v->value, v->log_abs, v->status});
        if (std::isfinite(v->log_abs)) x.emplace_back(n, v->log_abs - std::lgamma(static_cast<double>(n) + 1.0));
    }
    if (x.size() >= 2) m.growth_fit = detail::envelope_fit(x);
    return m;
}

/// zeta at each s, evaluated concurrently; results follow input order.
inline std::vector<SpectralValue> zeta_grid(const SpectrumSpec& spec, const std::vector<double>& ss) {
    return detail::parallel_map(ss, [&](double s) { return zeta_value(spec, s); });
}

}  // namespace spectral
