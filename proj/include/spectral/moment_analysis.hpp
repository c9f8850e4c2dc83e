#pragma once

// Moment-problem criteria applied to E_n = zeta(n+1) n!: the pole theorem,
// factorial growth bounds, Carleman's sum, Krein's log-integral, the moment
// shift, and the log-normal (Stieltjes) indeterminate family.
//
// Divergence can only be observed, never proven, from finitely many values;
// every such decision here is a model fit whose parameters are reported.

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spectral/error.hpp"
#include "spectral/heat_trace.hpp"
#include "spectral/quadrature.hpp"
#include "spectral/spectral_zeta.hpp"
#include "spectral/spectrum.hpp"

namespace spectral {

enum class MomentMode { Hamburger, Stieltjes };

struct GrowthCheck {
    bool passed = false;
    double C = 0.0;
    double R = 0.0;
    double slope = 0.0;  // d(increment of log|E_n|/n!) / d(ln n) over the second half
};

namespace detail {

struct LineFit {
    double slope, intercept, max_residual;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    const double m = den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
    const double c = (sy - m * sx) / n;
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(y[i] - (m * x[i] + c)));
    return {m, c, r};
}

inline double log_factorial(double n) { return std::lgamma(n + 1.0); }

}  // namespace detail

/// Fits |E_n| <= C R^n n! (Hamburger) or C R^n (2n)! (Stieltjes). Passes when
/// the log-excess over that envelope stops growing: the increments of
/// log|E_n| - log n! show no upward trend against ln n.
inline GrowthCheck growth_bound_check(const MomentSequence& moments, MomentMode mode) {
    std::vector<std::pair<long, double>> x;
    for (const auto& e : moments.entries) {
        if (e.status != MomentStatus::Convergent || !std::isfinite(e.log_abs)) continue;
        const double n = static_cast<double>(e.n);
        const double lf = mode == MomentMode::Hamburger ? detail::log_factorial(n) : detail::log_factorial(2.0 * n);
        x.emplace_back(e.n, e.log_abs - lf);
    }
    if (x.size() < 5) raise(Errc::InsufficientData, "growth_bound_check: fewer than 5 usable entries");
    GrowthCheck out;
    const auto env = detail::envelope_fit(x);
    out.C = env.C;
    out.R = env.R;
    std::vector<double> ln_n, inc;
    for (std::size_t i = std::max<std::size_t>(x.size() / 2, 1); i < x.size(); ++i) {
        const double gap = static_cast<double>(x[i].first - x[i - 1].first);
        ln_n.push_back(std::log(static_cast<double>(x[i].first)));
        inc.push_back((x[i].second - x[i - 1].second) / gap);
    }
    out.slope = inc.size() >= 2 ? detail::least_squares(ln_n, inc).slope : 0.0;
    out.passed = out.slope <= 0.02;
    return out;
}

struct CarlemanCheck {
    double partial_sum = 0.0;
    bool diverges = false;
    double c = 0.0;  // S(N) ~ c ln N + d over dyadic N
    double d = 0.0;
    std::vector<std::pair<long, double>> partials;  // (N, S(N)) at dyadic N >= 8
};

/// Partial sums S(N) = sum_{n<=N} g_{2n}^(-1/2n) (Hamburger) or g_n^(-1/2n)
/// (Stieltjes) at each requested N.
inline std::vector<double> carleman_partial_sums(const MomentSequence& moments, MomentMode mode,
                                                 const std::vector<long>& Ns) {
    long n_max = 0;
    for (long N : Ns) n_max = std::max(n_max, N);
    std::vector<double> out;
    double s = 0.0;
    std::size_t next = 0;
    std::vector<long> sorted = Ns;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> at(sorted.size());
    for (long n = 1; n <= n_max; ++n) {
        const long idx = mode == MomentMode::Hamburger ? 2 * n : n;
        const auto* e = moments.find(idx);
        if (!e) raise(Errc::InsufficientData, "carleman_check: missing moment " + std::to_string(idx));
        if (!(e->value > 0.0) && !std::isfinite(e->log_abs))
            raise(Errc::InsufficientData, "carleman_check: non-positive moment " + std::to_string(idx));
        s += std::exp(-e->log_abs / (2.0 * static_cast<double>(n)));
        while (next < sorted.size() && sorted[next] == n) at[next++] = s;
    }
    for (long N : Ns) out.push_back(at[static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), N) - sorted.begin())]);
    return out;
}

/// Carleman's sum up to N, sampled at dyadic N. The sum is read as divergent
/// when S(N) = c ln N + d fits with c > 0 and the last dyadic block adds at
/// least 0.9 of the block before it (per unit of ln N); a convergent tail
/// shrinks block by block.
inline CarlemanCheck carleman_check(const MomentSequence& moments, MomentMode mode, long N) {
    if (N < 8) raise(Errc::InsufficientData, "carleman_check: N must be >= 8");
    // small N is dominated by pre-asymptotic terms; dyadic samples start at 8
    std::vector<long> Ns;
    for (long m = N; m >= 8; m /= 2) Ns.insert(Ns.begin(), m);
    if (Ns.size() < 3) Ns = {N / 4, N / 2, N};
    const auto sums = carleman_partial_sums(moments, mode, Ns);
    CarlemanCheck out;
    std::vector<double> lx;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        out.partials.emplace_back(Ns[i], sums[i]);
        lx.push_back(std::log(static_cast<double>(Ns[i])));
    }
    const auto fit = detail::least_squares(lx, sums);
    out.c = fit.slope;
    out.d = fit.intercept;
    out.partial_sum = sums.back();
    const std::size_t m = sums.size();
    const double last = (sums[m - 1] - sums[m - 2]) / (lx[m - 1] - lx[m - 2]);
    const double prev = (sums[m - 2] - sums[m - 3]) / (lx[m - 2] - lx[m - 3]);
    out.diverges = out.c > 0.0 && last > 0.0 && last >= 0.9 * prev;
    return out;
}

enum class KreinSupport { HalfLine, FullLine };

struct KreinReport {
    std::vector<std::pair<double, double>> partial_values;  // (T, I(T))
    double slope = 0.0;       // I ~ slope * g(T) + intercept
    double intercept = 0.0;
    double exponent = 0.5;    // g(T) = T^exponent; 0 marks g(T) = ln T
    double relative_residual = 0.0;
    double e1_estimate = 0.0; // -slope / 2 on the half line
    bool diverges = false;
    bool quadrature_ok = true;
    std::vector<std::string> notes;
};

namespace detail {

// Half line: integral_0^T log_f(t) / (sqrt(t) (1 + t)) dt at each cutoff.
template <class LogF>
KreinReport krein_half_line(LogF&& log_f, std::vector<double> cutoffs) {
    std::sort(cutoffs.begin(), cutoffs.end());
    KreinReport rep;
    // [0, 1] with t = e^v: integrand log_f(e^v) e^(v/2) / (1 + e^v).
    auto g = [&](double v) {
        const double t = std::exp(v);
        return log_f(t) * std::exp(0.5 * v) / (1.0 + t);
    };
    auto head = quad::integrate_pieces(g, {-90.0, -40.0, -20.0, -10.0, -5.0, -2.0, 0.0}, 1e-13, 1e-13);
    rep.quadrature_ok = head.converged;
    auto h = [&](double t) { return log_f(t) / (std::sqrt(t) * (1.0 + t)); };
    double acc = head.value;
    double lo = 1.0;
    for (double T : cutoffs) {
        if (!(T > 1.0)) raise(Errc::DomainError, "krein_check: cutoffs must exceed 1");
        std::vector<double> br{lo};
        while (br.back() * 2.0 < T) br.push_back(br.back() * 2.0);
        br.push_back(T);
        auto r = quad::integrate_pieces(h, br, 1e-10, 1e-13);
        rep.quadrature_ok = rep.quadrature_ok && r.converged;
        acc += r.value;
        rep.partial_values.emplace_back(T, acc);
        lo = T;
    }
    return rep;
}

template <class LogF>
KreinReport krein_full_line(LogF&& log_f, std::vector<double> cutoffs) {
    std::sort(cutoffs.begin(), cutoffs.end());
    KreinReport rep;
    rep.exponent = 0.0;
    auto h = [&](double t) { return (log_f(t) + log_f(-t)) / (1.0 + t * t); };
    double acc = 0.0, lo = 0.0;
    for (double T : cutoffs) {
        if (!(T > 1.0)) raise(Errc::DomainError, "krein_check: cutoffs must exceed 1");
        std::vector<double> br{lo};
        if (lo < 1.0) br.push_back(1.0);
        while (br.back() * 2.0 < T) br.push_back(br.back() * 2.0);
        br.push_back(T);
        auto r = quad::integrate_pieces(h, br, 1e-10, 1e-13);
        rep.quadrature_ok = rep.quadrature_ok && r.converged;
        acc += r.value;
        rep.partial_values.emplace_back(T, acc);
        lo = T;
    }
    return rep;
}

inline void krein_fit(KreinReport& rep) {
    if (rep.partial_values.size() < 3) raise(Errc::InsufficientData, "krein_check: at least 3 cutoffs required");
    std::vector<double> x, y;
    for (const auto& [T, I] : rep.partial_values) {
        x.push_back(rep.exponent == 0.0 ? std::log(T) : std::pow(T, rep.exponent));
        y.push_back(I);
    }
    const auto fit = least_squares(x, y);
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
    // residual measured against the growth the model itself predicts over the range
    const double span = std::abs(fit.slope) * (x.back() - x.front());
    rep.relative_residual = span > 0.0 ? fit.max_residual / span : std::numeric_limits<double>::infinity();
    rep.e1_estimate = -fit.slope / 2.0;
    rep.diverges = rep.slope < 0.0 && rep.relative_residual < 0.05;
}

}  // namespace detail

/// Krein's integral of log K for a spectrum (half line only).
inline KreinReport krein_check(const SpectrumSpec& spec, KreinSupport support, const std::vector<double>& cutoffs) {
    if (support == KreinSupport::FullLine)
        raise(Errc::UnsupportedSpec, "krein_check: the heat trace lives on the half line");
    auto rep = detail::krein_half_line([&](double t) { return log_heat_trace(spec, t, 1e-300); }, cutoffs);
    detail::krein_fit(rep);
    rep.notes.push_back("K(t) exceeds 1 near t = 0, so the 0 <= K <= 1 hypothesis does not hold; the test is applied anyway");
    return rep;
}

/// Krein's integral for a synthetic log-density. The full-line form
/// integrates log f(t) / (1 + t^2) over [-T, T] and fits a ln T law.
inline KreinReport krein_check(const std::function<double(double)>& log_f, KreinSupport support,
                               const std::vector<double>& cutoffs) {
    auto rep = support == KreinSupport::HalfLine ? detail::krein_half_line(log_f, cutoffs)
                                                 : detail::krein_full_line(log_f, cutoffs);
    detail::krein_fit(rep);
    if (support == KreinSupport::FullLine) rep.e1_estimate = 0.0;
    return rep;
}

/// gamma_n(c) = sum_j C(n, j) c^j gamma_{n-j}, over the contiguous prefix n = 0, 1, ...
inline MomentSequence shift_moments(const MomentSequence& moments, double c) {
    std::vector<const MomentEntry*> prefix;
    for (long n = 0;; ++n) {
        const auto* e = moments.find(n);
        if (!e) break;
        prefix.push_back(e);
    }
    if (prefix.empty()) raise(Errc::InsufficientData, "shift_moments: entry 0 missing");
    MomentSequence out;
    for (std::size_t n = 0; n < prefix.size(); ++n) {
        double sum = 0.0, binom = 1.0, cj = 1.0;
        bool regularized = false;
        for (std::size_t j = 0; j <= n; ++j) {
            const auto* e = prefix[n - j];
            if (c == 0.0 && j > 0) break;
            sum += binom * cj * e->value;
            regularized = regularized || e->status == MomentStatus::Regularized;
            binom = binom * static_cast<double>(n - j) / static_cast<double>(j + 1);
            cj *= c;
        }
        out.entries.push_back({static_cast<long>(n), sum,
                               sum == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(sum)),
                               regularized ? MomentStatus::Regularized : MomentStatus::Convergent});
    }
    return out;
}

/// integral_0^inf u^k u^(-ln u) (1 + theta sin(2 pi ln u)) du, which equals
/// sqrt(pi) exp((k+1)^2 / 4) for every |theta| <= 1.
inline double stieltjes_demo(int k, double theta) {
    if (!(std::abs(theta) <= 1.0)) raise(Errc::DomainError, "stieltjes_demo: |theta| must be <= 1");
    if (k < 0) raise(Errc::DomainError, "stieltjes_demo: k must be >= 0");
    const double mu = 0.5 * (k + 1);
    const double peak = std::exp(mu * mu);
    // u = e^v: exp((k+1) v - v^2) (1 + theta sin(2 pi v)), scaled by the peak value
    auto f = [&](double v) {
        const double w = v - mu;
        return std::exp(-w * w) * (1.0 + theta * std::sin(2.0 * std::numbers::pi * v));
    };
    std::vector<double> br;
    for (int i = -20; i <= 20; ++i) br.push_back(mu + 0.5 * i);
    const auto r = quad::integrate_pieces(f, br, 1e-15, 1e-15);
    return peak * r.value;
}

/// Moments of exp(-|x|^alpha) on the line: E_m = 2/alpha Gamma((m+1)/alpha)
/// for even m, 0 for odd m.
inline MomentSequence stretched_exponential_moments(double alpha, long m_max) {
    if (!(alpha > 0.0)) raise(Errc::DomainError, "stretched_exponential_moments: alpha must be > 0");
    MomentSequence out;
    for (long m = 0; m <= m_max; ++m) {
        if (m % 2) {
            out.entries.push_back({m, 0.0, -std::numeric_limits<double>::infinity(), MomentStatus::Convergent});
            continue;
        }
        const double la = std::log(2.0 / alpha) + std::lgamma((m + 1.0) / alpha);
        out.entries.push_back({m, std::exp(la), la, MomentStatus::Convergent});
    }
    return out;
}

enum class Verdict { Determinate, Indeterminate, Inconclusive };
enum class Criterion { PoleTheorem, GrowthBound, Carleman, Krein, Normalization };
enum class Outcome { Passed, Failed, Inapplicable };

inline constexpr const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Determinate: return "Determinate";
        case Verdict::Indeterminate: return "Indeterminate";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

inline constexpr const char* criterion_name(Criterion c) {
    switch (c) {
        case Criterion::PoleTheorem: return "PoleTheorem";
        case Criterion::GrowthBound: return "GrowthBound";
        case Criterion::Carleman: return "Carleman";
        case Criterion::Krein: return "Krein";
        case Criterion::Normalization: return "Normalization";
    }
    return "?";
}

inline constexpr const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Passed: return "passed";
        case Outcome::Failed: return "failed";
        case Outcome::Inapplicable: return "inapplicable";
    }
    return "?";
}

struct Evidence {
    Criterion criterion;
    Outcome outcome;
    std::string detail;
    std::vector<std::pair<std::string, double>> numbers;
};

/// For Krein, "passed" means the log-integral converged, which is evidence
/// of indeterminacy. Every other criterion passes on determinacy evidence.
struct DeterminacyVerdict {
    Verdict verdict = Verdict::Inconclusive;
    std::vector<Evidence> evidence;
    std::vector<std::string> notes;

    const Evidence* find(Criterion c) const {
        for (const auto& e : evidence)
            if (e.criterion == c) return &e;
        return nullptr;
    }
};

struct ClassifyOptions {
    long growth_n_max = 20;
    long carleman_N = 64;
    std::vector<double> krein_cutoffs{1e2, 1e3, 1e4};
};

namespace detail {

inline std::string fmt_num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace detail

/// Aggregates the criteria. Determinate needs normalization plus one
/// sufficient criterion; Indeterminate needs a pole at s = 1 or a convergent
/// Krein integral; anything else is Inconclusive.
inline DeterminacyVerdict classify(const SpectrumSpec& spec, const ClassifyOptions& opt = {}) {
    DeterminacyVerdict out;
    const auto ps = pole_structure(spec);
    const bool pole_at_one = ps.find(1.0, kPoleTolerance) != nullptr;

    Evidence norm{Criterion::Normalization, Outcome::Passed, "", {{"abscissa", ps.abscissa}}};
    if (pole_at_one) {
        norm.outcome = Outcome::Failed;
        norm.detail = "pole at s=1: E_0 = zeta(1) undefined, K(t) not integrable at 0";
    } else if (ps.abscissa > 1.0) {
        norm.outcome = Outcome::Failed;
        norm.detail = "abscissa " + detail::fmt_num(ps.abscissa) + " > 1: K(t) not integrable at 0 (E_0 only regularized)";
    } else {
        norm.detail = "E_0 = zeta(1) finite";
    }
    const bool normalized = norm.outcome == Outcome::Passed;
    out.evidence.push_back(norm);

    Evidence pole{Criterion::PoleTheorem, ps.has_integer_pole ? Outcome::Failed : Outcome::Passed, "", {}};
    if (ps.has_integer_pole) {
        for (const auto& p : ps.poles)
            if (detail::near_integer(p.location)) {
                pole.detail = "pole at integer s=" + detail::fmt_num(p.location);
                pole.numbers.emplace_back("pole", p.location);
                break;
            }
    } else {
        pole.detail = ps.poles.empty() ? "no poles" : "no pole at any integer; rightmost " + detail::fmt_num(ps.rightmost);
    }
    out.evidence.push_back(pole);

    std::optional<MomentSequence> moments;
    if (normalized) moments = partition_moments(spec, std::max(opt.growth_n_max, opt.carleman_N));

    Evidence growth{Criterion::GrowthBound, Outcome::Inapplicable, "needs convergent moments", {}};
    if (moments) {
        MomentSequence head;
        for (const auto& e : moments->entries)
            if (e.n <= opt.growth_n_max) head.entries.push_back(e);
        try {
            const auto g = growth_bound_check(head, MomentMode::Hamburger);
            growth.outcome = g.passed ? Outcome::Passed : Outcome::Failed;
            growth.detail = "|E_n| <= C R^n n! for n <= " + std::to_string(opt.growth_n_max) + ", C=" +
                            detail::fmt_num(g.C) + " R=" + detail::fmt_num(g.R);
            growth.numbers = {{"C", g.C}, {"R", g.R}, {"slope", g.slope}};
        } catch (const Error& e) {
            growth.detail = e.what();
        }
    }
    out.evidence.push_back(growth);

    Evidence carl{Criterion::Carleman, Outcome::Inapplicable, "needs convergent moments", {}};
    if (moments) {
        try {
            const auto c = carleman_check(*moments, MomentMode::Stieltjes, opt.carleman_N);
            carl.outcome = c.diverges ? Outcome::Passed : Outcome::Failed;
            carl.detail = std::string(c.diverges ? "sum diverges" : "sum converges") + " (Stieltjes, N=" +
                          std::to_string(opt.carleman_N) + ")";
            carl.numbers = {{"partial_sum", c.partial_sum}, {"c", c.c}};
        } catch (const Error& e) {
            carl.detail = e.what();
        }
    }
    out.evidence.push_back(carl);

    Evidence krein{Criterion::Krein, Outcome::Inapplicable, "needs a normalizable infinite spectrum", {}};
    if (normalized && !spec.is_finite()) {
        const auto k = krein_check(spec, KreinSupport::HalfLine, opt.krein_cutoffs);
        krein.outcome = k.diverges ? Outcome::Failed : Outcome::Passed;
        krein.detail = std::string(k.diverges ? "integral diverges like " : "integral appears finite; fit ") +
                       detail::fmt_num(k.slope) + " sqrt(T)";
        krein.numbers = {{"slope", k.slope}, {"relative_residual", k.relative_residual}, {"e1", k.e1_estimate}};
    }
    out.evidence.push_back(krein);

    const auto passed = [&](Criterion c) { return out.find(c)->outcome == Outcome::Passed; };
    if (pole_at_one || krein.outcome == Outcome::Passed) {
        out.verdict = Verdict::Indeterminate;
    } else if (normalized &&
               (passed(Criterion::PoleTheorem) || passed(Criterion::GrowthBound) || passed(Criterion::Carleman))) {
        out.verdict = Verdict::Determinate;
    } else {
        out.verdict = Verdict::Inconclusive;
    }
    out.notes.push_back("pole data absent at integers implies determinacy (sufficient direction); poles alone never imply indeterminacy except at s=1");
    if (ps.max_exponent)
        out.notes.push_back("multi-term spectrum: abscissa uses sum 1/alpha_i = " + detail::fmt_num(ps.abscissa) +
                            "; max alpha_i = " + detail::fmt_num(*ps.max_exponent) + " recorded as the alternative");
    return out;
}

}  // namespace spectral
