#pragma once

// Eigenvalue sequences {e_n} and the closed-form pole data of their spectral
// zeta functions.
//
// Three families are modelled:
//   Power       e_n = a (n + c)^alpha + q,                 n = n_start, n_start+1, ...
//   MultiPower  e   = sum_i a_i (n_i + c_i)^alpha_i + q,   each n_i >= n_start_i
//   Explicit    a finite non-decreasing list, optionally continued by a Power tail
//
// Indexing: Power uses its natural index n >= n_start. MultiPower and Explicit
// are indexed 0, 1, 2, ... in sorted order; an Explicit tail continues at the
// tail's own n_start once the list is exhausted.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "spectral/error.hpp"
#include "spectral/special_functions.hpp"

namespace spectral {

struct PowerSpec {
    double a = 1.0;
    double c = 0.0;
    double alpha = 1.0;
    double q = 0.0;
    long n_start = 1;

    double level(long n) const { return a * std::pow(static_cast<double>(n) + c, alpha) + q; }
    double base() const { return static_cast<double>(n_start) + c; }
};

struct PowerTerm {
    double a = 1.0;
    double c = 0.0;
    double alpha = 1.0;
    long n_start = 1;

    double level(long n) const { return a * std::pow(static_cast<double>(n) + c, alpha); }
    double base() const { return static_cast<double>(n_start) + c; }
};

struct MultiPowerSpec {
    std::vector<PowerTerm> terms;
    double q = 0.0;
};

struct ExplicitSpec {
    std::vector<double> levels;
    std::optional<PowerSpec> tail;
};

enum class Family { Power, MultiPower, Explicit };

/// Validated, immutable description of a spectrum.
class SpectrumSpec {
public:
    static SpectrumSpec power(const PowerSpec& p) {
        check_power(p.a, p.c, p.alpha, p.n_start, "power");
        if (!(p.q >= 0.0) || !std::isfinite(p.q)) raise(Errc::InvariantViolation, "power: q must be >= 0");
        return SpectrumSpec(p);
    }

    static SpectrumSpec multipower(const MultiPowerSpec& m) {
        if (m.terms.empty()) raise(Errc::InvariantViolation, "multipower: at least one term required");
        for (const auto& t : m.terms) check_power(t.a, t.c, t.alpha, t.n_start, "multipower term");
        if (!(m.q >= 0.0) || !std::isfinite(m.q)) raise(Errc::InvariantViolation, "multipower: q must be >= 0");
        return SpectrumSpec(m);
    }

    static SpectrumSpec explicit_levels(const ExplicitSpec& e) {
        if (e.levels.empty() && !e.tail) raise(Errc::InvariantViolation, "explicit: no levels");
        for (std::size_t i = 0; i < e.levels.size(); ++i) {
            if (!(e.levels[i] > 0.0) || !std::isfinite(e.levels[i]))
                raise(Errc::InvariantViolation, "explicit: levels must be positive and finite");
            if (i > 0 && e.levels[i] < e.levels[i - 1])
                raise(Errc::InvariantViolation, "explicit: levels must be non-decreasing");
        }
        if (e.tail) {
            power(*e.tail);
            if (!e.levels.empty() && e.tail->level(e.tail->n_start) < e.levels.back())
                raise(Errc::InvariantViolation, "explicit: tail must start at or above the last level");
        }
        return SpectrumSpec(e);
    }

    Family family() const { return static_cast<Family>(data_.index()); }
    const PowerSpec& as_power() const { return std::get<PowerSpec>(data_); }
    const MultiPowerSpec& as_multipower() const { return std::get<MultiPowerSpec>(data_); }
    const ExplicitSpec& as_explicit() const { return std::get<ExplicitSpec>(data_); }

    /// True for an Explicit list without a tail.
    bool is_finite() const { return family() == Family::Explicit && !as_explicit().tail; }

    /// Smallest eigenvalue.
    double lowest_level() const {
        switch (family()) {
            case Family::Power: return as_power().level(as_power().n_start);
            case Family::MultiPower: {
                const auto& m = as_multipower();
                double e = m.q;
                for (const auto& t : m.terms) e += t.level(t.n_start);
                return e;
            }
            case Family::Explicit: {
                const auto& e = as_explicit();
                return e.levels.empty() ? e.tail->level(e.tail->n_start) : e.levels.front();
            }
        }
        return 0.0;
    }

private:
    using Data = std::variant<PowerSpec, MultiPowerSpec, ExplicitSpec>;
    explicit SpectrumSpec(Data d) : data_(std::move(d)) {}

    static void check_power(double a, double c, double alpha, long n_start, const char* what) {
        const std::string w(what);
        if (!(a > 0.0) || !std::isfinite(a)) raise(Errc::InvariantViolation, w + ": a must be > 0");
        if (!(alpha > 0.0) || !std::isfinite(alpha)) raise(Errc::InvariantViolation, w + ": alpha must be > 0");
        if (!std::isfinite(c)) raise(Errc::InvariantViolation, w + ": c must be finite");
        if (!(static_cast<double>(n_start) + c > 0.0))
            raise(Errc::InvariantViolation, w + ": n_start + c must be > 0");
    }

    Data data_;
};

namespace catalog {

/// e_n = n, n >= 1: Riemann zeta.
inline SpectrumSpec riemann() { return SpectrumSpec::power({1.0, 0.0, 1.0, 0.0, 1}); }
/// e_n = n + c, n >= 0: Hurwitz zeta.
inline SpectrumSpec hurwitz(double c = 0.5) { return SpectrumSpec::power({1.0, c, 1.0, 0.0, 0}); }
/// e_n = n^2, n >= 1: heat trace (theta_3(0, t/pi) - 1)/2.
inline SpectrumSpec theta() { return SpectrumSpec::power({1.0, 0.0, 2.0, 0.0, 1}); }
/// e_n = a (n + c)^2 + q.
inline SpectrumSpec epstein_hurwitz(double a = 1.0, double c = 0.0, double q = 1.0) {
    return SpectrumSpec::power({a, c, 2.0, q, c > 0.0 ? 0L : 1L});
}
/// e_n = n^alpha, n >= 1.
inline SpectrumSpec power_family(double alpha) { return SpectrumSpec::power({1.0, 0.0, alpha, 0.0, 1}); }
/// e = n^2 + m^2, n, m >= 1.
inline SpectrumSpec epstein_2d() {
    return SpectrumSpec::multipower({{{1.0, 0.0, 2.0, 1}, {1.0, 0.0, 2.0, 1}}, 0.0});
}

}  // namespace catalog

/// Sorted best-first enumeration of a multi-index lattice. Ties are broken
/// by lexicographic multi-index.
class LevelEnumerator {
public:
    struct Level {
        double value;
        std::vector<long> index;
        bool operator>(const Level& o) const {
            if (value != o.value) return value > o.value;
            return index > o.index;
        }
    };

    explicit LevelEnumerator(const MultiPowerSpec& m) : spec_(m) {
        std::vector<long> start;
        for (const auto& t : m.terms) start.push_back(t.n_start);
        push(start);
    }

    Level next() {
        auto top = heap_.top();
        heap_.pop();
        seen_.erase(top.index);
        for (std::size_t i = 0; i < top.index.size(); ++i) {
            auto succ = top.index;
            ++succ[i];
            push(succ);
        }
        return top;
    }

private:
    // Every predecessor of an index pops before it, so tracking only the live
    // heap entries is enough to avoid duplicates.
    void push(const std::vector<long>& idx) {
        if (!seen_.insert(idx).second) return;
        double e = spec_.q;
        for (std::size_t i = 0; i < idx.size(); ++i) e += spec_.terms[i].level(idx[i]);
        heap_.push({e, idx});
    }

    MultiPowerSpec spec_;
    std::priority_queue<Level, std::vector<Level>, std::greater<>> heap_;
    std::set<std::vector<long>> seen_;
};

/// e_n under the indexing convention above.
inline double eigenvalue(const SpectrumSpec& spec, long n) {
    switch (spec.family()) {
        case Family::Power: {
            const auto& p = spec.as_power();
            if (n < p.n_start) raise(Errc::IndexOutOfRange, "eigenvalue: index below n_start");
            return p.level(n);
        }
        case Family::MultiPower: {
            if (n < 0) raise(Errc::IndexOutOfRange, "eigenvalue: negative index");
            LevelEnumerator en(spec.as_multipower());
            double v = 0.0;
            for (long i = 0; i <= n; ++i) v = en.next().value;
            return v;
        }
        case Family::Explicit: {
            const auto& e = spec.as_explicit();
            if (n < 0) raise(Errc::IndexOutOfRange, "eigenvalue: negative index");
            const auto size = static_cast<long>(e.levels.size());
            if (n < size) return e.levels[static_cast<std::size_t>(n)];
            if (!e.tail) raise(Errc::IndexOutOfRange, "eigenvalue: beyond finite explicit list");
            return e.tail->level(e.tail->n_start + (n - size));
        }
    }
    return 0.0;
}

struct Pole {
    double location;
    double residue;
};

struct PoleStructure {
    double abscissa = -std::numeric_limits<double>::infinity();
    std::vector<Pole> poles;  // strictly decreasing locations
    bool has_integer_pole = false;
    double rightmost = -std::numeric_limits<double>::infinity();
    /// Multi-term spectra only: max alpha_i, the alternative reading of the
    /// rightmost pole for such sums. Recorded, not used for evaluation.
    std::optional<double> max_exponent;

    const Pole* find(double s, double tol = 1e-9) const {
        for (const auto& p : poles)
            if (std::abs(p.location - s) < tol) return &p;
        return nullptr;
    }
};

/// One term c t^e of the small-t expansion of K(t).
struct SeriesTerm {
    double exponent;
    double coeff;
    double scale;  // sum of |contributions|; measures cancellation
};

/// K(t) ~ sum_j coeff_j t^exponent_j as t -> 0, exponents ascending. Only
/// exponentially small corrections are missing when every term is kept.
struct SmallTimeSeries {
    std::vector<SeriesTerm> terms;

    double evaluate(double t, double max_exponent = std::numeric_limits<double>::infinity()) const {
        double sum = 0.0;
        for (const auto& term : terms)
            if (term.exponent <= max_exponent + 1e-12) sum += term.coeff * std::pow(t, term.exponent);
        return sum;
    }
};

namespace detail {

inline constexpr double kExponentMatch = 1e-12;

inline bool near_integer(double x, double tol = 1e-12) { return std::abs(x - std::round(x)) < tol; }

inline void add_term(std::map<double, SeriesTerm>& acc, double e, double c) {
    for (auto it = acc.lower_bound(e - kExponentMatch); it != acc.end() && it->first <= e + kExponentMatch; ++it) {
        it->second.coeff += c;
        it->second.scale += std::abs(c);
        return;
    }
    acc.emplace(e, SeriesTerm{e, c, std::abs(c)});
}

inline std::vector<SeriesTerm> to_terms(const std::map<double, SeriesTerm>& acc) {
    std::vector<SeriesTerm> out;
    for (const auto& [e, t] : acc) out.push_back(t);
    return out;
}

// Series for sum_{n >= n_start} exp(-t a (n+c)^alpha):
//   Gamma(1 + 1/alpha) (a t)^(-1/alpha) + sum_k (-t)^k / k! a^k zeta_H(-alpha k, n_start + c)
inline std::vector<SeriesTerm> power_term_series(double a, double c, double alpha, long n_start, int k_max) {
    std::map<double, SeriesTerm> acc;
    add_term(acc, -1.0 / alpha, std::tgamma(1.0 + 1.0 / alpha) * std::pow(a, -1.0 / alpha));
    const double b = static_cast<double>(n_start) + c;
    double fact = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) fact *= k;
        double z;
        try {
            z = hurwitz_zeta(-alpha * k, b);
        } catch (const Error&) {
            break;
        }
        const double coef = ((k % 2) ? -1.0 : 1.0) * std::pow(a, k) * z / fact;
        if (!std::isfinite(coef)) break;
        add_term(acc, static_cast<double>(k), coef);
    }
    return to_terms(acc);
}

inline std::vector<SeriesTerm> multiply(const std::vector<SeriesTerm>& x, const std::vector<SeriesTerm>& y,
                                        double max_exponent) {
    std::map<double, SeriesTerm> acc;
    for (const auto& u : x)
        for (const auto& v : y) {
            const double e = u.exponent + v.exponent;
            if (e > max_exponent + kExponentMatch) continue;
            add_term(acc, e, u.coeff * v.coeff);
            // carry cancellation scale through products
            auto it = acc.lower_bound(e - kExponentMatch);
            it->second.scale += u.scale * v.scale - std::abs(u.coeff * v.coeff);
        }
    return to_terms(acc);
}

inline std::vector<SeriesTerm> exp_series(double q, int k_max) {
    std::vector<SeriesTerm> out;
    double c = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) c *= -q / k;
        out.push_back({static_cast<double>(k), c, std::abs(c)});
        if (q == 0.0) break;
    }
    return out;
}

}  // namespace detail

/// Small-t expansion of the heat trace, retaining exponents <= max_exponent.
inline SmallTimeSeries small_time_series(const SpectrumSpec& spec, double max_exponent) {
    const int k_cap = 60;
    auto power_like = [&](const std::vector<PowerTerm>& terms, double q) {
        double singular = 0.0;
        for (const auto& t : terms) singular += 1.0 / t.alpha;
        const int k_max = std::min(k_cap, static_cast<int>(std::ceil(max_exponent + singular)) + 1);
        std::vector<SeriesTerm> acc = detail::exp_series(q, std::max(k_max, 0));
        for (const auto& t : terms) {
            acc = detail::multiply(acc, detail::power_term_series(t.a, t.c, t.alpha, t.n_start, std::max(k_max, 0)),
                                   max_exponent);
        }
        return acc;
    };
    SmallTimeSeries out;
    switch (spec.family()) {
        case Family::Power: {
            const auto& p = spec.as_power();
            out.terms = power_like({{p.a, p.c, p.alpha, p.n_start}}, p.q);
            break;
        }
        case Family::MultiPower: {
            const auto& m = spec.as_multipower();
            out.terms = power_like(m.terms, m.q);
            break;
        }
        case Family::Explicit: {
            const auto& e = spec.as_explicit();
            std::map<double, SeriesTerm> acc;
            double fact = 1.0;
            for (int k = 0; k <= std::min(k_cap, static_cast<int>(std::floor(max_exponent))); ++k) {
                if (k > 0) fact *= k;
                double moment = 0.0;
                for (double lv : e.levels) moment += std::pow(lv, k);
                detail::add_term(acc, k, ((k % 2) ? -1.0 : 1.0) * moment / fact);
            }
            if (e.tail) {
                const auto& p = *e.tail;
                for (const auto& t : power_like({{p.a, p.c, p.alpha, p.n_start}}, p.q))
                    detail::add_term(acc, t.exponent, t.coeff);
            }
            out.terms = detail::to_terms(acc);
            break;
        }
    }
    return out;
}

/// Poles of zeta_spec(s) with location >= lowest, from closed-form pole data.
inline PoleStructure pole_structure(const SpectrumSpec& spec, double lowest = -10.0) {
    PoleStructure ps;
    auto finish = [&]() {
        std::sort(ps.poles.begin(), ps.poles.end(), [](const Pole& x, const Pole& y) { return x.location > y.location; });
        if (!ps.poles.empty()) ps.rightmost = ps.poles.front().location;
        ps.has_integer_pole = std::any_of(ps.poles.begin(), ps.poles.end(),
                                          [](const Pole& p) { return detail::near_integer(p.location); });
        return ps;
    };
    auto power_poles = [&](const PowerSpec& p) {
        const double inv = 1.0 / p.alpha;
        ps.abscissa = inv;
        if (p.q == 0.0) {
            ps.poles.push_back({inv, std::pow(p.a, -inv) / p.alpha});
            return;
        }
        // zeta(s) = sum_k C(-s, k) q^k a^(-s-k) zeta_H(alpha (s + k), b): the k-th
        // term has a simple pole at 1/alpha - k unless C(-s, k) vanishes there.
        const bool integral_inverse = detail::near_integer(inv);
        for (int k = 0;; ++k) {
            const double loc = inv - k;
            if (loc < lowest) break;
            if (integral_inverse && std::round(loc) <= 0.0) break;
            const double g = detail::binomial(-loc, k) * std::pow(p.q, k) * std::pow(p.a, -loc - k);
            if (g != 0.0) ps.poles.push_back({loc, g / p.alpha});
        }
    };
    switch (spec.family()) {
        case Family::Power: power_poles(spec.as_power()); break;
        case Family::Explicit:
            if (spec.as_explicit().tail) power_poles(*spec.as_explicit().tail);
            break;
        case Family::MultiPower: {
            const auto& m = spec.as_multipower();
            double sigma = 0.0, amax = 0.0;
            for (const auto& t : m.terms) {
                sigma += 1.0 / t.alpha;
                amax = std::max(amax, t.alpha);
            }
            ps.abscissa = sigma;
            ps.max_exponent = amax;
            // Gamma(s) zeta(s) has a pole at -e for every series exponent e; when
            // -e is a non-positive integer the pole belongs to Gamma alone.
            const auto series = small_time_series(spec, -lowest);
            for (const auto& term : series.terms) {
                const double loc = -term.exponent;
                if (loc < lowest - 1e-12) continue;
                if (term.exponent >= -1e-12 && detail::near_integer(term.exponent)) continue;
                if (std::abs(term.coeff) <= 1e-12 * term.scale) continue;
                ps.poles.push_back({loc, term.coeff * rgamma(loc)});
            }
            break;
        }
    }
    return finish();
}

namespace detail {

// log of an upper bound on Gamma(nu, z).
inline double log_upper_gamma_bound(double nu, double z) {
    if (nu <= 1.0) return (nu - 1.0) * std::log(z) - z;
    if (z > 2.0 * (nu - 1.0)) return std::log(2.0) + (nu - 1.0) * std::log(z) - z;
    return lgamma_abs(nu);
}

// log bound on sum_{n > N} exp(-t a (n + c)^alpha) by integral comparison.
inline double log_power_tail_bound(double a, double c, double alpha, double t, long N) {
    const double lambda = t * a;
    const double y = static_cast<double>(N) + c;
    const double z = lambda * std::pow(y, alpha);
    const double nu = 1.0 / alpha;
    return -std::log(alpha) - nu * std::log(lambda) + log_upper_gamma_bound(nu, z);
}

// Smallest N >= n_start - 1 whose tail bound (relative to exp(-t e_{n_start})
// when `scaled`) is <= tol.
inline long power_truncation(double a, double c, double alpha, long n_start, double t, double tol,
                             bool scaled = false) {
    const double shift = scaled ? t * a * std::pow(static_cast<double>(n_start) + c, alpha) : 0.0;
    const double log_tol = std::log(tol);
    auto ok = [&](long N) { return log_power_tail_bound(a, c, alpha, t, N) + shift <= log_tol; };
    long lo = n_start - 1;
    if (static_cast<double>(lo) + c > 0.0 && ok(lo)) return lo;
    long step = 1;
    long hi = n_start;
    while (!ok(hi)) {
        lo = hi;
        step *= 2;
        hi = n_start + step;
        if (step > (1L << 50)) raise(Errc::NonConvergent, "truncation_index: tail bound never met");
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (ok(mid)) hi = mid; else lo = mid;
    }
    return hi;
}

}  // namespace detail

/// N such that the omitted heat-trace tail beyond index N is <= tol.
/// Explicit spectra return the number of listed levels (plus tail terms).
inline long truncation_index(const SpectrumSpec& spec, double t, double tol) {
    if (!(t > 0.0)) raise(Errc::NonConvergent, "truncation_index: t must be > 0");
    if (!(tol > 0.0)) raise(Errc::DomainError, "truncation_index: tol must be > 0");
    switch (spec.family()) {
        case Family::Power: {
            const auto& p = spec.as_power();
            return detail::power_truncation(p.a, p.c, p.alpha, p.n_start, t, tol * std::exp(t * p.q));
        }
        case Family::Explicit: {
            const auto& e = spec.as_explicit();
            const long size = static_cast<long>(e.levels.size());
            if (!e.tail) return size;
            const auto& p = *e.tail;
            const long N = detail::power_truncation(p.a, p.c, p.alpha, p.n_start, t, tol * std::exp(t * p.q));
            return size + (N - p.n_start + 1);
        }
        case Family::MultiPower: {
            // Levels above Lambda contribute at most exp(-t Lambda / 2) K(t / 2).
            const auto& m = spec.as_multipower();
            double log_half = -0.5 * t * m.q;
            for (const auto& term : m.terms) {
                const long N = detail::power_truncation(term.a, term.c, term.alpha, term.n_start, 0.5 * t, 1e-17, true);
                double s = 0.0;
                const double e0 = term.level(term.n_start);
                for (long n = N; n >= term.n_start; --n) s += std::exp(-0.5 * t * (term.level(n) - e0));
                log_half += -0.5 * t * e0 + std::log(s);
            }
            const double lambda = 2.0 / t * (log_half - std::log(tol));
            LevelEnumerator en(m);
            long count = 0;
            while (true) {
                if (en.next().value > lambda) break;
                if (++count > 50000000L) raise(Errc::NonConvergent, "truncation_index: too many lattice levels");
            }
            return count;
        }
    }
    return 0;
}

}  // namespace spectral
