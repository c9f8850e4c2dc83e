#pragma once

// Real-argument Gamma, digamma, Riemann and Hurwitz zeta functions.
//
// The zeta functions are built on Euler-Maclaurin summation:
//
//   zeta(s, a) = sum_{n<N} (n+a)^-s + x^(1-s)/(s-1) + x^-s/2
//              + sum_k B_2k/(2k)! (s)_(2k-1) x^(-s-2k+1),      x = N + a
//
// which continues to every real s != 1. For negative s the partial
// sum cancels catastrophically, so Riemann zeta switches to the reflection
// formula and Hurwitz zeta to a Taylor expansion in the offset around a = 1
// whose coefficients are Riemann zeta values.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "spectral/error.hpp"

namespace spectral {

namespace detail {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;
inline constexpr double kPoleGuard = 1e-8;

// B_0, B_2, ..., B_60 rendered from their exact rational values.
inline constexpr std::array<double, 31> kBernoulliEven = {
    1.0,                      // 1
    0.16666666666666666,      // 1/6
    -0.03333333333333333,     // -1/30
    0.023809523809523808,     // 1/42
    -0.03333333333333333,     // -1/30
    0.07575757575757576,      // 5/66
    -0.2531135531135531,      // -691/2730
    1.1666666666666667,       // 7/6
    -7.092156862745098,       // -3617/510
    54.971177944862156,       // 43867/798
    -529.1242424242424,       // -174611/330
    6192.123188405797,        // 854513/138
    -86580.25311355312,       // -236364091/2730
    1425517.1666666667,       // 8553103/6
    -27298231.067816094,      // -23749461029/870
    601580873.9006424,        // 8615841276005/14322
    -15116315767.092157,      // -7709321041217/510
    429614643061.1667,        // 2577687858367/6
    -13711655205088.332,      // -26315271553053477373/1919190
    488332318973593.2,        // 2929993913841559/6
    -1.9296579341940068e+16,  // -261082718496449122051/13530
    8.416930475736826e+17,    // 1520097643918070802691/1806
    -4.0338071854059454e+19,  // -27833269579301024235023/690
    2.1150748638081993e+21,   // 596451111593912163277961/282
    -1.2086626522296526e+23,  // -5609403368997817686249127547/46410
    7.500866746076964e+24,    // 495057205241079648212477525/66
    -5.038778101481069e+26,   // -801165718135489957347924991853/1590
    3.6528776484818122e+28,   // 29149963634884862421418123812691/798
    -2.849876930245088e+30,   // -2479392929313226753685415739663229/870
    2.3865427499683627e+32,   // 84483613348880041862046775994036021/354
    -2.1399949257225335e+34,  // -1215233140483755572040304994079820246041491/56786730
};

// B_2k / (2k)!, k = 0..30.
inline const std::array<double, 31>& bernoulli_over_factorial() {
    static const std::array<double, 31> table = [] {
        std::array<double, 31> t{};
        double fact = 1.0;
        for (int k = 0; k <= 30; ++k) {
            if (k > 0) fact *= static_cast<double>(2 * k - 1) * static_cast<double>(2 * k);
            t[k] = kBernoulliEven[k] / fact;
        }
        return t;
    }();
    return table;
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

inline bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

/// sin(pi x) with exact zeros at the integers.
inline double sin_pi(double x) {
    double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
    const double sign = r < 0.0 ? -1.0 : 1.0;
    const double ar = std::abs(r);
    if (ar <= 0.25) return sign * std::sin(kPi * ar);
    if (ar <= 0.75) return sign * std::cos(kPi * (0.5 - ar));
    return sign * std::sin(kPi * (1.0 - ar));
}

/// cos(pi x) with exact zeros at the half-integers.
inline double cos_pi(double x) {
    const double ar = std::abs(x - 2.0 * std::round(0.5 * x));
    if (ar <= 0.25) return std::cos(kPi * ar);
    if (ar <= 0.75) return std::sin(kPi * (0.5 - ar));
    return -std::cos(kPi * (1.0 - ar));
}

inline double lgamma_abs(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

/// Generalized binomial coefficient C(x, k).
inline double binomial(double x, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c *= (x - i) / (i + 1);
    return c;
}

// zeta(s, a) = regular + xpow / (s - 1). Splitting out the pole term lets the
// caller form (s - 1) zeta(s, a) without cancellation near s = 1.
struct EmParts {
    double regular = 0.0;
    double xpow = 0.0;
};

inline EmParts hurwitz_em(double s, double a) {
    const double as = std::abs(s);
    const double x_min = s < 0.0 ? 2.0 * as + 10.0 : std::max(10.0, (as + 20.0) / kPi);
    const long n_direct = a >= x_min ? 0L : static_cast<long>(std::ceil(x_min - a));
    double sum = 0.0;
    for (long n = n_direct - 1; n >= 0; --n) sum += std::pow(static_cast<double>(n) + a, -s);
    const double x = static_cast<double>(n_direct) + a;
    const double xs = std::pow(x, -s);
    EmParts parts;
    parts.xpow = x * xs;
    parts.regular = sum + 0.5 * xs;
    const auto& bf = bernoulli_over_factorial();
    double pochhammer_pow = s * xs / x;  // (s)_1 x^(-s-1)
    const double magnitude = std::abs(parts.regular) + std::abs(parts.xpow / (s - 1.0));
    for (int k = 1; k <= 30; ++k) {
        const double term = bf[k] * pochhammer_pow;
        parts.regular += term;
        if (std::abs(term) <= 1e-17 * magnitude) break;
        pochhammer_pow *= (s + 2 * k - 1) * (s + 2 * k) / (x * x);
    }
    return parts;
}

// Direct summation for large s, where the terms fall off geometrically.
inline double hurwitz_direct_large_s(double s, double a) {
    double sum = 0.0;
    double term = 0.0;
    long n = 0;
    do {
        term = std::pow(static_cast<double>(n) + a, -s);
        sum += term;
        ++n;
    } while (term > 1e-18 * sum && n < 1000000);
    const double x = static_cast<double>(n) + a;
    return sum + std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
}

}  // namespace detail

/// Gamma function on the real line.
inline double gamma(double x) {
    if (!std::isfinite(x)) raise(Errc::DomainError, "gamma: non-finite argument");
    if (detail::is_nonpositive_integer(x)) raise(Errc::PoleArgument, "gamma: pole at x = " + std::to_string(x));
    const double v = std::tgamma(x);
    if (!std::isfinite(v)) raise(Errc::Overflow, "gamma: |Gamma(x)| not representable at x = " + std::to_string(x));
    return v;
}

/// 1/Gamma(x); entire, zero at the non-positive integers.
inline double rgamma(double x) {
    if (detail::is_nonpositive_integer(x)) return 0.0;
    if (x > 171.0) return std::exp(-detail::lgamma_abs(x));
    if (x < 0.5) {
        // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
        const double s = detail::sin_pi(x);
        if (1.0 - x > 171.0) {
            return (s < 0 ? -1.0 : 1.0) * std::exp(std::log(std::abs(s)) + detail::lgamma_abs(1.0 - x)) /
                   detail::kPi;
        }
        return s * std::tgamma(1.0 - x) / detail::kPi;
    }
    return 1.0 / std::tgamma(x);
}

/// Digamma psi(x) = Gamma'(x)/Gamma(x).
inline double digamma(double x) {
    if (detail::is_nonpositive_integer(x)) raise(Errc::PoleArgument, "digamma: pole");
    if (x < 0.0) {
        return digamma(1.0 - x) - detail::kPi * detail::cos_pi(x) / detail::sin_pi(x);
    }
    double shift = 0.0;
    while (x < 12.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    double series = 0.0;
    double pw = inv2;
    for (int k = 1; k <= 8; ++k) {
        series += detail::kBernoulliEven[k] / (2.0 * k) * pw;
        pw *= inv2;
    }
    return shift + std::log(x) - 0.5 / x - series;
}

/// Bernoulli number B_n for 0 <= n <= 61.
inline double bernoulli_number(int n) {
    if (n < 0 || n > 61) raise(Errc::DomainError, "bernoulli_number: index out of table range");
    if (n == 1) return -0.5;
    if (n % 2 == 1) return 0.0;
    return detail::kBernoulliEven[n / 2];
}

/// Bernoulli polynomial B_n(x) for 0 <= n <= 61.
inline double bernoulli_polynomial(int n, double x) {
    double sum = 0.0;
    double c = 1.0;  // C(n, k)
    for (int k = 0; k <= n; ++k) {
        const double b = bernoulli_number(k);
        if (b != 0.0) sum += c * b * std::pow(x, n - k);
        c = c * (n - k) / (k + 1);
    }
    return sum;
}

inline double riemann_zeta(double s);

namespace detail {

/// (s - 1) zeta(s), regular at s = 1 where it equals 1.
inline double riemann_sm1(double s) {
    if (std::abs(s - 1.0) < 0.5) {
        if (s == 1.0) return 1.0;
        const auto p = hurwitz_em(s, 1.0);
        return (s - 1.0) * p.regular + p.xpow;
    }
    return (s - 1.0) * riemann_zeta(s);
}

// zeta(s, 1 + x) = sum_k (-x)^k (s)_k / k! zeta(s + k), |x| <= 1/2.
inline double hurwitz_taylor(double s, double b) {
    const double x = b - 1.0;
    if (x == 0.0) return riemann_zeta(s);
    double sum = 0.0;
    double coef = 1.0;     // (-x)^k / k!
    double poch = 1.0;     // (s)_k
    double poch_prev = 1.0;
    int small_run = 0;
    for (int k = 0; k < 600; ++k) {
        if (k > 0) {
            coef *= -x / k;
            poch_prev = poch;
            poch *= s + k - 1;
        }
        const double u = s + k;
        double term;
        if (k > 0 && std::abs(u - 1.0) < 0.5) {
            term = coef * poch_prev * riemann_sm1(u);
        } else {
            term = coef * poch * riemann_zeta(u);
        }
        sum += term;
        if (k > -s + 2 && std::abs(term) <= 1e-17 * std::abs(sum)) {
            if (++small_run >= 2) break;
        } else {
            small_run = 0;
        }
    }
    return sum;
}

// Hurwitz zeta without the near-pole guard; used by composite formulas that
// handle the pole themselves.
inline double hurwitz_unchecked(double s, double a) {
    if (s == 1.0) return std::numeric_limits<double>::infinity();
    if (is_nonpositive_integer(s) && s >= -60.0) {
        const int m = static_cast<int>(-s);
        return -bernoulli_polynomial(m + 1, a) / (m + 1);
    }
    if (s > 40.0 && a <= 20.0) return hurwitz_direct_large_s(s, a);
    if (s < -1.0 && a < 2.0 * std::abs(s) + 10.0) {
        double b = a;
        double correction = 0.0;
        while (b < 0.5) {
            correction += std::pow(b, -s);
            b += 1.0;
        }
        while (b >= 1.5) {
            b -= 1.0;
            correction -= std::pow(b, -s);
        }
        return hurwitz_taylor(s, b) + correction;
    }
    const auto p = hurwitz_em(s, a);
    return p.regular + p.xpow / (s - 1.0);
}

}  // namespace detail

/// Riemann zeta function for real s != 1.
inline double riemann_zeta(double s) {
    if (!std::isfinite(s)) raise(Errc::DomainError, "riemann_zeta: non-finite argument");
    if (std::abs(s - 1.0) < detail::kPoleGuard) raise(Errc::PoleArgument, "riemann_zeta: pole at s = 1");
    if (s == 0.0) return -0.5;
    if (s < 0.0 && detail::is_integer(s) && std::fmod(s, 2.0) == 0.0) return 0.0;
    if (s > 40.0) return detail::hurwitz_direct_large_s(s, 1.0);
    if (s > 0.0) {
        const auto p = detail::hurwitz_em(s, 1.0);
        return p.regular + p.xpow / (s - 1.0);
    }
    // zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
    const double zr = riemann_zeta(1.0 - s);
    const double sn = detail::sin_pi(0.5 * s);
    if (s > -140.0) {
        return std::pow(2.0, s) * std::pow(detail::kPi, s - 1.0) * sn * std::tgamma(1.0 - s) * zr;
    }
    const double lg = s * std::log(2.0) + (s - 1.0) * std::log(detail::kPi) + detail::lgamma_abs(1.0 - s) +
                      std::log(std::abs(sn)) + std::log(zr);
    if (lg > 709.0) raise(Errc::Overflow, "riemann_zeta: result not representable");
    return (sn < 0 ? -1.0 : 1.0) * std::exp(lg);
}

/// Hurwitz zeta function sum_{n>=0} (n + a)^-s, continued to real s != 1.
inline double hurwitz_zeta(double s, double a) {
    if (!std::isfinite(s) || !std::isfinite(a)) raise(Errc::DomainError, "hurwitz_zeta: non-finite argument");
    if (a <= 0.0) raise(Errc::DomainError, "hurwitz_zeta: requires a > 0");
    if (std::abs(s - 1.0) < detail::kPoleGuard) raise(Errc::PoleArgument, "hurwitz_zeta: pole at s = 1");
    if (a == 1.0) return riemann_zeta(s);
    return detail::hurwitz_unchecked(s, a);
}

/// Riemann zeta evaluated through the symmetric functional equation
///   pi^(-s/2) Gamma(s/2) zeta(s) = pi^(-(1-s)/2) Gamma((1-s)/2) zeta(1-s),
/// solved for zeta(s). Independent of riemann_zeta's own reflection branch.
inline double reflect_riemann(double s) {
    if (!std::isfinite(s)) raise(Errc::DomainError, "reflect_riemann: non-finite argument");
    if (std::abs(s - 1.0) < detail::kPoleGuard) raise(Errc::PoleArgument, "reflect_riemann: pole at s = 1");
    const double pref = std::pow(detail::kPi, s - 0.5);
    if (std::abs(s) < 0.5) {
        // rgamma(s/2) zeta(1-s) = -rgamma(1 + s/2) (-s) zeta(1-s) / 2
        return pref * std::tgamma(0.5 * (1.0 - s)) * (-0.5) * rgamma(1.0 + 0.5 * s) * detail::riemann_sm1(1.0 - s);
    }
    if (s > 1.0 && detail::is_integer(s) && std::fmod(s, 2.0) != 0.0) {
        // Gamma((1-s)/2) zeta(1-s) at a trivial zero of zeta(1-s):
        // limit 2 (2 pi)^-s Gamma(s) zeta(s) pi / Gamma((1+s)/2).
        const double lim = 2.0 * std::pow(2.0 * detail::kPi, -s) * std::tgamma(s) * riemann_zeta(s) * detail::kPi *
                           rgamma(0.5 * (1.0 + s));
        return pref * rgamma(0.5 * s) * lim;
    }
    return pref * std::tgamma(0.5 * (1.0 - s)) * rgamma(0.5 * s) * riemann_zeta(1.0 - s);
}

}  // namespace spectral
