#include "maxproj/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "maxproj/errors.hpp"
#include "maxproj/geometry.hpp"

namespace maxproj {

namespace {
constexpr int kMaxTerms = 10000;
constexpr double kRelTol = 1e-17;
constexpr double kMaxKappa = 50.0;

void check_kappa(double kappa, const char* who) {
    if (!(kappa >= 0.0)) throw DomainError(std::string(who) + ": kappa must be >= 0");
    if (kappa > kMaxKappa) throw DomainError(std::string(who) + ": kappa above supported range 50");
}

// Σ_{r≥1} (κ/2)^{2r} Γ(p+1)/(Γ(p+r+1) r!): I_p(κ)/leading term − 1.
double bessel_tail(double p, double kappa) {
    const double q = 0.25 * kappa * kappa;
    double term = 1.0, sum = 0.0;
    for (int r = 0; r < kMaxTerms; ++r) {
        term *= q / ((p + r + 1.0) * (r + 1.0));
        sum += term;
        if (term <= kRelTol * sum) return sum;
        if (term == 0.0) return sum;
    }
    throw NumericalError("bessel series did not converge", term);
}
}  // namespace

double bessel_i(double p, double kappa) {
    check_kappa(kappa, "bessel_i");
    if (p < 0) throw DomainError("bessel_i: order must be >= 0");
    if (kappa == 0.0) return p == 0.0 ? 1.0 : 0.0;
    const double lead = std::exp(p * std::log(0.5 * kappa) - std::lgamma(p + 1.0));
    return lead * (1.0 + bessel_tail(p, kappa));
}

double kummer_m_minus_one(double a, double b, double kappa) {
    check_kappa(kappa, "kummer_m");
    if (!(b > a && a > 0)) throw DomainError("kummer_m: requires b > a > 0");
    double term = 1.0, sum = 0.0;
    for (int r = 0; r < kMaxTerms; ++r) {
        term *= (a + r) / (b + r) * kappa / (r + 1.0);
        sum += term;
        if (term <= kRelTol * sum || term == 0.0) return sum;
    }
    throw NumericalError("kummer series did not converge", term);
}

double kummer_m(double a, double b, double kappa) { return 1.0 + kummer_m_minus_one(a, b, kappa); }

double bessel_ratio_a(int d, double kappa) {
    check_kappa(kappa, "A_d");
    if (kappa == 0.0) return 0.0;
    const double p = 0.5 * d;
    // I_p/I_{p−1} = (κ/2)/p · (1 + tail_p)/(1 + tail_{p−1})
    return 0.5 * kappa / p * (1.0 + bessel_tail(p, kappa)) / (1.0 + bessel_tail(p - 1.0, kappa));
}

double vmf_normalizer(int d, double kappa) {
    return surface_area(d) * std::exp(log_vmf_normalizer_ratio(d, kappa));
}

double log_vmf_normalizer_ratio(int d, double kappa) {
    check_kappa(kappa, "a_d");
    if (kappa == 0.0) return 0.0;
    // a_d/|S| = Γ(d/2)(κ/2)^{1−d/2} I_{d/2−1}(κ) = 1 + tail
    return std::log1p(bessel_tail(0.5 * d - 1.0, kappa));
}

double watson_ratio_d(int d, double kappa) {
    return kummer_m(1.5, 0.5 * d + 1.0, kappa) / (d * kummer_m(0.5, 0.5 * d, kappa));
}

double watson_normalizer(int d, double kappa) {
    return surface_area(d) * kummer_m(0.5, 0.5 * d, kappa);
}

double log_watson_normalizer_ratio(int d, double kappa) {
    return std::log1p(kummer_m_minus_one(0.5, 0.5 * d, kappa));
}

double kolmogorov_survival(double x) {
    if (x <= 0.0) return 1.0;
    constexpr double pi = std::numbers::pi;
    if (x < 1.0) {
        // CDF = √(2π)/x Σ_{k≥1} exp(−(2k−1)²π²/(8x²))
        double cdf = 0.0;
        for (int k = 1; k < 100; ++k) {
            const double term = std::exp(-(2.0 * k - 1) * (2.0 * k - 1) * pi * pi / (8.0 * x * x));
            cdf += term;
            if (term < 1e-18) break;
        }
        return 1.0 - std::sqrt(2.0 * pi) / x * cdf;
    }
    double s = 0.0;
    for (int k = 1; k < 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 ? term : -term);
        if (term < 1e-18) break;
    }
    return 2.0 * s;
}

double projection_cdf(int d, double y) {
    if (d < 2) throw DomainError("projection_cdf: d must be >= 2");
    if (y <= -1.0) return 0.0;
    if (y >= 1.0) return 1.0;
    if (y == 0.0) return 0.5;
    if (d == 2) return 1.0 - std::acos(y) / std::numbers::pi;
    if (d == 3) return 0.5 * (1.0 + y);
    const double ib = boost::math::ibeta(0.5, 0.5 * (d - 1), y * y);
    return 0.5 * (1.0 + (y > 0 ? ib : -ib));
}

double projection_density(int d, double t) {
    if (!(std::abs(t) < 1.0)) return (d == 3 && std::abs(t) == 1.0) ? 0.5 : 0.0;
    return surface_area(d - 1) / surface_area(d) * std::pow(1.0 - t * t, 0.5 * (d - 3));
}

}  // namespace maxproj
