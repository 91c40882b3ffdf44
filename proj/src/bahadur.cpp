#include "maxproj/bahadur.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "maxproj/errors.hpp"
#include "maxproj/legendre.hpp"
#include "maxproj/quadrature.hpp"
#include "maxproj/special_functions.hpp"
#include "maxproj/zonal_kernel.hpp"

namespace maxproj {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr int kSeriesCap = 10000;
constexpr double kSeriesRelTol = 1e-17;

void check_alt(const BahadurAlternative& alt) {
    if (alt.cls == AlternativeClass::legendre && alt.m < 1)
        throw DomainError("Legendre alternative needs order m >= 1");
}

// Σ_l κ^l/l! c_{j,d}(l) / ν_d(j) = Σ_i Γ(d/2)(κ/2)^{j+2i} / (i! Γ(j+i+d/2)).
double vmf_moment_series(int j, int d, double kappa) {
    if (kappa == 0.0) return j == 0 ? 1.0 : 0.0;
    const double lk = std::log(kappa / 2);
    double sum = 0.0;
    for (int i = 0; i < kSeriesCap; ++i) {
        const double term = std::exp(std::lgamma(0.5 * d) + (j + 2 * i) * lk - std::lgamma(i + 1.0) -
                                     std::lgamma(j + i + 0.5 * d));
        sum += term;
        if (term <= kSeriesRelTol * sum) return sum;
    }
    throw NumericalError("vMF moment series did not converge", sum);
}

// Σ_l κ^l/l! c_{j,d}(2l) / ν_d(j), j even.
double watson_moment_series(int j, int d, double kappa) {
    if (kappa == 0.0) return j == 0 ? 1.0 : 0.0;
    const double lk = std::log(kappa);
    const int h = j / 2;
    double sum = 0.0;
    for (int l = h; l < kSeriesCap; ++l) {
        const double term = std::exp(std::lgamma(0.5 * d) + l * lk - std::lgamma(l + 1.0) +
                                     std::lgamma(2.0 * l + 1) - 2.0 * l * kLn2 -
                                     std::lgamma(l - h + 1.0) - std::lgamma(l + h + 0.5 * d));
        sum += term;
        if (term <= kSeriesRelTol * sum) return sum;
    }
    throw NumericalError("Watson moment series did not converge", sum);
}

// g(x) = (1+x) log(1+x) − x, with g(−1) = 1.
double entropy_kernel(double x) {
    if (x <= -1.0) return 1.0;
    if (std::abs(x) < 1e-3) {
        double s = 0.0, p = x;
        for (int n = 2; n < 12; ++n) {
            p *= x;
            s += ((n % 2) ? -p : p) / (n * (n - 1.0));
        }
        return s;
    }
    return (1.0 + x) * std::log1p(x) - x;
}

double dot_e1(std::span<const double> b) { return b[0]; }

}  // namespace

std::string to_string(const BahadurAlternative& alt) {
    switch (alt.cls) {
        case AlternativeClass::vmf: return "vMF";
        case AlternativeClass::watson: return "W";
        case AlternativeClass::legendre: return "LP" + std::to_string(alt.m);
    }
    return "?";
}

BahadurAlternative parse_bahadur_alternative(const std::string& s) {
    if (s == "vMF" || s == "vmf") return BahadurAlternative::vmf();
    if (s == "W" || s == "watson" || s == "Watson") return BahadurAlternative::watson();
    if ((s.rfind("LP", 0) == 0 || s.rfind("lp", 0) == 0) && s.size() > 2) {
        try {
            std::size_t used = 0;
            const int m = std::stoi(s.substr(2), &used);
            if (used == s.size() - 2 && m >= 1) return BahadurAlternative::legendre(m);
        } catch (const std::exception&) {
        }
    }
    throw InputError("unknown Bahadur alternative '" + s + "' (expected vMF, W or LP<m>)");
}

double kl_divergence(const BahadurAlternative& alt, int d, double kappa) {
    check_alt(alt);
    if (!(kappa > 0.0)) throw DomainError("kl_divergence: kappa must be > 0");
    switch (alt.cls) {
        case AlternativeClass::vmf:
            return bessel_ratio_a(d, kappa) * kappa - log_vmf_normalizer_ratio(d, kappa);
        case AlternativeClass::watson:
            return watson_ratio_d(d, kappa) * kappa - log_watson_normalizer_ratio(d, kappa);
        case AlternativeClass::legendre: {
            if (kappa > 1.0) throw DomainError("kl_divergence: Legendre alternative needs kappa <= 1");
            const auto& c = legendre_coefficients_double(d, alt.m);
            const double w = surface_area(d - 1) / surface_area(d);
            return w * weighted_integral(
                           [&](double t) { return entropy_kernel(kappa * legendre_eval_coeffs(c, t)); }, d,
                           1e-16);
        }
    }
    return 0.0;
}

double gamma_profile(const BahadurAlternative& alt, int beta, int d, double kappa, double t) {
    check_alt(alt);
    if (kappa < 0.0) throw DomainError("gamma_profile: kappa must be >= 0");
    if (beta < 1) throw DomainError("gamma_profile: beta must be >= 1");
    const auto& pe = power_expansion(d, beta);
    switch (alt.cls) {
        case AlternativeClass::vmf: {
            const double norm = std::exp(-log_vmf_normalizer_ratio(d, kappa));
            double s = 0.0;
            for (int j = 1; j <= beta; ++j) {
                const double c = pe[j];
                if (c == 0.0) continue;
                s += c * legendre_eval(d, j, t) * vmf_moment_series(j, d, kappa);
            }
            return norm * s;
        }
        case AlternativeClass::watson: {
            const double norm = std::exp(-log_watson_normalizer_ratio(d, kappa));
            double s = 0.0;
            for (int j = 2; j <= beta; j += 2) {
                const double c = pe[j];
                if (c == 0.0) continue;
                s += c * legendre_eval(d, j, t) * watson_moment_series(j, d, kappa);
            }
            return norm * s;
        }
        case AlternativeClass::legendre:
            if (alt.m > beta) return 0.0;
            return kappa * pe[alt.m] / static_cast<double>(nu(d, alt.m)) * legendre_eval(d, alt.m, t);
    }
    return 0.0;
}

double gamma_shift(const BahadurAlternative& alt, int beta, int d, double kappa,
                   const DirectionCover& cover) {
    if (cover.dim() != d) throw InputError("gamma_shift: cover dimension mismatch");
    double best = 0.0;
    for (int k = 0; k < cover.size(); ++k) {
        const double g = gamma_profile(alt, beta, d, kappa, std::clamp(dot_e1(cover.points.row(k)), -1.0, 1.0));
        best = std::max(best, g * g);
    }
    return best;
}

double gamma_shift_exact(const BahadurAlternative& alt, int beta, int d, double kappa) {
    constexpr int kGrid = 2000;
    auto g2 = [&](double t) {
        const double g = gamma_profile(alt, beta, d, kappa, std::clamp(t, -1.0, 1.0));
        return g * g;
    };
    int best_i = 0;
    double best = -1.0;
    for (int i = 0; i <= kGrid; ++i) {
        const double v = g2(-1.0 + 2.0 * i / kGrid);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    const double h = 2.0 / kGrid;
    const double lo = std::max(-1.0, -1.0 + (best_i - 1) * h);
    const double hi = std::min(1.0, -1.0 + (best_i + 1) * h);
    const auto r = boost::math::tools::brent_find_minima([&](double t) { return -g2(t); }, lo, hi, 52);
    return std::max(best, -r.second);
}

double slope_denominator(int beta, int d) { return ZonalKernel(beta, d).variance(); }

double slope(const BahadurAlternative& alt, int beta, int d, double kappa, const DirectionCover& cover) {
    return gamma_shift(alt, beta, d, kappa, cover) / slope_denominator(beta, d);
}

double slope_exact(const BahadurAlternative& alt, int beta, int d, double kappa) {
    return gamma_shift_exact(alt, beta, d, kappa) / slope_denominator(beta, d);
}

double local_limit_target(const BahadurAlternative& alt, int beta, int d) {
    check_alt(alt);
    const int r = alt.cls == AlternativeClass::vmf ? 1 : alt.cls == AlternativeClass::watson ? 2 : alt.m;
    if (r > beta) return 0.0;
    const auto spec = ZonalKernel(beta, d).spectrum_exact();
    const Rational v = spec[static_cast<std::size_t>(r)] * nu(d, r);
    return static_cast<double>(v);
}

double local_are(const BahadurAlternative& alt, int beta, int d) {
    check_alt(alt);
    const int r = alt.cls == AlternativeClass::vmf ? 1 : alt.cls == AlternativeClass::watson ? 2 : alt.m;
    if (r > beta) return 0.0;
    const auto spec = ZonalKernel(beta, d).spectrum_exact();
    Rational total = 0;
    for (int j = 1; j <= beta; ++j) total += spec[static_cast<std::size_t>(j)] * nu(d, j);
    return static_cast<double>(Rational(spec[static_cast<std::size_t>(r)] * nu(d, r) / total));
}

std::vector<AreEntry> are_table() {
    std::vector<AreEntry> out;
    auto add = [&](BahadurAlternative alt, std::initializer_list<int> betas) {
        for (int beta : betas)
            for (int d : {2, 3, 5, 10}) out.push_back({alt, beta, d, local_are(alt, beta, d)});
    };
    add(BahadurAlternative::vmf(), {1, 3, 5});
    add(BahadurAlternative::watson(), {2, 4, 6});
    add(BahadurAlternative::legendre(1), {1, 3, 5});
    add(BahadurAlternative::legendre(2), {2, 4, 6});
    add(BahadurAlternative::legendre(3), {3, 5});
    add(BahadurAlternative::legendre(4), {4, 6});
    add(BahadurAlternative::legendre(5), {5});
    add(BahadurAlternative::legendre(6), {6});
    return out;
}

double richardson_kappa2(double k1, double r1, double k2, double r2) {
    const double a = k1 * k1, b = k2 * k2;
    return (r2 * a - r1 * b) / (a - b);
}

BahadurReport bahadur_report(const BahadurAlternative& alt, int beta, int d,
                             const std::vector<double>& kappas) {
    if (kappas.size() < 2) throw InputError("bahadur_report: need at least two kappa values");
    BahadurReport rep;
    rep.alt = alt;
    rep.beta = beta;
    rep.d = d;
    rep.kappas = kappas;
    const double denom = slope_denominator(beta, d);
    for (double k : kappas) {
        const double g2 = gamma_shift_exact(alt, beta, d, k);
        const double kl = kl_divergence(alt, d, k);
        rep.max_gamma2.push_back(g2);
        rep.kl.push_back(kl);
        rep.slopes.push_back(g2 / denom);
        rep.ratios.push_back(g2 / (2.0 * kl));
    }
    const auto n = kappas.size();
    rep.extrapolated_ratio = richardson_kappa2(kappas[n - 2], rep.ratios[n - 2], kappas[n - 1], rep.ratios[n - 1]);
    rep.target = local_limit_target(alt, beta, d);
    rep.are = local_are(alt, beta, d);
    return rep;
}

}  // namespace maxproj
