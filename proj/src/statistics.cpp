#include "maxproj/statistics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "maxproj/errors.hpp"
#include "maxproj/legendre.hpp"
#include "maxproj/quadrature.hpp"
#include "maxproj/special_functions.hpp"

namespace maxproj {

namespace {

constexpr double kPi = std::numbers::pi;

double clamped_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double squared_norm_of_mean(const SphericalSample& sample) {
    const auto m = sample.mean();
    double s = 0.0;
    for (double v : m) s += v * v;
    return s;
}

void require_nonempty(const SphericalSample& sample, const char* who) {
    if (sample.empty()) throw InputError(std::string(who) + ": empty sample");
}

// Sum over i < j of g(⟨U_i, U_j⟩).
template <class G>
double pairwise_sum(const SphericalSample& sample, G&& g) {
    const int n = sample.size();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto ui = sample.row(i);
        for (int j = i + 1; j < n; ++j) s += g(dot(ui, sample.row(j)));
    }
    return s;
}

}  // namespace

std::string to_string(PValueMethod m) {
    switch (m) {
        case PValueMethod::none: return "none";
        case PValueMethod::closed_form: return "closed_form";
        case PValueMethod::random_cover: return "random_cover";
        case PValueMethod::monte_carlo_null: return "monte_carlo_null";
        case PValueMethod::asymptotic: return "asymptotic";
    }
    return "none";
}

std::vector<double> t_stat_all(const SphericalSample& sample, int beta_max,
                               const DirectionCover& cover) {
    if (beta_max < 1) throw DomainError("t_stat: beta must be >= 1");
    if (cover.dim() != sample.dim())
        throw InputError("t_stat: cover dimension " + std::to_string(cover.dim()) +
                         " does not match sample dimension " + std::to_string(sample.dim()));
    require_nonempty(sample, "t_stat");
    if (cover.size() < 1) throw InputError("t_stat: empty cover");

    const int d = sample.dim();
    const int n = sample.size();
    const int m = cover.size();
    const auto nb = static_cast<std::size_t>(beta_max);

    // Blocks of cover points are processed with the block's accumulators
    // resident in L1; the inner loops run over cover points and vectorize.
    constexpr int kBlock = 256;
    std::vector<double> ct(static_cast<std::size_t>(d) * kBlock);
    std::vector<double> proj(kBlock), pw(kBlock);
    std::vector<double> acc(nb * kBlock);
    std::vector<double> psis(nb);
    for (int b = 1; b <= beta_max; ++b) psis[static_cast<std::size_t>(b - 1)] = psi(d, b);
    std::vector<double> best(nb, 0.0);
    const double inv_n = 1.0 / n;

    for (int k0 = 0; k0 < m; k0 += kBlock) {
        const int len = std::min(kBlock, m - k0);
        for (int k = 0; k < len; ++k) {
            const auto row = cover.points.row(k0 + k);
            for (int i = 0; i < d; ++i) ct[static_cast<std::size_t>(i) * kBlock + k] = row[i];
        }
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            const auto u = sample.row(j);
            double* p = proj.data();
            const double* c0 = ct.data();
            for (int k = 0; k < len; ++k) p[k] = c0[k] * u[0];
            for (int i = 1; i < d; ++i) {
                const double ui = u[i];
                const double* ci = ct.data() + static_cast<std::size_t>(i) * kBlock;
                for (int k = 0; k < len; ++k) p[k] += ci[k] * ui;
            }
            double* w = pw.data();
            for (int k = 0; k < len; ++k) w[k] = p[k];
            for (std::size_t b = 0; b < nb; ++b) {
                double* a = acc.data() + b * kBlock;
                for (int k = 0; k < len; ++k) a[k] += w[k];
                if (b + 1 < nb)
                    for (int k = 0; k < len; ++k) w[k] *= p[k];
            }
        }
        for (std::size_t b = 0; b < nb; ++b) {
            const double* a = acc.data() + b * kBlock;
            double bb = best[b];
            for (int k = 0; k < len; ++k) {
                const double dev = a[k] * inv_n - psis[b];
                bb = std::max(bb, dev * dev);
            }
            best[b] = bb;
        }
    }
    for (double& v : best) v *= n;
    return best;
}

TestOutcome t_stat(const SphericalSample& sample, int beta, const DirectionCover& cover) {
    const auto all = t_stat_all(sample, beta, cover);
    TestOutcome out;
    out.name = "T" + std::to_string(beta);
    out.value = all.back();
    out.method = PValueMethod::random_cover;
    out.cover_m = cover.size();
    out.seed = cover.seed;
    return out;
}

double t1_closed(const SphericalSample& sample) {
    require_nonempty(sample, "t1_closed");
    return sample.size() * squared_norm_of_mean(sample);
}

double t2_closed(const SphericalSample& sample) {
    require_nonempty(sample, "t2_closed");
    const int d = sample.dim();
    const auto s = sample.scatter();
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = s[static_cast<std::size_t>(i * d + j)];
    a.diagonal().array() -= 1.0 / d;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double r = std::max(std::abs(ev(0)), std::abs(ev(d - 1)));
    return sample.size() * r * r;
}

CircleStatistics circle_classical(const SphericalSample& sample) {
    if (sample.dim() != 2) throw InputError("circle_classical: requires d = 2");
    require_nonempty(sample, "circle_classical");
    const int n = sample.size();
    std::vector<double> ang(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto r = sample.row(i);
        double a = std::atan2(r[1], r[0]);
        if (a < 0) a += 2 * kPi;
        if (a >= 2 * kPi) a = 0.0;
        ang[static_cast<std::size_t>(i)] = a;
    }
    std::vector<double> x(ang);
    std::stable_sort(x.begin(), x.end());
    for (double& v : x) v /= 2 * kPi;

    double dplus = 0.0, dminus = 0.0, xbar = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double xi = x[static_cast<std::size_t>(i - 1)];
        dplus = std::max(dplus, static_cast<double>(i) / n - xi);
        dminus = std::max(dminus, xi - static_cast<double>(i - 1) / n);
        xbar += xi;
    }
    xbar /= n;
    double u2 = 1.0 / (12.0 * n);
    for (int i = 1; i <= n; ++i) {
        const double e = (x[static_cast<std::size_t>(i - 1)] - (i - 0.5) / n) - (xbar - 0.5);
        u2 += e * e;
    }

    double dist = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double delta = std::abs(ang[static_cast<std::size_t>(i)] - ang[static_cast<std::size_t>(j)]);
            dist += std::min(delta, 2 * kPi - delta);
        }

    const double r2 = squared_norm_of_mean(sample);
    const double rn = 2.0 * n * r2;
    CircleStatistics out;
    out.kuiper = std::sqrt(static_cast<double>(n)) * (dplus + dminus);
    out.watson_u2 = u2;
    out.ajne = n / 4.0 - dist / (n * kPi);
    out.rayleigh_mod = (1.0 - 1.0 / (2.0 * n)) * rn + n * r2 * r2 / 2.0;
    return out;
}

double ajne_sphere(const SphericalSample& sample) {
    require_nonempty(sample, "ajne");
    const int n = sample.size();
    return n / 4.0 - pairwise_sum(sample, clamped_acos) / (n * kPi);
}

double rayleigh_mod_sphere(const SphericalSample& sample) {
    require_nonempty(sample, "rayleigh");
    const int n = sample.size();
    const int d = sample.dim();
    const double rn = static_cast<double>(d) * n * squared_norm_of_mean(sample);
    return (1.0 - 1.0 / (2.0 * n)) * rn + rn * rn / (2.0 * n * (d + 2));
}

double bingham_stat(const SphericalSample& sample) {
    require_nonempty(sample, "bingham");
    const int n = sample.size();
    const int d = sample.dim();
    const auto s = sample.scatter();
    double tr = 0.0;
    for (double v : s) tr += v * v;
    return n * d * (d + 2) / 2.0 * (tr - 1.0 / d);
}

double gine_stat(const SphericalSample& sample) {
    const int d = sample.dim();
    if (d < 3) throw UnsupportedError("gine: G_n is only defined for d >= 3");
    require_nonempty(sample, "gine");
    const int n = sample.size();
    const double lg = std::lgamma(d / 2.0 - 1.0) - std::lgamma(d / 2.0);
    const double factor = (d - 1) * std::exp(2.0 * lg) / (2.0 * n);
    const double s = pairwise_sum(sample, [](double c) {
        c = std::clamp(c, -1.0, 1.0);
        return std::sqrt(std::max(0.0, 1.0 - c * c));
    });
    return n / 2.0 - factor * s;
}

SobolevStatistics sphere_sobolev(const SphericalSample& sample) {
    SobolevStatistics out{ajne_sphere(sample), rayleigh_mod_sphere(sample), bingham_stat(sample),
                          std::nullopt};
    if (sample.dim() >= 3) out.gine = gine_stat(sample);
    return out;
}

double ks_projection(const SphericalSample& sample, std::span<const double> direction) {
    require_nonempty(sample, "ks_projection");
    const int n = sample.size();
    const int d = sample.dim();
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        y[static_cast<std::size_t>(j)] = std::clamp(dot(sample.row(j), direction), -1.0, 1.0);
    std::stable_sort(y.begin(), y.end());
    double k = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double yi = y[static_cast<std::size_t>(i - 1)];
        // F(1) = 1 would hide a point mass at the pole; use the left limit.
        const double f = yi >= 1.0 ? 1.0 : projection_cdf(d, yi);
        k = std::max({k, static_cast<double>(i) / n - f, f - static_cast<double>(i - 1) / n});
    }
    return k;
}

TestOutcome ca_test(const SphericalSample& sample, int q, Rng& rng) {
    if (q < 1) throw DomainError("ca_test: q must be >= 1");
    const int d = sample.dim();
    const double rootn = std::sqrt(static_cast<double>(sample.size()));
    std::vector<double> h(static_cast<std::size_t>(d));
    double pmin = 1.0;
    for (int r = 0; r < q; ++r) {
        uniform_direction_into(h, rng);
        pmin = std::min(pmin, kolmogorov_survival(rootn * ks_projection(sample, h)));
    }
    TestOutcome out;
    out.name = "CA" + std::to_string(q);
    out.value = pmin;
    out.method = PValueMethod::asymptotic;
    return out;
}

namespace {

double zeta_circle(double t) {
    const double x = t / (2 * kPi);
    return 0.5 + x * (x - 1.0);
}

double zeta_d4(double t) {
    // (π − ϑ) tan(ϑ/2) = ε cot(ε/2) with ε = π − ϑ; series near ε = 0.
    const double eps = kPi - t;
    const double a = std::abs(eps) < 1e-4 ? 2.0 - eps * eps / 6.0 : eps * std::tan(t / 2);
    const double s = std::sin(t / 2);
    return zeta_circle(t) + (a - 2 * s * s) / (4 * kPi * kPi);
}

struct ZetaSpline {
    boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

constexpr int kZetaGrid = 1025;

std::mutex g_zeta_mutex;
std::map<int, std::shared_ptr<const ZetaSpline>> g_zeta_cache;

std::shared_ptr<const ZetaSpline> zeta_spline(int d) {
    std::lock_guard lock(g_zeta_mutex);
    auto it = g_zeta_cache.find(d);
    if (it != g_zeta_cache.end()) return it->second;
    std::vector<double> v(kZetaGrid);
    const double h = kPi / (kZetaGrid - 1);
    for (int i = 0; i < kZetaGrid; ++i) v[static_cast<std::size_t>(i)] = cvm_zeta_quadrature(d, i * h);
    // ζ(π − ε) = ζ(π + ε), so the slope at π vanishes; the slope at 0 is estimated.
    auto sp = std::make_shared<ZetaSpline>(ZetaSpline{boost::math::interpolators::cardinal_cubic_b_spline<double>(
        v.begin(), v.end(), 0.0, h, std::numeric_limits<double>::quiet_NaN(), 0.0)});
    g_zeta_cache.emplace(d, sp);
    return sp;
}

}  // namespace

double cvm_zeta_quadrature(int d, double theta) {
    if (d < 3) throw DomainError("cvm_zeta_quadrature: requires d >= 3");
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("cvm_zeta: theta outside [0, pi]");
    const double c = std::cos(theta / 2);
    const double tn = std::tan(theta / 2);
    // y = c(1 − w²) turns the half-integer power singularity of F_{d−2} at
    // the upper limit into a polynomial one.
    double integral = 0.0;
    if (c > 0.0) {
        integral = integrate(
            [&](double w) {
                const double y = c * (1.0 - w * w);
                const double z = y * tn / std::sqrt(std::max(1e-300, 1.0 - y * y));
                return 2.0 * c * w * projection_cdf(d, y) * projection_cdf(d - 1, z) *
                       projection_density(d, y);
            },
            0.0, 1.0, 1e-14, 1e-12);
    }
    const double fc = projection_cdf(d, c);
    return -4.0 * integral - 0.75 + theta / (2 * kPi) + 2.0 * fc * fc;
}

double cvm_zeta(int d, double theta) {
    if (d < 2) throw DomainError("cvm_zeta: d must be >= 2");
    theta = std::clamp(theta, 0.0, kPi);
    switch (d) {
        case 2: return zeta_circle(theta);
        case 3: return 0.5 - 0.25 * std::sin(theta / 2);
        case 4: return zeta_d4(theta);
        default: return zeta_spline(d)->spline(theta);
    }
}

TestOutcome cvm_test(const SphericalSample& sample) {
    require_nonempty(sample, "cvm_test");
    const int n = sample.size();
    const int d = sample.dim();
    double s = 0.0;
    if (d >= 5) {
        const auto sp = zeta_spline(d);
        s = pairwise_sum(sample, [&](double c) { return sp->spline(clamped_acos(c)); });
    } else {
        s = pairwise_sum(sample, [d](double c) { return cvm_zeta(d, clamped_acos(c)); });
    }
    TestOutcome out;
    out.name = "CvM";
    out.value = 2.0 / n * s + (3.0 * n - 2.0) / 6.0;
    out.method = PValueMethod::closed_form;
    return out;
}

}  // namespace maxproj
