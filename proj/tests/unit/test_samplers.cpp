#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "maxproj/errors.hpp"
#include "maxproj/legendre.hpp"
#include "maxproj/quadrature.hpp"
#include "maxproj/samplers.hpp"
#include "maxproj/special_functions.hpp"

using namespace maxproj;

namespace {

struct Moments {
    double mean, se;
};

template <class F>
Moments moments(const SphericalSample& s, F f) {
    double m1 = 0, m2 = 0;
    for (int i = 0; i < s.size(); ++i) {
        const double v = f(s.row(i));
        m1 += v;
        m2 += v * v;
    }
    m1 /= s.size();
    m2 /= s.size();
    return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1) / s.size())};
}

double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double dmax = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        dmax = std::max(dmax, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    const double ne = double(a.size()) * b.size() / (a.size() + b.size());
    return kolmogorov_survival(std::sqrt(ne) * dmax);
}

}  // namespace

TEST_CASE("gamma variates") {
    Rng rng(1);
    for (double shape : {0.5, 1.0, 2.5}) {
        const int n = 200000;
        double m1 = 0, m2 = 0;
        for (int i = 0; i < n; ++i) {
            const double g = sample_gamma(shape, rng);
            m1 += g;
            m2 += g * g;
        }
        m1 /= n;
        m2 /= n;
        CHECK(std::abs(m1 - shape) <= 4 * std::sqrt(shape / n));
        CHECK(m2 - m1 * m1 == doctest::Approx(shape).epsilon(0.03));
    }
}

TEST_CASE("vMF with zero concentration is uniform") {
    Rng rng(2);
    auto a = sample(vmf1(3, 0.0), 10000, rng);
    auto b = sample(UniformDist{3}, 10000, rng);
    std::vector<double> pa, pb;
    for (int i = 0; i < 10000; ++i) {
        pa.push_back(a.row(i)[0] * 0.6 + a.row(i)[1] * 0.8);
        pb.push_back(b.row(i)[0] * 0.6 + b.row(i)[1] * 0.8);
    }
    CHECK(ks_two_sample_p(pa, pb) > 0.01);
}

TEST_CASE("vMF mean resultant") {
    Rng rng(3);
    auto s = sample(vmf1(3, 1.0), 100000, rng);
    auto m = moments(s, [](auto x) { return x[0]; });
    CHECK(bessel_ratio_a(3, 1.0) == doctest::Approx(0.3130).epsilon(1e-3));
    CHECK(std::abs(m.mean - bessel_ratio_a(3, 1.0)) <= 4 * m.se);
    for (int d : {2, 5, 10})
        for (double k : {0.5, 2.0, 20.0}) {
            auto t = sample(vmf1(d, k), 50000, rng);
            auto mt = moments(t, [](auto x) { return x[0]; });
            CHECK(std::abs(mt.mean - bessel_ratio_a(d, k)) <= 4 * mt.se);
        }
}

TEST_CASE("Watson moments") {
    Rng rng(4);
    for (int d : {2, 3, 5})
        for (double k : {1.0, 2.0}) {
            auto s = sample(watson1(d, k), 100000, rng);
            auto m1 = moments(s, [](auto x) { return x[0]; });
            CHECK(std::abs(m1.mean) <= 4 * m1.se);
            auto m2 = moments(s, [](auto x) { return x[0] * x[0]; });
            CHECK(std::abs(m2.mean - watson_ratio_d(d, k)) <= 4 * m2.se);
        }
}

TEST_CASE("LP moments") {
    Rng rng(5);
    for (int d : {2, 3})
        for (int m = 1; m <= 4; ++m)
            for (double k : {0.5, 1.0}) {
                auto s = sample(lp(d, m, k), 100000, rng);
                auto mm = moments(s, [&](auto x) { return legendre_eval(d, m, std::clamp(x[0], -1.0, 1.0)); });
                CHECK(std::abs(mm.mean - k / nu(d, m)) <= 4 * mm.se);
            }
}

TEST_CASE("mixture moments") {
    Rng rng(6);
    auto s = sample(mix_vmf2(3, 0.25), 100000, rng);
    auto m = moments(s, [](auto x) { return x[0]; });
    const double want = 0.25 * -bessel_ratio_a(3, 1.0) + 0.75 * bessel_ratio_a(3, 4.0);
    CHECK(std::abs(m.mean - want) <= 4 * m.se);
    auto t = sample(mix_vmf3(3, 0.25), 100000, rng);
    const auto th2 = preset_theta2(3);
    auto mt = moments(t, [&](auto x) { return th2.dot(x); });
    const auto th3 = preset_theta3(3);
    const double want3 = 0.25 * bessel_ratio_a(3, 2.0) + 0.25 * bessel_ratio_a(3, 3.0) * th2.dot(th3) +
                         0.5 * bessel_ratio_a(3, 3.0) * th2[0];
    CHECK(std::abs(mt.mean - want3) <= 4 * mt.se);
}

TEST_CASE("Bingham second moments against quadrature") {
    Rng rng(7);
    for (int d : {2, 3})
        for (auto spec : {bing1(d, 1.0), bing2(d, 1.0), bing1(d, 0.25)}) {
            SamplerDiagnostics diag;
            auto s = sample(spec, 200000, rng, &diag);
            CHECK_FALSE(diag.metropolis_fallback);
            for (int a = 0; a < d; ++a) {
                auto m = moments(s, [a](auto x) { return x[a] * x[a]; });
                const double want =
                    sphere_integral([&](const double* x) { return x[a] * x[a] * density(spec, std::span<const double>(x, d)); }, d);
                CHECK(std::abs(m.mean - want) <= 4 * m.se);
            }
        }
}

TEST_CASE("Bingham in higher dimension") {
    Rng rng(8);
    SamplerDiagnostics diag;
    auto s = sample(bing2(10, 1.0), 20000, rng, &diag);
    CHECK_FALSE(diag.metropolis_fallback);
    CHECK(diag.accepted == 20000);
    // Most mass sits near ±e_d.
    auto m = moments(s, [](auto x) { return x[9] * x[9]; });
    CHECK(m.mean > 0.5);
    // A Watson spec and the equivalent Bingham spec draw the same law.
    auto w = sample(watson1(3, 2.0), 100000, rng);
    BinghamDist b{3, {2, 0, 0, 0, 0, 0, 0, 0, 0}};
    auto bb = sample(b, 100000, rng);
    auto mw = moments(w, [](auto x) { return x[0] * x[0]; });
    auto mb = moments(bb, [](auto x) { return x[0] * x[0]; });
    CHECK(std::abs(mw.mean - mb.mean) <= 4 * std::hypot(mw.se, mb.se));
}

TEST_CASE("densities") {
    for (int d : {2, 3, 5}) {
        std::vector<double> x(d, 0.0);
        x[1] = 1.0;
        CHECK(density(UniformDist{d}, x) == doctest::Approx(1 / surface_area(d)));
    }
    std::vector<double> neg = {-1.0, 0.0};
    CHECK(density(lp(2, 1, 1.0), neg) == 0.0);
    std::vector<double> e1 = {1.0, 0.0, 0.0};
    CHECK(density(vmf1(3, 1.0), e1) == doctest::Approx(std::exp(1.0) / (4 * std::numbers::pi * std::sinh(1.0))).epsilon(1e-13));
    for (int d : {2, 3})
        for (auto spec : {vmf1(d, 2.0), watson1(d, 1.5), bing2(d, 0.7), mix_vmf2(d, 0.3), lp(d, 3, 0.8), mix_vmf3(d, 0.25)}) {
            const double total = sphere_integral([&](const double* x) { return density(spec, std::span<const double>(x, d)); }, d);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    auto c5 = bingham_normalizer(std::get<BinghamDist>(bing1(5, 0.0)));
    CHECK(c5.value == doctest::Approx(surface_area(5)).epsilon(1e-12));
}

TEST_CASE("Bingham normalizer in higher dimension matches Watson") {
    // exp(κ x₁²) has normalizer d_d(κ).
    for (int d : {4, 5}) {
        std::vector<double> A(d * d, 0.0);
        A[0] = 1.2;
        auto c = bingham_normalizer(BinghamDist{d, A});
        CHECK(c.stderr_ > 0);
        CHECK(std::abs(c.value - watson_normalizer(d, 1.2)) <= 4 * c.stderr_);
    }
}

TEST_CASE("determinism and validation") {
    Rng a(9), b(9);
    auto s1 = sample(bing2(3, 1.0), 1000, a);
    auto s2 = sample(bing2(3, 1.0), 1000, b);
    CHECK(std::equal(s1.data().begin(), s1.data().end(), s2.data().begin()));
    Rng r(1);
    CHECK_THROWS_AS(sample(lp(2, 3, 1.5), 10, r), InputError);
    CHECK_THROWS_AS(sample(mix_vmf3(2, 0.6), 10, r), InputError);
    CHECK_THROWS_AS(sample(BinghamDist{2, {0, 1, 0, 0}}, 10, r), InputError);
}
