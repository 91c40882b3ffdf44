#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "maxproj/errors.hpp"
#include "maxproj/geometry.hpp"
#include "maxproj/legendre.hpp"

using namespace maxproj;

namespace {
constexpr double pi = std::numbers::pi;

// Γ at integers and half-integers by the recurrence from Γ(1) and Γ(1/2).
double gamma_half(int twice_x) {
    double g = (twice_x % 2 == 0) ? 1.0 : std::sqrt(pi);
    for (int k = (twice_x % 2 == 0) ? 2 : 1; k < twice_x; k += 2) g *= 0.5 * k;
    return g;
}

double norm(std::span<const double> v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}
}  // namespace

TEST_CASE("surface area") {
    CHECK(surface_area(2) == doctest::Approx(2 * pi).epsilon(1e-14));
    CHECK(surface_area(3) == doctest::Approx(4 * pi).epsilon(1e-14));
    CHECK(surface_area(5) == doctest::Approx(8 * pi * pi / 3).epsilon(1e-14));
    CHECK(surface_area(1) == doctest::Approx(2.0));
    for (int d = 2; d <= 12; ++d)
        CHECK(surface_area(d) ==
              doctest::Approx(2 * std::pow(pi, 0.5 * d) / gamma_half(d)).epsilon(1e-13));
    CHECK_THROWS_AS(surface_area(0), DomainError);
}

TEST_CASE("surface area ratio") {
    for (int d = 3; d <= 12; ++d) {
        const double ratio = surface_area(d - 1) / surface_area(d);
        const double expect = gamma_half(d) / (std::sqrt(pi) * gamma_half(d - 1));
        CHECK(std::abs(ratio - expect) <= 1e-12);
    }
}

TEST_CASE("gamma function checks") {
    CHECK(std::tgamma(1.0) == 1.0);
    CHECK(std::tgamma(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
    for (double x : {0.3, 1.7, 4.5, 11.25})
        CHECK(std::tgamma(x + 1) == doctest::Approx(x * std::tgamma(x)).epsilon(1e-13));
}

TEST_CASE("unit vector normalization") {
    UnitVector v({3.0, 4.0});
    CHECK(v[0] == doctest::Approx(0.6));
    CHECK(std::abs(norm(v.coords()) - 1) <= 1e-12);
    CHECK_THROWS_AS(UnitVector({1e-9, 0.0}), InputError);
    CHECK_THROWS_AS(UnitVector({1.0}), InputError);
    SphericalSample s(2, {0.6 * 0.5, 0.8 * 0.5});
    CHECK(s.row(0)[1] == doctest::Approx(0.8));
    CHECK_THROWS_AS(SphericalSample(2, {0.0, 0.0}), InputError);
}

TEST_CASE("uniform sample norms and determinism") {
    Rng a(7), b(7);
    auto s1 = sample_uniform(4, 500, a);
    auto s2 = sample_uniform(4, 500, b);
    for (int i = 0; i < s1.size(); ++i) CHECK(std::abs(norm(s1.row(i)) - 1) <= 1e-12);
    CHECK(std::equal(s1.data().begin(), s1.data().end(), s2.data().begin()));
}

TEST_CASE("uniform sample mean is small") {
    const int d = 3, n = 100000, trials = 100;
    Rng rng(11);
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
        auto s = sample_uniform(d, n, rng);
        if (norm(s.mean()) <= 4.0 / std::sqrt(double(n) * d)) ++ok;
    }
    CHECK(ok >= 99);
}

TEST_CASE("second projection moment on the circle") {
    const int d = 2, n = 100000;
    Rng rng(3);
    auto s = sample_uniform(d, n, rng);
    const double b[2] = {std::cos(0.4), std::sin(0.4)};
    double m1 = 0, m2 = 0;
    for (int i = 0; i < n; ++i) {
        const double p = b[0] * s.row(i)[0] + b[1] * s.row(i)[1];
        m1 += p * p;
        m2 += p * p * p * p;
    }
    m1 /= n;
    m2 /= n;
    const double se = std::sqrt((m2 - m1 * m1) / n);
    CHECK(std::abs(m1 - psi(d, 2)) <= 3 * se);
}

TEST_CASE("latitude/longitude conversion") {
    auto a = latlon_to_unit(0, 0);
    CHECK(a[0] == 1.0);
    CHECK(a[1] == 0.0);
    CHECK(a[2] == 0.0);
    for (double lon : {-170.0, 0.0, 33.0, 250.0}) {
        auto p = latlon_to_unit(90, lon);
        CHECK(p[2] == 1.0);
        CHECK(p[0] == 0.0);
    }
    auto e2 = latlon_to_unit(0, 90);
    CHECK(e2[0] == 0.0);
    CHECK(e2[1] == 1.0);
    auto w1 = latlon_to_unit(10, 270);
    auto w2 = latlon_to_unit(10, -90);
    for (int i = 0; i < 3; ++i) CHECK(w1[i] == doctest::Approx(w2[i]));
    CHECK_THROWS_AS(latlon_to_unit(91, 0), InputError);
    CHECK_THROWS_AS(latlon_to_unit(0, 360), InputError);
}

TEST_CASE("direction cover") {
    auto c1 = make_cover(3, 100, 42);
    auto c2 = make_cover(3, 100, 42);
    CHECK(std::equal(c1.points.data().begin(), c1.points.data().end(), c2.points.data().begin()));
    auto big = make_cover(3, 300, 42);
    CHECK(std::equal(c1.points.data().begin(), c1.points.data().end(), big.points.data().begin()));
    CHECK_THROWS_AS(make_cover(3, 0, 1), InputError);

    auto circle = make_cover(2, 5000, 9);
    std::vector<double> ang;
    for (int i = 0; i < circle.size(); ++i) ang.push_back(std::atan2(circle.points.row(i)[1], circle.points.row(i)[0]));
    std::sort(ang.begin(), ang.end());
    double gap = ang.front() + 2 * pi - ang.back();
    for (std::size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
    CHECK(gap / 2 <= 0.01);

    auto c10 = make_cover(10, 20000, 5);
    double worst = 0;
    for (int i = 0; i < c10.size(); ++i) worst = std::max(worst, std::abs(norm(c10.points.row(i)) - 1));
    CHECK(worst <= 1e-12);
}

TEST_CASE("random rotation is orthogonal") {
    Rng rng(5);
    for (int d : {2, 3, 5}) {
        auto q = random_rotation(d, rng);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double s = 0;
                for (int k = 0; k < d; ++k) s += q[i * d + k] * q[j * d + k];
                CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-12);
            }
    }
}
