#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "maxproj/errors.hpp"
#include "maxproj/geometry.hpp"
#include "maxproj/special_functions.hpp"

using namespace maxproj;

TEST_CASE("Bessel I against boost") {
    for (double p : {0.0, 0.5, 1.0, 1.5, 2.0, 4.0})
        for (double k : {0.01, 0.5, 1.0, 5.0, 20.0, 50.0}) {
            const double ref = boost::math::cyl_bessel_i(p, k);
            CHECK(std::abs(bessel_i(p, k) - ref) <= 1e-12 * ref);
        }
    CHECK(bessel_i(0.5, 1.0) == doctest::Approx(std::sqrt(2 / std::numbers::pi) * std::sinh(1.0)).epsilon(1e-14));
    CHECK(bessel_i(0, 0) == 1.0);
    CHECK_THROWS_AS(bessel_i(1, -1), DomainError);
}

TEST_CASE("Bessel derivative recurrence") {
    const double h = 1e-3;
    for (double p : {1.0, 1.5, 2.0, 3.5})
        for (double k : {0.3, 1.0, 4.0}) {
            const double deriv = (-bessel_i(p, k + 2 * h) + 8 * bessel_i(p, k + h) - 8 * bessel_i(p, k - h) +
                                  bessel_i(p, k - 2 * h)) / (12 * h);
            const double lhs = k * deriv;
            const double rhs = p * bessel_i(p, k) + k * bessel_i(p + 1, k);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, rhs));
        }
}

TEST_CASE("Kummer M") {
    for (double a : {0.5, 1.5})
        for (double b : {1.0, 2.5, 6.0})
            for (double k : {0.0, 0.1, 1.0, 10.0}) {
                if (!(b > a)) continue;
                const double ref = boost::math::hypergeometric_1F1(a, b, k);
                CHECK(std::abs(kummer_m(a, b, k) - ref) <= 1e-12 * ref);
            }
    CHECK(kummer_m(0.5, 1.5, 0.0) == 1.0);
    CHECK_THROWS_AS(kummer_m(2, 1, 1), DomainError);
}

TEST_CASE("A_d") {
    for (double k : {0.1, 1.0, 3.0})
        CHECK(bessel_ratio_a(3, k) == doctest::Approx(1 / std::tanh(k) - 1 / k).epsilon(1e-13));
    for (int d : {2, 3, 5, 10})
        for (double k = 1e-3; k <= 0.1; k *= 1.5) {
            const double diff = bessel_ratio_a(d, k) - k / d + k * k * k / (d * d * (d + 2.0));
            CHECK(std::abs(diff) <= 0.02 * std::pow(k, 5));
        }
}

TEST_CASE("a_d tends to the surface area") {
    for (int d : {2, 3, 5, 10}) {
        CHECK(std::abs(vmf_normalizer(d, 1e-6) - surface_area(d)) <= 1e-10);
        const double k = 1.7;
        const double direct = 2 * std::pow(std::numbers::pi, 0.5 * d) * std::pow(0.5 * k, 1 - 0.5 * d) *
                              boost::math::cyl_bessel_i(0.5 * d - 1, k);
        CHECK(vmf_normalizer(d, k) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("D_d and d_d") {
    for (int d : {2, 3, 5, 10}) {
        CHECK(std::abs(watson_ratio_d(d, 0) - 1.0 / d) <= 1e-15);
        const double h = 1e-4;
        const double deriv = (-3 * watson_ratio_d(d, 0) + 4 * watson_ratio_d(d, h) - watson_ratio_d(d, 2 * h)) / (2 * h);
        CHECK(std::abs(deriv - 2.0 * (d - 1) / (d * d * (d + 2.0))) <= 1e-8);
        CHECK(watson_normalizer(d, 0) == doctest::Approx(surface_area(d)));
        // d log d_d / dκ = D_d
        const double k = 0.8;
        const double dl = (std::log(watson_normalizer(d, k + h)) - std::log(watson_normalizer(d, k - h))) / (2 * h);
        CHECK(dl == doctest::Approx(watson_ratio_d(d, k)).epsilon(1e-8));
    }
}

TEST_CASE("Kolmogorov survival") {
    CHECK(kolmogorov_survival(1.0) == doctest::Approx(0.26999967).epsilon(1e-7));
    CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(std::abs(kolmogorov_survival(1.0 - 1e-13) - kolmogorov_survival(1.0)) <= 1e-12);
    CHECK(kolmogorov_survival(0.0) == 1.0);
    CHECK(kolmogorov_survival(0.1) == doctest::Approx(1.0));
    CHECK(kolmogorov_survival(5.0) < 1e-20);
}

TEST_CASE("projection CDF") {
    for (int d : {2, 3, 4, 5, 10}) {
        CHECK(projection_cdf(d, 0.0) == 0.5);
        CHECK(projection_cdf(d, -1.0) == 0.0);
        CHECK(projection_cdf(d, 1.0) == 1.0);
        CHECK(projection_cdf(d, -2.0) == 0.0);
        CHECK(projection_cdf(d, 2.0) == 1.0);
        double prev = 0;
        for (int i = 0; i <= 1000; ++i) {
            const double f = projection_cdf(d, -1 + i / 500.0);
            CHECK(f >= prev - 1e-15);
            prev = f;
        }
    }
    for (double y : {-0.9, -0.3, 0.2, 0.7}) {
        CHECK(projection_cdf(2, y) == doctest::Approx(1 - std::acos(y) / std::numbers::pi).epsilon(1e-14));
        CHECK(projection_cdf(3, y) == doctest::Approx((1 + y) / 2).epsilon(1e-13));
    }
    CHECK(projection_cdf(3, 0.5) == doctest::Approx(0.75).epsilon(1e-14));
}
