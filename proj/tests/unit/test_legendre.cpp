#include <doctest.h>

#include <cmath>
#include <numbers>

#include "maxproj/errors.hpp"
#include "maxproj/geometry.hpp"
#include "maxproj/legendre.hpp"

using namespace maxproj;

namespace {

// P_k^d from the Gamma-function sum k! Γ((d−1)/2) Σ (−1/4)^l (1−t²)^l t^{k−2l} / (l!(k−2l)! Γ(l+(d−1)/2)).
double legendre_gamma_sum(int d, int k, double t) {
    double s = 0;
    for (int l = 0; 2 * l <= k; ++l)
        s += std::pow(-0.25, l) * std::pow(1 - t * t, l) * std::pow(t, k - 2 * l) /
             (std::tgamma(l + 1.0) * std::tgamma(k - 2 * l + 1.0) * std::tgamma(l + 0.5 * (d - 1)));
    return std::tgamma(k + 1.0) * std::tgamma(0.5 * (d - 1)) * s;
}

double listed(int d, int k, double t) {
    const double D = d;
    switch (k) {
        case 0: return 1;
        case 1: return t;
        case 2: return (D * t * t - 1) / (D - 1);
        case 3: return ((D + 2) * t * t * t - 3 * t) / (D - 1);
        case 4: return ((D + 2) * (D + 4) * std::pow(t, 4) - 6 * (D + 2) * t * t + 3) / ((D - 1) * (D + 1));
        case 5:
            return ((D + 4) * (D + 6) * std::pow(t, 5) - 10 * (D + 4) * std::pow(t, 3) + 15 * t) /
                   ((D - 1) * (D + 1));
        case 6:
            return ((D + 4) * (D + 6) * (D + 8) * std::pow(t, 6) - 15 * (D + 4) * (D + 6) * std::pow(t, 4) +
                    45 * (D + 4) * t * t - 15) /
                   ((D - 1) * (D + 1) * (D + 3));
    }
    return NAN;
}

const int dims[] = {2, 3, 5, 10};

}  // namespace

TEST_CASE("harmonic dimensions") {
    for (int d : {2, 3, 4, 7, 10}) CHECK(nu(d, 1) == d);
    for (int k = 0; k < 10; ++k) CHECK(nu(3, k) == 2 * k + 1);
    CHECK(nu(2, 0) == 1);
    for (int k = 1; k < 10; ++k) CHECK(nu(2, k) == 2);
    CHECK(nu(5, 2) == 14);
    for (int d : dims) CHECK(nu(d, 2) == (d + 2) * (d - 1) / 2);
}

TEST_CASE("legendre polynomials agree with the listed forms") {
    for (int d : dims)
        for (int k = 0; k <= 6; ++k)
            for (int i = 0; i <= 40; ++i) {
                const double t = -1 + i / 20.0;
                CHECK(std::abs(legendre_eval(d, k, t) - listed(d, k, t)) <= 1e-12);
            }
}

TEST_CASE("legendre polynomials agree with the gamma sum") {
    for (int d : dims)
        for (int k = 0; k <= 10; ++k)
            for (int i = 0; i <= 50; ++i) {
                const double t = -1 + i / 25.0;
                CHECK(std::abs(legendre_eval(d, k, t) - legendre_gamma_sum(d, k, t)) <= 1e-10);
            }
}

TEST_CASE("legendre at one and bound") {
    for (int d : dims)
        for (int k = 0; k <= 12; ++k) {
            CHECK(legendre_eval_exact(d, k, Rational(1)) == 1);
            double worst = 0;
            for (int i = 0; i <= 1000; ++i) worst = std::max(worst, std::abs(legendre_eval(d, k, -1 + i / 500.0)));
            CHECK(worst <= 1 + 1e-12);
        }
    CHECK(legendre_eval(3, 2, 0.3) == doctest::Approx((3 * 0.09 - 1) / 2));
    CHECK_THROWS_AS(legendre_eval(3, 2, 1.001), DomainError);
}

TEST_CASE("parity is exact") {
    for (int d : dims)
        for (int k = 0; k <= 12; ++k)
            for (Rational t : {Rational(1, 3), Rational(-7, 11), Rational(5, 8)}) {
                const Rational sign = (k % 2) ? -1 : 1;
                CHECK(legendre_eval_exact(d, k, -t) == sign * legendre_eval_exact(d, k, t));
            }
}

TEST_CASE("power expansions: listed coefficients") {
    for (int d : dims) {
        const Rational D = d;
        const auto& e0 = power_expansion(d, 0).exact;
        CHECK(e0[0] == 1);
        const auto& e2 = power_expansion(d, 2).exact;
        CHECK(e2[2] == (D - 1) / D);
        CHECK(e2[1] == 0);
        CHECK(e2[0] == 1 / D);
        const auto& e3 = power_expansion(d, 3).exact;
        CHECK(e3[3] == (D - 1) / (D + 2));
        CHECK(e3[1] == 3 / (D + 2));
        CHECK(e3[0] == 0);
        CHECK(e3[2] == 0);
        const auto& e4 = power_expansion(d, 4).exact;
        CHECK(e4[4] == (D - 1) * (D + 1) / ((D + 2) * (D + 4)));
        CHECK(e4[2] == 6 * (D - 1) / (D * (D + 4)));
        CHECK(e4[0] == 3 / (D * (D + 2)));
        const auto& e5 = power_expansion(d, 5).exact;
        CHECK(e5[5] == (D - 1) * (D + 1) / ((D + 4) * (D + 6)));
        CHECK(e5[3] == 10 * (D - 1) / ((D + 2) * (D + 6)));
        CHECK(e5[1] == 15 / ((D + 2) * (D + 4)));
        const auto& e6 = power_expansion(d, 6).exact;
        CHECK(e6[6] == (D - 1) * (D + 1) * (D + 3) / ((D + 4) * (D + 6) * (D + 8)));
        CHECK(e6[4] == 15 * (D - 1) * (D + 1) / ((D + 2) * (D + 4) * (D + 8)));
        CHECK(e6[2] == 45 * (D - 1) / (D * (D + 4) * (D + 6)));
        CHECK(e6[0] == 15 / (D * (D + 2) * (D + 4)));
    }
}

TEST_CASE("power expansions: three routes agree") {
    for (int d : dims)
        for (int m = 0; m <= 10; ++m) {
            const auto& tri = power_expansion(d, m);
            if (m <= 8) {
                const auto rec = power_expansion_recursive(d, m);
                for (int j = 0; j <= m; ++j) CHECK(rec[j] == tri.exact[j]);
            }
            for (int j = 0; j <= m; ++j) {
                CHECK(tri[j] == doctest::Approx(power_coefficient_closed(d, j, m)).epsilon(1e-12));
                if ((j + m) % 2) CHECK(tri.exact[j] == 0);
            }
        }
}

TEST_CASE("power expansions reconstruct monomials") {
    for (int d : dims)
        for (int m = 0; m <= 8; ++m) {
            const auto& e = power_expansion(d, m);
            double worst = 0;
            for (int i = 0; i <= 100; ++i) {
                const double t = -1 + i / 50.0;
                double s = 0;
                for (int j = 0; j <= m; ++j) s += e[j] * legendre_eval(d, j, t);
                worst = std::max(worst, std::abs(s - std::pow(t, m)));
            }
            CHECK(worst <= 1e-12);
        }
}

TEST_CASE("psi") {
    for (int d : dims) {
        CHECK(psi(d, 1) == 0.0);
        CHECK(psi(d, 3) == 0.0);
        CHECK(psi(d, 0) == doctest::Approx(1.0));
        CHECK(psi(d, 2) == doctest::Approx(1.0 / d).epsilon(1e-14));
        CHECK(psi(d, 4) == doctest::Approx(3.0 / (d * (d + 2.0))).epsilon(1e-14));
        for (int b = 0; b <= 12; ++b) CHECK(std::abs(psi(d, b) - power_expansion(d, b)[0]) <= 1e-14);
    }
}

TEST_CASE("psi against Monte Carlo") {
    const int n = 1000000;
    for (int d : {3, 5})
        for (int beta : {2, 3, 4}) {
            Rng rng(100 + d * 10 + beta);
            auto s = sample_uniform(d, n, rng);
            double m1 = 0, m2 = 0;
            for (int i = 0; i < n; ++i) {
                const double p = std::pow(s.row(i)[0], beta);
                m1 += p;
                m2 += p * p;
            }
            m1 /= n;
            m2 /= n;
            const double se = std::sqrt((m2 - m1 * m1) / n);
            CHECK(std::abs(m1 - psi(d, beta)) <= 4 * se);
        }
}

TEST_CASE("weighted inner product") {
    CHECK(weighted_inner([](double) { return 1.0; }, [](double) { return 1.0; }, 3) ==
          doctest::Approx(2.0).epsilon(1e-13));
    for (int d : dims)
        for (int k = 0; k <= 6; ++k)
            for (int l = 0; l <= 6; ++l) {
                const double v = weighted_inner([=](double t) { return legendre_eval(d, k, t); },
                                                [=](double t) { return legendre_eval(d, l, t); }, d);
                if (k == l) CHECK(std::abs(v - legendre_norm_squared(d, k)) <= 1e-10);
                else CHECK(std::abs(v) <= 1e-10);
            }
}

TEST_CASE("coefficient non-negativity scan") {
    CHECK(check_coefficient_nonnegativity(12, 16).empty());
}
