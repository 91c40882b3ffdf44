#include "maxproj/legendre.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <utility>

#include "maxproj/errors.hpp"
#include "maxproj/geometry.hpp"

namespace maxproj {

namespace {

void check_args(int d, int k) {
    if (d < 2) throw DomainError("legendre: d must be >= 2, got " + std::to_string(d));
    if (k < 0) throw DomainError("legendre: order must be >= 0, got " + std::to_string(k));
    if (k > kMaxExactOrder)
        throw DomainError("legendre: order " + std::to_string(k) + " exceeds table limit");
}

long long binom(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Rational factorial(int n) {
    Rational r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// a_{2l,k}: coefficient of t^{k−2l} in P_k^d.
Rational monomial_coefficient(int d, int k, int l) {
    if (k == 0) return 1;
    // Γ(k−l+(d−2)/2)/Γ(d/2) = (d/2)(d/2+1)...(d/2+k−l−2)
    Rational poch = 1;
    for (int i = 0; i <= k - l - 2; ++i) poch *= Rational(d + 2 * i, 2);
    // Γ(d−1)/(k+d−3)! = 1/((d−1)d...(k+d−3))
    Rational fall = 1;
    for (int i = d - 1; i <= k + d - 3; ++i) fall *= i;
    Rational quarter = 1;
    for (int i = 0; i < l; ++i) quarter *= Rational(-1, 4);
    Rational two = 1;
    for (int i = 0; i < k - 1; ++i) two *= 2;
    return quarter * two * factorial(k) * poch / (fall * factorial(l) * factorial(k - 2 * l));
}

struct LegendreEntry {
    std::vector<Rational> exact;
    std::vector<double> values;
};

template <class Key, class Value>
class Cache {
public:
    template <class Make>
    const Value& get(const Key& key, Make&& make) {
        {
            std::shared_lock lock(mutex_);
            auto it = map_.find(key);
            if (it != map_.end()) return *it->second;
        }
        auto value = std::make_unique<Value>(make());
        std::unique_lock lock(mutex_);
        auto [it, inserted] = map_.try_emplace(key, std::move(value));
        return *it->second;
    }

private:
    std::shared_mutex mutex_;
    std::map<Key, std::unique_ptr<Value>> map_;
};

Cache<std::pair<int, int>, LegendreEntry>& legendre_cache() {
    static Cache<std::pair<int, int>, LegendreEntry> cache;
    return cache;
}

Cache<std::pair<int, int>, PowerExpansion>& expansion_cache() {
    static Cache<std::pair<int, int>, PowerExpansion> cache;
    return cache;
}

const LegendreEntry& legendre_entry(int d, int k) {
    check_args(d, k);
    return legendre_cache().get({d, k}, [d, k] {
        LegendreEntry e;
        e.exact.assign(static_cast<std::size_t>(k) + 1, Rational(0));
        for (int l = 0; 2 * l <= k; ++l)
            e.exact[static_cast<std::size_t>(k - 2 * l)] = monomial_coefficient(d, k, l);
        e.values.reserve(e.exact.size());
        for (const auto& c : e.exact) e.values.push_back(static_cast<double>(c));
        return e;
    });
}

void compositions(int remaining, std::vector<int>& parts,
                  const std::function<void(const std::vector<int>&)>& visit) {
    if (remaining == 0) {
        visit(parts);
        return;
    }
    for (int p = 1; p <= remaining; ++p) {
        parts.push_back(p);
        compositions(remaining - p, parts, visit);
        parts.pop_back();
    }
}

}  // namespace

long long nu(int d, int k) {
    if (d < 2) throw DomainError("nu: d must be >= 2");
    if (k < 0) throw DomainError("nu: k must be >= 0");
    return binom(d + k - 1, k) - binom(d + k - 3, k - 2);
}

const std::vector<Rational>& legendre_coefficients(int d, int k) { return legendre_entry(d, k).exact; }

const std::vector<double>& legendre_coefficients_double(int d, int k) {
    return legendre_entry(d, k).values;
}

double legendre_eval(int d, int k, double t) {
    if (!(std::abs(t) <= 1.0 + 1e-12)) throw DomainError("legendre_eval: |t| > 1");
    return legendre_eval_coeffs(legendre_entry(d, k).values, t);
}

void legendre_eval_all(int d, int kmax, double t, std::span<double> out) {
    for (int k = 0; k <= kmax; ++k) out[static_cast<std::size_t>(k)] = legendre_eval(d, k, t);
}

Rational legendre_eval_exact(int d, int k, const Rational& t) {
    const auto& c = legendre_entry(d, k).exact;
    Rational acc = 0;
    for (int p = k; p >= 0; --p) acc = acc * t + c[static_cast<std::size_t>(p)];
    return acc;
}

const PowerExpansion& power_expansion(int d, int m) {
    check_args(d, m);
    return expansion_cache().get({d, m}, [d, m] {
        PowerExpansion e;
        e.d = d;
        e.m = m;
        e.exact.assign(static_cast<std::size_t>(m) + 1, Rational(0));
        std::vector<Rational> residual(static_cast<std::size_t>(m) + 1, Rational(0));
        residual[static_cast<std::size_t>(m)] = 1;
        for (int j = m; j >= 0; j -= 2) {
            const auto& p = legendre_coefficients(d, j);
            const Rational c = residual[static_cast<std::size_t>(j)] / p[static_cast<std::size_t>(j)];
            e.exact[static_cast<std::size_t>(j)] = c;
            for (int i = 0; i <= j; ++i)
                residual[static_cast<std::size_t>(i)] -= c * p[static_cast<std::size_t>(i)];
        }
        e.values.reserve(e.exact.size());
        for (const auto& c : e.exact) e.values.push_back(static_cast<double>(c));
        return e;
    });
}

std::vector<Rational> power_expansion_recursive(int d, int m) {
    check_args(d, m);
    auto a = [d](int l, int k) { return monomial_coefficient(d, k, l); };
    std::vector<Rational> c(static_cast<std::size_t>(m) + 1, Rational(0));
    c[static_cast<std::size_t>(m)] = 1 / a(0, m);
    for (int l = 1; 2 * l <= m; ++l) {
        Rational sum = 0;
        std::vector<int> parts;
        compositions(l, parts, [&](const std::vector<int>& ls) {
            Rational num = 1, den = a(0, m);
            int used = 0;
            for (int li : ls) {
                num *= a(li, m - 2 * used);
                used += li;
                den *= a(0, m - 2 * used);
            }
            const Rational q = num / den;
            if (ls.size() % 2 == 1) sum -= q;
            else sum += q;
        });
        c[static_cast<std::size_t>(m - 2 * l)] = sum;
    }
    return c;
}

double power_coefficient_closed(int d, int j, int m) {
    if (j < 0 || j > m || (m - j) % 2 != 0) return 0.0;
    const double logc = std::lgamma(m + 1.0) + std::log(static_cast<double>(nu(d, j))) +
                        std::lgamma(0.5 * d) - m * std::numbers::ln2 -
                        std::lgamma(0.5 * (m - j) + 1.0) - std::lgamma(0.5 * (m + j + d));
    return std::exp(logc);
}

double psi(int d, int beta) {
    if (d < 2) throw DomainError("psi: d must be >= 2");
    if (beta < 0) throw DomainError("psi: beta must be >= 0");
    if (beta % 2 == 1) return 0.0;
    const double logv = std::lgamma(0.5 * (beta + 1)) + std::lgamma(0.5 * d) -
                        0.5 * std::log(std::numbers::pi) - std::lgamma(0.5 * (beta + d));
    return std::exp(logv);
}

double legendre_norm_squared(int d, int k) {
    return surface_area(d) / (static_cast<double>(nu(d, k)) * surface_area(d - 1));
}

std::vector<ConjectureViolation> check_coefficient_nonnegativity(int dmax, int beta_max) {
    std::vector<ConjectureViolation> out;
    for (int d = 2; d <= dmax; ++d)
        for (int beta = 0; beta <= beta_max; ++beta) {
            const auto& e = power_expansion(d, beta);
            for (int m = 0; m <= beta; ++m)
                if (e.exact[static_cast<std::size_t>(m)] < 0)
                    out.push_back({d, m, beta, e.exact[static_cast<std::size_t>(m)]});
        }
    return out;
}

}  // namespace maxproj
