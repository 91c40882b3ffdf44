#pragma once

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "maxproj/quadrature.hpp"

namespace maxproj {

using Rational = boost::multiprecision::cpp_rational;

/// Largest order for which exact tables are built.
inline constexpr int kMaxExactOrder = 24;

/// ν_d(k) = C(d+k−1, k) − C(d+k−3, k−2): dimension of the order-k spherical
/// harmonics on S^{d−1}.
long long nu(int d, int k);

/// Exact monomial coefficients of P_k^d, indexed by power (size k+1; entries
/// of the wrong parity are zero). Cached; the reference stays valid.
const std::vector<Rational>& legendre_coefficients(int d, int k);
/// Same coefficients rounded to double.
const std::vector<double>& legendre_coefficients_double(int d, int k);

/// Evaluates a Legendre polynomial from its double coefficient vector (size
/// k+1, as returned by legendre_coefficients_double); no range check.
inline double legendre_eval_coeffs(std::span<const double> c, double t) noexcept {
    const int k = static_cast<int>(c.size()) - 1;
    const double t2 = t * t;
    double acc = 0.0;
    for (int p = k; p >= 0; p -= 2) acc = acc * t2 + c[static_cast<std::size_t>(p)];
    return (k % 2 == 1) ? acc * t : acc;
}

/// P_k^d(t) by Horner on the monomial form. Throws DomainError if |t| > 1+1e-12.
double legendre_eval(int d, int k, double t);
/// P_0^d(t) .. P_kmax^d(t) into out[0..kmax].
void legendre_eval_all(int d, int kmax, double t, std::span<double> out);
/// Exact rational evaluation.
Rational legendre_eval_exact(int d, int k, const Rational& t);

/// t^m = Σ_j c_{j,d}(m) P_j^d(t).
struct PowerExpansion {
    int d = 0;
    int m = 0;
    std::vector<Rational> exact;   ///< c_{j,d}(m), j = 0..m
    std::vector<double> values;    ///< same, rounded

    double operator[](int j) const { return values[static_cast<std::size_t>(j)]; }
};

/// Triangular solve against the monomial coefficients of P_0..P_m. Cached.
const PowerExpansion& power_expansion(int d, int m);
/// The nested sum over compositions of l (independent route, exponential in m).
std::vector<Rational> power_expansion_recursive(int d, int m);
/// c_{j,d}(m) = m! ν_d(j) Γ(d/2) / (2^m ((m−j)/2)! Γ((m+j+d)/2)) in floating
/// point; zero when m−j is odd or negative.
double power_coefficient_closed(int d, int j, int m);

/// ψ_d(β) = E(b·U)^β under uniformity.
double psi(int d, int beta);

/// ⟨P_k, P_k⟩ = |S^{d−1}| / (ν_d(k) |S^{d−2}|).
double legendre_norm_squared(int d, int k);

struct ConjectureViolation {
    int d, m, beta;
    Rational value;
};
/// Scans c_{m,d}(β) for 2 ≤ d ≤ dmax, 0 ≤ m ≤ β ≤ beta_max and returns every
/// negative coefficient found.
std::vector<ConjectureViolation> check_coefficient_nonnegativity(int dmax, int beta_max);

}  // namespace maxproj
