#pragma once

#include <functional>
#include <span>
#include <vector>

#include "maxproj/geometry.hpp"
#include "maxproj/legendre.hpp"

namespace maxproj {

struct SpectrumEntry {
    int k;
    double lambda;
    long long nu;
};

/// Covariance kernel of the limiting process of T_{n,β}:
/// η_β(t) = Σ_j c_{j,d}(β)²/ν_d(j) P_j^d(t) and ρ_β = η_β − ψ_d(β)².
class ZonalKernel {
public:
    ZonalKernel(int beta, int d);

    int beta() const noexcept { return beta_; }
    int d() const noexcept { return d_; }

    double eta(double t) const;
    double rho(double t) const;

    /// λ_k = (c_{k,d}(β)/ν_d(k))² for 0 < k ≤ β, λ_0 = 0.
    std::vector<SpectrumEntry> spectrum() const;
    /// Exact λ_0..λ_β.
    std::vector<Rational> spectrum_exact() const;
    /// Σ_{j≥1} λ_j ν_d(j); equals ρ_β(1).
    double variance() const;

private:
    int beta_;
    int d_;
    std::vector<int> orders_;       // j with non-zero weight
    std::vector<double> weights_;   // c_j²/ν_j for those j
    std::vector<const std::vector<double>*> polys_;
    double psi2_;
};

/// S*_β(b) = c_{m,d}(β)/ν_d(m) · P_m^d(θ·b) for the alternative 1 + P_m^d(θ·x)/√n, m ≥ 1.
struct ShiftFunction {
    int beta;
    int d;
    int m;
    UnitVector theta;

    double coefficient() const;
    double operator()(std::span<const double> b) const;
};

double shift_value(const ShiftFunction& shift, const UnitVector& b);

/// (1/|S^{d−1}|) ∫ ((b·u)^β − ψ_d(β)) P_m^d(θ·u) dσ(u) by product quadrature;
/// d ∈ {2, 3}.
double shift_by_quadrature(int beta, int d, int m, const UnitVector& theta, const UnitVector& b);

struct FunkHecke {
    double lhs;
    double rhs;
};

/// lhs = ∫ Λ(u·x) P_k^d(θ·x) dσ(x) over the sphere (d ∈ {2, 3});
/// rhs = |S^{d−2}| ⟨P_k, Λ⟩ P_k^d(u·θ).
FunkHecke funk_hecke_check(int d, int k, const std::function<double(double)>& profile,
                           const UnitVector& u, const UnitVector& theta);

}  // namespace maxproj
