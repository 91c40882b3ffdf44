#include "maxproj/zonal_kernel.hpp"

#include <cmath>
#include <string>

#include "maxproj/errors.hpp"
#include "maxproj/quadrature.hpp"

namespace maxproj {

namespace {
void check_t(double t) {
    if (!(std::abs(t) <= 1.0 + 1e-12)) throw DomainError("zonal kernel: |t| > 1");
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double clamp_unit(double t) { return t > 1.0 ? 1.0 : (t < -1.0 ? -1.0 : t); }
}  // namespace

ZonalKernel::ZonalKernel(int beta, int d) : beta_(beta), d_(d) {
    if (beta < 1) throw DomainError("ZonalKernel: beta must be >= 1");
    if (d < 2) throw DomainError("ZonalKernel: d must be >= 2");
    const auto& e = power_expansion(d, beta);
    for (int j = beta % 2; j <= beta; j += 2) {
        orders_.push_back(j);
        const Rational w = e.exact[static_cast<std::size_t>(j)] * e.exact[static_cast<std::size_t>(j)] / nu(d, j);
        weights_.push_back(static_cast<double>(w));
        polys_.push_back(&legendre_coefficients_double(d, j));
    }
    psi2_ = static_cast<double>(e.exact[0] * e.exact[0]);
}

double ZonalKernel::eta(double t) const {
    check_t(t);
    t = clamp_unit(t);
    double s = 0.0;
    for (std::size_t i = 0; i < orders_.size(); ++i) s += weights_[i] * legendre_eval_coeffs(*polys_[i], t);
    return s;
}

double ZonalKernel::rho(double t) const {
    check_t(t);
    t = clamp_unit(t);
    // The j = 0 term of η is exactly ψ², so it is skipped rather than subtracted.
    double s = 0.0;
    for (std::size_t i = 0; i < orders_.size(); ++i)
        if (orders_[i] > 0) s += weights_[i] * legendre_eval_coeffs(*polys_[i], t);
    return s;
}

std::vector<Rational> ZonalKernel::spectrum_exact() const {
    const auto& e = power_expansion(d_, beta_);
    std::vector<Rational> out(static_cast<std::size_t>(beta_) + 1, Rational(0));
    for (int k = 1; k <= beta_; ++k) {
        const Rational r = e.exact[static_cast<std::size_t>(k)] / nu(d_, k);
        out[static_cast<std::size_t>(k)] = r * r;
    }
    return out;
}

std::vector<SpectrumEntry> ZonalKernel::spectrum() const {
    const auto exact = spectrum_exact();
    std::vector<SpectrumEntry> out;
    for (int k = 0; k <= beta_; ++k)
        out.push_back({k, static_cast<double>(exact[static_cast<std::size_t>(k)]), nu(d_, k)});
    return out;
}

double ZonalKernel::variance() const {
    const auto exact = spectrum_exact();
    Rational s = 0;
    for (int k = 1; k <= beta_; ++k) s += exact[static_cast<std::size_t>(k)] * nu(d_, k);
    return static_cast<double>(s);
}

double ShiftFunction::coefficient() const {
    if (m < 1) throw DomainError("ShiftFunction: m must be >= 1");
    if (m > beta || (beta + m) % 2 != 0) return 0.0;
    return power_expansion(d, beta)[m] / static_cast<double>(nu(d, m));
}

double ShiftFunction::operator()(std::span<const double> b) const {
    const double c = coefficient();
    if (c == 0.0) return 0.0;
    return c * legendre_eval(d, m, clamp_unit(dot(theta.coords(), b)));
}

double shift_value(const ShiftFunction& shift, const UnitVector& b) {
    if (b.dim() != shift.theta.dim()) throw InputError("shift_value: dimension mismatch");
    return shift(b.coords());
}

double shift_by_quadrature(int beta, int d, int m, const UnitVector& theta, const UnitVector& b) {
    if (theta.dim() != d || b.dim() != d) throw InputError("shift_by_quadrature: dimension mismatch");
    const double ps = psi(d, beta);
    const double integral = sphere_integral(
        [&](const double* u) {
            const std::span<const double> us(u, static_cast<std::size_t>(d));
            const double bu = clamp_unit(dot(b.coords(), us));
            const double tu = clamp_unit(dot(theta.coords(), us));
            return (std::pow(bu, beta) - ps) * legendre_eval(d, m, tu);
        },
        d, 1e-12);
    return integral / surface_area(d);
}

FunkHecke funk_hecke_check(int d, int k, const std::function<double(double)>& profile,
                           const UnitVector& u, const UnitVector& theta) {
    if (d != 2 && d != 3) throw UnsupportedError("funk_hecke_check: d must be 2 or 3");
    if (k < 0 || k > 8) throw DomainError("funk_hecke_check: k must be in [0, 8]");
    const double lhs = sphere_integral(
        [&](const double* x) {
            const std::span<const double> xs(x, static_cast<std::size_t>(d));
            return profile(clamp_unit(dot(u.coords(), xs))) *
                   legendre_eval(d, k, clamp_unit(dot(theta.coords(), xs)));
        },
        d, 1e-11);
    const double inner = weighted_inner([d, k](double t) { return legendre_eval(d, k, t); }, profile, d);
    const double rhs = surface_area(d - 1) * inner * legendre_eval(d, k, clamp_unit(u.dot(theta)));
    return {lhs, rhs};
}

}  // namespace maxproj
