#pragma once

#include <functional>

namespace maxproj {

using RealFn = std::function<double(double)>;

/// Adaptive Gauss–Kronrod (61-point) on [a, b]. Accepts the result when the
/// error estimate is ≤ max(abs_tol, rel_tol·∫|f|); otherwise throws
/// NumericalError carrying the achieved error estimate.
double integrate(const RealFn& f, double a, double b, double abs_tol = 1e-12,
                 double rel_tol = 1e-12);

/// ∫₋₁¹ f(t) (1−t²)^{(d−3)/2} dt, evaluated as ∫₀^π f(cos φ) sin^{d−2} φ dφ so
/// that the endpoint singularity at d = 2 disappears.
double weighted_integral(const RealFn& f, int d, double abs_tol = 1e-12);

/// ⟨f, g⟩ = ∫₋₁¹ f g (1−t²)^{(d−3)/2} dt.
double weighted_inner(const RealFn& f, const RealFn& g, int d, double abs_tol = 1e-12);

/// Surface integral over S^{d−1} for d ∈ {2, 3} by product quadrature in
/// spherical coordinates. `f` receives a pointer to d coordinates.
double sphere_integral(const std::function<double(const double*)>& f, int d,
                       double abs_tol = 1e-10);

}  // namespace maxproj
