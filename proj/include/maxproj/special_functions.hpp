#pragma once

namespace maxproj {

/// Series for I_p(κ), p ≥ 0, 0 ≤ κ ≤ 50; relative truncation 1e-17.
double bessel_i(double p, double kappa);

/// Kummer's M(a, b, κ) by its power series, b > a > 0, κ ≥ 0.
double kummer_m(double a, double b, double kappa);
/// M(a, b, κ) − 1 summed without forming M (accurate for small κ).
double kummer_m_minus_one(double a, double b, double kappa);

/// A_d(κ) = I_{d/2}(κ)/I_{d/2−1}(κ); A_d(0) = 0.
double bessel_ratio_a(int d, double kappa);
/// a_d(κ) = 2π^{d/2}(κ/2)^{1−d/2} I_{d/2−1}(κ): normalizer of exp(κ θ·x).
double vmf_normalizer(int d, double kappa);
/// log(a_d(κ)/|S^{d−1}|), via log1p of the series tail.
double log_vmf_normalizer_ratio(int d, double kappa);

/// D_d(κ) = M(3/2, d/2+1, κ) / (d M(1/2, d/2, κ)).
double watson_ratio_d(int d, double kappa);
/// d_d(κ) = 2π^{d/2}/Γ(d/2) · M(1/2, d/2, κ): normalizer of exp(κ (θ·x)²).
double watson_normalizer(int d, double kappa);
/// log(d_d(κ)/|S^{d−1}|) = log M(1/2, d/2, κ).
double log_watson_normalizer_ratio(int d, double kappa);

/// P(K > x) for the limiting Kolmogorov distribution, accurate to 1e-12.
double kolmogorov_survival(double x);

/// F_{d−1}(y): CDF of θ·U for U uniform on S^{d−1}.
double projection_cdf(int d, double y);
/// Density of θ·U: |S^{d−2}|/|S^{d−1}| (1−t²)^{(d−3)/2}.
double projection_density(int d, double t);

}  // namespace maxproj
