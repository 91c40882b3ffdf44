#pragma once

#include <string>
#include <vector>

#include "maxproj/geometry.hpp"

namespace maxproj {

enum class AlternativeClass { vmf, watson, legendre };

/// Parametric family f(·|κ) with f(·|0) uniform and mean axis θ = e₁.
struct BahadurAlternative {
    AlternativeClass cls = AlternativeClass::vmf;
    int m = 0;  ///< Legendre order, legendre class only

    static BahadurAlternative vmf() { return {AlternativeClass::vmf, 0}; }
    static BahadurAlternative watson() { return {AlternativeClass::watson, 0}; }
    static BahadurAlternative legendre(int m) { return {AlternativeClass::legendre, m}; }
};

/// "vMF", "W" or "LP<m>".
std::string to_string(const BahadurAlternative& alt);
BahadurAlternative parse_bahadur_alternative(const std::string& s);

/// KL(κ, 0) = E_κ log(f(U|κ)/f(U|0)). κ > 0; κ ≤ 1 for the Legendre class.
double kl_divergence(const BahadurAlternative& alt, int d, double kappa);

/// γ_κ at a direction b with θ·b = t: E_κ(b·U)^β − ψ_d(β).
double gamma_profile(const BahadurAlternative& alt, int beta, int d, double kappa, double t);

/// max over the cover of γ_κ²(b).
double gamma_shift(const BahadurAlternative& alt, int beta, int d, double kappa,
                   const DirectionCover& cover);
/// max over all of S^{d−1} of γ_κ²(b); since γ_κ is zonal this is a 1-D
/// maximization over t ∈ [−1, 1] (grid plus Brent refinement).
double gamma_shift_exact(const BahadurAlternative& alt, int beta, int d, double kappa);

/// Σ_{j=1}^β λ_j ν_d(j).
double slope_denominator(int beta, int d);
/// Approximate local slope max γ² / Σ λ_j ν_d(j) on a cover.
double slope(const BahadurAlternative& alt, int beta, int d, double kappa, const DirectionCover& cover);
double slope_exact(const BahadurAlternative& alt, int beta, int d, double kappa);

/// λ_r ν_d(r) for the order r the alternative loads on (1, 2 or m).
double local_limit_target(const BahadurAlternative& alt, int beta, int d);
/// Local Bahadur ARE against the likelihood-ratio test, λ_r ν_d(r) / Σ λ_j ν_d(j).
double local_are(const BahadurAlternative& alt, int beta, int d);

struct AreEntry {
    BahadurAlternative alt;
    int beta;
    int d;
    double value;
};
/// The grid of non-trivial entries (vMF, W, LP₁..LP₆) for d ∈ {2, 3, 5, 10}.
std::vector<AreEntry> are_table();

/// Extrapolates r(κ) = L + Bκ² + … from two points to κ → 0.
double richardson_kappa2(double k1, double r1, double k2, double r2);

struct BahadurReport {
    BahadurAlternative alt;
    int beta = 0;
    int d = 0;
    std::vector<double> kappas;
    std::vector<double> max_gamma2;
    std::vector<double> kl;
    std::vector<double> slopes;      ///< c̃(κ)
    std::vector<double> ratios;      ///< max γ² / (2 KL)
    double extrapolated_ratio = 0.0; ///< Richardson over the last two κ
    double target = 0.0;             ///< λ_r ν_d(r)
    double are = 0.0;                ///< closed-form local ARE
};

/// Evaluates the exact-maximum ratio over `kappas` (at least two, decreasing).
BahadurReport bahadur_report(const BahadurAlternative& alt, int beta, int d,
                             const std::vector<double>& kappas);

}  // namespace maxproj
