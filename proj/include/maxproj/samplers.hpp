#pragma once

#include <string>
#include <variant>
#include <vector>

#include "maxproj/geometry.hpp"
#include "maxproj/rng.hpp"

namespace maxproj {

struct UniformDist {
    int d;
};
struct VonMisesFisher {
    UnitVector theta;
    double kappa;
};
/// Density ∝ exp(κ (θ·x)²), κ ≥ 0.
struct WatsonDist {
    UnitVector theta;
    double kappa;
};
/// Density ∝ exp(xᵀAx) with A symmetric (row-major d × d).
struct BinghamDist {
    int d;
    std::vector<double> A;
};
/// Y₁ with probability p, Y₂ otherwise.
struct MixVMF2 {
    double p;
    VonMisesFisher first, second;
};
/// Y₁ with probability p, Y₂ with probability p, Y₃ otherwise; p < 1/2.
struct MixVMF3 {
    double p;
    VonMisesFisher first, second, third;
};
/// Density (1 + κ P_m^d(θ·x))/|S^{d−1}|, κ ∈ [0, 1].
struct LegendreDist {
    int m;
    UnitVector theta;
    double kappa;
};

using AlternativeSpec =
    std::variant<UniformDist, VonMisesFisher, WatsonDist, BinghamDist, MixVMF2, MixVMF3, LegendreDist>;

int dimension(const AlternativeSpec& spec);
/// Throws InputError on invalid parameters.
void validate(const AlternativeSpec& spec);
std::string describe(const AlternativeSpec& spec);

struct SamplerDiagnostics {
    long long proposals = 0;
    long long accepted = 0;
    bool metropolis_fallback = false;
};

SphericalSample sample(const AlternativeSpec& spec, int n, Rng& rng, SamplerDiagnostics* diag = nullptr);

/// Density w.r.t. σ. Bingham normalizers for d > 3 are Monte Carlo estimates.
double density(const AlternativeSpec& spec, std::span<const double> x);

struct BinghamNormalizer {
    double value;
    double stderr_;  ///< zero when computed by quadrature
};
/// c(d, A) = ∫ exp(xᵀAx) dσ(x).
BinghamNormalizer bingham_normalizer(const BinghamDist& spec);

/// Cosine w = θ·X for X ~ vMF(θ, κ) on S^{d−1} (Wood's rejection scheme).
double sample_vmf_cosine(int d, double kappa, Rng& rng, SamplerDiagnostics* diag = nullptr);
/// Gamma(shape, 1) variate.
double sample_gamma(double shape, Rng& rng);

// Presets.
UnitVector preset_theta1(int d);
UnitVector preset_theta2(int d);
UnitVector preset_theta3(int d);
std::vector<double> preset_a1(int d);
std::vector<double> preset_a2(int d);

AlternativeSpec vmf1(int d, double kappa);
AlternativeSpec watson1(int d, double kappa);
AlternativeSpec mix_vmf1(int d, double p);
AlternativeSpec mix_vmf2(int d, double p);
AlternativeSpec mix_vmf3(int d, double p);
AlternativeSpec mix_vmf4(int d, double p);
AlternativeSpec bing1(int d, double kappa);
AlternativeSpec bing2(int d, double kappa);
AlternativeSpec lp(int d, int m, double kappa);

}  // namespace maxproj
