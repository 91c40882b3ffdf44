#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxproj/geometry.hpp"

namespace maxproj {

enum class LimitMethod { kernel, harmonic };

std::string to_string(LimitMethod m);
LimitMethod parse_limit_method(const std::string& s);

/// Low-rank factor L (m × rank, row-major) with L Lᵀ ≈ Σ_β on a cover.
struct CovarianceFactor {
    int m = 0;
    int rank = 0;
    std::vector<double> factor;
    double min_eigenvalue = 0.0;  ///< most negative eigenvalue before clipping
    double clip_error = 0.0;      ///< ‖Σ − L Lᵀ‖_max
};

/// Σ_β = [ρ_β(B_i·B_j)] on `cover`, factorized by symmetric eigendecomposition.
/// Negative eigenvalues are clipped to 0; eigenvalues below 1e-12·λ_max are
/// dropped as numerical noise.
CovarianceFactor kernel_factor(int beta, const DirectionCover& cover);

/// Factor built from the harmonic expansion: column (k, j) holds
/// √(|S^{d−1}| λ_k) φ_{kj}(B_i). d ∈ {2, 3}, 1 ≤ β ≤ 6.
CovarianceFactor harmonic_factor(int beta, const DirectionCover& cover);

/// max_i X_i² for X = L N, one value per replication. Replication r draws N
/// from Rng::stream(seed, r).
std::vector<double> simulate_factor_max(const CovarianceFactor& f, int replications,
                                        std::uint64_t seed, int workers = 1);

/// Maxima of Z_β² over a cover of m points drawn from `seed`, by the
/// covariance-kernel method. Requires m ≥ d.
std::vector<double> simulate_kernel_max(int beta, int d, int m, int replications,
                                        std::uint64_t seed, int workers = 1);

/// Same law via the spherical-harmonic representation; d ∈ {2, 3}, β ≤ 6.
std::vector<double> simulate_harmonic_max(int beta, int d, int m, int replications,
                                          std::uint64_t seed, int workers = 1);

/// Inverse empirical CDF: the ⌈αN⌉-th order statistic.
double empirical_quantile(std::vector<double> values, double alpha);

/// Bootstrap standard error of empirical_quantile (B resamples, fixed seed).
double bootstrap_quantile_se(const std::vector<double>& values, double alpha, int resamples,
                             std::uint64_t seed);

struct LimitQuantile {
    int beta = 0;
    int d = 0;
    double alpha = 0.0;
    LimitMethod method = LimitMethod::kernel;
    int m = 0;
    int replications = 0;
    std::uint64_t seed = 0;
    double value = 0.0;
    double mc_stderr = 0.0;
    // Diagnostics.
    int factor_rank = 0;
    double clip_error = 0.0;
    /// Mean over random unit x of max_k (B_k·x)²; 1 for a perfect cover.
    double cover_efficiency = 0.0;
};

/// Default cover size and replication count for d (m=1000, ℓ=10⁵ for d ≤ 3;
/// m=5000, ℓ=10⁴ otherwise).
int default_limit_m(int d);
int default_limit_replications(int d);

LimitQuantile limit_quantile(int beta, int d, double alpha, LimitMethod method, int m,
                             int replications, std::uint64_t seed, int workers = 1);

/// See LimitQuantile::cover_efficiency; `probes` random directions from `seed`.
double cover_efficiency(const DirectionCover& cover, int probes, std::uint64_t seed);

}  // namespace maxproj
