#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxproj/geometry.hpp"
#include "maxproj/rng.hpp"

namespace maxproj {

enum class PValueMethod { none, closed_form, random_cover, monte_carlo_null, asymptotic };

std::string to_string(PValueMethod m);

struct TestOutcome {
    std::string name;
    double value = 0.0;
    PValueMethod method = PValueMethod::none;  ///< how `value` was obtained
    std::optional<double> pvalue;
    PValueMethod pvalue_method = PValueMethod::none;
    std::optional<int> cover_m;
    std::optional<std::uint64_t> seed;
    std::optional<int> replications;
};

/// T_{n,β} = n max_k (mean_j (B_k·U_j)^β − ψ_d(β))² over the cover.
TestOutcome t_stat(const SphericalSample& sample, int beta, const DirectionCover& cover);

/// T_{n,1} .. T_{n,beta_max} from a single pass over sample × cover.
std::vector<double> t_stat_all(const SphericalSample& sample, int beta_max, const DirectionCover& cover);

/// n ‖Ū‖².
double t1_closed(const SphericalSample& sample);
/// n · max(|λ_min|, |λ_max|)² for the eigenvalues of S − I/d.
double t2_closed(const SphericalSample& sample);

struct CircleStatistics {
    double kuiper;      ///< V_n
    double watson_u2;   ///< U²_n
    double ajne;        ///< A_n
    double rayleigh_mod;
};
/// Classical tests on S¹; requires d = 2.
CircleStatistics circle_classical(const SphericalSample& sample);

/// Ajne A_n on S^{d−1} (pairwise arccos form).
double ajne_sphere(const SphericalSample& sample);
/// Modified Rayleigh statistic on S^{d−1}.
double rayleigh_mod_sphere(const SphericalSample& sample);
/// Bingham B_n.
double bingham_stat(const SphericalSample& sample);
/// Giné G_n; throws UnsupportedError for d = 2.
double gine_stat(const SphericalSample& sample);

struct SobolevStatistics {
    double ajne;
    double rayleigh_mod;
    double bingham;
    std::optional<double> gine;  ///< absent for d = 2
};
SobolevStatistics sphere_sobolev(const SphericalSample& sample);

/// One-sample KS distance of θ·U_j against F_{d−1}.
double ks_projection(const SphericalSample& sample, std::span<const double> direction);

/// CA_n^q = min over q random projections of the asymptotic KS p-values.
/// Small values are significant.
TestOutcome ca_test(const SphericalSample& sample, int q, Rng& rng);

/// ζ_{d−1}(ϑ), ϑ ∈ [0, π]. Closed forms for d ≤ 4; for d ≥ 5 a cached cubic
/// spline over a quadrature grid.
double cvm_zeta(int d, double theta);
/// The integral form of ζ_{d−1} evaluated directly by quadrature (d ≥ 3).
double cvm_zeta_quadrature(int d, double theta);

TestOutcome cvm_test(const SphericalSample& sample);

}  // namespace maxproj
