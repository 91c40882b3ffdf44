#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "maxproj/rng.hpp"

namespace maxproj {

/// Vectors within this distance of the unit sphere are left untouched.
inline constexpr double kUnitTolerance = 1e-12;
/// Vectors shorter than this cannot be repaired by normalization.
inline constexpr double kMinRepairNorm = 1e-8;

/// |S^{d-1}| = 2 π^{d/2} / Γ(d/2). Defined for d ≥ 1 (|S^0| = 2).
double surface_area(int d);

enum class NormalizeStatus { unchanged, repaired, rejected };

/// Scales `v` onto the sphere unless it is already within kUnitTolerance.
/// Vectors with norm < kMinRepairNorm are left as-is and reported rejected.
NormalizeStatus normalize_in_place(std::span<double> v);

/// A direction in R^d, d ≥ 2.
class UnitVector {
public:
    /// Normalizes `coords`; throws InputError if d < 2 or the norm is < 1e-8.
    explicit UnitVector(std::vector<double> coords);

    static UnitVector axis(int d, int i);

    int dim() const noexcept { return static_cast<int>(coords_.size()); }
    std::span<const double> coords() const noexcept { return coords_; }
    double operator[](int i) const noexcept { return coords_[static_cast<std::size_t>(i)]; }
    double dot(std::span<const double> other) const noexcept;
    double dot(const UnitVector& other) const noexcept { return dot(other.coords()); }

private:
    std::vector<double> coords_;
};

/// n × d row-major array of unit vectors.
class SphericalSample {
public:
    explicit SphericalSample(int d);
    /// Takes ownership of `row_major` (size n·d) and normalizes every row.
    /// Throws InputError if a row cannot be repaired.
    SphericalSample(int d, std::vector<double> row_major);

    int dim() const noexcept { return d_; }
    int size() const noexcept { return static_cast<int>(data_.size() / static_cast<std::size_t>(d_)); }
    bool empty() const noexcept { return data_.empty(); }

    std::span<const double> row(int i) const noexcept {
        return {data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(d_),
                static_cast<std::size_t>(d_)};
    }
    std::span<const double> data() const noexcept { return data_; }

    /// Appends a row; normalizes it. Throws InputError on dimension mismatch
    /// or an unrepairable row.
    void push_back(std::span<const double> v);
    void reserve(int n) { data_.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d_)); }

    /// Mean vector Ū.
    std::vector<double> mean() const;
    /// Scatter matrix S = (1/n) Σ U_j U_jᵀ (row-major d × d).
    std::vector<double> scatter() const;

private:
    int d_;
    std::vector<double> data_;
};

/// Uniform random cover of S^{d-1} used to approximate a maximum over the sphere.
struct DirectionCover {
    SphericalSample points;
    std::uint64_t seed = 0;

    int dim() const noexcept { return points.dim(); }
    int size() const noexcept { return points.size(); }
};

/// One uniform direction: normalized N(0, I_d) draw.
UnitVector uniform_direction(int d, Rng& rng);
/// Writes a uniform direction into `out` (size d).
void uniform_direction_into(std::span<double> out, Rng& rng);

SphericalSample sample_uniform(int d, int n, Rng& rng);

/// (lat, lon) in degrees to a point on S². Longitude may be given in
/// [−180, 180) or [0, 360).
UnitVector latlon_to_unit(double lat_deg, double lon_deg);

/// m uniform points generated sequentially from Rng(seed); a cover with
/// m₁ < m₂ points is a prefix of the one with m₂ points.
DirectionCover make_cover(int d, int m, std::uint64_t seed);

/// Haar-distributed orthogonal matrix (row-major d × d) with det = +1.
std::vector<double> random_rotation(int d, Rng& rng);
/// Applies a row-major d × d matrix to every row of the sample.
SphericalSample rotate(const SphericalSample& sample, std::span<const double> rotation);

}  // namespace maxproj
