#pragma once

#include <span>

namespace maxproj {

/// Real spherical harmonics on S¹ (d = 2) and S² (d = 3), orthonormal in
/// L²(σ): ∫ φ_{ki} φ_{kj} dσ = δ_ij. With this normalization the addition
/// theorem reads Σ_j φ_{kj}(u) φ_{kj}(v) = ν_d(k)/|S^{d−1}| · P_k^d(u·v).
class HarmonicBasis {
public:
    /// Throws UnsupportedError unless d ∈ {2, 3}.
    HarmonicBasis(int d, int max_order);

    int dim() const noexcept { return d_; }
    int max_order() const noexcept { return max_order_; }
    /// ν_d(k).
    int count(int k) const;

    /// Writes φ_{k,1..ν_d(k)}(x) into `out`; x must be a unit vector.
    void eval(int k, std::span<const double> x, std::span<double> out) const;

private:
    int d_;
    int max_order_;
};

}  // namespace maxproj
