#include "maxproj/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "maxproj/errors.hpp"

namespace maxproj {

double surface_area(int d) {
    if (d <= 0) throw DomainError("surface_area: d must be >= 1, got " + std::to_string(d));
    const double half = 0.5 * d;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

NormalizeStatus normalize_in_place(std::span<double> v) {
    double ss = 0.0;
    for (double x : v) ss += x * x;
    const double norm = std::sqrt(ss);
    if (!(norm >= kMinRepairNorm) || !std::isfinite(norm)) return NormalizeStatus::rejected;
    if (std::abs(norm - 1.0) <= kUnitTolerance) return NormalizeStatus::unchanged;
    for (double& x : v) x /= norm;
    return NormalizeStatus::repaired;
}

UnitVector::UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) throw InputError("UnitVector: dimension must be >= 2");
    if (normalize_in_place(coords_) == NormalizeStatus::rejected)
        throw InputError("UnitVector: vector too short to normalize");
}

UnitVector UnitVector::axis(int d, int i) {
    if (i < 0 || i >= d) throw InputError("UnitVector::axis: index out of range");
    std::vector<double> c(static_cast<std::size_t>(d), 0.0);
    c[static_cast<std::size_t>(i)] = 1.0;
    return UnitVector(std::move(c));
}

double UnitVector::dot(std::span<const double> other) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < coords_.size(); ++i) s += coords_[i] * other[i];
    return s;
}

SphericalSample::SphericalSample(int d) : d_(d) {
    if (d < 2) throw InputError("SphericalSample: dimension must be >= 2");
}

SphericalSample::SphericalSample(int d, std::vector<double> row_major)
    : d_(d), data_(std::move(row_major)) {
    if (d < 2) throw InputError("SphericalSample: dimension must be >= 2");
    if (data_.size() % static_cast<std::size_t>(d) != 0)
        throw InputError("SphericalSample: data size is not a multiple of d");
    const auto ud = static_cast<std::size_t>(d);
    for (std::size_t i = 0; i < data_.size(); i += ud) {
        if (normalize_in_place({data_.data() + i, ud}) == NormalizeStatus::rejected)
            throw InputError("SphericalSample: row " + std::to_string(i / ud) +
                             " cannot be normalized");
    }
}

void SphericalSample::push_back(std::span<const double> v) {
    if (static_cast<int>(v.size()) != d_)
        throw InputError("SphericalSample::push_back: dimension mismatch");
    const std::size_t off = data_.size();
    data_.insert(data_.end(), v.begin(), v.end());
    if (normalize_in_place({data_.data() + off, v.size()}) == NormalizeStatus::rejected) {
        data_.resize(off);
        throw InputError("SphericalSample::push_back: row cannot be normalized");
    }
}

std::vector<double> SphericalSample::mean() const {
    std::vector<double> m(static_cast<std::size_t>(d_), 0.0);
    const int n = size();
    for (int i = 0; i < n; ++i) {
        auto r = row(i);
        for (int k = 0; k < d_; ++k) m[static_cast<std::size_t>(k)] += r[static_cast<std::size_t>(k)];
    }
    if (n > 0)
        for (double& x : m) x /= n;
    return m;
}

std::vector<double> SphericalSample::scatter() const {
    const auto ud = static_cast<std::size_t>(d_);
    std::vector<double> s(ud * ud, 0.0);
    const int n = size();
    for (int i = 0; i < n; ++i) {
        auto r = row(i);
        for (std::size_t a = 0; a < ud; ++a)
            for (std::size_t b = a; b < ud; ++b) s[a * ud + b] += r[a] * r[b];
    }
    for (std::size_t a = 0; a < ud; ++a)
        for (std::size_t b = a; b < ud; ++b) {
            s[a * ud + b] /= n;
            s[b * ud + a] = s[a * ud + b];
        }
    return s;
}

void uniform_direction_into(std::span<double> out, Rng& rng) {
    for (;;) {
        double ss = 0.0;
        for (double& x : out) {
            x = rng.normal();
            ss += x * x;
        }
        if (ss > 0.0) {
            const double inv = 1.0 / std::sqrt(ss);
            for (double& x : out) x *= inv;
            return;
        }
    }
}

UnitVector uniform_direction(int d, Rng& rng) {
    if (d < 2) throw InputError("uniform_direction: d must be >= 2");
    std::vector<double> c(static_cast<std::size_t>(d));
    uniform_direction_into(c, rng);
    return UnitVector(std::move(c));
}

SphericalSample sample_uniform(int d, int n, Rng& rng) {
    if (d < 2) throw InputError("sample_uniform: d must be >= 2");
    if (n < 1) throw InputError("sample_uniform: n must be >= 1");
    const auto ud = static_cast<std::size_t>(d);
    std::vector<double> data(ud * static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < data.size(); i += ud) uniform_direction_into({data.data() + i, ud}, rng);
    return SphericalSample(d, std::move(data));
}

UnitVector latlon_to_unit(double lat_deg, double lon_deg) {
    if (!(lat_deg >= -90.0 && lat_deg <= 90.0))
        throw InputError("latitude out of range [-90, 90]: " + std::to_string(lat_deg));
    if (!(lon_deg >= -180.0 && lon_deg < 360.0))
        throw InputError("longitude out of range [-180, 360): " + std::to_string(lon_deg));
    if (lon_deg >= 180.0) lon_deg -= 360.0;
    constexpr double deg = std::numbers::pi / 180.0;
    const double lat = lat_deg * deg;
    const double lon = lon_deg * deg;
    // Exact zeros at the poles and on the axes.
    const double cl = (std::abs(lat_deg) == 90.0) ? 0.0 : std::cos(lat);
    const double sl = (lat_deg == 0.0) ? 0.0 : std::sin(lat);
    double co = std::cos(lon), so = std::sin(lon);
    if (lon_deg == 0.0) { co = 1.0; so = 0.0; }
    else if (lon_deg == 90.0) { co = 0.0; so = 1.0; }
    else if (lon_deg == -90.0) { co = 0.0; so = -1.0; }
    else if (lon_deg == -180.0) { co = -1.0; so = 0.0; }
    return UnitVector({cl * co, cl * so, sl});
}

DirectionCover make_cover(int d, int m, std::uint64_t seed) {
    if (m < 1) throw InputError("make_cover: m must be >= 1");
    if (d < 2) throw InputError("make_cover: d must be >= 2");
    Rng rng(seed);
    return DirectionCover{sample_uniform(d, m, rng), seed};
}

std::vector<double> random_rotation(int d, Rng& rng) {
    // Gram-Schmidt on a Gaussian matrix gives a Haar orthogonal matrix.
    const auto ud = static_cast<std::size_t>(d);
    std::vector<double> q(ud * ud);
    for (double& x : q) x = rng.normal();
    for (std::size_t i = 0; i < ud; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < ud; ++k) dot += q[i * ud + k] * q[j * ud + k];
            for (std::size_t k = 0; k < ud; ++k) q[i * ud + k] -= dot * q[j * ud + k];
        }
        double nrm = 0.0;
        for (std::size_t k = 0; k < ud; ++k) nrm += q[i * ud + k] * q[i * ud + k];
        nrm = std::sqrt(nrm);
        for (std::size_t k = 0; k < ud; ++k) q[i * ud + k] /= nrm;
    }
    // Flip the sign of the first row if needed so that det = +1.
    std::vector<double> lu = q;
    double det = 1.0;
    for (std::size_t c = 0; c < ud; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < ud; ++r)
            if (std::abs(lu[r * ud + c]) > std::abs(lu[piv * ud + c])) piv = r;
        if (piv != c) {
            for (std::size_t k = 0; k < ud; ++k) std::swap(lu[c * ud + k], lu[piv * ud + k]);
            det = -det;
        }
        det *= lu[c * ud + c];
        for (std::size_t r = c + 1; r < ud; ++r) {
            const double f = lu[r * ud + c] / lu[c * ud + c];
            for (std::size_t k = c; k < ud; ++k) lu[r * ud + k] -= f * lu[c * ud + k];
        }
    }
    if (det < 0)
        for (std::size_t k = 0; k < ud; ++k) q[k] = -q[k];
    return q;
}

SphericalSample rotate(const SphericalSample& sample, std::span<const double> rotation) {
    const int d = sample.dim();
    const auto ud = static_cast<std::size_t>(d);
    if (rotation.size() != ud * ud) throw InputError("rotate: rotation must be d x d");
    std::vector<double> out(static_cast<std::size_t>(sample.size()) * ud);
    for (int i = 0; i < sample.size(); ++i) {
        auto r = sample.row(i);
        for (std::size_t a = 0; a < ud; ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b < ud; ++b) s += rotation[a * ud + b] * r[b];
            out[static_cast<std::size_t>(i) * ud + a] = s;
        }
    }
    return SphericalSample(d, std::move(out));
}

}  // namespace maxproj
