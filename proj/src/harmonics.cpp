#include "maxproj/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "maxproj/errors.hpp"

namespace maxproj {

namespace {

constexpr double kPi = std::numbers::pi;

// Q_l^m(z) with P_l^m(z) = (1 − z²)^{m/2} Q_l^m(z) (no Condon–Shortley phase).
double q_lm(int l, int m, double z) {
    double qmm = 1.0;
    for (int i = 1; i <= m; ++i) qmm *= 2 * i - 1;
    if (l == m) return qmm;
    double prev = qmm;
    double cur = z * (2 * m + 1) * qmm;
    for (int ll = m + 2; ll <= l; ++ll) {
        const double next = (z * (2 * ll - 1) * cur - (ll + m - 1) * prev) / (ll - m);
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace

HarmonicBasis::HarmonicBasis(int d, int max_order) : d_(d), max_order_(max_order) {
    if (d != 2 && d != 3) throw UnsupportedError("HarmonicBasis: only d = 2 and d = 3 are supported");
    if (max_order < 0) throw DomainError("HarmonicBasis: negative order");
}

int HarmonicBasis::count(int k) const {
    if (k < 0 || k > max_order_) throw DomainError("HarmonicBasis: order out of range");
    if (d_ == 2) return k == 0 ? 1 : 2;
    return 2 * k + 1;
}

void HarmonicBasis::eval(int k, std::span<const double> x, std::span<double> out) const {
    if (static_cast<int>(x.size()) != d_) throw InputError("HarmonicBasis: dimension mismatch");
    if (static_cast<int>(out.size()) != count(k)) throw InputError("HarmonicBasis: output size mismatch");
    if (d_ == 2) {
        if (k == 0) {
            out[0] = 1.0 / std::sqrt(2 * kPi);
            return;
        }
        // cos kφ and sin kφ from (x + iy)^k.
        double re = 1.0, im = 0.0;
        for (int i = 0; i < k; ++i) {
            const double r = re * x[0] - im * x[1];
            im = re * x[1] + im * x[0];
            re = r;
        }
        const double s = 1.0 / std::sqrt(kPi);
        out[0] = s * re;
        out[1] = s * im;
        return;
    }
    // Y_k^m ∝ Q_k^m(z) · Re/Im (x + iy)^m; (1−z²)^{m/2} e^{imφ} = (x + iy)^m.
    const double z = x[2];
    double re = 1.0, im = 0.0;
    out[0] = std::sqrt((2 * k + 1) / (4 * kPi)) * q_lm(k, 0, z);
    double fact_ratio = 1.0;  // (k − m)!/(k + m)!
    for (int m = 1; m <= k; ++m) {
        const double r = re * x[0] - im * x[1];
        im = re * x[1] + im * x[0];
        re = r;
        fact_ratio /= static_cast<double>(k + m) * (k - m + 1);
        const double norm = std::sqrt(2.0 * (2 * k + 1) / (4 * kPi) * fact_ratio);
        const double q = q_lm(k, m, z);
        out[static_cast<std::size_t>(2 * m - 1)] = norm * q * re;
        out[static_cast<std::size_t>(2 * m)] = norm * q * im;
    }
}

}  // namespace maxproj
