#include "maxproj/samplers.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "maxproj/errors.hpp"
#include "maxproj/legendre.hpp"
#include "maxproj/quadrature.hpp"
#include "maxproj/special_functions.hpp"

namespace maxproj {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void count(SamplerDiagnostics* diag, bool accepted) {
    if (!diag) return;
    ++diag->proposals;
    if (accepted) ++diag->accepted;
}

// X = wθ + √(1−w²) v with v uniform on the great sphere orthogonal to θ.
void vmf_draw(const VonMisesFisher& s, Rng& rng, std::span<double> out, SamplerDiagnostics* diag) {
    const int d = s.theta.dim();
    const auto th = s.theta.coords();
    const double w = sample_vmf_cosine(d, s.kappa, rng, diag);
    for (;;) {
        for (double& x : out) x = rng.normal();
        const double proj = dot(out, th);
        double ss = 0;
        for (int i = 0; i < d; ++i) {
            out[i] -= proj * th[i];
            ss += out[i] * out[i];
        }
        if (ss > 1e-20) {
            const double r = std::sqrt(std::max(0.0, 1.0 - w * w)) / std::sqrt(ss);
            for (int i = 0; i < d; ++i) out[i] = w * th[i] + r * out[i];
            return;
        }
    }
}

// exp(xᵀBx) sampler: Kent, Ganeiber & Mardia (2018) angular central Gaussian envelope.
class BinghamSampler {
public:
    BinghamSampler(int d, const std::vector<double>& B) : d_(d) {
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Bm(B.data(), d, d);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Bm);
        if (es.info() != Eigen::Success) throw NumericalError("Bingham: eigendecomposition failed");
        V_ = es.eigenvectors();
        const Eigen::VectorXd mu = es.eigenvalues();
        const double top = mu.maxCoeff();
        lambda_.resize(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) lambda_[static_cast<std::size_t>(i)] = top - mu(i);
        // Σ 1/(b + 2λ_i) = 1 has a root in [1, d].
        double lo = 1.0, hi = static_cast<double>(d);
        auto f = [&](double b) {
            double s = 0;
            for (double l : lambda_) s += 1.0 / (b + 2.0 * l);
            return s - 1.0;
        };
        if (f(hi) >= 0) lo = hi;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) > 0 ? lo : hi) = mid;
        }
        b_ = 0.5 * (lo + hi);
        scale_.resize(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            scale_[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(1.0 + 2.0 * lambda_[static_cast<std::size_t>(i)] / b_);
        log_m_ = -0.5 * (d - b_) + 0.5 * d * std::log(d / b_);
        y_.resize(static_cast<std::size_t>(d));
    }

    void draw(Rng& rng, std::span<double> out, SamplerDiagnostics* diag) {
        if (!metropolis_) {
            for (;;) {
                const double log_ratio = propose(rng);
                const bool ok = std::log(rng.uniform_open()) < log_ratio - log_m_;
                ++proposals_;
                count(diag, ok);
                if (ok) {
                    ++accepted_;
                    to_output(out);
                    return;
                }
                if (proposals_ >= kWindow && accepted_ < kMinRate * proposals_) {
                    metropolis_ = true;
                    if (diag) diag->metropolis_fallback = true;
                    start_chain(rng);
                    break;
                }
            }
        }
        for (int step = 0; step < kThin; ++step) {
            const double lr = propose(rng);
            std::vector<double> cand = y_;
            const bool ok = std::log(rng.uniform_open()) < lr - chain_log_ratio_;
            count(diag, ok);
            if (ok) {
                chain_ = cand;
                chain_log_ratio_ = lr;
            }
        }
        y_ = chain_;
        to_output(out);
    }

private:
    static constexpr long long kWindow = 2000;
    static constexpr double kMinRate = 1e-3;
    static constexpr int kThin = 10;
    static constexpr int kBurnIn = 1000;

    // Draws a unit ACG proposal into y_ and returns log f*(y) − log g*(y).
    double propose(Rng& rng) {
        double ss = 0;
        for (int i = 0; i < d_; ++i) {
            const double z = rng.normal() * scale_[static_cast<std::size_t>(i)];
            y_[static_cast<std::size_t>(i)] = z;
            ss += z * z;
        }
        const double inv = 1.0 / std::sqrt(ss);
        double quad_a = 0, quad_omega = 0;
        for (int i = 0; i < d_; ++i) {
            double& y = y_[static_cast<std::size_t>(i)];
            y *= inv;
            const double l = lambda_[static_cast<std::size_t>(i)];
            quad_a += l * y * y;
            quad_omega += (1.0 + 2.0 * l / b_) * y * y;
        }
        return -quad_a + 0.5 * d_ * std::log(quad_omega);
    }

    void start_chain(Rng& rng) {
        chain_log_ratio_ = propose(rng);
        chain_ = y_;
        for (int i = 0; i < kBurnIn; ++i) {
            const double lr = propose(rng);
            if (std::log(rng.uniform_open()) < lr - chain_log_ratio_) {
                chain_ = y_;
                chain_log_ratio_ = lr;
            }
        }
    }

    void to_output(std::span<double> out) const {
        for (int r = 0; r < d_; ++r) {
            double s = 0;
            for (int c = 0; c < d_; ++c) s += V_(r, c) * y_[static_cast<std::size_t>(c)];
            out[static_cast<std::size_t>(r)] = s;
        }
    }

    int d_;
    Eigen::MatrixXd V_;
    std::vector<double> lambda_, scale_, y_, chain_;
    double b_ = 1.0, log_m_ = 0.0, chain_log_ratio_ = 0.0;
    long long proposals_ = 0, accepted_ = 0;
    bool metropolis_ = false;
};

std::vector<double> outer(const UnitVector& theta, double kappa) {
    const int d = theta.dim();
    std::vector<double> B(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) B[static_cast<std::size_t>(i * d + j)] = kappa * theta[i] * theta[j];
    return B;
}

double vmf_density(const VonMisesFisher& s, std::span<const double> x) {
    return std::exp(s.kappa * dot(s.theta.coords(), x)) / vmf_normalizer(s.theta.dim(), s.kappa);
}

void check_vmf(const VonMisesFisher& s, int d) {
    if (s.theta.dim() != d) throw InputError("vMF component dimension mismatch");
    if (!(s.kappa >= 0)) throw InputError("vMF: kappa must be >= 0");
}

}  // namespace

int dimension(const AlternativeSpec& spec) {
    return std::visit(overloaded{
                          [](const UniformDist& s) { return s.d; },
                          [](const VonMisesFisher& s) { return s.theta.dim(); },
                          [](const WatsonDist& s) { return s.theta.dim(); },
                          [](const BinghamDist& s) { return s.d; },
                          [](const MixVMF2& s) { return s.first.theta.dim(); },
                          [](const MixVMF3& s) { return s.first.theta.dim(); },
                          [](const LegendreDist& s) { return s.theta.dim(); },
                      },
                      spec);
}

void validate(const AlternativeSpec& spec) {
    const int d = dimension(spec);
    if (d < 2) throw InputError("alternative: d must be >= 2");
    std::visit(overloaded{
                   [](const UniformDist&) {},
                   [d](const VonMisesFisher& s) { check_vmf(s, d); },
                   [](const WatsonDist& s) {
                       if (!(s.kappa >= 0)) throw InputError("Watson: kappa must be >= 0");
                   },
                   [](const BinghamDist& s) {
                       if (s.A.size() != static_cast<std::size_t>(s.d * s.d))
                           throw InputError("Bingham: A must be d x d");
                       for (int i = 0; i < s.d; ++i)
                           for (int j = 0; j < i; ++j)
                               if (std::abs(s.A[static_cast<std::size_t>(i * s.d + j)] -
                                            s.A[static_cast<std::size_t>(j * s.d + i)]) > 1e-12)
                                   throw InputError("Bingham: A must be symmetric");
                       for (double a : s.A)
                           if (!std::isfinite(a)) throw InputError("Bingham: A has non-finite entries");
                   },
                   [d](const MixVMF2& s) {
                       if (!(s.p > 0 && s.p < 1)) throw InputError("Mix-vMF: p must be in (0, 1)");
                       check_vmf(s.first, d);
                       check_vmf(s.second, d);
                   },
                   [d](const MixVMF3& s) {
                       if (!(s.p > 0 && s.p < 0.5)) throw InputError("Mix-vMF (3 centres): p must be in (0, 1/2)");
                       check_vmf(s.first, d);
                       check_vmf(s.second, d);
                       check_vmf(s.third, d);
                   },
                   [](const LegendreDist& s) {
                       if (s.m < 1) throw InputError("LP: m must be >= 1");
                       if (!(s.kappa >= 0 && s.kappa <= 1)) throw InputError("LP: kappa must be in [0, 1]");
                   },
               },
               spec);
}

std::string describe(const AlternativeSpec& spec) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const UniformDist&) { os << "uniform"; },
                   [&](const VonMisesFisher& s) { os << "vmf(kappa=" << s.kappa << ")"; },
                   [&](const WatsonDist& s) { os << "watson(kappa=" << s.kappa << ")"; },
                   [&](const BinghamDist&) { os << "bingham"; },
                   [&](const MixVMF2& s) {
                       os << "mixvmf2(p=" << s.p << ",k1=" << s.first.kappa << ",k2=" << s.second.kappa << ")";
                   },
                   [&](const MixVMF3& s) {
                       os << "mixvmf3(p=" << s.p << ",k1=" << s.first.kappa << ",k2=" << s.second.kappa
                          << ",k3=" << s.third.kappa << ")";
                   },
                   [&](const LegendreDist& s) { os << "lp(m=" << s.m << ",kappa=" << s.kappa << ")"; },
               },
               spec);
    return os.str();
}

double sample_gamma(double shape, Rng& rng) {
    if (!(shape > 0)) throw DomainError("sample_gamma: shape must be > 0");
    if (shape < 1.0) return sample_gamma(shape + 1.0, rng) * std::pow(rng.uniform_open(), 1.0 / shape);
    // Marsaglia & Tsang.
    const double dd = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * dd);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0);
        v = v * v * v;
        const double u = rng.uniform_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return dd * v;
        if (std::log(u) < 0.5 * x * x + dd * (1.0 - v + std::log(v))) return dd * v;
    }
}

double sample_vmf_cosine(int d, double kappa, Rng& rng, SamplerDiagnostics* diag) {
    const double dm1 = d - 1.0;
    const double b = dm1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dm1 * dm1));
    const double x0 = (1.0 - b) / (1.0 + b);
    const double c = kappa * x0 + dm1 * std::log(1.0 - x0 * x0);
    for (;;) {
        const double g1 = sample_gamma(0.5 * dm1, rng);
        const double g2 = sample_gamma(0.5 * dm1, rng);
        const double z = g1 / (g1 + g2);
        const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        const double u = rng.uniform_open();
        const bool ok = kappa * w + dm1 * std::log(1.0 - x0 * w) - c >= std::log(u);
        count(diag, ok);
        if (ok) return std::clamp(w, -1.0, 1.0);
    }
}

SphericalSample sample(const AlternativeSpec& spec, int n, Rng& rng, SamplerDiagnostics* diag) {
    if (n < 1) throw InputError("sample: n must be >= 1");
    validate(spec);
    const int d = dimension(spec);
    const auto ud = static_cast<std::size_t>(d);
    std::vector<double> data(ud * static_cast<std::size_t>(n));
    auto row = [&](int i) { return std::span<double>(data.data() + static_cast<std::size_t>(i) * ud, ud); };

    std::visit(overloaded{
                   [&](const UniformDist&) {
                       for (int i = 0; i < n; ++i) uniform_direction_into(row(i), rng);
                   },
                   [&](const VonMisesFisher& s) {
                       for (int i = 0; i < n; ++i) vmf_draw(s, rng, row(i), diag);
                   },
                   [&](const WatsonDist& s) {
                       BinghamSampler bs(d, outer(s.theta, s.kappa));
                       for (int i = 0; i < n; ++i) bs.draw(rng, row(i), diag);
                   },
                   [&](const BinghamDist& s) {
                       BinghamSampler bs(d, s.A);
                       for (int i = 0; i < n; ++i) bs.draw(rng, row(i), diag);
                   },
                   [&](const MixVMF2& s) {
                       for (int i = 0; i < n; ++i) {
                           const double u = rng.uniform();
                           vmf_draw(u < s.p ? s.first : s.second, rng, row(i), diag);
                       }
                   },
                   [&](const MixVMF3& s) {
                       for (int i = 0; i < n; ++i) {
                           const double u = rng.uniform();
                           vmf_draw(u < s.p ? s.first : (u < 2 * s.p ? s.second : s.third), rng, row(i), diag);
                       }
                   },
                   [&](const LegendreDist& s) {
                       const auto& poly = legendre_coefficients_double(d, s.m);
                       const auto th = s.theta.coords();
                       for (int i = 0; i < n; ++i) {
                           for (;;) {
                               uniform_direction_into(row(i), rng);
                               const double t = std::clamp(dot(th, row(i)), -1.0, 1.0);
                               const double accept = (1.0 + s.kappa * legendre_eval_coeffs(poly, t)) / (1.0 + s.kappa);
                               const bool ok = rng.uniform() < accept;
                               count(diag, ok);
                               if (ok) break;
                           }
                       }
                   },
               },
               spec);
    return SphericalSample(d, std::move(data));
}

BinghamNormalizer bingham_normalizer(const BinghamDist& spec) {
    validate(spec);
    const int d = spec.d;
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Am(spec.A.data(), d, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Am);
    const Eigen::VectorXd mu = es.eigenvalues();  // ascending
    constexpr double pi = std::numbers::pi;
    if (d == 2) {
        const double half = 0.5 * (mu(1) - mu(0));
        return {2 * pi * std::exp(0.5 * (mu(0) + mu(1))) * bessel_i(0, half), 0.0};
    }
    if (d == 3) {
        // Condition on t = x₃ along the top eigenvector; the remaining circle
        // of radius √(1−t²) contributes 2π e^{(μ₁+μ₂)s/2} I₀((μ₂−μ₁)s/2), s = 1−t².
        const double v = integrate(
            [&](double t) {
                const double s = 1.0 - t * t;
                return 2 * pi * std::exp(mu(2) * t * t + 0.5 * (mu(0) + mu(1)) * s) *
                       bessel_i(0, 0.5 * (mu(1) - mu(0)) * s);
            },
            -1.0, 1.0, 0.0, 1e-12);
        return {v, 0.0};
    }
    // Monte Carlo with a fixed stream so density() is deterministic.
    constexpr int kDraws = 1000000;
    Rng rng(0xb1a9u);
    std::vector<double> x(static_cast<std::size_t>(d));
    double m1 = 0, m2 = 0;
    const double shift = mu(d - 1);
    for (int i = 0; i < kDraws; ++i) {
        uniform_direction_into(x, rng);
        double q = 0;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) q += x[static_cast<std::size_t>(r)] * Am(r, c) * x[static_cast<std::size_t>(c)];
        const double e = std::exp(q - shift);
        m1 += e;
        m2 += e * e;
    }
    m1 /= kDraws;
    m2 /= kDraws;
    const double area = surface_area(d) * std::exp(shift);
    return {area * m1, area * std::sqrt(std::max(0.0, m2 - m1 * m1) / kDraws)};
}

double density(const AlternativeSpec& spec, std::span<const double> x) {
    validate(spec);
    const int d = dimension(spec);
    if (static_cast<int>(x.size()) != d) throw InputError("density: dimension mismatch");
    return std::visit(overloaded{
                          [d](const UniformDist&) { return 1.0 / surface_area(d); },
                          [x](const VonMisesFisher& s) { return vmf_density(s, x); },
                          [x, d](const WatsonDist& s) {
                              const double t = dot(s.theta.coords(), x);
                              return std::exp(s.kappa * t * t) / watson_normalizer(d, s.kappa);
                          },
                          [x, d](const BinghamDist& s) {
                              double q = 0;
                              for (int r = 0; r < d; ++r)
                                  for (int c = 0; c < d; ++c)
                                      q += x[static_cast<std::size_t>(r)] * s.A[static_cast<std::size_t>(r * d + c)] *
                                           x[static_cast<std::size_t>(c)];
                              return std::exp(q) / bingham_normalizer(s).value;
                          },
                          [x](const MixVMF2& s) {
                              return s.p * vmf_density(s.first, x) + (1 - s.p) * vmf_density(s.second, x);
                          },
                          [x](const MixVMF3& s) {
                              return s.p * vmf_density(s.first, x) + s.p * vmf_density(s.second, x) +
                                     (1 - 2 * s.p) * vmf_density(s.third, x);
                          },
                          [x, d](const LegendreDist& s) {
                              const double t = std::clamp(dot(s.theta.coords(), x), -1.0, 1.0);
                              return (1.0 + s.kappa * legendre_eval(d, s.m, t)) / surface_area(d);
                          },
                      },
                      spec);
}

UnitVector preset_theta1(int d) { return UnitVector::axis(d, 0); }

UnitVector preset_theta2(int d) { return UnitVector(std::vector<double>(static_cast<std::size_t>(d), -1.0)); }

UnitVector preset_theta3(int d) {
    std::vector<double> v(static_cast<std::size_t>(d), 1.0);
    v[0] = -1.0;
    return UnitVector(std::move(v));
}

std::vector<double> preset_a1(int d) {
    std::vector<double> A(static_cast<std::size_t>(d * d), 0.0);
    for (int i = 0; i < d; ++i) A[static_cast<std::size_t>(i * d + i)] = i + 1.0;
    return A;
}

std::vector<double> preset_a2(int d) {
    std::vector<double> A(static_cast<std::size_t>(d * d), 0.0);
    A[0] = -d;
    A[static_cast<std::size_t>(d * d - 1)] = d;
    return A;
}

AlternativeSpec vmf1(int d, double kappa) { return VonMisesFisher{preset_theta1(d), kappa}; }
AlternativeSpec watson1(int d, double kappa) { return WatsonDist{preset_theta1(d), kappa}; }

AlternativeSpec mix_vmf1(int d, double p) {
    std::vector<double> neg(static_cast<std::size_t>(d), 0.0);
    neg[0] = -1.0;
    return MixVMF2{p, {UnitVector(neg), 1.0}, {preset_theta1(d), 1.0}};
}

AlternativeSpec mix_vmf2(int d, double p) {
    std::vector<double> neg(static_cast<std::size_t>(d), 0.0);
    neg[0] = -1.0;
    return MixVMF2{p, {UnitVector(neg), 1.0}, {preset_theta1(d), 4.0}};
}

AlternativeSpec mix_vmf3(int d, double p) {
    return MixVMF3{p, {preset_theta2(d), 2.0}, {preset_theta3(d), 3.0}, {preset_theta1(d), 3.0}};
}

AlternativeSpec mix_vmf4(int d, double p) {
    return MixVMF3{p, {preset_theta2(d), 2.0}, {preset_theta3(d), 3.0}, {preset_theta1(d), 4.0}};
}

AlternativeSpec bing1(int d, double kappa) {
    auto A = preset_a1(d);
    for (double& a : A) a *= kappa;
    return BinghamDist{d, A};
}

AlternativeSpec bing2(int d, double kappa) {
    auto A = preset_a2(d);
    for (double& a : A) a *= kappa;
    return BinghamDist{d, A};
}

AlternativeSpec lp(int d, int m, double kappa) { return LegendreDist{m, preset_theta1(d), kappa}; }

}  // namespace maxproj
