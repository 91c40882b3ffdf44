#include "maxproj/limit_sim.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "maxproj/errors.hpp"
#include "maxproj/harmonics.hpp"
#include "maxproj/parallel.hpp"
#include "maxproj/zonal_kernel.hpp"

namespace maxproj {

namespace {

// Cover and replication streams are kept apart by deriving the cover seed.
std::uint64_t cover_seed(std::uint64_t seed) {
    std::uint64_t s = seed ^ 0xC0FEC0FEC0FEC0FEull;
    return splitmix64(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs_reconstruction_error(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& l) {
    return (sigma - l * l.transpose()).cwiseAbs().maxCoeff();
}

CovarianceFactor to_factor(const Eigen::MatrixXd& l, double min_ev, double clip_error) {
    CovarianceFactor f;
    f.m = static_cast<int>(l.rows());
    f.rank = static_cast<int>(l.cols());
    f.factor.resize(static_cast<std::size_t>(f.m) * static_cast<std::size_t>(f.rank));
    for (int i = 0; i < f.m; ++i)
        for (int r = 0; r < f.rank; ++r)
            f.factor[static_cast<std::size_t>(i) * static_cast<std::size_t>(f.rank) + static_cast<std::size_t>(r)] = l(i, r);
    f.min_eigenvalue = min_ev;
    f.clip_error = clip_error;
    return f;
}

Eigen::MatrixXd kernel_matrix(int beta, const DirectionCover& cover) {
    const ZonalKernel kernel(beta, cover.dim());
    const int m = cover.size();
    Eigen::MatrixXd sigma(m, m);
    for (int i = 0; i < m; ++i) {
        sigma(i, i) = kernel.rho(1.0);
        for (int j = i + 1; j < m; ++j) {
            const double t = std::clamp(dot(cover.points.row(i), cover.points.row(j)), -1.0, 1.0);
            sigma(i, j) = sigma(j, i) = kernel.rho(t);
        }
    }
    return sigma;
}

}  // namespace

std::string to_string(LimitMethod m) { return m == LimitMethod::kernel ? "kernel" : "harmonic"; }

LimitMethod parse_limit_method(const std::string& s) {
    if (s == "kernel") return LimitMethod::kernel;
    if (s == "harmonic") return LimitMethod::harmonic;
    throw InputError("unknown limit method '" + s + "' (expected kernel or harmonic)");
}

CovarianceFactor kernel_factor(int beta, const DirectionCover& cover) {
    if (cover.size() < cover.dim()) throw DomainError("kernel_factor: need m >= d");
    const Eigen::MatrixXd sigma = kernel_matrix(beta, cover);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    if (es.info() != Eigen::Success) throw NumericalError("kernel_factor: eigensolver failed");
    const auto& ev = es.eigenvalues();
    const double top = ev(ev.size() - 1);
    const double keep = 1e-12 * std::max(top, 0.0);
    std::vector<int> cols;
    for (int i = static_cast<int>(ev.size()) - 1; i >= 0; --i)
        if (ev(i) > keep) cols.push_back(i);
    Eigen::MatrixXd l(sigma.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        l.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]) * std::sqrt(ev(cols[c]));
    return to_factor(l, ev(0), max_abs_reconstruction_error(sigma, l));
}

CovarianceFactor harmonic_factor(int beta, const DirectionCover& cover) {
    const int d = cover.dim();
    if (d != 2 && d != 3) throw UnsupportedError("harmonic method supports d = 2 and d = 3 only");
    if (beta < 1 || beta > 6) throw UnsupportedError("harmonic method supports 1 <= beta <= 6");
    const ZonalKernel kernel(beta, d);
    const HarmonicBasis basis(d, beta);
    const double area = surface_area(d);
    std::vector<std::pair<int, double>> orders;
    int cols = 0;
    for (const auto& e : kernel.spectrum())
        if (e.k >= 1 && e.lambda > 0.0) {
            orders.emplace_back(e.k, std::sqrt(area * e.lambda));
            cols += basis.count(e.k);
        }
    const int m = cover.size();
    Eigen::MatrixXd l(m, cols);
    std::vector<double> buf;
    for (int i = 0; i < m; ++i) {
        int c = 0;
        for (const auto& [k, scale] : orders) {
            buf.resize(static_cast<std::size_t>(basis.count(k)));
            basis.eval(k, cover.points.row(i), buf);
            for (double v : buf) l(i, c++) = scale * v;
        }
    }
    return to_factor(l, 0.0, max_abs_reconstruction_error(kernel_matrix(beta, cover), l));
}

std::vector<double> simulate_factor_max(const CovarianceFactor& f, int replications,
                                        std::uint64_t seed, int workers) {
    if (replications < 1) throw DomainError("simulate: replications must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(replications));
    const auto m = static_cast<std::size_t>(f.m);
    const auto r = static_cast<std::size_t>(f.rank);
    parallel_for(out.size(), workers, [&](std::size_t rep) {
        Rng rng = Rng::stream(seed, rep);
        std::vector<double> z(r);
        for (double& v : z) v = rng.normal();
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double* row = f.factor.data() + i * r;
            double x = 0.0;
            for (std::size_t c = 0; c < r; ++c) x += row[c] * z[c];
            best = std::max(best, x * x);
        }
        out[rep] = best;
    });
    return out;
}

std::vector<double> simulate_kernel_max(int beta, int d, int m, int replications,
                                        std::uint64_t seed, int workers) {
    if (m < d) throw DomainError("simulate_kernel_max: need m >= d");
    const auto cover = make_cover(d, m, cover_seed(seed));
    return simulate_factor_max(kernel_factor(beta, cover), replications, seed, workers);
}

std::vector<double> simulate_harmonic_max(int beta, int d, int m, int replications,
                                          std::uint64_t seed, int workers) {
    const auto cover = make_cover(d, m, cover_seed(seed));
    return simulate_factor_max(harmonic_factor(beta, cover), replications, seed, workers);
}

double empirical_quantile(std::vector<double> values, double alpha) {
    if (values.empty()) throw InputError("empirical_quantile: no values");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("empirical_quantile: alpha must be in (0, 1]");
    const auto n = values.size();
    auto idx = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n) - 1e-9));
    idx = std::clamp<std::size_t>(idx, 1, n) - 1;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx), values.end());
    return values[idx];
}

double bootstrap_quantile_se(const std::vector<double>& values, double alpha, int resamples,
                             std::uint64_t seed) {
    if (resamples < 2) throw DomainError("bootstrap: need at least 2 resamples");
    const auto n = values.size();
    std::vector<double> q(static_cast<std::size_t>(resamples));
    std::vector<double> buf(n);
    for (int b = 0; b < resamples; ++b) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b), 0xB007);
        for (auto& v : buf) v = values[static_cast<std::size_t>(rng.uniform() * static_cast<double>(n))];
        q[static_cast<std::size_t>(b)] = empirical_quantile(buf, alpha);
    }
    double mean = 0.0;
    for (double v : q) mean += v;
    mean /= resamples;
    double var = 0.0;
    for (double v : q) var += (v - mean) * (v - mean);
    return std::sqrt(var / (resamples - 1));
}

int default_limit_m(int d) { return d <= 3 ? 1000 : 5000; }
int default_limit_replications(int d) { return d <= 3 ? 100000 : 10000; }

double cover_efficiency(const DirectionCover& cover, int probes, std::uint64_t seed) {
    Rng rng(seed);
    double acc = 0.0;
    std::vector<double> x(static_cast<std::size_t>(cover.dim()));
    for (int p = 0; p < probes; ++p) {
        uniform_direction_into(x, rng);
        double best = 0.0;
        for (int k = 0; k < cover.size(); ++k) {
            const double t = dot(cover.points.row(k), x);
            best = std::max(best, t * t);
        }
        acc += best;
    }
    return acc / probes;
}

LimitQuantile limit_quantile(int beta, int d, double alpha, LimitMethod method, int m,
                             int replications, std::uint64_t seed, int workers) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("limit_quantile: alpha must be in (0, 1)");
    if (m < d) throw DomainError("limit_quantile: need m >= d");
    const auto cover = make_cover(d, m, cover_seed(seed));
    const auto factor = method == LimitMethod::kernel ? kernel_factor(beta, cover) : harmonic_factor(beta, cover);
    const auto maxima = simulate_factor_max(factor, replications, seed, workers);
    LimitQuantile q;
    q.beta = beta;
    q.d = d;
    q.alpha = alpha;
    q.method = method;
    q.m = m;
    q.replications = replications;
    q.seed = seed;
    q.value = empirical_quantile(maxima, alpha);
    q.mc_stderr = bootstrap_quantile_se(maxima, alpha, 200, seed);
    q.factor_rank = factor.rank;
    q.clip_error = factor.clip_error;
    q.cover_efficiency = cover_efficiency(cover, 500, seed ^ 0x5EEDull);
    return q;
}

}  // namespace maxproj
