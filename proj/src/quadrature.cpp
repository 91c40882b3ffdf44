#include "maxproj/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "maxproj/errors.hpp"

namespace maxproj {

namespace {

// Subdivision budget for the global adaptive scheme.
constexpr int kMaxIntervals = 4000;

struct Panel {
    double a, b, value, err, l1;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk_panel(const RealFn& f, double a, double b) {
    using Gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    Panel p{a, b, 0.0, 0.0, 0.0};
    p.value = Gk::integrate(f, a, b, 0, 0.0, &p.err, &p.l1);
    return p;
}

}  // namespace

// Global adaptive GK61: always bisect the panel with the largest error.
// The stopping rule uses ∫|f| rather than |∫f|, so integrals that vanish by
// symmetry terminate.
double integrate(const RealFn& f, double a, double b, double abs_tol, double rel_tol) {
    std::priority_queue<Panel> heap;
    Panel first = gk_panel(f, a, b);
    double value = first.value, err = first.err, l1 = first.l1;
    heap.push(first);
    int intervals = 1;
    while (err > std::max(abs_tol, rel_tol * l1) && intervals < kMaxIntervals) {
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gk_panel(f, worst.a, mid), right = gk_panel(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    if (!std::isfinite(value)) throw NumericalError("integrate: non-finite result", err);
    // Re-sum to remove drift from the running updates.
    value = err = l1 = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().err;
        l1 += heap.top().l1;
        heap.pop();
    }
    const double allowed = std::max(abs_tol, rel_tol * l1);
    if (err > allowed) {
        std::ostringstream os;
        os << "integrate: error estimate " << err << " exceeds tolerance " << allowed;
        throw NumericalError(os.str(), err);
    }
    return value;
}

double weighted_integral(const RealFn& f, int d, double abs_tol) {
    if (d < 2) throw DomainError("weighted_integral: d must be >= 2");
    const int p = d - 2;
    return integrate(
        [&f, p](double phi) {
            const double s = std::sin(phi);
            double w = 1.0;
            for (int i = 0; i < p; ++i) w *= s;
            return f(std::cos(phi)) * w;
        },
        0.0, std::numbers::pi, abs_tol);
}

double weighted_inner(const RealFn& f, const RealFn& g, int d, double abs_tol) {
    return weighted_integral([&](double t) { return f(t) * g(t); }, d, abs_tol);
}

double sphere_integral(const std::function<double(const double*)>& f, int d, double abs_tol) {
    constexpr double pi = std::numbers::pi;
    if (d == 2) {
        return integrate(
            [&f](double phi) {
                const double x[2] = {std::cos(phi), std::sin(phi)};
                return f(x);
            },
            0.0, 2.0 * pi, abs_tol);
    }
    if (d == 3) {
        return integrate(
            [&f, abs_tol](double theta) {
                const double st = std::sin(theta), ct = std::cos(theta);
                const double inner = integrate(
                    [&f, st, ct](double phi) {
                        const double x[3] = {st * std::cos(phi), st * std::sin(phi), ct};
                        return f(x);
                    },
                    0.0, 2.0 * pi, abs_tol * 0.1);
                return inner * st;
            },
            0.0, pi, abs_tol);
    }
    throw UnsupportedError("sphere_integral: only d in {2, 3} is supported");
}

}  // namespace maxproj
