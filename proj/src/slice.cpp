#include "tentlab/slice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tentlab/functionals.hpp"

namespace tentlab {

int level_index(const Grid& g, double t) {
    for (int k = 0; k < g.levels(); ++k)
        if (std::abs(g.t_level(k) - t) <= 1e-9 * t) return k;
    throw std::invalid_argument("level_index: t is not a grid t-level");
}

namespace {

LineFunction ball_average_function(const LineFunction& f, double r, double t) {
    if (f.grid.n() != 1) throw std::invalid_argument("slice_norm: 1D only");
    if (t < f.grid.h()) throw std::invalid_argument("slice_norm: t must be at least h");
    BallAverager avg(f, r);
    LineFunction out(f.grid);
    for (int j = 0; j < f.grid.axis_points(); ++j)
        out.values[j] = avg.average(f.grid.x_coord(j), t);
    return out;
}

} // namespace

double slice_norm(const LineFunction& f, double p, double r, double t, bool weak) {
    if (p <= 0 || r < 1) throw std::invalid_argument("slice_norm: need p > 0 and r >= 1");
    const LineFunction inner = ball_average_function(f, r, t);
    return weak ? weak_lorentz_norm(inner, p) : lq_norm(inner, p);
}

HalfSpaceFunction inject(const LineFunction& f, double t) {
    const Grid& g = f.grid;
    const int k = level_index(g, t);
    if (k > g.levels() - g.spec().m)
        throw std::invalid_argument("inject: the e-fold [t, et) exceeds the grid");
    HalfSpaceFunction F(g);
    for (int j = k; j < k + g.spec().m; ++j) F.set_slice(j, f);
    return F;
}

LineFunction project(const HalfSpaceFunction& F, double t) {
    const Grid& g = F.grid;
    const int k = level_index(g, t);
    if (k > g.levels() - g.spec().m)
        throw std::invalid_argument("project: the e-fold [t, et) exceeds the grid");
    LineFunction out(g);
    const double w = g.level_weight();
    for (int j = k; j < k + g.spec().m; ++j)
        for (std::size_t i = 0; i < g.x_count(); ++i) out.values[i] += w * F.at(j, i);
    return out;
}

double amalgam_norm(const LineFunction& f, double p, double q) {
    const Grid& g = f.grid;
    if (g.n() != 1) throw std::invalid_argument("amalgam_norm: 1D only");
    if (p <= 0 || q <= 0) throw std::invalid_argument("amalgam_norm: exponents must be positive");
    const long nx = g.axis_points();
    const long first = static_cast<long>(std::floor(-g.X()));
    const long last = static_cast<long>(std::ceil(g.X())) - 1;
    double acc = 0.0;
    for (long w = first; w <= last; ++w) {
        double local = 0.0;
        for (long j = 0; j < nx; ++j) {
            const double x = g.x_coord(static_cast<int>(j));
            if (x >= static_cast<double>(w) && x < static_cast<double>(w + 1))
                local += std::pow(std::abs(f.values[j]), p) * g.h();
        }
        acc += std::pow(local, q / p);
    }
    return std::pow(acc, 1.0 / q);
}

double fofana_norm(const LineFunction& f, double p, double q, double alpha) {
    const Grid& g = f.grid;
    if (g.n() != 1) throw std::invalid_argument("fofana_norm: 1D only");
    if (p < 1 || q < 1 || alpha < 1)
        throw std::invalid_argument("fofana_norm: exponents must be at least 1");
    const double inv_alpha = std::isinf(alpha) ? 0.0 : 1.0 / alpha;
    const long nx = g.axis_points();
    // prefix sums of |f|^p
    std::vector<double> pre(nx + 1, 0.0);
    for (long j = 0; j < nx; ++j) pre[j + 1] = pre[j] + std::pow(std::abs(f.values[j]), p);
    double best = 0.0;
    bool any = false;
    for (double rho = g.h(); rho <= g.X(); rho *= 2.0) {
        any = true;
        const double meas = std::pow(ball_measure(1, rho), inv_alpha - 1.0 / p - 1.0 / q);
        const long s = ball_half_width(g, rho);
        double acc = 0.0;
        for (long j = 0; j < nx; ++j) {
            const long lo = std::max<long>(0, j - s);
            const long hi = std::min<long>(nx - 1, j + s);
            const double local = std::pow((pre[hi + 1] - pre[lo]) * g.h(), 1.0 / p);
            acc += std::pow(meas * local, q) * g.h();
        }
        best = std::max(best, std::pow(acc, 1.0 / q));
    }
    if (!any) throw std::invalid_argument("fofana_norm: empty radius set");
    return best;
}

} // namespace tentlab
