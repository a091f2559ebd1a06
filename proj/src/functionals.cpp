#include "tentlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tentlab {

namespace {

void check_rq(double r, double q) {
    if (r < 1) throw std::invalid_argument("tent functionals: r must be >= 1");
    if (q <= 0) throw std::invalid_argument("tent functionals: q must be positive");
}

// per-level prefix sums of |F|^r (1D)
std::vector<double> level_prefix(const HalfSpaceFunction& F, int k, double r) {
    const std::size_t n = F.grid.x_count();
    std::vector<double> p(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        p[j + 1] = p[j] + std::pow(std::abs(F.at(k, j)), r);
    return p;
}

} // namespace

LineFunction conical(const HalfSpaceFunction& F, double r, double alpha) {
    if (r < 1) throw std::invalid_argument("conical: r must be >= 1");
    if (alpha < 1) throw std::invalid_argument("conical: aperture must be >= 1");
    const Grid& g = F.grid;
    LineFunction out(g);
    const double w = g.level_weight();
    const double hn = g.cell_measure();
    if (g.n() == 1) {
        const int nx = g.axis_points();
        for (int k = 0; k < g.levels(); ++k) {
            const double t = g.t_level(k);
            const std::vector<double> p = level_prefix(F, k, r);
            // |y - x| < alpha t on the lattice is the centered index window
            // of half-width s where alpha*t spans s+ fractional cells
            const double tn = std::pow(t, g.n());
            const double scale = w * hn / tn;
            const long s = ball_half_width(g, alpha * t);
#pragma omp parallel for schedule(static)
            for (int j = 0; j < nx; ++j) {
                const long lo = std::max<long>(0, j - s);
                const long hi = std::min<long>(nx - 1, j + s);
                if (hi >= lo) out.values[j] += (p[hi + 1] - p[lo]) * scale;
            }
        }
    } else {
        const int nx = g.axis_points();
        for (int k = 0; k < g.levels(); ++k) {
            const double t = g.t_level(k);
            const double at = alpha * t;
            const double scale = w * hn / std::pow(t, 2);
            // per-row prefix sums
            std::vector<std::vector<double>> rows(nx);
            for (int j0 = 0; j0 < nx; ++j0) {
                rows[j0].assign(nx + 1, 0.0);
                for (int j1 = 0; j1 < nx; ++j1)
                    rows[j0][j1 + 1] =
                        rows[j0][j1] + std::pow(std::abs(F.at(k, static_cast<std::size_t>(j0) * nx + j1)), r);
            }
#pragma omp parallel for schedule(static)
            for (int j0 = 0; j0 < nx; ++j0)
                for (int j1 = 0; j1 < nx; ++j1) {
                    double acc = 0.0;
                    const long srow = ball_half_width(g, at);
                    for (long i0 = std::max<long>(0, j0 - srow);
                         i0 <= std::min<long>(nx - 1, j0 + srow); ++i0) {
                        const double dx = (static_cast<double>(i0) - j0) * g.h();
                        const double rem2 = at * at - dx * dx;
                        if (rem2 <= 0) continue;
                        const double rem = std::sqrt(rem2);
                        const long s1 = ball_half_width(g, rem);
                        const long lo = std::max<long>(0, j1 - s1);
                        const long hi = std::min<long>(nx - 1, j1 + s1);
                        if (hi >= lo) acc += rows[i0][hi + 1] - rows[i0][lo];
                    }
                    out.at(j0, j1) += acc * scale;
                }
        }
    }
    for (double& v : out.values) v = std::pow(v, 1.0 / r);
    return out;
}

namespace serial {

LineFunction conical(const HalfSpaceFunction& F, double r, double alpha) {
    if (r < 1) throw std::invalid_argument("conical: r must be >= 1");
    if (alpha < 1) throw std::invalid_argument("conical: aperture must be >= 1");
    const Grid& g = F.grid;
    if (g.n() != 1) throw std::invalid_argument("serial::conical: 1D only");
    LineFunction out(g);
    const int nx = g.axis_points();
    for (int j = 0; j < nx; ++j) {
        const double x = g.x_coord(j);
        double acc = 0.0;
        for (int k = 0; k < g.levels(); ++k) {
            const double t = g.t_level(k);
            double ballsum = 0.0;
            for (int i = 0; i < nx; ++i)
                if (std::abs(g.x_coord(i) - x) < alpha * t)
                    ballsum += std::pow(std::abs(F.at(k, i)), r) * g.h();
            acc += g.level_weight() * ballsum / t;
        }
        out.values[j] = std::pow(acc, 1.0 / r);
    }
    return out;
}

} // namespace serial

LineFunction vertical(const HalfSpaceFunction& F, double r) {
    if (r < 1) throw std::invalid_argument("vertical: r must be >= 1");
    const Grid& g = F.grid;
    LineFunction out(g);
    const double w = g.level_weight();
    for (int k = 0; k < g.levels(); ++k)
        for (std::size_t j = 0; j < g.x_count(); ++j)
            out.values[j] += w * std::pow(std::abs(F.at(k, j)), r);
    for (double& v : out.values) v = std::pow(v, 1.0 / r);
    return out;
}

double weak_lorentz_norm(const LineFunction& g, double p) {
    if (p <= 0) throw std::invalid_argument("weak_lorentz_norm: p must be positive");
    std::vector<double> v;
    v.reserve(g.values.size());
    for (double x : g.values) v.push_back(std::abs(x));
    std::sort(v.begin(), v.end(), std::greater<double>());
    const double hn = g.grid.cell_measure();
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) break;
        best = std::max(best, v[i] * std::pow(static_cast<double>(i + 1) * hn, 1.0 / p));
    }
    return best;
}

double lq_norm(const LineFunction& g, double q, const LineFunction* weight) {
    const double hn = g.grid.cell_measure();
    double acc = 0.0;
    for (std::size_t j = 0; j < g.values.size(); ++j) {
        const double w = weight ? weight->values[j] : 1.0;
        acc += std::pow(std::abs(g.values[j]), q) * w * hn;
    }
    return std::pow(acc, 1.0 / q);
}

double tent_norm(const HalfSpaceFunction& F, double q, double r, double alpha,
                 const LineFunction* weight) {
    check_rq(r, q);
    const LineFunction a = conical(F, r, alpha);
    return lq_norm(a, q, weight);
}

double weak_tent_norm(const HalfSpaceFunction& F, double q, double r) {
    check_rq(r, q);
    return weak_lorentz_norm(conical(F, r, 1.0), q);
}

} // namespace tentlab
