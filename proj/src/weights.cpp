#include "tentlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace tentlab {

namespace {

// antiderivative of |x|^a on a half-line not crossing 0 (a != -1)
double abs_power_primitive(double x, double a) {
    const double s = x >= 0 ? 1.0 : -1.0;
    return s * std::pow(std::abs(x), a + 1.0) / (a + 1.0);
}

// lattice window of cells whose centers lie strictly inside B(c, r)
void ball_window(const Grid& g, double c, double r, long& lo, long& hi) {
    const double a = (c - r + g.X()) / g.h() - 0.5;
    const double b = (c + r + g.X()) / g.h() - 0.5;
    lo = static_cast<long>(std::floor(a)) + 1;
    hi = static_cast<long>(std::ceil(b)) - 1;
}

// prefix sums of the finite cell masses plus a prefix count of the divergent
// (+inf) cells, so window sums stay well-defined: any window containing a
// divergent cell has mass +inf, other windows use the finite prefix
struct MassPrefix {
    std::vector<double> finite;
    std::vector<int> inf_count;

    double window(long lo, long hi) const {
        if (inf_count[hi + 1] > inf_count[lo])
            return std::numeric_limits<double>::infinity();
        return finite[hi + 1] - finite[lo];
    }
};

MassPrefix mass_prefix(const Weight& w) {
    const int nx = w.grid().axis_points();
    MassPrefix p;
    p.finite.assign(nx + 1, 0.0);
    p.inf_count.assign(nx + 1, 0);
    for (int j = 0; j < nx; ++j) {
        const double m = w.cell_mass(j);
        p.finite[j + 1] = p.finite[j] + (std::isinf(m) ? 0.0 : m);
        p.inf_count[j + 1] = p.inf_count[j] + (std::isinf(m) ? 1 : 0);
    }
    return p;
}

struct BallAverages {
    // avg of each requested power-of-weight over every family ball
    std::vector<std::vector<double>> avg; // avg[k][ball]
};

BallAverages family_averages(const std::vector<Weight>& powers, const BallFamily& family) {
    BallAverages out;
    out.avg.resize(powers.size());
    std::vector<MassPrefix> prefixes;
    prefixes.reserve(powers.size());
    for (const Weight& w : powers) prefixes.push_back(mass_prefix(w));
    const Grid& g = powers.front().grid();
    const int nx = g.axis_points();
    for (std::size_t k = 0; k < powers.size(); ++k) out.avg[k].reserve(family.balls.size());
    for (const Ball& b : family.balls) {
        long lo, hi;
        ball_window(g, b.center, b.radius, lo, hi);
        if (lo < 0 || hi >= nx || hi < lo)
            throw std::invalid_argument("weights: family ball leaves the domain");
        const double len = static_cast<double>(hi - lo + 1) * g.h();
        for (std::size_t k = 0; k < powers.size(); ++k)
            out.avg[k].push_back(prefixes[k].window(lo, hi) / len);
    }
    return out;
}

// per-ball extreme of the cell-average density of w (min when minimize, else max)
std::vector<double> family_cell_extremes(const Weight& w, const BallFamily& family,
                                         bool minimize) {
    const Grid& g = w.grid();
    const int nx = g.axis_points();
    std::vector<double> density(nx);
    for (int j = 0; j < nx; ++j) density[j] = w.cell_mass(j) / g.h();
    std::vector<double> out(family.balls.size());
    for (std::size_t i = 0; i < family.balls.size(); ++i) {
        long lo, hi;
        ball_window(g, family.balls[i].center, family.balls[i].radius, lo, hi);
        const double ext = [&] {
            double e = density[lo];
            for (long j = lo + 1; j <= hi; ++j)
                e = minimize ? std::min(e, density[j]) : std::max(e, density[j]);
            return e;
        }();
        out[i] = ext;
    }
    return out;
}

} // namespace

Weight::Weight(LineFunction values, std::optional<double> power_exponent)
    : values_(std::move(values)), power_exponent_(power_exponent) {
    if (values_.grid.n() != 1) throw std::invalid_argument("Weight: 1D only");
    for (double v : values_.values)
        if (!(v > 0.0)) throw std::invalid_argument("Weight: values must be strictly positive");
}

double Weight::cell_mass(int j) const {
    const Grid& g = values_.grid;
    if (!power_exponent_) return values_.values[static_cast<std::size_t>(j)] * g.h();
    const double a = *power_exponent_;
    const double c = g.x_coord(j);
    const double lo = c - 0.5 * g.h(), hi = c + 0.5 * g.h();
    // non-integrable powers diverge on the cells whose closure meets 0; this
    // is reported as +inf so that divergent characteristics stay honest
    if (a <= -1.0 && lo <= 0.0 && hi >= 0.0)
        return std::numeric_limits<double>::infinity();
    if (a == -1.0) return std::log(std::abs(hi)) - std::log(std::abs(lo));
    return abs_power_primitive(hi, a) - abs_power_primitive(lo, a);
}

Weight Weight::pow(double s) const {
    const Grid& g = values_.grid;
    if (power_exponent_) {
        // keep the exact power form even when the result is non-integrable;
        // averages over balls meeting 0 then evaluate to +inf
        const double a = *power_exponent_ * s;
        LineFunction v(g);
        for (int j = 0; j < g.axis_points(); ++j)
            v.values[static_cast<std::size_t>(j)] = std::pow(std::abs(g.x_coord(j)), a);
        return Weight(std::move(v), a);
    }
    LineFunction v(g);
    for (std::size_t j = 0; j < v.values.size(); ++j)
        v.values[j] = std::pow(values_.values[j], s);
    return Weight(std::move(v));
}

BallFamily BallFamily::dyadic(const Grid& g, double max_radius) {
    if (g.n() != 1) throw std::invalid_argument("BallFamily: 1D only");
    BallFamily fam;
    const int nx = g.axis_points();
    for (double r = 0.75 * g.h(); r <= std::min(max_radius, g.X()); r *= 2.0) {
        for (int j = 0; j < nx; ++j) {
            const double c = g.x_coord(j);
            long lo, hi;
            ball_window(g, c, r, lo, hi);
            if (lo >= 0 && hi < nx && hi >= lo) fam.balls.push_back({c, r});
        }
    }
    if (fam.balls.empty()) throw std::invalid_argument("BallFamily: empty family");
    return fam;
}

Weight power_weight(double a, const Grid& g) {
    if (g.n() != 1) throw std::invalid_argument("power_weight: 1D only");
    if (a <= -g.n()) throw std::invalid_argument("power_weight: exponent must exceed -n");
    LineFunction v(g);
    for (int j = 0; j < g.axis_points(); ++j)
        v.values[static_cast<std::size_t>(j)] = std::pow(std::abs(g.x_coord(j)), a);
    return Weight(std::move(v), a);
}

double ap_characteristic(const Weight& w, double p, const BallFamily& family) {
    if (p < 1) throw std::invalid_argument("ap_characteristic: p must be >= 1");
    if (p == 1.0) {
        const BallAverages av = family_averages({w}, family);
        const std::vector<double> mins = family_cell_extremes(w, family, /*minimize=*/true);
        double best = 0.0;
        for (std::size_t i = 0; i < family.balls.size(); ++i)
            best = std::max(best, av.avg[0][i] / mins[i]);
        return best;
    }
    const double pprime = p / (p - 1.0);
    const BallAverages av = family_averages({w, w.pow(1.0 - pprime)}, family);
    double best = 0.0;
    for (std::size_t i = 0; i < family.balls.size(); ++i)
        best = std::max(best, av.avg[0][i] * std::pow(av.avg[1][i], p - 1.0));
    return best;
}

double rh_characteristic(const Weight& w, double s, const BallFamily& family) {
    if (std::isinf(s)) {
        const BallAverages av = family_averages({w}, family);
        const std::vector<double> maxs = family_cell_extremes(w, family, /*minimize=*/false);
        double best = 0.0;
        for (std::size_t i = 0; i < family.balls.size(); ++i)
            best = std::max(best, maxs[i] / av.avg[0][i]);
        return best;
    }
    if (s <= 1) throw std::invalid_argument("rh_characteristic: s must exceed 1 (or be infinite)");
    const BallAverages av = family_averages({w, w.pow(s)}, family);
    double best = 0.0;
    for (std::size_t i = 0; i < family.balls.size(); ++i)
        best = std::max(best, std::pow(av.avg[1][i], 1.0 / s) / av.avg[0][i]);
    return best;
}

double apq_characteristic(const Weight& w, double tau, double s, const BallFamily& family) {
    if (!(1.0 < tau && tau <= s) || std::isinf(s))
        throw std::invalid_argument("apq_characteristic: need 1 < tau <= s < inf");
    const double tprime = tau / (tau - 1.0);
    const BallAverages av = family_averages({w.pow(s), w.pow(-tprime)}, family);
    double best = 0.0;
    for (std::size_t i = 0; i < family.balls.size(); ++i)
        best = std::max(best,
                        std::pow(av.avg[0][i], 1.0 / s) * std::pow(av.avg[1][i], 1.0 / tprime));
    return best;
}

} // namespace tentlab
