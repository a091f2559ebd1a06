#include "tentlab/cz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tentlab/functionals.hpp"
#include "tentlab/operators.hpp"

namespace tentlab {

namespace {

void check_1d(const Grid& g, const char* who) {
    if (g.n() != 1) throw std::invalid_argument(std::string(who) + ": 1D only");
}

// distance in cells from each cell to the nearest complement cell on its side;
// virtual complement cells sit at -1 and nx
void complement_distances(const std::vector<std::uint8_t>& mask, std::vector<long>& left,
                          std::vector<long>& right) {
    const long nx = static_cast<long>(mask.size());
    left.assign(nx, 0);
    right.assign(nx, 0);
    long last = -1;
    for (long j = 0; j < nx; ++j) {
        if (!mask[j]) last = j;
        left[j] = j - last;
    }
    last = nx;
    for (long j = nx - 1; j >= 0; --j) {
        if (!mask[j]) last = j;
        right[j] = last - j;
    }
}

} // namespace

double cube_complement_distance(const Grid& g, const std::vector<std::uint8_t>& mask,
                                const DyadicCube& cube) {
    check_1d(g, "cube_complement_distance");
    std::vector<long> left, right;
    complement_distances(mask, left, right);
    const long lo = cube.corner;
    const long hi = cube.corner + cube.cell_count() - 1;
    return static_cast<double>(std::min(left[lo], right[hi])) * g.h();
}

std::vector<DyadicCube> whitney_decompose(const Grid& g, const std::vector<std::uint8_t>& mask) {
    check_1d(g, "whitney_decompose");
    const long nx = g.axis_points();
    if (static_cast<long>(mask.size()) != nx)
        throw std::invalid_argument("whitney_decompose: mask size does not match grid");
    std::vector<DyadicCube> cubes;
    bool any = false;
    for (std::uint8_t m : mask) any = any || m;
    if (!any) return cubes;
    if (mask[0] || mask[nx - 1])
        throw std::invalid_argument("whitney_decompose: set touches the domain boundary");
    std::vector<long> left, right;
    complement_distances(mask, left, right);
    // prefix counts of masked cells for O(1) fullness checks
    std::vector<long> pref(nx + 1, 0);
    for (long j = 0; j < nx; ++j) pref[j + 1] = pref[j] + (mask[j] ? 1 : 0);
    long j = 0;
    while (j < nx) {
        if (!mask[j]) {
            ++j;
            continue;
        }
        // maximal admissible dyadic ancestor of cell j: fully inside the set,
        // inside the domain, and dist >= sqrt(n) * side (cells: >= 2^l)
        int best = 0;
        for (int l = 1;; ++l) {
            const long side = 1L << l;
            const long lo = (j >> l) << l;
            const long hi = lo + side - 1;
            if (hi >= nx) break;
            if (pref[hi + 1] - pref[lo] != side) break;
            if (std::min(left[lo], right[hi]) < side) break;
            best = l;
        }
        DyadicCube q{best, (j >> best) << best};
        cubes.push_back(q);
        j = q.corner + q.cell_count();
    }
    return cubes;
}

CZScalar cz_scalar(const LineFunction& g, double lambda) {
    check_1d(g.grid, "cz_scalar");
    if (lambda <= 0) throw std::invalid_argument("cz_scalar: lambda must be positive");
    for (double v : g.values)
        if (v < 0) throw std::invalid_argument("cz_scalar: input must be nonnegative");
    const long nx = g.grid.axis_points();
    CZScalar out{LineFunction(g.grid), LineFunction(g.grid), {}, std::vector<std::uint8_t>(nx, 0),
                 lambda};
    const LineFunction mu = maximal(g, MaximalMode::Uncentered);
    for (long j = 0; j < nx; ++j) out.omega[j] = mu.values[j] > lambda ? 1 : 0;
    out.cubes = whitney_decompose(g.grid, out.omega);
    out.good = g;
    for (const DyadicCube& q : out.cubes) {
        double s = 0.0;
        for (long j = q.corner; j < q.corner + q.cell_count(); ++j) s += g.values[j];
        const double avg = s / static_cast<double>(q.cell_count());
        for (long j = q.corner; j < q.corner + q.cell_count(); ++j) {
            out.good.values[j] = avg;
            out.bad.values[j] = g.values[j] - avg;
        }
    }
    return out;
}

HalfSpaceFunction CZSplit::reconstruct() const {
    HalfSpaceFunction F = good;
    for (const BadPiece& p : bad) {
        const long cells = p.cube.cell_count();
        for (int k = 0; k < F.grid.levels(); ++k)
            for (long o = 0; o < cells; ++o)
                F.at(k, static_cast<std::size_t>(p.cube.corner + o)) += p.at(k, o, cells);
    }
    return F;
}

CZSplit cz_halfspace(const HalfSpaceFunction& F, double lambda, double r) {
    check_1d(F.grid, "cz_halfspace");
    const LineFunction v = vertical(F, r);
    CZScalar sc = cz_scalar(v, lambda);
    CZSplit out{F,
                {},
                std::move(sc.good),
                std::move(sc.bad),
                std::move(sc.cubes),
                std::move(sc.omega),
                lambda,
                r};
    for (const DyadicCube& q : out.cubes) {
        const long cells = q.cell_count();
        BadPiece piece{q, std::vector<double>(static_cast<std::size_t>(F.grid.levels()) * cells)};
        for (int k = 0; k < F.grid.levels(); ++k) {
            double s = 0.0;
            for (long o = 0; o < cells; ++o)
                s += F.at(k, static_cast<std::size_t>(q.corner + o));
            const double avg = s / static_cast<double>(cells);
            for (long o = 0; o < cells; ++o) {
                const double f = F.at(k, static_cast<std::size_t>(q.corner + o));
                piece.values[static_cast<std::size_t>(k) * cells + o] = f - avg;
                out.good.at(k, static_cast<std::size_t>(q.corner + o)) = avg;
            }
        }
        out.bad.push_back(std::move(piece));
    }
    return out;
}

} // namespace tentlab
