#pragma once

#include <cstdint>
#include <vector>

#include "tentlab/grid.hpp"

namespace tentlab {

// Half-open dyadic interval of lattice cells [corner, corner + 2^level),
// aligned to the dyadic grid anchored at cell index 0; side = 2^level * h.
struct DyadicCube {
    int level = 0;
    long corner = 0;

    long cell_count() const { return 1L << level; }
    double side(const Grid& g) const { return static_cast<double>(cell_count()) * g.h(); }
    double center(const Grid& g) const {
        return g.x_coord(static_cast<int>(corner)) + 0.5 * (side(g) - g.h());
    }
};

// Distance (cell-center metric) from the cube to the complement of the masked
// set; out-of-domain lattice cells count as complement.
double cube_complement_distance(const Grid& g, const std::vector<std::uint8_t>& mask,
                                const DyadicCube& cube);

// Whitney decomposition of the open lattice set given by mask (1 = in set):
// disjoint dyadic cubes covering the set exactly, each with
// sqrt(n) * side <= dist(Q, complement) < 4 sqrt(n) * side. Each cell is
// assigned its maximal admissible dyadic ancestor; output sorted by corner.
std::vector<DyadicCube> whitney_decompose(const Grid& g, const std::vector<std::uint8_t>& mask);

struct CZScalar {
    LineFunction good;              // g off Omega, cube averages on cubes
    LineFunction bad;               // g - good (supported on the cubes)
    std::vector<DyadicCube> cubes;  // Whitney cubes of Omega
    std::vector<std::uint8_t> omega; // mask of {M_u g > lambda}
    double lambda = 0.0;
};

// Calderon-Zygmund decomposition of a nonnegative scalar function at height
// lambda, with Omega = {M_u g > lambda}.
CZScalar cz_scalar(const LineFunction& g, double lambda);

// Bad piece of the half-space split, stored only on its cube (level-major).
struct BadPiece {
    DyadicCube cube;
    std::vector<double> values; // K * cube.cell_count()

    double at(int k, long offset, long cells) const {
        return values[static_cast<std::size_t>(k) * cells + offset];
    }
};

struct CZSplit {
    HalfSpaceFunction good;
    std::vector<BadPiece> bad;
    LineFunction scalar_good;
    LineFunction scalar_bad;
    std::vector<DyadicCube> cubes;
    std::vector<std::uint8_t> omega;
    double lambda = 0.0;
    double r = 2.0;

    // G + sum of bad pieces
    HalfSpaceFunction reconstruct() const;
};

// Half-space split F = G + sum_i H_i driven by the scalar decomposition of
// the vertical functional V_r(F) at height lambda.
CZSplit cz_halfspace(const HalfSpaceFunction& F, double lambda, double r);

} // namespace tentlab
