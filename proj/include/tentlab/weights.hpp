#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "tentlab/grid.hpp"

namespace tentlab {

// A strictly positive weight on the 1D lattice. Power weights |x|^a carry the
// exponent so that cell integrals (and powers of the weight) stay exact; the
// midpoint value alone would misclassify borderline exponents near 0.
class Weight {
public:
    Weight(LineFunction values, std::optional<double> power_exponent = std::nullopt);

    const Grid& grid() const { return values_.grid; }
    const LineFunction& values() const { return values_; }
    bool is_power() const { return power_exponent_.has_value(); }

    // exact integral of w over the cell of index j (closed form for powers,
    // midpoint times h otherwise)
    double cell_mass(int j) const;
    // the weight raised to a pointwise power (exact for power weights)
    Weight pow(double s) const;

private:
    LineFunction values_;
    std::optional<double> power_exponent_;
};

// Finite surrogate for "all balls": every lattice center crossed with dyadic
// radii 2^j * h, kept inside the domain. max_radius trims the family for
// stability-under-enrichment protocols.
struct BallFamily {
    std::vector<Ball> balls;

    static BallFamily dyadic(const Grid& g,
                             double max_radius = std::numeric_limits<double>::infinity());
};

// w(x) = |x|^a with exact singular-cell integrals; requires a > -n.
Weight power_weight(double a, const Grid& g);

// Muckenhoupt characteristic: p > 1: sup_B (avg_B w)(avg_B w^{1-p'})^{p-1};
// p = 1: sup_B (avg_B w) * sup_{cells in B} (1/w).
double ap_characteristic(const Weight& w, double p, const BallFamily& family);

// Reverse Hoelder: s < inf: sup_B (avg_B w^s)^{1/s} / avg_B w;
// s = inf: sup_B sup_{cells in B} w / avg_B w.
double rh_characteristic(const Weight& w, double s, const BallFamily& family);

// Fractional class: sup_B (avg_B w^s)^{1/s} (avg_B w^{-tau'})^{1/tau'},
// 1 < tau <= s < inf.
double apq_characteristic(const Weight& w, double tau, double s, const BallFamily& family);

} // namespace tentlab
