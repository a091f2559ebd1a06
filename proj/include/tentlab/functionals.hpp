#pragma once

#include <optional>

#include "tentlab/grid.hpp"

namespace tentlab {

struct TentExponents {
    double q = 2.0;   // outer exponent, 0 < q < inf
    double r = 2.0;   // inner exponent, 1 <= r < inf
    double alpha = 1.0; // aperture, >= 1
};

// Conical functional A_r^(alpha): x -> (sum_k (1/m) * ballsum_k / t_k^n)^(1/r)
// with ballsum_k = sum_{|y-x| < alpha t_k} |F(y,t_k)|^r h^n.
LineFunction conical(const HalfSpaceFunction& F, double r, double alpha = 1.0);

// Vertical functional V_r: x -> (sum_k (1/m) |F(x,t_k)|^r)^(1/r).
LineFunction vertical(const HalfSpaceFunction& F, double r);

// L^{p,inf} norm on the lattice: max over descending-sorted values of
// g_(i) * (i h^n)^(1/p). Exact for lattice step functions.
double weak_lorentz_norm(const LineFunction& g, double p);

// ||A_r^(alpha) F||_{L^q(w)}; w == 1 when absent.
double tent_norm(const HalfSpaceFunction& F, double q, double r, double alpha = 1.0,
                 const LineFunction* weight = nullptr);

// weak_lorentz_norm(conical(F, r, 1), q)
double weak_tent_norm(const HalfSpaceFunction& F, double q, double r);

// ||g||_{L^q(w)} on the lattice (helper shared with experiments).
double lq_norm(const LineFunction& g, double q, const LineFunction* weight = nullptr);

namespace serial {
// Reference implementation without prefix sums or threading; used by tests
// and the kernel benchmark.
LineFunction conical(const HalfSpaceFunction& F, double r, double alpha = 1.0);
} // namespace serial

} // namespace tentlab
