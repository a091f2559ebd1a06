#pragma once

#include "tentlab/grid.hpp"

namespace tentlab {

// index of the grid t-level equal to t (1e-9 relative tolerance)
int level_index(const Grid& g, double t);

// Slice-space norm at scale t: strong = (sum_x avg_{B(x,t)}(|f|^r)^{p/r} h)^{1/p};
// weak = L^{p,inf} of the same ball-average function.
double slice_norm(const LineFunction& f, double p, double r, double t, bool weak = false);

// i_t: copy f onto the m levels spanning [t, e t); zero elsewhere.
HalfSpaceFunction inject(const LineFunction& f, double t);

// pi_t: average of the m levels spanning [t, e t) with weight 1/m each.
LineFunction project(const HalfSpaceFunction& F, double t);

// Wiener amalgam over unit integer windows (1D): local L^p, global l^q.
double amalgam_norm(const LineFunction& f, double p, double q);

// Fofana norm: max over dyadic radii rho of
// (sum_y (|B(y,rho)|^{1/alpha-1/p-1/q} (int_{B(y,rho)}|f|^p)^{1/p})^q h)^{1/q};
// alpha = +inf encodes 1/alpha = 0.
double fofana_norm(const LineFunction& f, double p, double q, double alpha);

} // namespace tentlab
