#pragma once

#include <functional>
#include <string>
#include <tuple>

#include "tentlab/grid.hpp"

namespace tentlab {

enum class MaximalMode { Centered, Uncentered };

// Hardy-Littlewood maximal operator over the lattice half-integer radius set
// (centered) or all lattice balls containing x (uncentered). 1D uses prefix
// sums and a sliding-window maximum; 2D (centered only) uses row prefixes.
LineFunction maximal(const LineFunction& f, MaximalMode mode);

// Centered maximal at a single point (sup over the radius set).
double maximal_at(const LineFunction& f, double x, MaximalMode mode);

// M_alpha with the tau^alpha scaling, 0 < alpha < n.
LineFunction maximal_fractional(const LineFunction& f, double alpha);

// gamma(alpha) = pi^{n/2} 2^alpha Gamma(alpha/2) / Gamma((n-alpha)/2)
double gamma_alpha(double alpha, int n);

enum class QuadratureMethod { Direct, Spectral };

// Riesz potential I_alpha, 1D. Direct uses exact per-cell integrals of
// |x-.|^{alpha-1}; spectral uses the periodic multiplier |omega|^{-alpha}
// with the zero frequency dropped.
LineFunction riesz_potential(const LineFunction& f, double alpha, QuadratureMethod method);

struct CZKernel {
    std::function<double(double, double)> eval; // K(x,y), off-diagonal
    double delta = 1.0;                          // regularity order in (0,1]
    std::string name;
};

CZKernel hilbert_kernel();

// T f(x) = sum_{z != x-cell} K(x,z) f(z) h (midpoint, self-cell skipped)
LineFunction singular_integral(const LineFunction& f, const CZKernel& kernel,
                               QuadratureMethod method);

// T_* f(x) = sup over lattice truncation radii of |sum_{|x-z|>eps} K(x,z) f(z) h|
LineFunction maximal_truncation(const LineFunction& f, const CZKernel& kernel);

// Gaussian semigroup at time s: convolution with (4 pi s)^{-n/2} e^{-|x|^2/4s}
// using exact per-cell kernel masses (erf differences).
LineFunction heat(const LineFunction& f, double s);

struct MultiplierSymbol {
    std::function<double(double)> real_part; // sigma(omega), angular frequency
    std::function<double(double)> imag_part;
    std::string name;
};

MultiplierSymbol make_real_symbol(std::string name, std::function<double(double)> sigma);
// i*sgn(omega); realizes the 1D Riesz transform gradient (-d/dx)(-Lap)^{-1/2}
MultiplierSymbol grad_sqrt_lap_symbol();
MultiplierSymbol hilbert_symbol(); // -i*sgn(omega)
MultiplierSymbol heat_symbol(double s); // e^{-s omega^2}

// Periodic Fourier multiplier on [-X, X], 1D only.
LineFunction spectral_multiplier(const LineFunction& f, const MultiplierSymbol& symbol);

// Slice-by-slice lift of an operator family; op receives (slice, t_k).
HalfSpaceFunction lift(const std::function<LineFunction(const LineFunction&, double)>& op,
                       const HalfSpaceFunction& F);
HalfSpaceFunction lift(const std::function<LineFunction(const LineFunction&)>& op,
                       const HalfSpaceFunction& F);

// Estimated size/regularity constants of the standard kernel conditions:
// C1 = sup |K| |x-y|^n, C2/C3 = sup of the delta-Hoelder quotients over
// sampled admissible pairs/triples.
std::tuple<double, double, double> kernel_standard_constants(const CZKernel& kernel,
                                                             double delta, const Grid& g,
                                                             long max_evals = 10000000);

// Named operator registry used by the CLI ("hilbert", "riesz:0.5",
// "heat:1.0", "gradsqrtlap", "maximal", "maximal_u", "identity").
std::function<LineFunction(const LineFunction&, double)> lookup_operator(const std::string& id);

namespace serial {
LineFunction maximal_centered(const LineFunction& f);
LineFunction riesz_potential_direct(const LineFunction& f, double alpha);
} // namespace serial

} // namespace tentlab
