#include "tentlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace tentlab {

namespace {

void require_real_1d(const LineFunction& f, const char* who) {
    if (f.complex_values) throw std::invalid_argument(std::string(who) + ": complex data unsupported");
    if (f.grid.n() != 1) throw std::invalid_argument(std::string(who) + ": 1D only");
}

std::vector<double> abs_prefix(const LineFunction& f) {
    std::vector<double> p(f.values.size() + 1, 0.0);
    for (std::size_t j = 0; j < f.values.size(); ++j)
        p[j + 1] = p[j] + std::abs(f.values[j]);
    return p;
}

double window_sum(const std::vector<double>& prefix, long lo, long hi) {
    const long n = static_cast<long>(prefix.size()) - 1;
    lo = std::max(lo, 0L);
    hi = std::min(hi, n - 1);
    if (hi < lo) return 0.0;
    return prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)];
}

} // namespace

// ---------------------------------------------------------------------------
// Maximal operators

LineFunction maximal(const LineFunction& f, MaximalMode mode) {
    if (f.complex_values) throw std::invalid_argument("maximal: complex data unsupported");
    const Grid& g = f.grid;
    if (g.n() == 2) {
        if (mode == MaximalMode::Uncentered)
            throw std::invalid_argument("maximal: uncentered mode is 1D only");
        const int nx = g.axis_points();
        LineFunction out(g);
        // row prefixes of |f|
        std::vector<std::vector<double>> rows(nx);
        for (int j0 = 0; j0 < nx; ++j0) {
            rows[j0].assign(nx + 1, 0.0);
            for (int j1 = 0; j1 < nx; ++j1)
                rows[j0][j1 + 1] = rows[j0][j1] + std::abs(f.at(j0, j1));
        }
        const int smax = nx;
#pragma omp parallel for schedule(dynamic)
        for (int j0 = 0; j0 < nx; ++j0)
            for (int j1 = 0; j1 < nx; ++j1) {
                double best = 0.0;
                for (int s = 0; s <= smax; ++s) {
                    const double tau = (s + 0.5) * g.h();
                    double sum = 0.0;
                    long count = 0;
                    for (int i0 = j0 - s; i0 <= j0 + s; ++i0) {
                        const double dx = (static_cast<double>(i0) - j0) * g.h();
                        const double rem2 = tau * tau - dx * dx;
                        if (rem2 <= 0) continue;
                        const long s1 = ball_half_width(g, std::sqrt(rem2));
                        count += 2 * s1 + 1;
                        if (i0 < 0 || i0 >= nx) continue;
                        sum += window_sum(rows[i0], j1 - s1, j1 + s1);
                    }
                    if (count > 0) best = std::max(best, sum / static_cast<double>(count));
                }
                out.at(j0, j1) = best;
            }
        return out;
    }
    const int nx = g.axis_points();
    const std::vector<double> p = abs_prefix(f);
    LineFunction out(g);
    // support bounds: radii below first contact give average 0, radii beyond
    // full coverage give strictly smaller averages than the covering radius
    long jmin = nx, jmax = -1;
    for (int j = 0; j < nx; ++j)
        if (f.values[j] != 0.0) {
            jmin = std::min<long>(jmin, j);
            jmax = std::max<long>(jmax, j);
        }
    if (jmax < 0) return out;
    if (mode == MaximalMode::Centered) {
#pragma omp parallel for schedule(dynamic, 64)
        for (int j = 0; j < nx; ++j) {
            double best = 0.0;
            const long slo = j < jmin ? jmin - j : (j > jmax ? j - jmax : 0);
            const long shi = std::max(std::labs(j - jmin), std::labs(jmax - j));
            for (long s = slo; s <= shi; ++s)
                best = std::max(best, window_sum(p, j - s, j + s) / (2.0 * s + 1.0));
            out.values[j] = best;
        }
        return out;
    }
    // Uncentered: for each half-width s, slide the max of ball averages
    // A(c,s) over centers c with |c - j| <= s (monotone deque); radii are
    // independent, so they parallelize with a max-reduction at the end.
#pragma omp parallel
    {
        LineFunction local(g);
#pragma omp for schedule(dynamic, 16) nowait
        for (int s = 0; s <= nx; ++s) {
            const long chi = static_cast<long>(nx) - 1 + s;
            std::deque<std::pair<long, double>> dq;
            long next_c = -static_cast<long>(s);
            for (int j = 0; j < nx; ++j) {
                const long wlo = j - s, whi = j + s;
                for (; next_c <= std::min(whi, chi); ++next_c) {
                    const double a = window_sum(p, next_c - s, next_c + s) / (2.0 * s + 1.0);
                    while (!dq.empty() && dq.back().second <= a) dq.pop_back();
                    dq.emplace_back(next_c, a);
                }
                while (!dq.empty() && dq.front().first < wlo) dq.pop_front();
                if (!dq.empty()) local.values[j] = std::max(local.values[j], dq.front().second);
            }
        }
#pragma omp critical
        for (int j = 0; j < nx; ++j) out.values[j] = std::max(out.values[j], local.values[j]);
    }
    return out;
}

double maximal_at(const LineFunction& f, double x, MaximalMode mode) {
    require_real_1d(f, "maximal_at");
    const Grid& g = f.grid;
    const std::vector<double> p = abs_prefix(f);
    const int nx = g.axis_points();
    double best = 0.0;
    if (mode == MaximalMode::Centered) {
        for (int s = 0; s <= static_cast<int>(std::ceil(2 * g.X() / g.h())); ++s) {
            const double tau = (s + 0.5) * g.h();
            const long cnt = ball_lattice_count(g, x, tau);
            if (cnt == 0) continue;
            long lo, hi;
            // membership window around an arbitrary x
            const double a = (x - tau + g.X()) / g.h() - 0.5;
            const double b = (x + tau + g.X()) / g.h() - 0.5;
            lo = static_cast<long>(std::floor(a)) + 1;
            hi = static_cast<long>(std::ceil(b)) - 1;
            best = std::max(best, window_sum(p, lo, hi) / static_cast<double>(cnt));
        }
        return best;
    }
    const long j = g.axis_index(x);
    for (int s = 0; s <= nx; ++s)
        for (long c = j - s; c <= j + s; ++c)
            best = std::max(best, window_sum(p, c - s, c + s) / (2.0 * s + 1.0));
    return best;
}

LineFunction maximal_fractional(const LineFunction& f, double alpha) {
    if (f.complex_values) throw std::invalid_argument("maximal_fractional: complex data unsupported");
    const Grid& g = f.grid;
    if (alpha <= 0 || alpha >= g.n())
        throw std::invalid_argument("maximal_fractional: alpha must lie in (0, n)");
    if (g.n() != 1) throw std::invalid_argument("maximal_fractional: 1D only");
    const int nx = g.axis_points();
    const std::vector<double> p = abs_prefix(f);
    LineFunction out(g);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nx; ++j) {
        double best = 0.0;
        for (int s = 0; s <= nx; ++s) {
            const double tau = (s + 0.5) * g.h();
            best = std::max(best,
                            std::pow(tau, alpha) * window_sum(p, j - s, j + s) / (2.0 * s + 1.0));
        }
        out.values[j] = best;
    }
    return out;
}

double gamma_alpha(double alpha, int n) {
    if (alpha <= 0 || alpha >= n)
        throw std::invalid_argument("gamma_alpha: alpha must lie in (0, n)");
    return std::pow(M_PI, 0.5 * n) * std::pow(2.0, alpha) * std::tgamma(0.5 * alpha) /
           std::tgamma(0.5 * (n - alpha));
}

// ---------------------------------------------------------------------------
// Riesz potential

namespace {

// exact integrals of |d - u|^{alpha-1} over cells at lattice distance d = k*h
std::vector<double> riesz_cell_weights(const Grid& g, double alpha) {
    const int nx = g.axis_points();
    const double h = g.h();
    std::vector<double> w(nx);
    w[0] = 2.0 * std::pow(0.5 * h, alpha) / alpha;
    for (int k = 1; k < nx; ++k) {
        const double d = k * h;
        w[k] = (std::pow(d + 0.5 * h, alpha) - std::pow(d - 0.5 * h, alpha)) / alpha;
    }
    return w;
}

} // namespace

LineFunction riesz_potential(const LineFunction& f, double alpha, QuadratureMethod method) {
    require_real_1d(f, "riesz_potential");
    const Grid& g = f.grid;
    if (alpha <= 0 || alpha >= g.n())
        throw std::invalid_argument("riesz_potential: alpha must lie in (0, n)");
    if (method == QuadratureMethod::Spectral) {
        MultiplierSymbol sym = make_real_symbol(
            "riesz", [alpha](double omega) { return omega == 0.0 ? 0.0 : std::pow(std::abs(omega), -alpha); });
        return spectral_multiplier(f, sym);
    }
    const int nx = g.axis_points();
    const std::vector<double> w = riesz_cell_weights(g, alpha);
    const double inv_gamma = 1.0 / gamma_alpha(alpha, 1);
    LineFunction out(g);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nx; ++j) {
        double acc = 0.0;
        for (int z = 0; z < nx; ++z) acc += w[std::abs(j - z)] * f.values[z];
        out.values[j] = inv_gamma * acc;
    }
    return out;
}

namespace serial {

LineFunction maximal_centered(const LineFunction& f) {
    const Grid& g = f.grid;
    const int nx = g.axis_points();
    LineFunction out(g);
    for (int j = 0; j < nx; ++j) {
        double best = 0.0;
        for (int s = 0; s <= nx; ++s) {
            double sum = 0.0;
            for (int i = std::max(0, j - s); i <= std::min(nx - 1, j + s); ++i)
                sum += std::abs(f.values[i]);
            best = std::max(best, sum / (2.0 * s + 1.0));
        }
        out.values[j] = best;
    }
    return out;
}

LineFunction riesz_potential_direct(const LineFunction& f, double alpha) {
    const Grid& g = f.grid;
    const int nx = g.axis_points();
    const double h = g.h();
    const double inv_gamma = 1.0 / gamma_alpha(alpha, 1);
    LineFunction out(g);
    for (int j = 0; j < nx; ++j) {
        double acc = 0.0;
        for (int z = 0; z < nx; ++z) {
            double w;
            if (z == j) {
                w = 2.0 * std::pow(0.5 * h, alpha) / alpha;
            } else {
                const double d = std::abs(j - z) * h;
                w = (std::pow(d + 0.5 * h, alpha) - std::pow(d - 0.5 * h, alpha)) / alpha;
            }
            acc += w * f.values[z];
        }
        out.values[j] = inv_gamma * acc;
    }
    return out;
}

} // namespace serial

// ---------------------------------------------------------------------------
// Singular integrals

CZKernel hilbert_kernel() {
    CZKernel k;
    k.eval = [](double x, double y) { return 1.0 / (M_PI * (x - y)); };
    k.delta = 1.0;
    k.name = "hilbert";
    return k;
}

LineFunction singular_integral(const LineFunction& f, const CZKernel& kernel,
                               QuadratureMethod method) {
    require_real_1d(f, "singular_integral");
    const Grid& g = f.grid;
    if (method == QuadratureMethod::Spectral) {
        if (kernel.name != "hilbert")
            throw std::invalid_argument("singular_integral: no registered symbol for kernel '" +
                                        kernel.name + "'");
        return spectral_multiplier(f, hilbert_symbol());
    }
    const int nx = g.axis_points();
    LineFunction out(g);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nx; ++j) {
        const double x = g.x_coord(j);
        double acc = 0.0;
        for (int z = 0; z < nx; ++z) {
            if (z == j) continue; // principal value: odd kernel vanishes on the symmetric self-cell
            acc += kernel.eval(x, g.x_coord(z)) * f.values[z];
        }
        out.values[j] = acc * g.h();
    }
    return out;
}

LineFunction maximal_truncation(const LineFunction& f, const CZKernel& kernel) {
    require_real_1d(f, "maximal_truncation");
    const Grid& g = f.grid;
    const int nx = g.axis_points();
    LineFunction out(g);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < nx; ++j) {
        const double x = g.x_coord(j);
        // accumulate truncations from the largest radius inward; each lattice
        // distance d realizes the truncation |x - z| > (d - 1/2) h
        double acc = 0.0;
        double best = 0.0;
        for (int d = nx - 1; d >= 1; --d) {
            const int zl = j - d, zr = j + d;
            if (zl >= 0) acc += kernel.eval(x, g.x_coord(zl)) * f.values[zl];
            if (zr < nx) acc += kernel.eval(x, g.x_coord(zr)) * f.values[zr];
            best = std::max(best, std::abs(acc));
        }
        out.values[j] = best * g.h();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Heat semigroup

LineFunction heat(const LineFunction& f, double s) {
    if (f.complex_values) throw std::invalid_argument("heat: complex data unsupported");
    if (s <= 0) throw std::invalid_argument("heat: s must be positive");
    const Grid& g = f.grid;
    const double sd = 2.0 * std::sqrt(s); // erf scale
    const double R = 6.0 * sd;            // kernel mass outside is erfc(6) < 1e-15
    if (R > 2.0 * g.X()) throw std::invalid_argument("heat: truncation window exceeds the domain");
    const int w = static_cast<int>(std::ceil(R / g.h()));
    const int nx = g.axis_points();
    // cell masses by lattice distance
    std::vector<double> mass(w + 2);
    for (int d = 0; d <= w + 1; ++d) {
        const double a = (d - 0.5) * g.h();
        const double b = (d + 0.5) * g.h();
        mass[d] = 0.5 * (std::erf(b / sd) - std::erf(a / sd));
    }
    LineFunction out(g);
    if (g.n() == 1) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < nx; ++j) {
            double acc = 0.0;
            for (int z = std::max(0, j - w); z <= std::min(nx - 1, j + w); ++z)
                acc += mass[std::abs(j - z)] * f.values[z];
            out.values[j] = acc;
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int j0 = 0; j0 < nx; ++j0)
            for (int j1 = 0; j1 < nx; ++j1) {
                double acc = 0.0;
                for (int z0 = std::max(0, j0 - w); z0 <= std::min(nx - 1, j0 + w); ++z0) {
                    double rowacc = 0.0;
                    for (int z1 = std::max(0, j1 - w); z1 <= std::min(nx - 1, j1 + w); ++z1)
                        rowacc += mass[std::abs(j1 - z1)] * f.at(z0, z1);
                    acc += mass[std::abs(j0 - z0)] * rowacc;
                }
                out.at(j0, j1) = acc;
            }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spectral multipliers (periodic on [-X, X], FFTW backend)

namespace {

struct FftPlans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

std::mutex fft_mutex;

FftPlans& plans_for(int n) {
    static std::map<int, FftPlans> cache;
    std::lock_guard<std::mutex> lock(fft_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    FftPlans p;
    p.forward = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(buf);
    return cache.emplace(n, p).first->second;
}

} // namespace

MultiplierSymbol make_real_symbol(std::string name, std::function<double(double)> sigma) {
    MultiplierSymbol s;
    s.real_part = std::move(sigma);
    s.imag_part = [](double) { return 0.0; };
    s.name = std::move(name);
    return s;
}

MultiplierSymbol grad_sqrt_lap_symbol() {
    MultiplierSymbol s;
    s.real_part = [](double) { return 0.0; };
    s.imag_part = [](double omega) { return omega > 0 ? 1.0 : (omega < 0 ? -1.0 : 0.0); };
    s.name = "gradsqrtlap";
    return s;
}

MultiplierSymbol hilbert_symbol() {
    MultiplierSymbol s;
    s.real_part = [](double) { return 0.0; };
    s.imag_part = [](double omega) { return omega > 0 ? -1.0 : (omega < 0 ? 1.0 : 0.0); };
    s.name = "hilbert";
    return s;
}

MultiplierSymbol heat_symbol(double s) {
    return make_real_symbol("heat", [s](double omega) { return std::exp(-s * omega * omega); });
}

LineFunction spectral_multiplier(const LineFunction& f, const MultiplierSymbol& symbol) {
    require_real_1d(f, "spectral_multiplier");
    const Grid& g = f.grid;
    const int n = g.axis_points();
    FftPlans& plans = plans_for(n);
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        buf[j][0] = f.values[j];
        buf[j][1] = 0.0;
    }
    fftw_execute_dft(plans.forward, buf, buf);
    const double domega = M_PI / g.X(); // 2*pi / (2X)
    for (int k = 0; k < n; ++k) {
        const int signed_k = k <= n / 2 ? k : k - n;
        const double omega = signed_k * domega;
        const double sr = symbol.real_part(omega);
        const double si = symbol.imag_part(omega);
        if (std::isnan(sr) || std::isnan(si)) {
            fftw_free(buf);
            throw std::runtime_error("spectral_multiplier: symbol '" + symbol.name +
                                     "' is NaN at an attained frequency");
        }
        const double re = buf[k][0], im = buf[k][1];
        buf[k][0] = sr * re - si * im;
        buf[k][1] = sr * im + si * re;
    }
    fftw_execute_dft(plans.backward, buf, buf);
    LineFunction out(g);
    for (int j = 0; j < n; ++j) out.values[j] = buf[j][0] / n;
    fftw_free(buf);
    return out;
}

// ---------------------------------------------------------------------------
// Lift and kernel constants

HalfSpaceFunction lift(const std::function<LineFunction(const LineFunction&, double)>& op,
                       const HalfSpaceFunction& F) {
    HalfSpaceFunction out(F.grid);
    for (int k = 0; k < F.grid.levels(); ++k) {
        const LineFunction s = F.slice(k);
        // every registered operator maps 0 to 0; skipping empty slices avoids
        // pointless work and spares t-indexed operators their domain checks
        const bool all_zero =
            std::all_of(s.values.begin(), s.values.end(), [](double v) { return v == 0.0; });
        if (all_zero) continue;
        try {
            out.set_slice(k, op(s, F.grid.t_level(k)));
        } catch (const std::exception& e) {
            throw std::runtime_error("lift: slice " + std::to_string(k) + ": " + e.what());
        }
    }
    return out;
}

HalfSpaceFunction lift(const std::function<LineFunction(const LineFunction&)>& op,
                       const HalfSpaceFunction& F) {
    return lift([&op](const LineFunction& f, double) { return op(f); }, F);
}

std::tuple<double, double, double> kernel_standard_constants(const CZKernel& kernel, double delta,
                                                             const Grid& g, long max_evals) {
    if (delta <= 0 || delta > 1)
        throw std::invalid_argument("kernel_standard_constants: delta must lie in (0, 1]");
    if (g.n() != 1) throw std::invalid_argument("kernel_standard_constants: 1D only");
    const int nx = g.axis_points();
    long stride2 = 1;
    while ((static_cast<long>(nx) / stride2) * (nx / stride2) > max_evals) ++stride2;
    double c1 = 0.0;
    for (int i = 0; i < nx; i += static_cast<int>(stride2))
        for (int j = 0; j < nx; j += static_cast<int>(stride2)) {
            if (i == j) continue;
            const double x = g.x_coord(i), y = g.x_coord(j);
            c1 = std::max(c1, std::abs(kernel.eval(x, y)) * std::abs(x - y));
        }
    long stride3 = 1;
    while ((nx / stride3) * (nx / stride3) * (nx / stride3) > max_evals) ++stride3;
    double c2 = 0.0, c3 = 0.0;
    for (int i = 0; i < nx; i += static_cast<int>(stride3))
        for (int j = 0; j < nx; j += static_cast<int>(stride3)) {
            if (i == j) continue;
            const double x = g.x_coord(i), y = g.x_coord(j);
            const double dxy = std::abs(x - y);
            for (int l = 0; l < nx; l += static_cast<int>(stride3)) {
                const double z = g.x_coord(l);
                if (l != i && l != j && dxy > 2.0 * std::abs(y - z)) {
                    const double quot = std::abs(kernel.eval(x, y) - kernel.eval(x, z)) *
                                        std::pow(dxy, 1.0 + delta) / std::pow(std::abs(y - z), delta);
                    if (std::isfinite(quot)) c2 = std::max(c2, quot);
                    else c2 = std::numeric_limits<double>::infinity();
                }
                const double w = z;
                if (l != i && l != j && dxy > 2.0 * std::abs(x - w)) {
                    const double quot = std::abs(kernel.eval(x, y) - kernel.eval(w, y)) *
                                        std::pow(dxy, 1.0 + delta) / std::pow(std::abs(x - w), delta);
                    if (std::isfinite(quot)) c3 = std::max(c3, quot);
                    else c3 = std::numeric_limits<double>::infinity();
                }
            }
        }
    return {c1, c2, c3};
}

// ---------------------------------------------------------------------------
// Registry

std::function<LineFunction(const LineFunction&, double)> lookup_operator(const std::string& id) {
    auto split = [&]() -> std::pair<std::string, double> {
        const auto pos = id.find(':');
        if (pos == std::string::npos) return {id, 0.0};
        return {id.substr(0, pos), std::stod(id.substr(pos + 1))};
    };
    const auto [name, param] = split();
    if (name == "identity") return [](const LineFunction& f, double) { return f; };
    if (name == "scale")
        return [c = param](const LineFunction& f, double) {
            LineFunction out = f;
            for (double& v : out.values) v *= c;
            return out;
        };
    if (name == "maximal")
        return [](const LineFunction& f, double) { return maximal(f, MaximalMode::Centered); };
    if (name == "maximal_u")
        return [](const LineFunction& f, double) { return maximal(f, MaximalMode::Uncentered); };
    if (name == "maximal_frac")
        return [a = param](const LineFunction& f, double) { return maximal_fractional(f, a); };
    if (name == "hilbert")
        return [](const LineFunction& f, double) {
            return singular_integral(f, hilbert_kernel(), QuadratureMethod::Spectral);
        };
    if (name == "hilbert_pv")
        return [](const LineFunction& f, double) {
            return singular_integral(f, hilbert_kernel(), QuadratureMethod::Direct);
        };
    if (name == "riesz")
        return [a = param](const LineFunction& f, double) {
            return riesz_potential(f, a, QuadratureMethod::Spectral);
        };
    if (name == "riesz_direct")
        return [a = param](const LineFunction& f, double) {
            return riesz_potential(f, a, QuadratureMethod::Direct);
        };
    if (name == "heat") // t-indexed family e^{t^2 Lap}
        return [](const LineFunction& f, double t) {
            return spectral_multiplier(f, heat_symbol(t * t));
        };
    if (name == "heat_direct")
        return [s = param](const LineFunction& f, double) { return heat(f, s); };
    if (name == "gradsqrtlap")
        return [](const LineFunction& f, double) {
            return spectral_multiplier(f, grad_sqrt_lap_symbol());
        };
    throw std::invalid_argument("unknown operator id '" + id + "'");
}

} // namespace tentlab
