// Acceptance gate: the fifteen release criteria, all evaluated at the default
// desk-scale grid (n=1, X=16, h=1/256, t_min=1/4, m=8, K=48). Each criterion
// prints a single PASS/FAIL line; the binary exits nonzero if any fail.
//
// Regression envelopes marked "frozen" were measured on the first green run
// and locked with ~30% headroom; a violation means a behavior change, not a
// tuning problem.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tentlab/atoms.hpp"
#include "tentlab/cz.hpp"
#include "tentlab/experiment.hpp"
#include "tentlab/functionals.hpp"
#include "tentlab/grid.hpp"
#include "tentlab/operators.hpp"
#include "tentlab/slice.hpp"
#include "tentlab/weights.hpp"

using namespace tentlab;

namespace {

const GridSpec kBase{1, 16.0, 1.0 / 256.0, 0.25, 8, 48};

GridSpec refined_h(const GridSpec& s) {
    GridSpec r = s;
    r.h = s.h / 2.0;
    return r;
}

int failures = 0;

bool note(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
    return ok;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// deterministic compactly supported line function, grid-coherent: parameters
// fixed by the seed, values sampled from closed-form profiles at cell centers
LineFunction profile_line(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(777 + seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double c0 = -2.0 + 4.0 * u(rng);
    const double rad = 0.5 + 1.0 * u(rng);
    const double freq = 1.0 + 5.0 * u(rng);
    const double phase = 6.28318 * u(rng);
    const int kind = static_cast<int>(seed % 4);
    LineFunction f(g);
    for (int j = 0; j < g.axis_points(); ++j) {
        const double x = g.x_coord(j);
        const double d = x - c0;
        if (std::abs(d) >= rad) continue;
        switch (kind) {
        case 0: f.at(j) = 1.0; break;
        case 1: f.at(j) = std::cos(freq * x + phase); break;
        case 2: f.at(j) = std::exp(-d * d / (0.18 * rad * rad)); break;
        default: f.at(j) = (d > 0 ? 1.0 : -1.0) * std::cos(freq * d); break;
        }
    }
    return f;
}

struct ProfileParams {
    double c0, rad;
};

ProfileParams profile_params(std::uint64_t seed) {
    std::mt19937_64 rng(777 + seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ProfileParams p;
    p.c0 = -2.0 + 4.0 * u(rng);
    p.rad = 0.5 + 1.0 * u(rng);
    return p;
}

double linf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// uncentered maximal at one point: brute force over the trimmed index window
// (an optimal interval never extends past the support hull except toward x)
double uncentered_max_at(const LineFunction& f, double x) {
    const Grid& g = f.grid;
    const int nx = g.axis_points();
    long smin = nx, smax = -1;
    for (int j = 0; j < nx; ++j)
        if (f.values[static_cast<std::size_t>(j)] != 0.0) {
            smin = std::min<long>(smin, j);
            smax = std::max<long>(smax, j);
        }
    const long jx = std::clamp<long>(g.axis_index(x), 0, nx - 1);
    if (smax < 0) return 0.0;
    const long alo = std::min(jx, smin), bhi = std::max(jx, smax);
    std::vector<double> P(bhi - alo + 2, 0.0);
    for (long j = alo; j <= bhi; ++j)
        P[j - alo + 1] = P[j - alo] + std::abs(f.values[static_cast<std::size_t>(j)]);
    double best = 0.0;
    for (long a = alo; a <= jx; ++a)
        for (long b = jx; b <= bhi; ++b) {
            const double avg = (P[b - alo + 1] - P[a - alo]) / static_cast<double>(b - a + 1);
            best = std::max(best, avg);
        }
    return best;
}

// sup over truncation radii of |sum_{|x - y_j| > eps} K(x, y_j) f_j h|
double tstar_at(const LineFunction& f, const CZKernel& kernel, double x) {
    const Grid& g = f.grid;
    std::vector<std::pair<double, double>> terms; // (distance, contribution)
    for (int j = 0; j < g.axis_points(); ++j) {
        const double v = f.values[static_cast<std::size_t>(j)];
        if (v == 0.0) continue;
        const double y = g.x_coord(j);
        if (std::abs(x - y) < 0.5 * g.h()) continue; // self cell excluded
        terms.emplace_back(std::abs(x - y), kernel.eval(x, y) * v * g.h());
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double acc = 0.0, best = 0.0;
    for (const auto& [d, c] : terms) {
        acc += c;
        best = std::max(best, std::abs(acc));
    }
    return best;
}

// I_alpha f at an arbitrary point via exact per-cell kernel integrals
double riesz_direct_at(const LineFunction& f, double alpha, double x) {
    const Grid& g = f.grid;
    const double hh = 0.5 * g.h();
    auto G = [&](double u) { return std::copysign(std::pow(std::abs(u), alpha) / alpha, u); };
    double acc = 0.0;
    for (int j = 0; j < g.axis_points(); ++j) {
        const double v = f.values[static_cast<std::size_t>(j)];
        if (v == 0.0) continue;
        const double d = g.x_coord(j) - x;
        acc += v * (G(d + hh) - G(d - hh));
    }
    return acc / gamma_alpha(alpha, g.n());
}

// inclusive index window of the strict lattice ball B(x, t)
void ball_window_1d(const Grid& g, double x, double t, long& lo, long& hi) {
    const double a = (x - t + g.X()) / g.h() - 0.5;
    const double b = (x + t + g.X()) / g.h() - 0.5;
    lo = static_cast<long>(std::floor(a)) + 1;
    hi = static_cast<long>(std::ceil(b)) - 1;
}

// mean of the t-levels whose value lies in [t0, t1), per cell, over B x [t0,t1)
HalfSpaceFunction slab_indicator(const Grid& g, double c, double rad, double t0, double t1) {
    HalfSpaceFunction F(g);
    for (int k = 0; k < g.levels(); ++k) {
        const double t = g.t_level(k);
        if (t < t0 || t >= t1) continue;
        for (int j = 0; j < g.axis_points(); ++j)
            if (std::abs(g.x_coord(j) - c) < rad) F.at(k, static_cast<std::size_t>(j)) = 1.0;
    }
    return F;
}

// odd saturating molecule: +-scale on each shell, scaled to sit exactly on
// the allowed shell bound; odd about x = 0 (a cell edge), so every slice
// integral cancels pairwise
Molecule saturating_odd_molecule(const Grid& g, double rad, double q, double r, double eps) {
    const Ball b{0.0, rad};
    HalfSpaceFunction data(g);
    const int J = molecule_shell_count(g, b);
    for (int shell = 1; shell <= J; ++shell) {
        const Ball outer{0.0, std::ldexp(rad, shell + 1)};
        const Ball inner{0.0, std::ldexp(rad, shell)};
        double mass = 0.0;
        for (int k = 0; k < g.levels(); ++k)
            for (int j = 0; j < g.axis_points(); ++j)
                if (in_tent(g, outer, j, k) && (shell == 1 || !in_tent(g, inner, j, k)))
                    mass += g.level_weight() * g.h();
        if (mass == 0.0) continue;
        const double meas = ball_measure(1, outer.radius);
        const double bound = (shell == 1 ? 1.0 : std::pow(2.0, -(shell + 1) * eps)) *
                             std::pow(meas, 1.0 / r - 1.0 / q);
        const double amp = bound / std::pow(mass, 1.0 / r);
        for (int k = 0; k < g.levels(); ++k)
            for (int j = 0; j < g.axis_points(); ++j)
                if (in_tent(g, outer, j, k) && (shell == 1 || !in_tent(g, inner, j, k)))
                    data.at(k, static_cast<std::size_t>(j)) =
                        amp * (g.x_coord(j) > 0 ? 1.0 : -1.0);
    }
    return Molecule{std::move(data), b, q, r, eps, true};
}

// odd cancelling atom with random profile on B(0, rad), exactly admissible
TentAtom random_cancelling_atom(const Grid& g, double rad, double q, double r,
                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.2, 1.0);
    const long nx = g.axis_points();
    const long half = nx / 2; // x = 0 sits between cells half-1 and half
    const long w = static_cast<long>(std::ceil(rad / g.h())) + 1;
    TentAtom piece(g);
    piece.jlo = half - w;
    piece.width = 2 * w;
    piece.q = q;
    piece.r = r;
    piece.ball = {0.0, rad};
    piece.cancelling = true;
    piece.values.assign(static_cast<std::size_t>(g.levels()) * piece.width, 0.0);
    for (int k = 0; k < g.levels(); ++k)
        for (long o = 0; o < w; ++o) {
            const long jr = half + o;         // right cell
            const long jl = half - 1 - o;     // mirrored left cell
            if (!in_tent(g, piece.ball, static_cast<int>(jr), k)) continue;
            const double v = u(rng);
            piece.values[static_cast<std::size_t>(k) * piece.width + (jr - piece.jlo)] = v;
            piece.values[static_cast<std::size_t>(k) * piece.width + (jl - piece.jlo)] = -v;
        }
    double lambda = 0.0;
    return normalize_atom(std::move(piece), lambda);
}

// ---------------------------------------------------------------------------

bool criterion1() {
    const Grid g(kBase);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        std::mt19937_64 rng(100 + i);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double c0 = -4.0 + 8.0 * u(rng);
        const double rad = 0.5 + 1.5 * std::abs(u(rng));
        LineFunction f(g);
        for (int j = 0; j < g.axis_points(); ++j)
            if (std::abs(g.x_coord(j) - c0) < rad) f.at(j) = u(rng);
        const double scale = linf(f.values);
        if (scale == 0.0) continue;
        for (int k : {0, 16, 38}) {
            const double t = g.t_level(k);
            const LineFunction back = project(inject(f, t), t);
            for (std::size_t j = 0; j < f.values.size(); ++j)
                worst = std::max(worst, std::abs(back.values[j] - f.values[j]) / scale);
        }
    }
    return note(1, worst <= 1e-14,
                "retraction identity project(inject(f,t),t)=f, max rel err " + fmt(worst));
}

bool criterion2() {
    const Grid g(kBase);
    double worst = 0.0;
    for (int mode : {1, 3, 10}) {
        const double k = mode * M_PI / g.X();
        LineFunction f(g), want(g);
        for (int j = 0; j < g.axis_points(); ++j) {
            f.at(j) = std::cos(k * g.x_coord(j));
            want.at(j) = std::sin(k * g.x_coord(j));
        }
        const LineFunction got = spectral_multiplier(f, hilbert_symbol());
        for (int j = 0; j < g.axis_points(); ++j)
            worst = std::max(worst, std::abs(got.at(j) - want.at(j)));
    }
    // H^2 = -I on mean-zero data (band-limited: the Nyquist bin of a real
    // transform cannot carry the odd symbol, so white noise is out of scope)
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LineFunction f(g);
    for (int mode = 1; mode <= 40; ++mode) {
        const double k = mode * M_PI / g.X();
        const double a = u(rng), b = u(rng);
        for (int j = 0; j < g.axis_points(); ++j)
            f.at(j) += a * std::cos(k * g.x_coord(j)) + b * std::sin(k * g.x_coord(j));
    }
    const LineFunction hh = spectral_multiplier(spectral_multiplier(f, hilbert_symbol()),
                                                hilbert_symbol());
    double worst2 = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j)
        worst2 = std::max(worst2, std::abs(hh.values[j] + f.values[j]));
    const bool ok = worst <= 1e-10 && worst2 <= 1e-10;
    return note(2, ok, "spectral Hilbert: H cos=sin err " + fmt(worst) + ", H^2=-I err " +
                           fmt(worst2));
}

bool criterion3() {
    auto slab_err_at0 = [](const GridSpec& spec) {
        const Grid g(spec);
        const HalfSpaceFunction F = slab_indicator(g, 0.0, 1.0, 1.0, 2.0);
        const LineFunction a = conical(F, 2.0, 1.0);
        return std::abs(a.at(g.axis_index(0.0)) - 1.0);
    };
    const double err = slab_err_at0(kBase);
    GridSpec fine = kBase;
    fine.h /= 2.0;
    fine.m *= 2;
    fine.K *= 2;
    const double err2 = slab_err_at0(fine);
    const double ratio = err2 / err;

    const Grid g(kBase);
    const HalfSpaceFunction F = slab_indicator(g, 0.0, 1.0, 1.0, 2.0);
    const LineFunction a2 = conical(F, 2.0, 2.0);
    const double want = std::sqrt(2.0 * std::log(2.0) - 1.0);
    const double err3 = std::abs(a2.at(g.axis_index(3.0)) - want);

    // The slab value carries a provable ~6% floor at m = 8: the exact-1/m
    // level weights snap the slab boundaries t = 1, 2 to e-fold cell edges.
    // Tolerance 7e-2 and an at-least-halving refinement ratio are the
    // attainable form of the closed-form check (see the design notes).
    const bool ok = err <= 7e-2 && ratio <= 0.625 && err3 <= 2e-2;
    return note(3, ok, "conical closed forms: slab err " + fmt(err) + ", refinement ratio " +
                           fmt(ratio) + ", aperture-2 err " + fmt(err3));
}

bool criterion4() {
    const Grid g(kBase);
    const BallFamily fam = BallFamily::dyadic(g);
    std::vector<Weight> ws;
    ws.push_back(power_weight(0.0, g));
    ws.push_back(power_weight(0.5, g));
    ws.push_back(power_weight(-0.5, g));
    ws.push_back(Weight(synthesize_line("random-log-bounded", {7.0}, g)));
    double worst = 0.0;
    bool ok = true;
    for (const Weight& w : ws)
        for (double p : {1.5, 2.0, 3.0}) {
            const double pp = p / (p - 1.0);
            const double lhs = ap_characteristic(w, p, fam);
            const double rhs = std::pow(ap_characteristic(w.pow(1.0 - pp), pp, fam), p - 1.0);
            if (std::isinf(lhs) || std::isinf(rhs)) {
                ok = ok && std::isinf(lhs) && std::isinf(rhs);
                continue;
            }
            const double err = std::abs(lhs - rhs) / lhs;
            worst = std::max(worst, err);
            ok = ok && err <= 1e-10;
        }
    return note(4, ok, "A_p duality identity, max rel defect " + fmt(worst));
}

bool criterion5() {
    const Grid g(kBase);
    LineFunction f(g);
    for (int j = 0; j < g.axis_points(); ++j)
        if (std::abs(g.x_coord(j)) < 1.0) f.at(j) = 1.0;
    const LineFunction mc = maximal(f, MaximalMode::Centered);
    const LineFunction mu = maximal(f, MaximalMode::Uncentered);
    const double probes[10] = {1.5, 2.0, 2.75, 3.5, 4.25, 5.0, 6.0, -1.75, -3.0, -5.5};
    double worst = 0.0;
    for (double x : probes) {
        const int j = g.axis_index(x);
        const double xl = g.x_coord(j);
        worst = std::max(worst, std::abs(mc.at(j) - 1.0 / (1.0 + std::abs(xl))));
        worst = std::max(worst, std::abs(mu.at(j) - 2.0 / (1.0 + std::abs(xl))));
    }
    return note(5, worst <= 2.0 * g.h(),
                "maximal closed forms at 10 probes, max err " + fmt(worst) + " (tol " +
                    fmt(2.0 * g.h()) + ")");
}

// shared between criteria 6 and 7
std::vector<CZScalar> cz_pairs;

bool criterion6() {
    const Grid g(kBase);
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool ok = true;
    std::string why;
    cz_pairs.clear();
    for (int p = 0; p < 10; ++p) {
        const double v = 0.5 + 1.5 * u(rng);
        const int np = 2 + p % 3;
        LineFunction gf(g);
        for (int s = 0; s < np; ++s) {
            // one plateau per slot of [-8, 8), kept clear of the slot edges
            const double slot = 16.0 / np;
            const double lo = -8.0 + slot * s + slot * (0.1 + 0.3 * u(rng));
            const double len = slot * (0.1 + 0.4 * u(rng));
            for (int j = 0; j < g.axis_points(); ++j) {
                const double x = g.x_coord(j);
                if (x >= lo && x < lo + len) gf.at(j) = v;
            }
        }
        const double lambda = v * (1.0 - 1e-6);
        CZScalar cz = cz_scalar(gf, lambda);
        double l1 = 0.0, bad_l1 = 0.0;
        for (int j = 0; j < g.axis_points(); ++j) {
            l1 += gf.at(j) * g.h();
            bad_l1 += std::abs(cz.bad.at(j)) * g.h();
            if (std::abs(cz.good.at(j)) > 10.0 * lambda) { ok = false; why = "good bound"; }
        }
        if (bad_l1 > 2.0 * l1) { ok = false; why = "bad L1 bound"; }
        for (const DyadicCube& q : cz.cubes) {
            double sum = 0.0, bsum = 0.0, bmass = 0.0;
            for (long o = 0; o < q.cell_count(); ++o) {
                const int j = static_cast<int>(q.corner + o);
                sum += gf.at(j) * g.h();
                bsum += cz.bad.at(j) * g.h();
                bmass += std::abs(cz.bad.at(j)) * g.h();
            }
            if (sum / q.side(g) > std::pow(8.0, g.n()) * lambda) { ok = false; why = "cube avg"; }
            if (std::abs(bsum) > 1e-12 * std::max(1.0, bmass)) { ok = false; why = "cube mean"; }
        }
        double omega_meas = 0.0, omega_int = 0.0;
        for (int j = 0; j < g.axis_points(); ++j)
            if (cz.omega[static_cast<std::size_t>(j)]) {
                omega_meas += g.h();
                omega_int += gf.at(j) * g.h();
            }
        if (lambda * omega_meas > omega_int) { ok = false; why = "level-set mass"; }
        cz_pairs.push_back(std::move(cz));
    }
    return note(6, ok, ok ? "CZ hard bounds on 10 plateau pairs" : "CZ bounds violated: " + why);
}

bool criterion7() {
    const Grid g(kBase);
    bool ok = !cz_pairs.empty();
    std::size_t cubes = 0;
    for (const CZScalar& cz : cz_pairs)
        for (const DyadicCube& q : cz.cubes) {
            ++cubes;
            const double d = cube_complement_distance(g, cz.omega, q);
            const double side = q.side(g);
            if (!(side <= d && d < 4.0 * side)) ok = false;
        }
    // a few synthetic masks on top of the CZ decompositions
    std::mt19937_64 rng(717);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<std::uint8_t> mask(g.x_count(), 0);
        for (int s = 0; s < 4; ++s) {
            const long a = static_cast<long>(u(rng) * (g.x_count() - 600)) + 200;
            const long len = 10 + static_cast<long>(u(rng) * 500);
            for (long j = a; j < std::min<long>(a + len, g.x_count() - 200); ++j) mask[j] = 1;
        }
        for (const DyadicCube& q : whitney_decompose(g, mask)) {
            ++cubes;
            const double d = cube_complement_distance(g, mask, q);
            const double side = q.side(g);
            if (!(side <= d && d < 4.0 * side)) ok = false;
        }
    }
    std::ostringstream os;
    os << "Whitney window exact on " << cubes << " cubes";
    return note(7, ok, os.str());
}

// frozen envelopes (first-run measured values in the ledger; ~30% headroom)
const double kAtomEnvelopeQ08 = 7.2;  // measured 5.51
const double kAtomEnvelopeQ10 = 3.7;  // measured 2.80

bool criterion8() {
    const Grid g(kBase);
    bool ok = true;
    std::string why;
    double worst_ratio08 = 0.0, worst_ratio10 = 0.0;
    for (int i = 0; i < 16; ++i) {
        std::mt19937_64 rng(808 + i);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double c0 = -1.0 + 2.0 * u(rng);
        const double rad = 0.75 + 0.75 * u(rng);
        HalfSpaceFunction F(g);
        for (int k = 0; k < g.levels() && g.t_level(k) <= 1.5; ++k)
            for (int j = 0; j < g.axis_points(); ++j)
                if (std::abs(g.x_coord(j) - c0) < rad)
                    F.at(k, static_cast<std::size_t>(j)) = -1.0 + 2.0 * u(rng);
        const double scale = linf(F.values);
        for (double q : {0.8, 1.0}) {
            const AtomicDecomposition dec = atomic_decompose(F, q, 2.0);
            const HalfSpaceFunction back = reconstruct(dec);
            for (std::size_t j = 0; j < F.values.size(); ++j)
                if (std::abs(back.values[j] - F.values[j]) > 1e-10 * scale) {
                    ok = false;
                    why = "residual";
                }
            for (const TentAtom& a : dec.atoms) {
                const AtomReport rep = atom_validate(a);
                if (!rep.support_ok || std::abs(rep.size_ratio - 1.0) > 1e-12) {
                    ok = false;
                    why = "admissibility";
                }
            }
            const double ratio = dec.coefficient_norm / dec.source_norm;
            (q == 0.8 ? worst_ratio08 : worst_ratio10) =
                std::max(q == 0.8 ? worst_ratio08 : worst_ratio10, ratio);
        }
    }
    if (worst_ratio08 > kAtomEnvelopeQ08) { ok = false; why = "q=0.8 envelope"; }
    if (worst_ratio10 > kAtomEnvelopeQ10) { ok = false; why = "q=1 envelope"; }
    std::string detail = "atomic decomposition: coefficient ratios q=0.8: " +
                         fmt(worst_ratio08) + " (env " + fmt(kAtomEnvelopeQ08) +
                         "), q=1: " + fmt(worst_ratio10) + " (env " + fmt(kAtomEnvelopeQ10) + ")";
    if (!ok) detail += " [" + why + "]";
    return note(8, ok, detail);
}

bool criterion9() {
    const Grid g(kBase);
    bool ok = true;
    std::string why;
    double uniformity = 0.0;
    for (double rad : {0.2, 0.225, 0.25}) {
        const Molecule m = saturating_odd_molecule(g, rad, 1.0, 2.0, 1.0);
        // the decay constraint governs shells j >= 2 (shell 1 is the tent(4B)
        // bulk, whose allowed bound carries no 2^{-(j+1)eps} factor), so four
        // decaying shells need J >= 5
        const int J = molecule_shell_count(g, m.ball);
        if (J < 5) { ok = false; why = "shell count"; }
        const AtomicDecomposition dec = molecule_to_atoms(m);
        const HalfSpaceFunction back = reconstruct(dec);
        const double scale = linf(m.data.values);
        for (std::size_t j = 0; j < back.values.size(); ++j)
            if (std::abs(back.values[j] - m.data.values[j]) > 1e-10 * scale) {
                ok = false;
                why = "residual";
            }
        double lmax = 0.0;
        for (double l : dec.coefficients) lmax = std::max(lmax, std::abs(l));
        std::vector<double> cj;
        for (std::size_t i = 0; i < dec.atoms.size(); ++i) {
            const TentAtom& a = dec.atoms[i];
            // rounding dust: the telescoping beta pieces of an odd molecule
            // vanish in exact arithmetic; their fp residue is not a shell term
            if (std::abs(dec.coefficients[i]) <= 1e-12 * lmax) continue;
            const AtomReport rep = atom_validate(a);
            // size tolerance 1e-11: the r-norm accumulates rounding over ~1e5
            // tent cells, so the unit-size equality holds only to ~1e-12 here
            if (!rep.support_ok || std::abs(rep.size_ratio - 1.0) > 1e-11 ||
                rep.cancellation_defect > 1e-11) {
                ok = false;
                why = "atom quality";
            }
            // shell index from the atom ball radius: B_{j+2} = 2^{j+2} rad
            const int j = static_cast<int>(std::lround(std::log2(a.ball.radius / rad))) - 2;
            if (j < 1) { ok = false; why = "shell map"; continue; }
            if (j >= 2) cj.push_back(std::abs(dec.coefficients[i]) * std::ldexp(1.0, j));
        }
        if (static_cast<int>(cj.size()) < 4) { ok = false; why = "fewer than 4 shells"; }
        const double cmax = *std::max_element(cj.begin(), cj.end());
        const double cmin = *std::min_element(cj.begin(), cj.end());
        uniformity = std::max(uniformity, cmax / cmin - 1.0);
        if (cmax / cmin > 1.0 + 1e-6) { ok = false; why = "nonuniform constant"; }
    }
    std::string detail =
        "molecule-to-atoms: exact reconstruction, |lambda_j| = C 2^{-j eps} over 4 decaying "
        "shells, spread " + fmt(uniformity);
    if (!ok) detail += " [" + why + "]";
    return note(9, ok, detail);
}

const double kMoleculeShellEnvelope = 2.4; // frozen; measured 1.85

// Real-line principal-value Hilbert transform of each slice, zero-skipping
// (the spectral path is periodic; its wrap-around images pollute the outer
// shells, which is exactly what this criterion measures).
HalfSpaceFunction direct_hilbert_lift(const HalfSpaceFunction& F) {
    const Grid& g = F.grid;
    const CZKernel hk = hilbert_kernel();
    HalfSpaceFunction out(g);
    for (int k = 0; k < g.levels(); ++k) {
        std::vector<int> nz;
        for (int z = 0; z < g.axis_points(); ++z)
            if (F.at(k, static_cast<std::size_t>(z)) != 0.0) nz.push_back(z);
        if (nz.empty()) continue;
        for (int j = 0; j < g.axis_points(); ++j) {
            double acc = 0.0;
            for (int z : nz) {
                if (z == j) continue;
                acc += hk.eval(g.x_coord(j), g.x_coord(z)) * F.at(k, static_cast<std::size_t>(z));
            }
            out.at(k, static_cast<std::size_t>(j)) = acc * g.h();
        }
    }
    return out;
}

bool criterion10() {
    const Grid g(kBase);
    bool ok = true;
    std::string why;
    double worst_shell = 0.0, worst_decay = 1e9;
    for (int i = 0; i < 16; ++i) {
        const TentAtom atom = random_cancelling_atom(g, 0.5, 1.0, 2.0, 1000 + i);
        const HalfSpaceFunction image = direct_hilbert_lift(atom.dense());
        const Molecule mol{image, atom.ball, 1.0, 2.0, 1.0, true};
        const MoleculeReport rep = molecule_validate(mol);
        if (!rep.reliable) { ok = false; why = "unreliable fit"; }
        worst_decay = std::min(worst_decay, rep.fitted_decay);
        for (double s : rep.shell_ratios) worst_shell = std::max(worst_shell, s);
    }
    if (worst_decay < 0.9) { ok = false; why = "fitted decay"; }
    if (worst_shell > kMoleculeShellEnvelope) { ok = false; why = "shell envelope"; }

    // negative control: non-cancelling atoms; shell ratios grow with the domain
    std::vector<double> control;
    for (double X : {4.0, 8.0, 16.0}) {
        const Grid gc({1, X, 1.0 / 64.0, 0.25, 8, 24});
        const TentAtom a = make_indicator_atom(gc, {0.0, 0.5}, 1.0, 2.0);
        const HalfSpaceFunction image = direct_hilbert_lift(a.dense());
        const MoleculeReport rep = molecule_validate(Molecule{image, a.ball, 1.0, 2.0, 1.0, false});
        control.push_back(*std::max_element(rep.shell_ratios.begin(), rep.shell_ratios.end()));
    }
    if (!(control[0] < control[1] && control[1] < control[2])) { ok = false; why = "control"; }
    std::string detail = "Hilbert images of cancelling atoms are molecules: min decay " +
                         fmt(worst_decay) + ", max shell ratio " + fmt(worst_shell) + " (env " +
                         fmt(kMoleculeShellEnvelope) + "); control " + fmt(control[0]) + " < " +
                         fmt(control[1]) + " < " + fmt(control[2]);
    if (!ok) detail += " [" + why + "]";
    return note(10, ok, detail);
}

// ---------------------------------------------------------------------------
// criteria 11 + 12 share the lifted operator images per grid

struct RatioConfig {
    std::string op;
    double qi, ri, qo, ro;
};

bool criteria11_12() {
    std::vector<RatioConfig> cfgs;
    for (double q : {1.5, 2.0, 3.0})
        for (double r : {1.5, 2.0, 3.0}) {
            cfgs.push_back({"maximal", q, r, q, r});
            cfgs.push_back({"hilbert", q, r, q, r});
        }
    cfgs.push_back({"riesz:0.5", 4.0 / 3.0, 4.0, 4.0, 4.0});
    cfgs.push_back({"heat", 2.0, 2.0, 2.0, 2.0});
    cfgs.push_back({"gradsqrtlap", 2.0, 2.0, 2.0, 2.0});

    const std::vector<std::string> ops = {"maximal", "hilbert", "riesz:0.5", "heat",
                                          "gradsqrtlap"};
    const CorpusSpec corpus{{"tent-slab", "atom", "cancelling-atom", "oscillatory",
                             "gaussian-power", "random-atoms"},
                            11, 6};

    // max ratio per config per grid; weak-type constants per op per grid
    std::vector<std::array<double, 2>> maxr(cfgs.size(), {0.0, 0.0});
    double weak_m[2] = {0.0, 0.0}, weak_h[2] = {0.0, 0.0};

    for (int pass = 0; pass < 2; ++pass) {
        const Grid g(pass == 0 ? kBase : refined_h(kBase));
        const auto items = generate_corpus(corpus, g);
        for (const CorpusItem& item : items) {
            // input norms, computed once per exponent pair
            std::vector<double> in_norm(cfgs.size());
            for (std::size_t c = 0; c < cfgs.size(); ++c)
                in_norm[c] = tent_norm(item.F, cfgs[c].qi, cfgs[c].ri);
            const double in_weak = tent_norm(item.F, 1.0, 2.0);
            for (const std::string& op : ops) {
                const HalfSpaceFunction TF = lift_cached(lookup_operator(op), item.F);
                for (std::size_t c = 0; c < cfgs.size(); ++c) {
                    if (cfgs[c].op != op || in_norm[c] == 0.0) continue;
                    const double out = tent_norm(TF, cfgs[c].qo, cfgs[c].ro);
                    maxr[c][pass] = std::max(maxr[c][pass], out / in_norm[c]);
                }
                if ((op == "maximal" || op == "hilbert") && in_weak > 0.0) {
                    const double cw = weak_tent_norm(TF, 1.0, 2.0) / in_weak;
                    (op == "maximal" ? weak_m : weak_h)[pass] =
                        std::max((op == "maximal" ? weak_m : weak_h)[pass], cw);
                }
            }
        }
    }

    bool ok11 = true;
    double worst_drift = 0.0, biggest = 0.0;
    for (std::size_t c = 0; c < cfgs.size(); ++c) {
        if (!(std::isfinite(maxr[c][0]) && maxr[c][0] > 0.0 && std::isfinite(maxr[c][1])))
            ok11 = false;
        const double drift = std::abs(maxr[c][1] / maxr[c][0] - 1.0);
        worst_drift = std::max(worst_drift, drift);
        biggest = std::max(biggest, maxr[c][0]);
        if (drift > 0.10) ok11 = false;
    }
    note(11, ok11, "boundedness ratios: max constant " + fmt(biggest) + ", worst h->h/2 drift " +
                       fmt(worst_drift));

    const double drift_m = std::abs(weak_m[1] / weak_m[0] - 1.0);
    const double drift_h = std::abs(weak_h[1] / weak_h[0] - 1.0);
    const bool ok12 = std::isfinite(weak_m[0]) && weak_m[0] > 0.0 && drift_m <= 0.10 &&
                      std::isfinite(weak_h[0]) && weak_h[0] > 0.0 && drift_h <= 0.10;
    note(12, ok12, "weak-type constants: maximal " + fmt(weak_m[0]) + " (drift " + fmt(drift_m) +
                       "), Hilbert " + fmt(weak_h[0]) + " (drift " + fmt(drift_h) + ")");
    return ok11 && ok12;
}

bool criterion13() {
    const Grid g(kBase);
    const auto items = generate_corpus({{"tent-slab", "atom", "cancelling-atom", "oscillatory",
                                         "gaussian-power", "random-atoms"},
                                        13, 6},
                                       g);
    const std::vector<double> alphas{1.0, 2.0, 4.0, 8.0};
    bool ok = true;
    double worst_margin = -1e9;
    for (double q : {1.0, 1.2, 2.0, 4.0}) {
        const GrowthFit fit = fit_growth_exponent(items, q, alphas);
        const double bound = 1.0 * std::max(0.5, 1.0 / q) + 0.1;
        worst_margin = std::max(worst_margin, fit.max_slope - bound);
        if (fit.max_slope > bound) ok = false;
    }
    return note(13, ok, "change-of-angle slopes under n max(1/2,1/q)+0.1, worst margin " +
                            fmt(worst_margin));
}

// ---------------------------------------------------------------------------
// criterion 14: pointwise lemma constants over 32-item corpora, both grids

struct LemmaConstants {
    double hl = 0.0, cz = 0.0, riesz = 0.0, sg1 = 0.0, sg2 = 0.0;
};

LemmaConstants lemma_constants(const GridSpec& spec) {
    const Grid g(spec);
    LemmaConstants out;
    const CZKernel hk = hilbert_kernel();
    const double p0 = 1.5; // between 1 and r = 2
    for (std::uint64_t i = 0; i < 32; ++i) {
        const LineFunction f = profile_line(g, i);
        const ProfileParams pp = profile_params(i);
        const double probes[2] = {pp.c0, pp.c0 + pp.rad + 0.9};

        const LineFunction mf = maximal(f, MaximalMode::Centered);
        const LineFunction hf = spectral_multiplier(f, hilbert_symbol());
        const LineFunction gradf = spectral_multiplier(f, grad_sqrt_lap_symbol());
        const BallAverager ba2(f, 2.0);

        for (double t : {0.5, 1.5}) {
            // averaged function avg_{B(y,t)}|f| shared by the H-L lemma
            LineFunction avg_t(g);
            const BallAverager ba1(f, 1.0);
            for (int j = 0; j < g.axis_points(); ++j)
                avg_t.at(j) = ba1.average(g.x_coord(j), t);

            for (double x : probes) {
                // Hardy-Littlewood lemma (r = 2)
                {
                    const double lhs = ball_average(mf, x, t, 2.0);
                    const double rhs =
                        ball_average(f, x, 2.0 * t, 2.0) + uncentered_max_at(avg_t, x);
                    if (rhs > 0.0) out.hl = std::max(out.hl, lhs / rhs);
                }
                // Calderon-Zygmund lemma (r = 2)
                {
                    const double lhs = ball_average(hf, x, t, 2.0);
                    const double rhs = ball_average(f, x, 2.0 * t, 2.0) + tstar_at(f, hk, x) +
                                       maximal_at(f, x, MaximalMode::Centered);
                    if (rhs > 0.0) out.cz = std::max(out.cz, lhs / rhs);
                }
                // Riesz potential lemma (alpha = 1/2, theta = 4/3, r = 4)
                {
                    long lo, hi;
                    ball_window_1d(g, x, t, lo, hi);
                    double acc = 0.0;
                    long cnt = 0;
                    for (long j = lo; j <= hi; ++j, ++cnt)
                        if (j >= 0 && j < g.axis_points())
                            acc += std::pow(std::abs(riesz_direct_at(f, 0.5, g.x_coord(
                                                static_cast<int>(j)))), 4.0);
                    const double lhs = cnt > 0 ? std::pow(acc / cnt, 0.25) : 0.0;
                    const double rhs = std::pow(t, 0.5) * ball_average(f, x, 5.0 * t, 4.0 / 3.0) +
                                       riesz_direct_at(avg_t, 0.5, x);
                    if (rhs > 0.0) out.riesz = std::max(out.riesz, lhs / rhs);
                }
                // semigroup Riesz-transform corollary, M = 1 and 2
                for (int M : {1, 2}) {
                    const double lhs = ball_average(gradf, x, t, 2.0);
                    double rhs = 0.0;
                    for (int j = 1;; ++j) {
                        const double R = std::ldexp(t, j + 1);
                        long lo, hi;
                        ball_window_1d(g, x, R, lo, hi);
                        rhs += std::pow(4.0, -j * M) *
                               std::sqrt(ba2.window_sum(lo, hi) / std::pow(t, g.n()));
                        if (R >= 2.0 * g.X()) break;
                    }
                    for (int k = 1; k <= M; ++k) {
                        const LineFunction vk = spectral_multiplier(
                            spectral_multiplier(f, heat_symbol(0.5 * k * t * t)),
                            grad_sqrt_lap_symbol());
                        LineFunction pw(g);
                        for (int j = 0; j < g.axis_points(); ++j)
                            pw.at(j) = std::pow(std::abs(vk.at(j)), p0);
                        const double binom = (M == 1) ? 1.0 : (k == 1 ? 2.0 : 1.0);
                        rhs += binom * std::pow(maximal_at(pw, x, MaximalMode::Centered), 1.0 / p0);
                    }
                    double& slot = (M == 1 ? out.sg1 : out.sg2);
                    if (rhs > 0.0) slot = std::max(slot, lhs / rhs);
                }
            }
        }
    }
    return out;
}

bool criterion14() {
    const LemmaConstants a = lemma_constants(kBase);
    const LemmaConstants b = lemma_constants(refined_h(kBase));
    auto check = [](double base, double fine, double& drift) {
        drift = std::abs(fine / base - 1.0);
        return std::isfinite(base) && base > 0.0 && std::isfinite(fine) && drift <= 0.10;
    };
    double d1, d2, d3, d4, d5;
    const bool ok = check(a.hl, b.hl, d1) && check(a.cz, b.cz, d2) &&
                    check(a.riesz, b.riesz, d3) && check(a.sg1, b.sg1, d4) &&
                    check(a.sg2, b.sg2, d5);
    return note(14, ok, "pointwise lemma constants (HL " + fmt(a.hl) + "/" + fmt(d1) + ", CZ " +
                            fmt(a.cz) + "/" + fmt(d2) + ", Riesz " + fmt(a.riesz) + "/" + fmt(d3) +
                            ", semigroup M=1 " + fmt(a.sg1) + "/" + fmt(d4) + ", M=2 " +
                            fmt(a.sg2) + "/" + fmt(d5) + "; value/drift)");
}

bool criterion15() {
    const Grid g(kBase);
    // odd bump pair keeps the truncated-tail error of the composition small
    LineFunction f(g);
    for (int j = 0; j < g.axis_points(); ++j) {
        const double x = g.x_coord(j);
        if (x >= 0.25 && x < 1.25) f.at(j) = 1.0;
        if (x > -1.25 && x <= -0.25) f.at(j) = -1.0;
    }
    const LineFunction a = riesz_potential(f, 0.25, QuadratureMethod::Direct);
    const LineFunction ab = riesz_potential(a, 0.25, QuadratureMethod::Direct);
    const LineFunction c = riesz_potential(f, 0.5, QuadratureMethod::Direct);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < c.values.size(); ++j) {
        num += (ab.values[j] - c.values[j]) * (ab.values[j] - c.values[j]);
        den += c.values[j] * c.values[j];
    }
    const double rel = std::sqrt(num / den);

    // pointwise domination of the fractional maximal function
    std::mt19937_64 rng(1500);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    LineFunction p(g);
    for (int j = 0; j < g.axis_points(); ++j)
        if (std::abs(g.x_coord(j)) < 1.0) p.at(j) = u(rng);
    const LineFunction ma = maximal_fractional(p, 0.5);
    const LineFunction ia = riesz_potential(p, 0.5, QuadratureMethod::Direct);
    const double cdom = gamma_alpha(0.5, 1) / ball_measure(1, 1.0);
    double worst_slack = 0.0;
    for (int j = 0; j < g.axis_points(); ++j)
        if (ia.at(j) > 0.0)
            worst_slack = std::max(worst_slack, ma.at(j) / (cdom * ia.at(j)));
    const double gerr = std::abs(gamma_alpha(0.5, 1) - std::sqrt(2.0 * M_PI));

    const bool ok = rel <= 1e-2 && worst_slack <= 1.0 + 1e-6 && gerr <= 1e-12;
    return note(15, ok, "Riesz cross-checks: semigroup rel L2 err " + fmt(rel) +
                            ", domination slack " + fmt(worst_slack) + ", gamma(1/2) err " +
                            fmt(gerr));
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criteria11_12();
    criterion13();
    criterion14();
    criterion15();
    if (failures == 0) std::printf("all 15 acceptance criteria passed\n");
    else std::printf("%d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
