#include "tentlab/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tentlab/cz.hpp"
#include "tentlab/functionals.hpp"

namespace tentlab {

namespace {

void check_1d(const Grid& g, const char* who) {
    if (g.n() != 1) throw std::invalid_argument(std::string(who) + ": 1D only");
}

double size_bound(int n, const Ball& b, double q, double r) {
    return std::pow(ball_measure(n, b.radius), 1.0 / r - 1.0 / q);
}

// (sum_k w sum_j |v|^r h)^{1/r} over the atom window
double window_r_norm(const TentAtom& a) {
    double acc = 0.0;
    for (double v : a.values) acc += std::pow(std::abs(v), a.r);
    return std::pow(acc * a.grid.level_weight() * a.grid.h(), 1.0 / a.r);
}

// max_k |sum_j v h| normalized by max_k sum_j |v| h
double window_cancellation_defect(const TentAtom& a) {
    double worst = 0.0, scale = 0.0;
    for (int k = 0; k < a.grid.levels(); ++k) {
        double s = 0.0, m = 0.0;
        for (long o = 0; o < a.width; ++o) {
            const double v = a.values[static_cast<std::size_t>(k) * a.width + o];
            s += v;
            m += std::abs(v);
        }
        worst = std::max(worst, std::abs(s));
        scale = std::max(scale, m);
    }
    return scale > 0 ? worst / scale : 0.0;
}

// {M_u chi_mask > 1/2} without evaluating the maximal operator: a cell x is
// in the enlargement iff some interval containing x has more mask cells than
// gaps, i.e. the best interval sum of (+1 in, -1 out) through x is >= 1.
std::vector<std::uint8_t> enlarge_half(const std::vector<std::uint8_t>& mask) {
    const long n = static_cast<long>(mask.size());
    std::vector<double> best_left(n), best_right(n);
    double run = 0.0;
    for (long j = 0; j < n; ++j) {
        best_left[j] = std::max(0.0, run);
        run = std::max(0.0, run) + (mask[j] ? 1.0 : -1.0);
    }
    run = 0.0;
    for (long j = n - 1; j >= 0; --j) {
        best_right[j] = std::max(0.0, run);
        run = std::max(0.0, run) + (mask[j] ? 1.0 : -1.0);
    }
    std::vector<std::uint8_t> out(n, 0);
    for (long j = 0; j < n; ++j) {
        const double score = best_left[j] + (mask[j] ? 1.0 : -1.0) + best_right[j];
        out[j] = score >= 1.0 ? 1 : 0;
    }
    return out;
}

// distance (cell-center metric) from each cell to the complement of mask,
// with virtual complement at both domain ends
std::vector<double> mask_distances(const Grid& g, const std::vector<std::uint8_t>& mask) {
    const long n = static_cast<long>(mask.size());
    std::vector<double> d(n);
    long last = -1;
    for (long j = 0; j < n; ++j) {
        if (!mask[j]) last = j;
        d[j] = static_cast<double>(j - last);
    }
    last = n;
    for (long j = n - 1; j >= 0; --j) {
        if (!mask[j]) last = j;
        d[j] = std::min(d[j], static_cast<double>(last - j)) * g.h();
    }
    return d;
}

} // namespace

bool in_tent(const Grid& g, const Ball& b, int j, int k) {
    return b.radius - std::abs(g.x_coord(j) - b.center) >= g.t_level(k);
}

HalfSpaceFunction TentAtom::dense() const {
    HalfSpaceFunction F(grid);
    const long nx = grid.axis_points();
    for (int k = 0; k < grid.levels(); ++k)
        for (long o = 0; o < width; ++o) {
            const long j = jlo + o;
            if (j >= 0 && j < nx)
                F.at(k, static_cast<std::size_t>(j)) = values[static_cast<std::size_t>(k) * width + o];
        }
    return F;
}

AtomReport atom_validate(const TentAtom& a) {
    check_1d(a.grid, "atom_validate");
    AtomReport rep;
    rep.support_ok = true;
    for (int k = 0; k < a.grid.levels() && rep.support_ok; ++k)
        for (long o = 0; o < a.width; ++o) {
            const long j = a.jlo + o;
            if (a.values[static_cast<std::size_t>(k) * a.width + o] != 0.0 &&
                !in_tent(a.grid, a.ball, static_cast<int>(j), k)) {
                rep.support_ok = false;
                break;
            }
        }
    rep.size_ratio = window_r_norm(a) / size_bound(a.grid.n(), a.ball, a.q, a.r);
    rep.cancellation_defect = window_cancellation_defect(a);
    return rep;
}

TentAtom normalize_atom(TentAtom piece, double& lambda) {
    const double norm = window_r_norm(piece);
    const double bound = size_bound(piece.grid.n(), piece.ball, piece.q, piece.r);
    if (norm == 0.0) {
        lambda = 0.0;
        return piece;
    }
    lambda = norm / bound;
    for (double& v : piece.values) v /= lambda;
    return piece;
}

TentAtom make_indicator_atom(const Grid& g, const Ball& b, double q, double r) {
    check_1d(g, "make_indicator_atom");
    TentAtom piece(g);
    const long nx = g.axis_points();
    long lo = std::max<long>(0, g.axis_index(b.center - b.radius) - 1);
    long hi = std::min<long>(nx - 1, g.axis_index(b.center + b.radius) + 1);
    piece.jlo = lo;
    piece.width = hi - lo + 1;
    piece.q = q;
    piece.r = r;
    piece.ball = b;
    piece.values.assign(static_cast<std::size_t>(g.levels()) * piece.width, 0.0);
    for (int k = 0; k < g.levels(); ++k)
        for (long o = 0; o < piece.width; ++o)
            if (in_tent(g, b, static_cast<int>(lo + o), k))
                piece.values[static_cast<std::size_t>(k) * piece.width + o] = 1.0;
    double lambda = 0.0;
    TentAtom atom = normalize_atom(std::move(piece), lambda);
    if (lambda == 0.0) throw std::invalid_argument("make_indicator_atom: empty tent");
    return atom;
}

AtomicDecomposition atomic_decompose(const HalfSpaceFunction& F, double q, double r) {
    check_1d(F.grid, "atomic_decompose");
    if (q > 1.0 || q <= 0.0)
        throw std::invalid_argument("atomic_decompose: requires 0 < q <= 1");
    if (r < 1.0) throw std::invalid_argument("atomic_decompose: r must be >= 1");
    const Grid& g = F.grid;
    const long nx = g.axis_points();
    const int K = g.levels();
    AtomicDecomposition dec;
    dec.grid = g;
    const LineFunction a = conical(F, r, 1.0);
    double amax = 0.0, amin = 0.0;
    for (double v : a.values)
        if (v > 0.0) {
            amax = std::max(amax, v);
            amin = amin == 0.0 ? v : std::min(amin, v);
        }
    dec.source_norm = lq_norm(a, q);
    if (amax == 0.0) return dec;
    const int k_min = static_cast<int>(std::floor(std::log2(amin))) - 1;
    const int k_max = static_cast<int>(std::ceil(std::log2(amax))) - 1;

    // per-dyadic-level tent masks of the enlarged sets; band k corresponds to
    // threshold 2^{k_min + band}
    const int bands = k_max - k_min + 2; // last band is empty by construction
    std::vector<std::vector<std::uint8_t>> omega_star(bands);
    std::vector<std::vector<double>> dist(bands);
    std::vector<std::vector<DyadicCube>> cubes(bands);
    for (int b = 0; b < bands; ++b) {
        const double thr = std::ldexp(1.0, k_min + b);
        std::vector<std::uint8_t> o(nx, 0);
        bool any = false;
        for (long j = 0; j < nx; ++j) {
            o[j] = a.values[j] > thr ? 1 : 0;
            any = any || o[j];
        }
        if (!any) {
            omega_star[b].assign(nx, 0);
            dist[b].assign(nx, 0.0);
            continue;
        }
        omega_star[b] = enlarge_half(o);
        dist[b] = mask_distances(g, omega_star[b]);
        try {
            cubes[b] = whitney_decompose(g, omega_star[b]);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("atomic_decompose: margin violation: ") +
                                     e.what());
        }
    }

    // assign every support cell to its band: largest b with (y,t) in T(omega*_b)
    // translates to dist_b(y) >= t and dist_{b+1}(y) < t
    std::vector<int> band_of(static_cast<std::size_t>(K) * nx, -1);
    std::vector<std::string> uncovered;
    for (int k = 0; k < K; ++k) {
        const double t = g.t_level(k);
        for (long j = 0; j < nx; ++j) {
            if (F.at(k, static_cast<std::size_t>(j)) == 0.0) continue;
            int b = -1;
            while (b + 1 < bands && dist[b + 1][j] >= t) ++b;
            if (b < 0) {
                if (uncovered.size() < 8) {
                    std::ostringstream os;
                    os << "(k=" << k << ", j=" << j << ")";
                    uncovered.push_back(os.str());
                }
                continue;
            }
            band_of[static_cast<std::size_t>(k) * nx + j] = b;
        }
    }
    if (!uncovered.empty()) {
        std::string msg = "atomic_decompose: uncovered support cells:";
        for (const std::string& s : uncovered) msg += " " + s;
        throw std::runtime_error(msg);
    }

    for (int b = 0; b < bands; ++b) {
        for (const DyadicCube& qc : cubes[b]) {
            TentAtom piece(g);
            piece.jlo = qc.corner;
            piece.width = qc.cell_count();
            piece.q = q;
            piece.r = r;
            piece.ball = {qc.center(g), 6.0 * std::sqrt(1.0) * qc.side(g)};
            piece.values.assign(static_cast<std::size_t>(K) * piece.width, 0.0);
            bool nonzero = false;
            for (int k = 0; k < K; ++k)
                for (long o = 0; o < piece.width; ++o) {
                    const long j = qc.corner + o;
                    if (band_of[static_cast<std::size_t>(k) * nx + j] != b) continue;
                    const double v = F.at(k, static_cast<std::size_t>(j));
                    if (v != 0.0) {
                        piece.values[static_cast<std::size_t>(k) * piece.width + o] = v;
                        nonzero = true;
                    }
                }
            if (!nonzero) continue;
            double lambda = 0.0;
            TentAtom atom = normalize_atom(std::move(piece), lambda);
            dec.coefficients.push_back(lambda);
            dec.atoms.push_back(std::move(atom));
        }
    }
    double acc = 0.0;
    for (double l : dec.coefficients) acc += std::pow(l, q);
    dec.coefficient_norm = std::pow(acc, 1.0 / q);
    return dec;
}

HalfSpaceFunction reconstruct(const AtomicDecomposition& dec) {
    if (dec.atoms.empty()) {
        if (!dec.grid) throw std::invalid_argument("reconstruct: empty decomposition");
        return HalfSpaceFunction(*dec.grid);
    }
    const Grid& g = dec.atoms.front().grid;
    HalfSpaceFunction F(g);
    const long nx = g.axis_points();
    for (std::size_t i = 0; i < dec.atoms.size(); ++i) {
        const TentAtom& a = dec.atoms[i];
        if (!(a.grid == g)) throw std::invalid_argument("reconstruct: grid mismatch");
        const double l = dec.coefficients[i];
        for (int k = 0; k < g.levels(); ++k)
            for (long o = 0; o < a.width; ++o) {
                const long j = a.jlo + o;
                if (j >= 0 && j < nx)
                    F.at(k, static_cast<std::size_t>(j)) +=
                        l * a.values[static_cast<std::size_t>(k) * a.width + o];
            }
    }
    return F;
}

int molecule_shell_count(const Grid& g, const Ball& b) {
    int count = 0;
    for (int j = 1;; ++j) {
        const double rj1 = std::ldexp(b.radius, j + 1);
        if (std::abs(b.center) + rj1 > g.X()) break;
        count = j;
        if (count > 60) break;
    }
    return count;
}

namespace {

// shell membership: j == 1 -> tent(4B); j >= 2 -> tent(2^{j+1}B) \ tent(2^j B)
bool in_shell(const Grid& g, const Ball& b, int shell, int j, int k) {
    const Ball outer{b.center, std::ldexp(b.radius, shell + 1)};
    if (!in_tent(g, outer, j, k)) return false;
    if (shell == 1) return true;
    const Ball inner{b.center, std::ldexp(b.radius, shell)};
    return !in_tent(g, inner, j, k);
}

double shell_norm(const Molecule& m, int shell) {
    const Grid& g = m.data.grid;
    double acc = 0.0;
    for (int k = 0; k < g.levels(); ++k)
        for (long j = 0; j < g.axis_points(); ++j) {
            const double v = m.data.at(k, static_cast<std::size_t>(j));
            if (v != 0.0 && in_shell(g, m.ball, shell, static_cast<int>(j), k))
                acc += std::pow(std::abs(v), m.r);
        }
    return std::pow(acc * g.level_weight() * g.h(), 1.0 / m.r);
}

double hsf_cancellation_defect(const HalfSpaceFunction& F) {
    double worst = 0.0, scale = 0.0;
    for (int k = 0; k < F.grid.levels(); ++k) {
        double s = 0.0, mres = 0.0;
        for (std::size_t j = 0; j < F.grid.x_count(); ++j) {
            s += F.at(k, j);
            mres += std::abs(F.at(k, j));
        }
        worst = std::max(worst, std::abs(s));
        scale = std::max(scale, mres);
    }
    return scale > 0 ? worst / scale : 0.0;
}

} // namespace

MoleculeReport molecule_validate(const Molecule& m) {
    check_1d(m.data.grid, "molecule_validate");
    MoleculeReport rep;
    const int J = molecule_shell_count(m.data.grid, m.ball);
    if (J < 1) throw std::invalid_argument("molecule_validate: no shell fits in the domain");
    int nonempty = 0;
    std::vector<std::pair<double, double>> fitpoints; // (-j, log2(norm * |B_{j+1}|^{1/q-1/r}))
    for (int j = 1; j <= J; ++j) {
        const double norm = shell_norm(m, j);
        const double meas = ball_measure(m.data.grid.n(), std::ldexp(m.ball.radius, j + 1));
        const double allowed =
            (j == 1 ? 1.0 : std::pow(2.0, -(j + 1) * m.epsilon)) *
            std::pow(meas, 1.0 / m.r - 1.0 / m.q);
        rep.shell_ratios.push_back(norm / allowed);
        if (norm > 0.0) {
            ++nonempty;
            if (j >= 2)
                fitpoints.emplace_back(-static_cast<double>(j),
                                       std::log2(norm * std::pow(meas, 1.0 / m.q - 1.0 / m.r)));
        }
    }
    rep.reliable = nonempty >= 3;
    rep.cancellation_defect = hsf_cancellation_defect(m.data);
    if (fitpoints.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : fitpoints) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double nfit = static_cast<double>(fitpoints.size());
        rep.fitted_decay = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);
    }
    return rep;
}

AtomicDecomposition molecule_to_atoms(const Molecule& m) {
    check_1d(m.data.grid, "molecule_to_atoms");
    if (!m.cancelling)
        throw std::invalid_argument("molecule_to_atoms: molecule must be cancelling");
    const Grid& g = m.data.grid;
    const long nx = g.axis_points();
    const int K = g.levels();

    // smallest J with supp M inside tent(B_{J+1})
    int J = 0;
    for (int j = 1; j <= 62 && J == 0; ++j) {
        const Ball outer{m.ball.center, std::ldexp(m.ball.radius, j + 1)};
        bool covered = true;
        for (int k = 0; k < K && covered; ++k)
            for (long y = 0; y < nx; ++y)
                if (m.data.at(k, static_cast<std::size_t>(y)) != 0.0 &&
                    !in_tent(g, outer, static_cast<int>(y), k)) {
                    covered = false;
                    break;
                }
        if (covered) J = j;
    }
    if (J == 0)
        throw std::invalid_argument("molecule_to_atoms: shells do not cover the support");

    auto ball_j = [&](int j) { return Ball{m.ball.center, std::ldexp(m.ball.radius, j)}; };
    // in-domain cell window and grid measure of B_j
    auto ball_cells = [&](int j, long& lo, long& hi) {
        const Ball b = ball_j(j);
        const double alo = (b.center - b.radius + g.X()) / g.h() - 0.5;
        const double ahi = (b.center + b.radius + g.X()) / g.h() - 0.5;
        lo = std::max<long>(0, static_cast<long>(std::floor(alo)) + 1);
        hi = std::min<long>(nx - 1, static_cast<long>(std::ceil(ahi)) - 1);
    };

    // per-slice shell sums c_{j,k} and tent sums S_{j,k}
    std::vector<std::vector<double>> shell_sum(J + 1, std::vector<double>(K, 0.0));
    std::vector<std::vector<double>> tent_sum(J + 3, std::vector<double>(K, 0.0));
    for (int k = 0; k < K; ++k)
        for (long y = 0; y < nx; ++y) {
            const double v = m.data.at(k, static_cast<std::size_t>(y));
            if (v == 0.0) continue;
            for (int j = 1; j <= J; ++j)
                if (in_shell(g, m.ball, j, static_cast<int>(y), k))
                    shell_sum[j][k] += v * g.h();
            for (int j = 2; j <= J + 2; ++j)
                if (in_tent(g, ball_j(j), static_cast<int>(y), k))
                    tent_sum[j][k] += v * g.h();
        }

    AtomicDecomposition dec;
    dec.grid = g;
    dec.source_norm = tent_norm(m.data, m.q, m.r);

    auto push_piece = [&](TentAtom piece) {
        double lambda = 0.0;
        TentAtom atom = normalize_atom(std::move(piece), lambda);
        if (lambda == 0.0) return;
        atom.cancelling = true;
        dec.coefficients.push_back(lambda);
        dec.atoms.push_back(std::move(atom));
    };

    // alpha_j = M chi_{shell j} - c_{j,k} chi_{B_{j+1}} / |B_{j+1}|_grid
    for (int j = 1; j <= J; ++j) {
        long lo, hi;
        ball_cells(j + 1, lo, hi);
        const double denom = static_cast<double>(hi - lo + 1) * g.h();
        TentAtom piece(g);
        piece.jlo = lo;
        piece.width = hi - lo + 1;
        piece.q = m.q;
        piece.r = m.r;
        piece.ball = ball_j(j + 2);
        piece.values.assign(static_cast<std::size_t>(K) * piece.width, 0.0);
        for (int k = 0; k < K; ++k)
            for (long o = 0; o < piece.width; ++o) {
                const long y = lo + o;
                double v = 0.0;
                const double f = m.data.at(k, static_cast<std::size_t>(y));
                if (f != 0.0 && in_shell(g, m.ball, j, static_cast<int>(y), k)) v = f;
                v -= shell_sum[j][k] / denom;
                piece.values[static_cast<std::size_t>(k) * piece.width + o] = v;
            }
        push_piece(std::move(piece));
    }

    // beta_j = S_{j+1,k} (chi_{B_{j+1}}/|B_{j+1}| - chi_{B_{j+2}}/|B_{j+2}|), j < J
    for (int j = 1; j <= J - 1; ++j) {
        long lo1, hi1, lo2, hi2;
        ball_cells(j + 1, lo1, hi1);
        ball_cells(j + 2, lo2, hi2);
        const double d1 = static_cast<double>(hi1 - lo1 + 1) * g.h();
        const double d2 = static_cast<double>(hi2 - lo2 + 1) * g.h();
        TentAtom piece(g);
        piece.jlo = lo2;
        piece.width = hi2 - lo2 + 1;
        piece.q = m.q;
        piece.r = m.r;
        piece.ball = ball_j(j + 3);
        piece.values.assign(static_cast<std::size_t>(K) * piece.width, 0.0);
        for (int k = 0; k < K; ++k) {
            const double s = tent_sum[j + 1][k];
            if (s == 0.0) continue;
            for (long o = 0; o < piece.width; ++o) {
                const long y = lo2 + o;
                double v = -s / d2;
                if (y >= lo1 && y <= hi1) v += s / d1;
                piece.values[static_cast<std::size_t>(k) * piece.width + o] = v;
            }
        }
        push_piece(std::move(piece));
    }

    double acc = 0.0;
    for (double l : dec.coefficients) acc += std::pow(l, m.q);
    dec.coefficient_norm = std::pow(acc, 1.0 / m.q);
    return dec;
}

} // namespace tentlab
