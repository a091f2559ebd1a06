#include "tentlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tentlab {

namespace {

long round_to_long(double v) { return static_cast<long>(std::llround(v)); }

} // namespace

Grid::Grid(const GridSpec& spec) : spec_(spec) {
    if (spec.n != 1 && spec.n != 2)
        throw std::invalid_argument("grid: dimension must be 1 or 2");
    if (spec.h <= 0 || spec.t_min <= 0 || spec.X <= 0)
        throw std::invalid_argument("grid: X, h, t_min must be positive");
    if (spec.m <= 0) throw std::invalid_argument("grid: m must be positive");
    if (spec.K < spec.m)
        throw std::invalid_argument("grid: K must be at least m (one full e-fold)");
    const double ratio = 2.0 * spec.X / spec.h;
    const long nx = round_to_long(ratio);
    if (std::abs(ratio - static_cast<double>(nx)) > 1e-9 * ratio || nx <= 0 || nx % 2 != 0)
        throw std::invalid_argument("grid: 2X/h must be an even positive integer");
    nx_ = static_cast<int>(nx);
    count_ = static_cast<std::size_t>(nx_);
    if (spec.n == 2) count_ *= static_cast<std::size_t>(nx_);
    t_.resize(spec.K);
    for (int k = 0; k < spec.K; ++k)
        t_[k] = spec.t_min * std::exp(static_cast<double>(k) / spec.m);
}

double Grid::cell_measure() const {
    return spec_.n == 1 ? spec_.h : spec_.h * spec_.h;
}

int Grid::axis_index(double x) const {
    // inverse of x_coord: j = (x + X)/h - 1/2, rounded to nearest site
    return static_cast<int>(std::lround((x + spec_.X) / spec_.h - 0.5));
}

bool Grid::operator==(const Grid& o) const {
    return spec_.n == o.spec_.n && spec_.X == o.spec_.X && spec_.h == o.spec_.h &&
           spec_.t_min == o.spec_.t_min && spec_.m == o.spec_.m && spec_.K == o.spec_.K;
}

Grid build_grid(const GridSpec& spec) { return Grid(spec); }

double ball_measure(int n, double radius) {
    if (radius <= 0) throw std::invalid_argument("ball_measure: radius must be positive");
    return n == 1 ? 2.0 * radius : M_PI * radius * radius;
}

LineFunction::LineFunction(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != g.x_count())
        throw std::invalid_argument("LineFunction: value count does not match grid");
}

double& LineFunction::at(int j0, int j1) {
    return values[static_cast<std::size_t>(j0) * grid.axis_points() + j1];
}
double LineFunction::at(int j0, int j1) const {
    return values[static_cast<std::size_t>(j0) * grid.axis_points() + j1];
}

LineFunction HalfSpaceFunction::slice(int k) const {
    LineFunction f(grid);
    const std::size_t c = grid.x_count();
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(k) * c, c, f.values.begin());
    return f;
}

void HalfSpaceFunction::set_slice(int k, const LineFunction& f) {
    const std::size_t c = grid.x_count();
    std::copy_n(f.values.begin(), c, values.begin() + static_cast<std::ptrdiff_t>(k) * c);
}

// Index window of lattice sites with |x_j - x| < t:
// x_j = (j+1/2)h - X, so j in ((x - t + X)/h - 1/2, (x + t + X)/h - 1/2).
static void ball_index_window(const Grid& g, double x, double t, long& lo, long& hi) {
    const double a = (x - t + g.X()) / g.h() - 0.5;
    const double b = (x + t + g.X()) / g.h() - 0.5;
    lo = static_cast<long>(std::floor(a)) + 1;
    if (static_cast<double>(lo) <= a) ++lo; // strict inequality
    hi = static_cast<long>(std::ceil(b)) - 1;
    if (static_cast<double>(hi) >= b) --hi;
}

long ball_half_width(const Grid& g, double t) {
    // centered at a lattice site the window is [-s, s] with b = t/h
    const double b = t / g.h();
    long hi = static_cast<long>(std::ceil(b)) - 1;
    if (static_cast<double>(hi) >= b) --hi;
    return hi;
}

long ball_lattice_count(const Grid& g, double x, double t) {
    long lo, hi;
    ball_index_window(g, x, t, lo, hi);
    return hi >= lo ? hi - lo + 1 : 0;
}

long ball_lattice_count_2d(const Grid& g, double x0, double x1, double t) {
    long lo0, hi0;
    ball_index_window(g, x0, t, lo0, hi0);
    long count = 0;
    for (long j0 = lo0; j0 <= hi0; ++j0) {
        const double dx = g.x_coord(static_cast<int>(j0)) - x0;
        const double rem2 = t * t - dx * dx;
        if (rem2 <= 0) continue;
        count += ball_lattice_count(g, x1, std::sqrt(rem2));
    }
    return count;
}

double ball_average(const LineFunction& f, double x, double t, double r) {
    if (f.complex_values) throw std::invalid_argument("ball_average: complex data unsupported");
    if (t <= 0) throw std::invalid_argument("ball_average: t must be positive");
    if (r < 1) throw std::invalid_argument("ball_average: r must be >= 1");
    const Grid& g = f.grid;
    if (g.n() != 1) throw std::invalid_argument("ball_average: use ball_average_2d for n=2");
    long lo, hi;
    ball_index_window(g, x, t, lo, hi);
    if (hi < lo) throw std::invalid_argument("ball_average: empty discrete ball");
    const long count = hi - lo + 1;
    const long dlo = std::max(lo, 0L);
    const long dhi = std::min(hi, static_cast<long>(g.axis_points()) - 1);
    double s = 0.0;
    for (long j = dlo; j <= dhi; ++j) s += std::pow(std::abs(f.at(static_cast<int>(j))), r);
    return std::pow(s / static_cast<double>(count), 1.0 / r);
}

double ball_average_2d(const LineFunction& f, double x0, double x1, double t, double r) {
    if (t <= 0) throw std::invalid_argument("ball_average: t must be positive");
    if (r < 1) throw std::invalid_argument("ball_average: r must be >= 1");
    const Grid& g = f.grid;
    if (g.n() != 2) throw std::invalid_argument("ball_average_2d: grid is not 2D");
    long lo0, hi0;
    ball_index_window(g, x0, t, lo0, hi0);
    double s = 0.0;
    long count = 0;
    const int nx = g.axis_points();
    for (long j0 = lo0; j0 <= hi0; ++j0) {
        const double dx = g.x_coord(static_cast<int>(j0)) - x0;
        const double rem2 = t * t - dx * dx;
        if (rem2 <= 0) continue;
        long lo1, hi1;
        ball_index_window(g, x1, std::sqrt(rem2), lo1, hi1);
        if (hi1 < lo1) continue;
        count += hi1 - lo1 + 1;
        if (j0 < 0 || j0 >= nx) continue;
        const long dlo = std::max(lo1, 0L);
        const long dhi = std::min(hi1, static_cast<long>(nx) - 1);
        for (long j1 = dlo; j1 <= dhi; ++j1)
            s += std::pow(std::abs(f.at(static_cast<int>(j0), static_cast<int>(j1))), r);
    }
    if (count == 0) throw std::invalid_argument("ball_average: empty discrete ball");
    return std::pow(s / static_cast<double>(count), 1.0 / r);
}

BallAverager::BallAverager(const LineFunction& f, double r) : grid_(f.grid), r_(r) {
    if (grid_.n() != 1) throw std::invalid_argument("BallAverager: 1D only");
    if (r < 1) throw std::invalid_argument("BallAverager: r must be >= 1");
    const std::size_t n = f.values.size();
    prefix_.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        prefix_[j + 1] = prefix_[j] + std::pow(std::abs(f.values[j]), r);
}

double BallAverager::window_sum(long lo, long hi) const {
    const long n = grid_.axis_points();
    lo = std::max(lo, 0L);
    hi = std::min(hi, n - 1);
    if (hi < lo) return 0.0;
    return (prefix_[static_cast<std::size_t>(hi) + 1] - prefix_[static_cast<std::size_t>(lo)]) *
           grid_.cell_measure();
}

double BallAverager::window_average(long lo, long hi) const {
    if (hi < lo) throw std::invalid_argument("BallAverager: empty window");
    const double s = window_sum(lo, hi);
    return std::pow(s / (static_cast<double>(hi - lo + 1) * grid_.cell_measure()), 1.0 / r_);
}

double BallAverager::average(double x, double t) const {
    long lo, hi;
    ball_index_window(grid_, x, t, lo, hi);
    if (hi < lo) throw std::invalid_argument("ball_average: empty discrete ball");
    return window_average(lo, hi);
}

// ---------------------------------------------------------------------------
// Synthesis families

namespace {

double bump(double u) {
    // smooth bump supported in (-1,1)
    const double s = 1.0 - u * u;
    return s > 0 ? std::exp(1.0 - 1.0 / s) : 0.0;
}

double radial(const Grid& g, std::size_t idx, double c0, double c1) {
    if (g.n() == 1) return std::abs(g.x_coord(static_cast<int>(idx)) - c0);
    const int nx = g.axis_points();
    const double d0 = g.x_coord(static_cast<int>(idx / nx)) - c0;
    const double d1 = g.x_coord(static_cast<int>(idx % nx)) - c1;
    return std::hypot(d0, d1);
}

} // namespace

LineFunction synthesize_line(const std::string& family, const std::vector<double>& params,
                             const Grid& g) {
    LineFunction f(g);
    auto p = [&](std::size_t i, double dflt) { return i < params.size() ? params[i] : dflt; };
    if (family == "indicator-ball") {
        const double c = p(0, 0.0), rad = p(1, 1.0);
        for (std::size_t j = 0; j < f.values.size(); ++j)
            f.values[j] = radial(g, j, c, c) < rad ? 1.0 : 0.0;
    } else if (family == "gaussian-bump") {
        const double sigma = p(0, 1.0), c = p(1, 0.0);
        for (std::size_t j = 0; j < f.values.size(); ++j) {
            const double d = radial(g, j, c, c);
            f.values[j] = std::exp(-d * d / (2.0 * sigma * sigma));
        }
    } else if (family == "oscillatory") {
        // cos(k x) * bump(x / w)
        const double k = p(0, 1.0), w = p(1, 1.0), c = p(2, 0.0);
        for (std::size_t j = 0; j < f.values.size(); ++j) {
            const double d = radial(g, j, c, c);
            const double x = g.n() == 1 ? g.x_coord(static_cast<int>(j)) - c : d;
            f.values[j] = std::cos(k * x) * bump(d / w);
        }
    } else if (family == "random-log-bounded") {
        // w = exp(u) with u iid uniform in [-1,1]: log w bounded by 1
        std::mt19937_64 rng(static_cast<std::uint64_t>(p(0, 1.0)));
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (std::size_t j = 0; j < f.values.size(); ++j) f.values[j] = std::exp(unif(rng));
    } else {
        throw std::invalid_argument("synthesize_line: unknown family '" + family + "'");
    }
    return f;
}

HalfSpaceFunction synthesize_halfspace(const std::string& family,
                                       const std::vector<double>& params, const Grid& g) {
    HalfSpaceFunction F(g);
    auto p = [&](std::size_t i, double dflt) { return i < params.size() ? params[i] : dflt; };
    const std::size_t xc = g.x_count();
    if (family == "indicator-tent-slab") {
        // chi_{B(c,rad) x [t0, t1)}
        const double c = p(0, 0.0), rad = p(1, 1.0), t0 = p(2, 1.0), t1 = p(3, 2.0);
        for (int k = 0; k < g.levels(); ++k) {
            const double t = g.t_level(k);
            if (t < t0 || t >= t1) continue;
            for (std::size_t j = 0; j < xc; ++j)
                if (radial(g, j, c, c) < rad) F.at(k, j) = 1.0;
        }
    } else if (family == "gaussian-bump") {
        // Gaussian in x, constant across the t-range [t0, t1)
        const double sigma = p(0, 1.0), c = p(1, 0.0), t0 = p(2, 0.0), t1 = p(3, 1e300);
        for (int k = 0; k < g.levels(); ++k) {
            const double t = g.t_level(k);
            if (t < t0 || t >= t1) continue;
            for (std::size_t j = 0; j < xc; ++j) {
                const double d = radial(g, j, c, c);
                F.at(k, j) = std::exp(-d * d / (2.0 * sigma * sigma));
            }
        }
    } else if (family == "oscillatory") {
        const double kfreq = p(0, 1.0), w = p(1, 1.0), c = p(2, 0.0);
        for (int k = 0; k < g.levels(); ++k)
            for (std::size_t j = 0; j < xc; ++j) {
                const double d = radial(g, j, c, c);
                const double x = g.n() == 1 ? g.x_coord(static_cast<int>(j)) - c : d;
                F.at(k, j) = std::cos(kfreq * x) * bump(d / w) / (1.0 + g.t_level(k));
            }
    } else if (family == "power-profile") {
        // t^beta * bump(x/w), t limited to [t0, t1)
        const double beta = p(0, 1.0), w = p(1, 1.0), t0 = p(2, 0.0), t1 = p(3, 1e300);
        for (int k = 0; k < g.levels(); ++k) {
            const double t = g.t_level(k);
            if (t < t0 || t >= t1) continue;
            for (std::size_t j = 0; j < xc; ++j)
                F.at(k, j) = std::pow(t, beta) * bump(radial(g, j, 0, 0) / w);
        }
    } else if (family == "random-atom-combination") {
        const std::uint64_t seed = static_cast<std::uint64_t>(p(0, 1.0));
        const int count = static_cast<int>(p(1, 4.0));
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double margin = g.t_level(g.levels() - 1);
        const double span = std::max(g.X() - margin, g.X() * 0.25);
        for (int a = 0; a < count; ++a) {
            const double c = (2.0 * unif(rng) - 1.0) * span * 0.5;
            const double rad = 0.5 + 1.5 * unif(rng);
            const double amp = 2.0 * unif(rng) - 1.0;
            // support inside the tent over B(c, rad): t <= dist(x, complement)
            for (int k = 0; k < g.levels(); ++k) {
                const double t = g.t_level(k);
                if (t > rad) continue;
                for (std::size_t j = 0; j < xc; ++j)
                    if (radial(g, j, c, c) < rad - t) F.at(k, j) += amp;
            }
        }
    } else {
        throw std::invalid_argument("synthesize_halfspace: unknown family '" + family + "'");
    }
    return F;
}

// ---------------------------------------------------------------------------
// HSF1 codec

namespace {

nlohmann::json grid_header(const Grid& g, const char* kind, bool complex_values) {
    const GridSpec& s = g.spec();
    return nlohmann::json{{"n", s.n},         {"X", s.X}, {"h", s.h},
                          {"t_min", s.t_min}, {"m", s.m}, {"K", s.K},
                          {"kind", kind},     {"complex", complex_values}};
}

void write_hsf(const std::string& path, const nlohmann::json& header,
               const std::vector<double>& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("hsf: cannot open '" + path + "' for writing");
    out << "HSF1\n" << header.dump() << "\n";
    static_assert(sizeof(double) == 8);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(double)));
    if (!out) throw std::runtime_error("hsf: write failure on '" + path + "'");
}

struct HsfFile {
    GridSpec spec;
    bool halfspace = false;
    bool complex_values = false;
    std::vector<double> payload;
};

HsfFile read_hsf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("hsf: cannot open '" + path + "'");
    std::string magic;
    std::getline(in, magic);
    if (magic != "HSF1") throw std::runtime_error("hsf: bad magic string");
    std::string header_line;
    std::getline(in, header_line);
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_line);
    } catch (const nlohmann::json::exception&) {
        throw std::runtime_error("hsf: corrupt header");
    }
    HsfFile file;
    try {
        file.spec.n = header.at("n").get<int>();
        file.spec.X = header.at("X").get<double>();
        file.spec.h = header.at("h").get<double>();
        file.spec.t_min = header.at("t_min").get<double>();
        file.spec.m = header.at("m").get<int>();
        file.spec.K = header.at("K").get<int>();
        const std::string kind = header.at("kind").get<std::string>();
        if (kind == "halfspace") file.halfspace = true;
        else if (kind != "line") throw std::runtime_error("hsf: corrupt header");
        file.complex_values = header.at("complex").get<bool>();
    } catch (const nlohmann::json::exception&) {
        throw std::runtime_error("hsf: corrupt header");
    }
    Grid g(file.spec);
    std::size_t count = g.x_count();
    if (file.halfspace) count *= static_cast<std::size_t>(g.levels());
    if (file.complex_values) count *= 2;
    file.payload.resize(count);
    in.read(reinterpret_cast<char*>(file.payload.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
        throw std::runtime_error("hsf: payload length mismatch");
    char extra;
    if (in.read(&extra, 1)) throw std::runtime_error("hsf: payload length mismatch");
    return file;
}

} // namespace

void save_hsf(const std::string& path, const LineFunction& f) {
    write_hsf(path, grid_header(f.grid, "line", f.complex_values), f.values);
}

void save_hsf(const std::string& path, const HalfSpaceFunction& f) {
    write_hsf(path, grid_header(f.grid, "halfspace", f.complex_values), f.values);
}

bool hsf_is_halfspace(const std::string& path) { return read_hsf(path).halfspace; }

LineFunction load_hsf_line(const std::string& path) {
    HsfFile file = read_hsf(path);
    if (file.halfspace) throw std::runtime_error("hsf: expected a line function");
    Grid g(file.spec);
    LineFunction f(g);
    f.complex_values = file.complex_values;
    f.values = std::move(file.payload);
    return f;
}

HalfSpaceFunction load_hsf_halfspace(const std::string& path) {
    HsfFile file = read_hsf(path);
    if (!file.halfspace) throw std::runtime_error("hsf: expected a half-space function");
    Grid g(file.spec);
    HalfSpaceFunction f(g);
    f.complex_values = file.complex_values;
    f.values = std::move(file.payload);
    return f;
}

} // namespace tentlab
