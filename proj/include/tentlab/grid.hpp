#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tentlab {

// Discretization of R^n x (0,inf): cell-centered uniform x-lattice on
// [-X,X]^n with spacing h, geometric t-levels t_k = t_min * e^(k/m).
// The dt/t quadrature weight of every level is exactly 1/m.
struct GridSpec {
    int n = 1;          // dimension, 1 or 2
    double X = 4.0;     // half-width of the x-domain
    double h = 0.25;    // x-spacing; 2X/h must be an even integer
    double t_min = 0.25;
    int m = 4;          // t-levels per e-fold
    int K = 8;          // total t-level count, K >= m
};

class Grid {
public:
    explicit Grid(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    int n() const { return spec_.n; }
    double h() const { return spec_.h; }
    double X() const { return spec_.X; }
    int levels() const { return spec_.K; }
    // points per axis
    int axis_points() const { return nx_; }
    // total x-lattice points (nx in 1D, nx^2 in 2D)
    std::size_t x_count() const { return count_; }
    double cell_measure() const; // h^n

    double x_coord(int j) const { return (j + 0.5) * spec_.h - spec_.X; }
    double t_level(int k) const { return t_[k]; }
    double level_weight() const { return 1.0 / spec_.m; }

    // nearest lattice index along an axis (may fall outside [0, nx))
    int axis_index(double x) const;
    bool index_in_domain(int j) const { return j >= 0 && j < nx_; }

    bool operator==(const Grid& o) const;

private:
    GridSpec spec_;
    int nx_;
    std::size_t count_;
    std::vector<double> t_;
};

Grid build_grid(const GridSpec& spec);

struct Ball {
    double center = 0.0;
    double radius = 0.0;
};

// continuum measure V_n * radius^n (V_1 = 2, V_2 = pi)
double ball_measure(int n, double radius);

// f(x) sampled at cell centers, zero-extended outside [-X,X]^n.
// 2D storage is row-major: index = j0 * nx + j1.
struct LineFunction {
    Grid grid;
    std::vector<double> values;
    // complex payloads (interleaved re,im) occur only through the codec;
    // numerical operators require real data
    bool complex_values = false;

    explicit LineFunction(const Grid& g)
        : grid(g), values(g.x_count(), 0.0) {}
    LineFunction(const Grid& g, std::vector<double> v);

    double& at(int j) { return values[static_cast<std::size_t>(j)]; }
    double at(int j) const { return values[static_cast<std::size_t>(j)]; }
    double& at(int j0, int j1);
    double at(int j0, int j1) const;
};

// F(x,t) sampled on the lattice, t-level-major.
struct HalfSpaceFunction {
    Grid grid;
    std::vector<double> values; // size K * x_count
    bool complex_values = false;

    explicit HalfSpaceFunction(const Grid& g)
        : grid(g), values(static_cast<std::size_t>(g.levels()) * g.x_count(), 0.0) {}

    double& at(int k, std::size_t j) { return values[static_cast<std::size_t>(k) * grid.x_count() + j]; }
    double at(int k, std::size_t j) const { return values[static_cast<std::size_t>(k) * grid.x_count() + j]; }
    // view of one t-slice as a LineFunction
    LineFunction slice(int k) const;
    void set_slice(int k, const LineFunction& f);
};

// Largest integer s with s*h < t: the half-width of the centered lattice
// window {i : |x_i - x_j| < t} about any lattice site. Ties (t an exact
// multiple of h) are excluded, matching the strict ball membership below.
long ball_half_width(const Grid& g, double t);

// Number of lattice sites of the (infinite) lattice strictly inside B(x,t).
// The lattice pattern extends beyond the domain; values there are zero.
long ball_lattice_count(const Grid& g, double x, double t);
long ball_lattice_count_2d(const Grid& g, double x0, double x1, double t);

// (mean of |f|^r over lattice points with |x_j - x| < t)^(1/r), strict
// membership, zero extension outside the domain. Throws on an empty ball.
double ball_average(const LineFunction& f, double x, double t, double r);
double ball_average_2d(const LineFunction& f, double x0, double x1, double t, double r);

// Prefix-sum accelerated ball averages of |f|^r at a fixed exponent (1D).
class BallAverager {
public:
    BallAverager(const LineFunction& f, double r);
    // average over lattice sites in (x - t, x + t); O(1) per query
    double average(double x, double t) const;
    // average over the inclusive index window [lo, hi] on the infinite
    // lattice (indices outside the domain contribute zero)
    double window_average(long lo, long hi) const;
    double window_sum(long lo, long hi) const; // sum of |f|^r h^n, clipped
    const Grid& grid() const { return grid_; }

private:
    Grid grid_;
    double r_;
    std::vector<double> prefix_; // prefix_[j] = sum_{i<j} |f_i|^r
};

// Named deterministic test-function families.
LineFunction synthesize_line(const std::string& family,
                             const std::vector<double>& params, const Grid& g);
HalfSpaceFunction synthesize_halfspace(const std::string& family,
                                       const std::vector<double>& params,
                                       const Grid& g);

// HSF1 codec: ASCII magic line, one-line JSON header, little-endian f64 payload.
void save_hsf(const std::string& path, const LineFunction& f);
void save_hsf(const std::string& path, const HalfSpaceFunction& f);
bool hsf_is_halfspace(const std::string& path);
LineFunction load_hsf_line(const std::string& path);
HalfSpaceFunction load_hsf_halfspace(const std::string& path);

} // namespace tentlab
