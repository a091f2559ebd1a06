// Benchmark: parallel/prefix-sum kernels against the serial reference
// implementations, with a max-abs-difference agreement check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "tentlab/functionals.hpp"
#include "tentlab/grid.hpp"
#include "tentlab/operators.hpp"

using namespace tentlab;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

int main() {
    GridSpec gs;
    gs.n = 1;
    gs.X = 16.0;
    gs.h = 1.0 / 64.0;
    gs.t_min = 0.25;
    gs.m = 8;
    gs.K = 24;
    const Grid grid(gs);

    const HalfSpaceFunction F =
        synthesize_halfspace("random-atom-combination", {7.0, 6.0}, grid);
    const LineFunction f = synthesize_line("gaussian-bump", {1.5, 0.5}, grid);

    std::printf("%-22s %12s %12s %8s %10s\n", "kernel", "parallel(s)", "serial(s)",
                "speedup", "max-diff");

    {
        LineFunction a(grid), b(grid);
        const double tp = seconds([&] { a = conical(F, 2.0); }, 3);
        const double ts = seconds([&] { b = serial::conical(F, 2.0); }, 1);
        std::printf("%-22s %12.4f %12.4f %8.2f %10.2e\n", "conical r=2", tp, ts, ts / tp,
                    max_diff(a.values, b.values));
    }
    {
        LineFunction a(grid), b(grid);
        const double tp = seconds([&] { a = maximal(f, MaximalMode::Centered); }, 3);
        const double ts = seconds([&] { b = serial::maximal_centered(f); }, 1);
        std::printf("%-22s %12.4f %12.4f %8.2f %10.2e\n", "maximal centered", tp, ts,
                    ts / tp, max_diff(a.values, b.values));
    }
    {
        LineFunction a(grid), b(grid);
        const double tp =
            seconds([&] { a = riesz_potential(f, 0.5, QuadratureMethod::Direct); }, 3);
        const double ts = seconds([&] { b = serial::riesz_potential_direct(f, 0.5); }, 1);
        std::printf("%-22s %12.4f %12.4f %8.2f %10.2e\n", "riesz direct a=0.5", tp, ts,
                    ts / tp, max_diff(a.values, b.values));
    }
    return 0;
}
