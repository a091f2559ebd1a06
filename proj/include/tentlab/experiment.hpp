#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tentlab/grid.hpp"

namespace tentlab {

struct CorpusSpec {
    std::vector<std::string> families; // cycled over the item count
    std::uint64_t seed = 1;
    int count = 8;
};

struct CorpusItem {
    std::string id;
    std::string family;
    HalfSpaceFunction F;
};

// Deterministic corpus: tent-slab | atom | cancelling-atom | molecule |
// oscillatory | gaussian-power | random-atoms. Same spec + grid => bitwise
// identical data.
std::vector<CorpusItem> generate_corpus(const CorpusSpec& spec, const Grid& grid);

struct ExperimentConfig {
    GridSpec grid;
    std::string op_id = "identity"; // operator registry id
    double q = 2.0;
    double r = 2.0;
    bool weak = false; // weak-type: output measured in L^{q,inf}
    CorpusSpec corpus;
    int refinement_levels = 2; // h, h/2, ...
    double envelope = std::numeric_limits<double>::infinity();
    double drift_tolerance = 0.10;
    std::string out_path;
    std::string format = "json";
};

struct ItemResult {
    std::string id;
    std::string family;
    double ratio = 0.0;
    double input_norm = 0.0;
    double output_norm = 0.0;
    double grid_h = 0.0;
};

struct InequalityReport {
    ExperimentConfig config;
    std::vector<ItemResult> items; // base grid, canonical corpus order
    std::vector<std::string> skipped;
    double max_ratio = 0.0;
    std::vector<double> refinement_series; // max ratio at h, h/2, ...
    bool pass = false;
    double runtime_seconds = 0.0;
};

InequalityReport run_inequality_experiment(const ExperimentConfig& config);

// lift with slice-level memoization (exact-equality reuse); exact because
// identical slices map to identical outputs
HalfSpaceFunction lift_cached(const std::function<LineFunction(const LineFunction&, double)>& op,
                              const HalfSpaceFunction& F);

struct GrowthFit {
    std::vector<double> slopes; // per corpus item
    double max_slope = 0.0;
};

// Change-of-angle: least-squares slope of log tent_norm(F, q, 2, alpha)
// against log alpha.
GrowthFit fit_growth_exponent(const std::vector<CorpusItem>& corpus, double q,
                              const std::vector<double>& alphas);

// CSV or JSON; byte-stable given the same config (runtime excluded).
void emit_report(const InequalityReport& report, const std::string& format,
                 const std::string& path);

ExperimentConfig parse_experiment_config(const std::string& json_text);

} // namespace tentlab
