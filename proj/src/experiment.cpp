#include "tentlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "tentlab/atoms.hpp"
#include "tentlab/functionals.hpp"
#include "tentlab/operators.hpp"

namespace tentlab {

namespace {

using nlohmann::json;

// values +1/-1 about a cell-edge-aligned mirror axis cancel pairwise, so the
// slice integrals of odd-symmetrized items are exactly zero
double edge_aligned(const Grid& g, double c) {
    return g.x_coord(g.axis_index(c)) + 0.5 * g.h();
}

void fill_tent_indicator(HalfSpaceFunction& F, const Ball& b, bool odd) {
    const Grid& g = F.grid;
    for (int k = 0; k < g.levels(); ++k)
        for (int j = 0; j < g.axis_points(); ++j)
            if (in_tent(g, b, j, k))
                F.at(k, static_cast<std::size_t>(j)) =
                    odd ? (g.x_coord(j) > b.center ? 1.0 : -1.0) : 1.0;
}

HalfSpaceFunction make_molecule_data(const Grid& g, const Ball& b, double q, double r,
                                     double epsilon, bool odd) {
    HalfSpaceFunction F(g);
    const int J = std::max(1, molecule_shell_count(g, b));
    for (int shell = 1; shell <= J; ++shell) {
        // shell j occupies tent(2^{j+1}B) minus tent(2^j B); amplitude chosen
        // to saturate the allowed shell bound
        double mass = 0.0;
        for (int k = 0; k < g.levels(); ++k)
            for (int j = 0; j < g.axis_points(); ++j) {
                const Ball outer{b.center, std::ldexp(b.radius, shell + 1)};
                const Ball inner{b.center, std::ldexp(b.radius, shell)};
                if (in_tent(g, outer, j, k) && (shell == 1 || !in_tent(g, inner, j, k)))
                    mass += g.level_weight() * g.h();
            }
        if (mass == 0.0) continue;
        const double meas = ball_measure(1, std::ldexp(b.radius, shell + 1));
        const double bound = (shell == 1 ? 1.0 : std::pow(2.0, -(shell + 1) * epsilon)) *
                             std::pow(meas, 1.0 / r - 1.0 / q);
        const double amp = bound / std::pow(mass, 1.0 / r);
        for (int k = 0; k < g.levels(); ++k)
            for (int j = 0; j < g.axis_points(); ++j) {
                const Ball outer{b.center, std::ldexp(b.radius, shell + 1)};
                const Ball inner{b.center, std::ldexp(b.radius, shell)};
                if (in_tent(g, outer, j, k) && (shell == 1 || !in_tent(g, inner, j, k)))
                    F.at(k, static_cast<std::size_t>(j)) =
                        amp * (odd ? (g.x_coord(j) > b.center ? 1.0 : -1.0) : 1.0);
            }
    }
    return F;
}

} // namespace

std::vector<CorpusItem> generate_corpus(const CorpusSpec& spec, const Grid& grid) {
    if (spec.families.empty())
        throw std::invalid_argument("generate_corpus: no families configured");
    std::vector<CorpusItem> corpus;
    for (int i = 0; i < spec.count; ++i) {
        const std::string& family = spec.families[i % spec.families.size()];
        std::mt19937_64 rng(spec.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(i));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double c0 = -2.0 + 4.0 * unif(rng);
        const double rad = 0.75 + 1.25 * unif(rng);
        const double t0 = grid.t_level(0) * std::exp(0.2 + 0.8 * unif(rng));
        const double t1 = t0 * std::exp(0.4 + 0.6 * unif(rng));
        HalfSpaceFunction F(grid);
        if (family == "tent-slab") {
            F = synthesize_halfspace("indicator-tent-slab", {c0, rad, t0, t1}, grid);
        } else if (family == "atom") {
            fill_tent_indicator(F, {edge_aligned(grid, c0), rad}, false);
        } else if (family == "cancelling-atom") {
            fill_tent_indicator(F, {edge_aligned(grid, c0), rad}, true);
        } else if (family == "molecule") {
            // centered at 0 (a cell edge): outer shells may clip at the domain
            // boundary, and only a symmetric center keeps the clipping odd-safe
            F = make_molecule_data(grid, {0.0, 0.5 + 0.5 * unif(rng)}, 1.0, 2.0, 1.0, true);
        } else if (family == "oscillatory") {
            F = synthesize_halfspace("oscillatory", {2.0 + 6.0 * unif(rng), rad, c0}, grid);
        } else if (family == "gaussian-power") {
            const double sigma = 0.4 + 0.8 * unif(rng);
            const double beta = 0.5 + unif(rng);
            for (int k = 0; k < grid.levels(); ++k) {
                const double t = grid.t_level(k);
                if (t < t0 || t >= t1) continue;
                for (int j = 0; j < grid.axis_points(); ++j) {
                    const double d = grid.x_coord(j) - c0;
                    F.at(k, static_cast<std::size_t>(j)) =
                        std::pow(t, beta) * std::exp(-d * d / (2.0 * sigma * sigma));
                }
            }
        } else if (family == "random-atoms") {
            F = synthesize_halfspace("random-atom-combination",
                                     {static_cast<double>(1 + (i % 97)), 4.0}, grid);
        } else {
            throw std::invalid_argument("generate_corpus: unknown family '" + family + "'");
        }
        std::ostringstream id;
        id << "item-" << i << "-" << family;
        corpus.push_back({id.str(), family, std::move(F)});
    }
    return corpus;
}

HalfSpaceFunction lift_cached(const std::function<LineFunction(const LineFunction&, double)>& op,
                              const HalfSpaceFunction& F) {
    const Grid& g = F.grid;
    HalfSpaceFunction out(g);
    const std::size_t c = g.x_count();
    std::vector<int> computed; // levels already evaluated
    for (int k = 0; k < g.levels(); ++k) {
        const double* slice = F.values.data() + static_cast<std::size_t>(k) * c;
        if (std::all_of(slice, slice + c, [](double v) { return v == 0.0; })) continue;
        int reuse = -1;
        for (int prev : computed) {
            if (std::memcmp(F.values.data() + static_cast<std::size_t>(prev) * c,
                            F.values.data() + static_cast<std::size_t>(k) * c,
                            c * sizeof(double)) == 0) {
                reuse = prev;
                break;
            }
        }
        if (reuse >= 0) {
            std::copy_n(out.values.begin() + static_cast<std::ptrdiff_t>(reuse) * c, c,
                        out.values.begin() + static_cast<std::ptrdiff_t>(k) * c);
            continue;
        }
        try {
            out.set_slice(k, op(F.slice(k), g.t_level(k)));
        } catch (const std::exception& e) {
            throw std::runtime_error("lift: slice " + std::to_string(k) + ": " + e.what());
        }
        computed.push_back(k);
    }
    return out;
}

namespace {

// t-indexed operator families make slice reuse unsound; memoize only for
// t-independent operators
bool op_is_t_indexed(const std::string& id) { return id.rfind("heat", 0) == 0 && id != "heat_direct"; }

double max_ratio_on_grid(const ExperimentConfig& cfg, const Grid& grid,
                         std::vector<ItemResult>* items, std::vector<std::string>* skipped) {
    const auto op = lookup_operator(cfg.op_id);
    const std::vector<CorpusItem> corpus = generate_corpus(cfg.corpus, grid);
    double worst = 0.0;
    for (const CorpusItem& item : corpus) {
        const double in = tent_norm(item.F, cfg.q, cfg.r);
        if (in == 0.0) {
            if (skipped) skipped->push_back(item.id);
            continue;
        }
        const HalfSpaceFunction G = op_is_t_indexed(cfg.op_id)
                                        ? lift(op, item.F)
                                        : lift_cached(op, item.F);
        const double outn =
            cfg.weak ? weak_tent_norm(G, cfg.q, cfg.r) : tent_norm(G, cfg.q, cfg.r);
        const double ratio = outn / in;
        if (!std::isfinite(ratio))
            throw std::runtime_error("experiment: non-finite ratio on " + item.id);
        if (items) items->push_back({item.id, item.family, ratio, in, outn, grid.h()});
        worst = std::max(worst, ratio);
    }
    return worst;
}

} // namespace

InequalityReport run_inequality_experiment(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    InequalityReport rep;
    rep.config = config;
    GridSpec gs = config.grid;
    for (int level = 0; level < std::max(1, config.refinement_levels); ++level) {
        const Grid grid(gs);
        const double worst = max_ratio_on_grid(config, grid, level == 0 ? &rep.items : nullptr,
                                               level == 0 ? &rep.skipped : nullptr);
        rep.refinement_series.push_back(worst);
        gs.h /= 2.0;
    }
    rep.max_ratio = rep.refinement_series.front();
    bool stable = true;
    for (std::size_t i = 1; i < rep.refinement_series.size(); ++i) {
        const double a = rep.refinement_series[i - 1], b = rep.refinement_series[i];
        if (a > 0 && std::abs(b / a - 1.0) > config.drift_tolerance) stable = false;
    }
    rep.pass = stable && rep.max_ratio <= config.envelope;
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

GrowthFit fit_growth_exponent(const std::vector<CorpusItem>& corpus, double q,
                              const std::vector<double>& alphas) {
    if (alphas.size() < 3)
        throw std::invalid_argument("fit_growth_exponent: need at least 3 apertures");
    GrowthFit fit;
    for (const CorpusItem& item : corpus) {
        std::vector<std::pair<double, double>> pts;
        for (double a : alphas) {
            const double norm = tent_norm(item.F, q, 2.0, a);
            if (norm > 0) pts.emplace_back(std::log(a), std::log(norm));
        }
        if (pts.size() < 3) continue;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(pts.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        fit.slopes.push_back(slope);
        fit.max_slope = std::max(fit.max_slope, slope);
    }
    if (fit.slopes.empty())
        throw std::invalid_argument("fit_growth_exponent: no usable corpus items");
    return fit;
}

namespace {

json config_json(const ExperimentConfig& c) {
    return json{{"grid",
                 {{"n", c.grid.n},
                  {"X", c.grid.X},
                  {"h", c.grid.h},
                  {"t_min", c.grid.t_min},
                  {"m", c.grid.m},
                  {"K", c.grid.K}}},
                {"op", c.op_id},
                {"q", c.q},
                {"r", c.r},
                {"weak", c.weak},
                {"corpus",
                 {{"families", c.corpus.families}, {"seed", c.corpus.seed}, {"count", c.corpus.count}}},
                {"refinement_levels", c.refinement_levels},
                {"envelope", c.envelope == std::numeric_limits<double>::infinity()
                                 ? json()
                                 : json(c.envelope)},
                {"drift_tolerance", c.drift_tolerance},
                {"format", c.format}};
}

} // namespace

void emit_report(const InequalityReport& report, const std::string& format,
                 const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot open '" + path + "'");
    if (format == "csv") {
        out << "item_id,family,ratio,input_norm,output_norm,grid_h\n";
        out.precision(17);
        for (const ItemResult& it : report.items)
            out << it.id << ',' << it.family << ',' << it.ratio << ',' << it.input_norm << ','
                << it.output_norm << ',' << it.grid_h << '\n';
    } else if (format == "json") {
        json j;
        j["config"] = config_json(report.config);
        j["items"] = json::array();
        for (const ItemResult& it : report.items)
            j["items"].push_back({{"item_id", it.id},
                                  {"family", it.family},
                                  {"ratio", it.ratio},
                                  {"input_norm", it.input_norm},
                                  {"output_norm", it.output_norm},
                                  {"grid_h", it.grid_h}});
        j["skipped"] = report.skipped;
        j["max_ratio"] = report.max_ratio;
        j["refinement_series"] = report.refinement_series;
        j["pass"] = report.pass;
        out << j.dump(2) << '\n';
    } else {
        throw std::invalid_argument("emit_report: unknown format '" + format + "'");
    }
    if (!out) throw std::runtime_error("emit_report: write failure on '" + path + "'");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    ExperimentConfig c;
    if (j.contains("grid")) {
        const json& g = j["grid"];
        c.grid.n = g.value("n", c.grid.n);
        c.grid.X = g.value("X", c.grid.X);
        c.grid.h = g.value("h", c.grid.h);
        c.grid.t_min = g.value("t_min", c.grid.t_min);
        c.grid.m = g.value("m", c.grid.m);
        c.grid.K = g.value("K", c.grid.K);
    }
    c.op_id = j.value("op", c.op_id);
    c.q = j.value("q", c.q);
    c.r = j.value("r", c.r);
    c.weak = j.value("weak", c.weak);
    if (j.contains("corpus")) {
        const json& cj = j["corpus"];
        if (cj.contains("families"))
            c.corpus.families = cj["families"].get<std::vector<std::string>>();
        c.corpus.seed = cj.value("seed", c.corpus.seed);
        c.corpus.count = cj.value("count", c.corpus.count);
    }
    if (c.corpus.families.empty())
        c.corpus.families = {"tent-slab", "atom", "cancelling-atom", "gaussian-power",
                             "oscillatory", "random-atoms"};
    c.refinement_levels = j.value("refinement_levels", c.refinement_levels);
    if (j.contains("envelope") && !j["envelope"].is_null())
        c.envelope = j["envelope"].get<double>();
    c.drift_tolerance = j.value("drift_tolerance", c.drift_tolerance);
    c.out_path = j.value("out", c.out_path);
    c.format = j.value("format", c.format);
    return c;
}

} // namespace tentlab
