#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tentlab/atoms.hpp"
#include "tentlab/cz.hpp"
#include "tentlab/experiment.hpp"
#include "tentlab/functionals.hpp"
#include "tentlab/grid.hpp"
#include "tentlab/operators.hpp"
#include "tentlab/slice.hpp"
#include "tentlab/weights.hpp"

namespace {

using nlohmann::json;
using namespace tentlab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitEnvelope = 2;

GridSpec parse_grid_flag(const std::string& s) {
    GridSpec g;
    if (s.empty()) return g;
    std::vector<double> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    if (v.size() != 6) throw CLI::ValidationError("--grid", "expected n,X,h,tmin,m,K");
    g.n = static_cast<int>(v[0]);
    g.X = v[1];
    g.h = v[2];
    g.t_min = v[3];
    g.m = static_cast<int>(v[4]);
    g.K = static_cast<int>(v[5]);
    return g;
}

// input is either an HSF1 file path or "synth:family:p1,p2,..."
HalfSpaceFunction load_halfspace_input(const std::string& input, const Grid& grid) {
    if (input.rfind("synth:", 0) == 0) {
        const std::string rest = input.substr(6);
        const auto colon = rest.find(':');
        const std::string family = rest.substr(0, colon);
        std::vector<double> params;
        if (colon != std::string::npos) {
            std::stringstream ss(rest.substr(colon + 1));
            std::string tok;
            while (std::getline(ss, tok, ',')) params.push_back(std::stod(tok));
        }
        return synthesize_halfspace(family, params, grid);
    }
    return load_hsf_halfspace(input);
}

LineFunction load_line_input(const std::string& input, const Grid& grid) {
    if (input.rfind("synth:", 0) == 0) {
        const std::string rest = input.substr(6);
        const auto colon = rest.find(':');
        const std::string family = rest.substr(0, colon);
        std::vector<double> params;
        if (colon != std::string::npos) {
            std::stringstream ss(rest.substr(colon + 1));
            std::string tok;
            while (std::getline(ss, tok, ',')) params.push_back(std::stod(tok));
        }
        return synthesize_line(family, params, grid);
    }
    return load_hsf_line(input);
}

void write_result(const json& j, const std::string& out, const std::string& format) {
    std::string text;
    if (format == "csv") {
        std::ostringstream csv;
        std::vector<std::string> keys;
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!it.value().is_structured()) keys.push_back(it.key());
        for (std::size_t i = 0; i < keys.size(); ++i) csv << keys[i] << (i + 1 < keys.size() ? "," : "\n");
        csv.precision(17);
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const json& v = j.at(keys[i]);
            if (v.is_number())
                csv << v.get<double>();
            else
                csv << v.dump();
            csv << (i + 1 < keys.size() ? "," : "\n");
        }
        text = csv.str();
    } else {
        text = j.dump(2) + "\n";
    }
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot open output '" + out + "'");
        f << text;
    }
}

Weight named_weight(const std::string& id, const Grid& grid, std::uint64_t seed) {
    if (id == "one") {
        LineFunction w(grid);
        std::fill(w.values.begin(), w.values.end(), 1.0);
        return Weight(std::move(w));
    }
    if (id.rfind("abs:", 0) == 0) return power_weight(std::stod(id.substr(4)), grid);
    if (id == "random") {
        LineFunction w = synthesize_line("random-log-bounded", {static_cast<double>(seed)}, grid);
        return Weight(std::move(w));
    }
    throw std::invalid_argument("unknown weight '" + id + "' (one | abs:a | random)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tent-space laboratory: norms, operators, decompositions, experiments"};
    app.require_subcommand(1);
    app.fallthrough(true); // allow the global flags after the subcommand

    std::string grid_flag, out_path, format = "json";
    std::uint64_t seed = 1;
    app.add_option("--grid", grid_flag, "grid as n,X,h,tmin,m,K");
    app.add_option("--seed", seed, "rng seed");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    // norm
    auto* norm_cmd = app.add_subcommand("norm", "tent / weak-tent norm of a half-space function");
    std::string norm_input;
    double nq = 2, nr = 2, nalpha = 1;
    bool nweak = false;
    norm_cmd->add_option("input", norm_input, "HSF1 file or synth:family:params")->required();
    norm_cmd->add_option("--q", nq);
    norm_cmd->add_option("--r", nr);
    norm_cmd->add_option("--alpha", nalpha);
    norm_cmd->add_flag("--weak", nweak);

    // apply
    auto* apply_cmd = app.add_subcommand("apply", "lift an operator over a half-space function");
    std::string ap_input, ap_op = "identity";
    apply_cmd->add_option("input", ap_input)->required();
    apply_cmd->add_option("--op", ap_op, "operator id (identity, maximal, hilbert, riesz:a, ...)");

    // decompose
    auto* dec_cmd = app.add_subcommand("decompose", "atomic decomposition");
    std::string dec_input;
    double dq = 1, dr = 2;
    dec_cmd->add_option("input", dec_input)->required();
    dec_cmd->add_option("--q", dq);
    dec_cmd->add_option("--r", dr);

    // czd
    auto* czd_cmd = app.add_subcommand("czd", "Calderon-Zygmund split of a half-space function");
    std::string czd_input;
    double cz_lambda = 1.0, cz_r = 2.0;
    czd_cmd->add_option("input", czd_input)->required();
    czd_cmd->add_option("--lambda", cz_lambda)->required();
    czd_cmd->add_option("--r", cz_r);

    // weights
    auto* w_cmd = app.add_subcommand("weights", "Muckenhoupt / reverse-Hoelder characteristics");
    std::string w_id = "one";
    double wp = 2, ws = 0, wtau = 0;
    w_cmd->add_option("--weight", w_id, "one | abs:a | random");
    w_cmd->add_option("--p", wp);
    w_cmd->add_option("--rh", ws, "reverse-Hoelder exponent (0 = skip)");
    w_cmd->add_option("--tau", wtau, "fractional class tau (0 = skip; uses --rh as s)");

    // slice
    auto* sl_cmd = app.add_subcommand("slice", "slice-space norms at a fixed scale");
    std::string sl_input;
    double sp = 2, sr = 2, st = 1.0;
    bool sweak = false;
    sl_cmd->add_option("input", sl_input)->required();
    sl_cmd->add_option("--p", sp);
    sl_cmd->add_option("--r", sr);
    sl_cmd->add_option("--t", st)->required();
    sl_cmd->add_flag("--weak", sweak);

    // experiment
    auto* ex_cmd = app.add_subcommand("experiment", "run an inequality experiment from a JSON config");
    std::string ex_config;
    ex_cmd->add_option("config", ex_config, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        GridSpec gs = parse_grid_flag(grid_flag);
        const Grid grid(gs);

        if (norm_cmd->parsed()) {
            const HalfSpaceFunction F = load_halfspace_input(norm_input, grid);
            json j;
            j["q"] = nq;
            j["r"] = nr;
            j["alpha"] = nalpha;
            j["weak"] = nweak;
            j["norm"] = nweak ? weak_tent_norm(F, nq, nr) : tent_norm(F, nq, nr, nalpha);
            write_result(j, out_path, format);
            return kExitOk;
        }
        if (apply_cmd->parsed()) {
            const HalfSpaceFunction F = load_halfspace_input(ap_input, grid);
            const HalfSpaceFunction G = lift(lookup_operator(ap_op), F);
            if (out_path.empty()) throw std::runtime_error("apply requires --out");
            save_hsf(out_path, G);
            return kExitOk;
        }
        if (dec_cmd->parsed()) {
            const HalfSpaceFunction F = load_halfspace_input(dec_input, grid);
            const AtomicDecomposition d = atomic_decompose(F, dq, dr);
            const HalfSpaceFunction R = reconstruct(d);
            double resid = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < F.values.size(); ++i) {
                resid = std::max(resid, std::abs(R.values[i] - F.values[i]));
                scale = std::max(scale, std::abs(F.values[i]));
            }
            const double rel = scale > 0 ? resid / scale : 0.0;
            bool admissible = true;
            for (const TentAtom& a : d.atoms) {
                const AtomReport rep = atom_validate(a);
                if (!rep.support_ok || rep.size_ratio > 1.0 + 1e-12) admissible = false;
            }
            json j;
            j["atoms"] = d.atoms.size();
            j["source_norm"] = d.source_norm;
            j["coefficient_norm"] = d.coefficient_norm;
            j["residual"] = rel;
            j["admissible"] = admissible;
            write_result(j, out_path, format);
            return (rel <= 1e-10 && admissible) ? kExitOk : kExitEnvelope;
        }
        if (czd_cmd->parsed()) {
            const HalfSpaceFunction F = load_halfspace_input(czd_input, grid);
            const CZSplit s = cz_halfspace(F, cz_lambda, cz_r);
            const LineFunction vg = vertical(s.good, cz_r);
            double good_max = 0.0;
            for (double v : vg.values) good_max = std::max(good_max, v);
            double avg_max = 0.0;
            const LineFunction vf = vertical(F, cz_r);
            for (const DyadicCube& q : s.cubes) {
                double acc = 0.0;
                for (long o = 0; o < q.cell_count(); ++o)
                    acc += vf.values[static_cast<std::size_t>(q.corner + o)];
                avg_max = std::max(avg_max, acc / static_cast<double>(q.cell_count()));
            }
            json j;
            j["lambda"] = cz_lambda;
            j["cubes"] = s.cubes.size();
            j["good_sup"] = good_max;
            j["cube_avg_sup"] = avg_max;
            const bool ok = good_max <= 10.0 * cz_lambda + 1e-12 &&
                            avg_max <= 8.0 * cz_lambda + 1e-12;
            j["bounds_ok"] = ok;
            write_result(j, out_path, format);
            return ok ? kExitOk : kExitEnvelope;
        }
        if (w_cmd->parsed()) {
            const Weight w = named_weight(w_id, grid, seed);
            const BallFamily fam = BallFamily::dyadic(grid);
            json j;
            j["weight"] = w_id;
            j["p"] = wp;
            j["ap"] = ap_characteristic(w, wp, fam);
            if (ws > 0) j["rh"] = rh_characteristic(w, ws, fam);
            if (wtau > 0) j["apq"] = apq_characteristic(w, wtau, ws > 0 ? ws : wtau, fam);
            write_result(j, out_path, format);
            return kExitOk;
        }
        if (sl_cmd->parsed()) {
            const LineFunction f = load_line_input(sl_input, grid);
            json j;
            j["p"] = sp;
            j["r"] = sr;
            j["t"] = st;
            j["norm"] = slice_norm(f, sp, sr, st, sweak);
            j["amalgam"] = amalgam_norm(f, sp, sr >= 1 ? sr : 2.0);
            write_result(j, out_path, format);
            return kExitOk;
        }
        if (ex_cmd->parsed()) {
            std::ifstream in(ex_config);
            if (!in) throw std::runtime_error("cannot read config '" + ex_config + "'");
            std::stringstream buf;
            buf << in.rdbuf();
            ExperimentConfig cfg = parse_experiment_config(buf.str());
            if (!grid_flag.empty()) cfg.grid = gs;
            if (cfg.corpus.seed == 0) cfg.corpus.seed = seed;
            if (!out_path.empty()) cfg.out_path = out_path;
            if (format != "json" || cfg.format.empty()) cfg.format = format;
            const InequalityReport rep = run_inequality_experiment(cfg);
            if (!cfg.out_path.empty()) {
                emit_report(rep, cfg.format, cfg.out_path);
            } else {
                json j;
                j["max_ratio"] = rep.max_ratio;
                j["refinement_series"] = rep.refinement_series;
                j["pass"] = rep.pass;
                j["skipped"] = rep.skipped;
                write_result(j, "", "json");
            }
            return rep.pass ? kExitOk : kExitEnvelope;
        }
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
