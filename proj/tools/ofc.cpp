#include <chrono>
#include <random>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ofc/decompose.hpp"
#include "ofc/degree_seq.hpp"
#include "ofc/edge_color.hpp"
#include "ofc/io.hpp"
#include "ofc/multigraph.hpp"
#include "ofc/overfull.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAnalytic = 2;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void emit(const json& report, const std::string& format, const std::string& out_path) {
    std::string text;
    if (format == "json") {
        text = report.dump(2) + "\n";
    } else {
        std::ostringstream os;
        for (const auto& [key, value] : report.items())
            os << key << ": " << value.dump() << "\n";
        text = os.str();
    }
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        f << text;
    }
}

ofc::Multigraph make_generated(const std::string& kind, const std::vector<long long>& args,
                               std::uint64_t seed) {
    using ofc::Multigraph;
    if (kind == "complete") {
        if (args.size() != 1 || args[0] < 1) throw std::invalid_argument("complete N");
        int n = static_cast<int>(args[0]);
        Multigraph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) g.add_edge(i, j, 1);
        return g;
    }
    if (kind == "complete-minus-matching") {
        if (args.size() != 1 || args[0] < 2) throw std::invalid_argument("complete-minus-matching N");
        int n = static_cast<int>(args[0]);
        Multigraph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (!(j == i + 1 && i % 2 == 0)) g.add_edge(i, j, 1);
        return g;
    }
    if (kind == "complete-bipartite") {
        if (args.size() != 1 || args[0] < 1) throw std::invalid_argument("complete-bipartite T");
        int t = static_cast<int>(args[0]);
        Multigraph g(2 * t);
        for (int i = 0; i < t; ++i)
            for (int j = 0; j < t; ++j) g.add_edge(i, t + j, 1);
        return g;
    }
    if (kind == "cycle") {
        if (args.size() != 1 || args[0] < 3) throw std::invalid_argument("cycle N");
        int n = static_cast<int>(args[0]);
        Multigraph g(n);
        for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, 1);
        return g;
    }
    if (kind == "circulant") {
        if (args.size() != 2) throw std::invalid_argument("circulant M D");
        return ofc::build_regular_circulant(static_cast<int>(args[0]), static_cast<int>(args[1]));
    }
    if (kind == "petersen-minus-vertex") return ofc::petersen_minus_vertex();
    if (kind == "near-regular") {
        if (args.size() != 3) throw std::invalid_argument("near-regular M D T");
        return ofc::realize_near_regular(static_cast<int>(args[0]), static_cast<int>(args[1]),
                                         static_cast<int>(args[2]));
    }
    if (kind == "random") {
        if (args.size() < 2 || args.size() > 3)
            throw std::invalid_argument("random N PERCENT [MAXMULT]");
        int n = static_cast<int>(args[0]);
        int percent = static_cast<int>(args[1]);
        int maxmult = args.size() == 3 ? static_cast<int>(args[2]) : 1;
        if (n < 1 || percent < 0 || percent > 100 || maxmult < 1)
            throw std::invalid_argument("random N PERCENT [MAXMULT]");
        std::mt19937_64 rng(seed);
        Multigraph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (static_cast<int>(rng() % 100) < percent)
                    g.add_edge(i, j, 1 + static_cast<int>(rng() % maxmult));
        return g;
    }
    throw std::invalid_argument("unknown generator kind: " + kind);
}

json certificate_json(const ofc::OverfullCertificate& cert) {
    json j;
    switch (cert.mode) {
        case ofc::OverfullMode::Found: j["mode"] = "found"; break;
        case ofc::OverfullMode::AbsentExhaustive: j["mode"] = "certified-absent-exhaustive"; break;
        case ofc::OverfullMode::AbsentMinDegreeLemma:
            j["mode"] = "certified-absent-min-degree-lemma";
            break;
        case ofc::OverfullMode::AbsentParity: j["mode"] = "certified-absent-parity"; break;
    }
    if (cert.found()) {
        j["subset"] = cert.subset.members;
        j["edge_count"] = cert.edge_count;
        j["threshold"] = cert.threshold;
    }
    return j;
}

int cmd_gen(const std::string& kind, const std::vector<long long>& args, std::uint64_t seed,
            const std::string& out_path, bool dot) {
    auto g = make_generated(kind, args, seed);
    std::ostringstream os;
    if (dot) ofc::write_dot(os, g);
    else ofc::write_multigraph(os, g);
    if (out_path.empty()) std::cout << os.str();
    else {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "cannot write " << out_path << "\n";
            return kExitUsage;
        }
        f << os.str();
    }
    return kExitOk;
}

int cmd_classify(const std::string& input, int max_n, std::uint64_t seed,
                 const std::string& format, const std::string& out_path) {
    Timer timer;
    ofc::Multigraph g = ofc::load_multigraph(input);
    json report;
    report["command"] = "classify";
    report["input"] = input;
    report["digest"] = ofc::graph_digest(g);
    report["seed"] = seed;
    report["n"] = g.vertex_count();
    report["edges"] = g.edge_count();
    report["max_degree"] = g.max_degree();
    report["min_degree"] = g.min_degree();
    report["max_multiplicity"] = g.max_multiplicity();

    bool partial = false;
    if (g.vertex_count() > max_n) {
        report["partial"] = true;
        report["reason"] = "vertex count above --max-n";
        emit(report, format, out_path);
        return kExitAnalytic;
    }
    try {
        auto exact = ofc::chromatic_index_exact(g);
        report["chromatic_index"] = exact.chi;
        report["class"] = exact.chi == g.max_degree() ? 1 : 2;
        if (g.vertex_count() >= 3) {
            auto rho = ofc::density_rho(g);
            report["density_num"] = rho.numerator;
            report["density_den"] = rho.denominator;
        }
        auto cert = ofc::find_delta_overfull_subgraph(g);
        report["overfull"] = certificate_json(cert);
        if (g.max_multiplicity() == 1 && g.edge_count() > 0) {
            bool all_pass = true;
            json witness;
            for (const auto& [pair, m] : g.pairs()) {
                auto val = ofc::val_check(g, pair.first, pair.second);
                if (!val.pass() && all_pass) {
                    all_pass = false;
                    witness = json::array({pair.first, pair.second});
                }
            }
            report["adjacency_conditions_all_pass"] = all_pass;
            if (!all_pass) report["adjacency_condition_witness"] = witness;
        }
        bool critical = ofc::is_edge_chromatic_critical(g, 50'000'000);
        report["critical"] = critical;
        if (critical) {
            auto avg = ofc::average_degree_criterion(g, true);
            report["average_degree_ok"] = avg.conclusion_holds;
        }
        auto conj = ofc::conjecture_verdict(g, 1.0 / 14.0);
        report["biconditional_holds"] = conj.biconditional_holds;
        report["hypothesis_delta_over_third"] = conj.hypothesis_third;
    } catch (const ofc::resource_error& e) {
        partial = true;
        report["partial"] = true;
        report["reason"] = e.what();
    }
    json timings;
    timings["total_ms"] = timer.ms();
    report["timings"] = timings;
    emit(report, format, out_path);
    return partial ? kExitAnalytic : kExitOk;
}

int cmd_pipeline(const std::string& input, double eta, std::uint64_t seed, bool rescue,
                 const std::string& format, const std::string& out_path,
                 const std::string& coloring_path) {
    Timer timer;
    ofc::Multigraph g = ofc::load_multigraph(input);
    json report;
    report["command"] = "pipeline";
    report["input"] = input;
    report["digest"] = ofc::graph_digest(g);
    report["eta"] = eta;
    report["seed"] = seed;
    report["rescue"] = rescue;

    ofc::DecompositionResult res = ofc::run_pipeline(g, eta, seed, rescue);
    int target = g.max_degree();
    // an inadmissible deficiency sequence certifies an overfull obstruction;
    // re-target one color higher, up to the general upper bound
    while (!res.complete && res.failure && res.failure->step == "regularize" &&
           res.failure->condition == "deficiency sequence rejected" &&
           target < g.max_degree() + g.max_multiplicity()) {
        ++target;
        res = ofc::run_pipeline(g, eta, seed, rescue, target);
        report["retargeted_colors"] = target;
    }

    report["complete"] = res.complete;
    if (res.complete) {
        report["colors_used"] = res.colors_used;
        report["k"] = res.k;
        report["l"] = res.l;
        report["ignored_edges"] = static_cast<long long>(res.ignored.size());
        report["rescue_used"] = res.trace.rescue_used;
        report["g3_vertices"] = res.state.g3.vertex_count();
        report["g3_edges"] = res.state.g3.edge_count();
        std::string verdict = ofc::verify_decomposition(res);
        report["verified"] = verdict.empty();
        if (!verdict.empty()) report["verification_error"] = verdict;
        {
            json stages;
            auto stage = [](const ofc::Multigraph& g) {
                json s;
                s["n"] = g.vertex_count();
                s["edges"] = g.edge_count();
                s["digest"] = ofc::graph_digest(g);
                return s;
            };
            stages["g0"] = stage(res.state.g0);
            stages["g1"] = stage(res.state.g1);
            stages["g2"] = stage(res.state.g2);
            stages["g3"] = stage(res.state.g3);
            stages["split_index"] = res.state.split_index;
            stages["deficient_range_end"] = res.state.g_index;
            stages["guarded_range_end"] = res.state.h_index;
            json ids = json::array();
            for (const auto& rec : res.state.identification_log) {
                json one;
                one["merged"] = rec.merged;
                one["survivor"] = rec.survivor;
                ids.push_back(one);
            }
            stages["identifications"] = ids;
            report["stages"] = stages;
        }
        if (!coloring_path.empty()) {
            std::vector<ofc::ColoringLine> lines;
            for (const auto& [inst, col] : res.restricted_to_input) lines.push_back({inst, col});
            std::ofstream f(coloring_path);
            if (!f) {
                std::cerr << "cannot write " << coloring_path << "\n";
                return kExitUsage;
            }
            ofc::write_coloring_lines(f, lines);
            std::ofstream f3(coloring_path + ".g3");
            std::vector<ofc::ColoringLine> g3lines;
            for (int i = 0; i < res.coloring.size(); ++i)
                g3lines.push_back({res.coloring.instances()[i], res.coloring.color(i)});
            ofc::write_coloring_lines(f3, g3lines);
            report["coloring_file"] = coloring_path;
            for (const auto& [tag, graph] :
                 std::vector<std::pair<std::string, const ofc::Multigraph*>>{
                     {"g0", &res.state.g0}, {"g1", &res.state.g1},
                     {"g2", &res.state.g2}, {"g3", &res.state.g3}}) {
                ofc::save_multigraph(coloring_path + "." + tag, *graph);
            }
        }
    } else if (res.failure) {
        json f;
        f["step"] = res.failure->step;
        f["condition"] = res.failure->condition;
        f["diagnostics"] = res.failure->diagnostics;
        report["failure"] = f;
    }
    json audits = json::array();
    for (const auto& a : res.trace.audits) {
        json ja;
        ja["name"] = a.name;
        ja["pass"] = a.pass;
        if (!a.detail.empty()) ja["detail"] = a.detail;
        audits.push_back(ja);
    }
    report["audits"] = audits;
    json notes = json::array();
    for (const auto& n : res.trace.notes) notes.push_back(n);
    report["notes"] = notes;
    json metrics;
    for (const auto& [k, v] : res.trace.metrics) metrics[k] = v;
    report["metrics"] = metrics;
    json timings;
    timings["total_ms"] = timer.ms();
    report["timings"] = timings;
    emit(report, format, out_path);
    return res.complete ? kExitOk : kExitAnalytic;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multigraph edge-coloring and overfull analysis toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a graph file");
    std::string gen_kind;
    std::vector<long long> gen_args;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    bool gen_dot = false;
    gen->add_option("kind", gen_kind,
                    "complete | complete-minus-matching | complete-bipartite | cycle | circulant "
                    "| near-regular | random | petersen-minus-vertex")
        ->required();
    gen->add_option("args", gen_args, "numeric generator arguments");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--out", gen_out, "output path (default stdout)");
    gen->add_flag("--dot", gen_dot, "emit DOT for the underlying simple graph");

    // classify
    auto* classify = app.add_subcommand("classify", "exact analysis of a graph file");
    std::string cl_input, cl_format = "json", cl_out;
    int cl_max_n = 12;
    std::uint64_t cl_seed = 1;
    classify->add_option("--input", cl_input, "graph file")->required();
    classify->add_option("--max-n", cl_max_n, "vertex cap for the exact engines");
    classify->add_option("--seed", cl_seed, "random seed");
    classify->add_option("--format", cl_format, "json | text")
        ->check(CLI::IsMember({"json", "text"}));
    classify->add_option("--out", cl_out, "report path (default stdout)");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "regularize and decompose a graph file");
    std::string pi_input, pi_format = "json", pi_out, pi_coloring;
    double pi_eta = -1;
    std::uint64_t pi_seed = 1;
    bool pi_rescue = false;
    pipe->add_option("--input", pi_input, "graph file")->required();
    pipe->add_option("--eta", pi_eta, "slack parameter (default 1/n)");
    pipe->add_option("--seed", pi_seed, "random seed");
    pipe->add_flag("--rescue", pi_rescue, "allow off-script completion");
    pipe->add_option("--format", pi_format, "json | text")->check(CLI::IsMember({"json", "text"}));
    pipe->add_option("--out", pi_out, "report path (default stdout)");
    pipe->add_option("--coloring", pi_coloring, "write the input coloring here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_kind, gen_args, gen_seed, gen_out, gen_dot);
        if (classify->parsed()) return cmd_classify(cl_input, cl_max_n, cl_seed, cl_format, cl_out);
        if (pipe->parsed()) {
            ofc::Multigraph g = ofc::load_multigraph(pi_input);
            double eta = pi_eta;
            if (eta <= 0) {
                int m = g.vertex_count() + (g.vertex_count() % 2);
                eta = 1.0 / std::max(2, m);
            }
            return cmd_pipeline(pi_input, eta, pi_seed, pi_rescue, pi_format, pi_out, pi_coloring);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAnalytic;
    }
    return kExitUsage;
}
