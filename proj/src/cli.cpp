#include "strtour/cli.hpp"

#include "strtour/errors.hpp"
#include "strtour/generate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

namespace strtour::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json phase_json(const PhasePeaks& p) {
    return {{"passes", p.passes},
            {"streaming_passes", p.streaming_passes},
            {"sorting_passes", p.sorting_passes},
            {"peak_live_words", p.peak_live_words},
            {"peak_live_records", p.peak_live_records}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) {
        throw InputError("cannot write " + path.string());
    }
    f << text;
    if (!f.flush()) {
        throw InputError("write failed: " + path.string());
    }
}

void dump_tree(const fs::path& path, const std::vector<RootedTreeEdge>& tree) {
    std::ofstream f(path);
    if (!f) {
        throw InputError("cannot write " + path.string());
    }
    for (const auto& e : tree) {
        f << "T " << e.parent << ' ' << e.child << ' ' << e.cvertex << '\n';
    }
}

struct Args {
    std::string in;
    std::string out;
    std::string stats;
    std::string tour;
    std::string trace_dir;
    std::uint64_t seed = 1;
    std::uint32_t n = 0;
    std::uint64_t m = 0;
    std::string perturb;
    bool fidelity_relabel = false;
};

int cmd_solve(const Args& a, std::ostream& out, std::ostream& err) {
    const auto g = read_graph_file(a.in);
    SolveOptions opts;
    opts.phase1.fidelity_relabel = a.fidelity_relabel;
    if (!a.trace_dir.empty()) {
        fs::create_directories(a.trace_dir);
        opts.engine.trace_dir = fs::path(a.trace_dir);
    }
    SolveResult r;
    try {
        r = solve(g, opts);
    } catch (const NotEulerian& e) {
        err << e.what() << '\n';
        return kNo;
    }
    if (a.out.empty()) {
        write_tour(out, r.tour);
    } else {
        write_tour_file(a.out, r.tour);
    }
    if (!a.stats.empty()) {
        write_text(a.stats, stats_json(g, r) + "\n");
    }
    if (!a.trace_dir.empty()) {
        dump_tree(fs::path(a.trace_dir) / "tree.txt", r.rooted_tree);
    }
    return kOk;
}

int cmd_verify(const Args& a, std::ostream& out, std::ostream& err) {
    const auto g = read_graph_file(a.in);
    const auto t = read_tour_file(a.tour);
    const auto check = validate_tour(g, t);
    if (!check) {
        err << check.message() << '\n';
        return kNo;
    }
    out << check.message() << '\n';
    return kOk;
}

int cmd_oracle(const Args& a, std::ostream& out, std::ostream&) {
    const auto g = read_graph_file(a.in);
    const auto verdict = is_eulerian(g);
    out << verdict.to_string() << '\n';
    if (!verdict) {
        return kNo;
    }
    const auto tour = *hierholzer(g);
    if (a.out.empty()) {
        write_tour(out, tour);
    } else {
        write_tour_file(a.out, tour);
    }
    return kOk;
}

int cmd_gen(const Args& a, std::ostream& out, std::ostream&) {
    auto g = gen_eulerian(a.n, a.m, a.seed);
    if (!a.perturb.empty()) {
        g = perturb(g, parse_perturb_mode(a.perturb), a.seed);
    }
    if (a.out.empty()) {
        write_graph(out, g);
    } else {
        write_graph_file(a.out, g);
    }
    return kOk;
}

} // namespace

std::string stats_json(const Graph& g, const SolveResult& r) {
    const auto& s = r.stats;
    json doc = {
        {"streaming_passes", s.streaming_passes},
        {"sorting_passes", s.sorting_passes},
        {"peak_live_words", s.peak_live_words},
        {"peak_live_records", s.peak_live_records},
        {"peak_stream_items", s.peak_stream_items},
        {"peak_stream_pass", s.peak_stream_pass},
        {"merge_iterations", s.merge_iterations},
        {"circuits_found", s.circuits_found},
        {"tree_height", s.tree_height},
        {"n", g.n},
        {"m", g.m()},
        {"phase1_tree_height", r.phase1_tree_height},
        {"stream_budget", {{"limit", r.stream_budget.limit}, {"peak", r.stream_budget.peak}, {"ok", r.stream_budget.ok}}},
        {"phase2_pass_bound", phase2_pass_bound(r.tree_height)},
        {"phase1", phase_json(r.phase1)},
        {"phase2", phase_json(r.phase2)},
        {"tree_check", {{"checks", r.tree_check.checks}, {"violations", r.tree_check.violations}}},
    };
    json passes = json::array();
    for (const auto& p : r.passes) {
        passes.push_back({{"index", p.index},
                          {"kind", p.kind == PassKind::Streaming ? "stream" : "sort"},
                          {"phase", p.phase},
                          {"label", p.label},
                          {"items_in", p.items_in},
                          {"items_out", p.items_out},
                          {"peak_live_records", p.peak_live_records},
                          {"peak_live_words", p.peak_live_words}});
    }
    doc["passes"] = std::move(passes);
    json merges = json::array();
    for (const auto& m : r.merges) {
        merges.push_back({{"iteration", m.iteration},
                          {"circuits_before", m.circuits_before},
                          {"circuits_after", m.circuits_after},
                          {"height_before", m.height_before},
                          {"height_after", m.height_after},
                          {"passes", m.passes},
                          {"peak_live_records", m.peak_live_records}});
    }
    doc["merges"] = std::move(merges);
    return doc.dump(2);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Euler tours with streaming and sorting passes"};
    app.require_subcommand(1);
    Args a;

    auto* solve_cmd = app.add_subcommand("solve", "find an Euler tour with the pass pipeline");
    solve_cmd->add_option("--in", a.in, "graph file")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--out", a.out, "tour file (default: stdout)");
    solve_cmd->add_option("--stats", a.stats, "stats JSON file");
    solve_cmd->add_option("--trace-dir", a.trace_dir, "keep every intermediate stream here");
    solve_cmd->add_flag("--fidelity-relabel", a.fidelity_relabel, "relabel components with the full sweep");

    auto* verify_cmd = app.add_subcommand("verify", "check a tour against a graph");
    verify_cmd->add_option("--in", a.in, "graph file")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--tour", a.tour, "tour file")->required()->check(CLI::ExistingFile);

    auto* oracle_cmd = app.add_subcommand("oracle", "in-memory Eulerian test and Hierholzer tour");
    oracle_cmd->add_option("--in", a.in, "graph file")->required()->check(CLI::ExistingFile);
    oracle_cmd->add_option("--out", a.out, "tour file (default: stdout)");

    auto* gen_cmd = app.add_subcommand("gen", "generate a random Eulerian graph");
    gen_cmd->add_option("--n", a.n, "vertices")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--m", a.m, "target edge count")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", a.seed, "random seed");
    gen_cmd->add_option("--out", a.out, "graph file (default: stdout)");
    gen_cmd->add_option("--perturb", a.perturb, "break the graph")->check(CLI::IsMember({"odd", "disconnected"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kFault;
    }

    try {
        if (!a.out.empty() && (a.out == a.in || a.out == a.stats || a.out == a.tour)) {
            throw InputError("output path must differ from the other files");
        }
        if (*solve_cmd) {
            return cmd_solve(a, out, err);
        }
        if (*verify_cmd) {
            return cmd_verify(a, out, err);
        }
        if (*oracle_cmd) {
            return cmd_oracle(a, out, err);
        }
        return cmd_gen(a, out, err);
    } catch (const NotEulerian& e) {
        err << e.what() << '\n';
        return kNo;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
    } catch (const IntegrityFault& e) {
        err << "integrity fault: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kFault;
}

} // namespace strtour::cli
