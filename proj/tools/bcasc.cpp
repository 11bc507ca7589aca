// Command-line front end: code construction, coherence bounds, parameter
// sweeps, and sparse-recovery phase diagrams, with seeded reproducible output.
#include <bcasc/bcasc.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

using namespace bcasc;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// Relative output paths land in $BCASC_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("BCASC_OUT_DIR");
    if (!dir || !*dir) return path;
    std::string d = dir;
    if (d.back() != '/') d += '/';
    return d + path;
}

std::string basename_of(const std::string& path) {
    auto pos = path.find_last_of('/');
    return pos == std::string::npos ? path : path.substr(pos + 1);
}

json hash_outputs(const std::vector<std::string>& files) {
    json h = json::object();
    for (const auto& f : files) h[basename_of(f)] = hex64(hash_file(f));
    return h;
}

json make_manifest(const std::string& command, const json& config,
                   const std::vector<std::uint64_t>& seeds, int threads, double wall,
                   const std::vector<std::string>& files) {
    return json{{"command", command},     {"config", config},
                {"seeds", seeds},         {"threads", threads},
                {"bit_exact", threads <= 1}, {"wall_seconds", wall},
                {"outputs", hash_outputs(files)}};
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

// Flags shared by every command that runs the constructor.
struct ConstructFlags {
    int m = 4;
    int n = 16;
    int runs = 10;
    int threads = 1;
    std::uint64_t seed = 1;
    std::string neighbor = "knn";
    ConstructionConfig cfg;
};

void add_construct_flags(CLI::App* cmd, ConstructFlags& f) {
    cmd->add_option("--runs", f.runs, "independent restarts (best kept)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--neighbor", f.neighbor, "neighbor policy")
        ->check(CLI::IsMember({"knn", "radius", "full"}));
    cmd->add_option("--k", f.cfg.knn, "neighbors per query (knn policy)");
    cmd->add_option("--radius", f.cfg.radius, "neighborhood radius (radius policy)");
    cmd->add_option("--nrot", f.cfg.n_rot, "discrete rotations per codeword");
    cmd->add_option("--alpha0", f.cfg.alpha0, "initial damping factor");
    cmd->add_option("--nu0", f.cfg.nu0, "initial force exponent (even)");
    cmd->add_option("--nu-max", f.cfg.nu_max, "exponent doubling stops at this value");
    cmd->add_option("--tau-max", f.cfg.tau_max, "iteration cap per stage");
    cmd->add_option("--eps-fixed", f.cfg.eps_fixed, "fixed-point residual threshold");
    cmd->add_option("--eps-df", f.cfg.eps_df, "force-direction stability threshold");
    cmd->add_option("--budget", f.cfg.max_leaf_visits,
                    "leaf-visit budget per query (-1 = exact search)");
    cmd->add_option("--leaf-capacity", f.cfg.leaf_capacity, "k-d tree leaf size");
    cmd->add_option("--threads", f.threads, "worker threads (>1 waives bit-exactness)")
        ->check(CLI::PositiveNumber);
}

NeighborPolicy policy_from(const std::string& s) {
    if (s == "knn") return NeighborPolicy::Knn;
    if (s == "radius") return NeighborPolicy::Radius;
    return NeighborPolicy::Full;
}

json config_json(const ConstructFlags& f) {
    return json{{"m", f.m},
                {"n", f.n},
                {"runs", f.runs},
                {"seed", f.seed},
                {"neighbor", f.neighbor},
                {"k", f.cfg.knn},
                {"radius", f.cfg.radius},
                {"nrot", f.cfg.n_rot},
                {"alpha0", f.cfg.alpha0},
                {"nu0", f.cfg.nu0},
                {"nu_max", f.cfg.nu_max},
                {"tau_max", f.cfg.tau_max},
                {"eps_fixed", f.cfg.eps_fixed},
                {"eps_df", f.cfg.eps_df},
                {"budget", f.cfg.max_leaf_visits},
                {"leaf_capacity", f.cfg.leaf_capacity}};
}

std::vector<std::uint64_t> run_seeds(std::uint64_t seed, int runs) {
    std::vector<std::uint64_t> s(static_cast<std::size_t>(runs));
    for (int i = 0; i < runs; ++i) s[static_cast<std::size_t>(i)] = seed + static_cast<std::uint64_t>(i);
    return s;
}

// ---- bounds ---------------------------------------------------------------

json bounds_json(int m, int n) {
    BoundReport r = composite_bound_complex(m, n);
    json j{{"m", m},
           {"n", n},
           {"welch", welch_bound(m, n)},
           {"welch_applicable", welch_applicable(m, n, Field::Complex)},
           {"orthoplex", orthoplex_bound(m)},
           {"levenshtein", levenshtein_bound(m, n, Field::Complex)},
           {"composite", r.value},
           {"regime", to_string(r.regime)}};
    j["mukkavilli"] = m >= 2 ? json(mukkavilli_bound(m, n)) : json();
    if (n <= m) j["note"] = "n <= m: an orthobasis achieves coherence 0";
    return j;
}

void cmd_bounds(int m, int n, bool as_json) {
    json j = bounds_json(m, n);
    if (as_json) {
        std::printf("%s\n", j.dump(2).c_str());
        return;
    }
    std::printf("m=%d n=%d\n", m, n);
    std::printf("  welch        %.6f%s\n", j["welch"].get<double>(),
                j["welch_applicable"].get<bool>() ? "" : "  (outside applicable range)");
    std::printf("  orthoplex    %.6f\n", j["orthoplex"].get<double>());
    std::printf("  levenshtein  %.6f\n", j["levenshtein"].get<double>());
    if (!j["mukkavilli"].is_null())
        std::printf("  mukkavilli   %.6f\n", j["mukkavilli"].get<double>());
    std::printf("  composite    %.6f  [%s]\n", j["composite"].get<double>(),
                j["regime"].get<std::string>().c_str());
    if (j.contains("note")) std::printf("  %s\n", j["note"].get<std::string>().c_str());
}

// ---- construct ------------------------------------------------------------

void write_runs_csv(const std::string& path, const std::vector<RunSummary>& runs) {
    CsvWriter csv(path);
    csv.row("run", "seed", "failed", "coherence", "iterations", "radius_fallbacks");
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        csv.row(static_cast<int>(i), r.seed, static_cast<int>(r.failed), r.coherence,
                r.iterations, r.radius_fallbacks);
    }
    csv.close();
}

void write_trace_csv(const std::string& path, const ConstructionTrace& trace) {
    CsvWriter csv(path);
    csv.row("stage", "nu", "iterations", "coherence", "radius_fallbacks");
    for (std::size_t i = 0; i < trace.stages.size(); ++i) {
        const auto& s = trace.stages[i];
        csv.row(static_cast<int>(i), s.nu, s.iterations, s.coherence_after, s.radius_fallbacks);
    }
    csv.close();
}

void cmd_construct(const ConstructFlags& f, const std::string& out_arg, bool as_json) {
    Timer timer;
    ConstructionConfig cfg = f.cfg;
    cfg.policy = policy_from(f.neighbor);
    auto seeds = run_seeds(f.seed, f.runs);
    BestOfRuns best = best_of_runs(f.m, f.n, cfg, seeds, f.threads);
    for (const auto& r : best.runs)
        if (r.failed)
            std::fprintf(stderr, "run with seed %llu failed: %s\n",
                         static_cast<unsigned long long>(r.seed), r.error.c_str());

    std::string out = resolve_out(out_arg);
    std::string code_path = out + ".json";
    std::string runs_path = out + "_runs.csv";
    std::string trace_path = out + "_trace.csv";
    std::string manifest_path = out + "_manifest.json";

    const RunSummary& winner = best.runs[static_cast<std::size_t>(best.best_index)];
    json meta{{"command", "construct"},
              {"seed", winner.seed},
              {"coherence", best.coherence.mu},
              {"neighbor", f.neighbor},
              {"nrot", f.cfg.n_rot}};
    save_code(code_path, best.code, meta);
    write_runs_csv(runs_path, best.runs);
    write_trace_csv(trace_path, best.best_trace);
    json manifest = make_manifest("construct", config_json(f), seeds, f.threads, timer.secs(),
                                  {code_path, runs_path, trace_path});
    write_json_file(manifest_path, manifest);

    BoundReport bound = composite_bound_complex(f.m, f.n);
    if (as_json) {
        json j{{"command", "construct"},
               {"coherence", best.coherence.mu},
               {"coherence_pair", {best.coherence.u, best.coherence.v}},
               {"best_seed", winner.seed},
               {"bound", bound.value},
               {"regime", to_string(bound.regime)},
               {"manifest", manifest}};
        std::printf("%s\n", j.dump(2).c_str());
        return;
    }
    std::printf("best coherence %.6f (seed %llu, pair %d/%d)\n", best.coherence.mu,
                static_cast<unsigned long long>(winner.seed), best.coherence.u,
                best.coherence.v);
    std::printf("composite bound %.6f [%s]\n", bound.value, to_string(bound.regime));
    std::printf("wrote %s %s %s %s\n", code_path.c_str(), runs_path.c_str(),
                trace_path.c_str(), manifest_path.c_str());
}

// ---- coherence ------------------------------------------------------------

void cmd_coherence(const std::string& file, bool as_json) {
    json meta;
    SphericalCode code = load_code(file, &meta);
    CoherenceReport rep = coherence(code);
    BoundReport bound = composite_bound_complex(code.dim(), code.size());
    if (as_json) {
        json j{{"command", "coherence"}, {"file", file},
               {"m", code.dim()},        {"n", code.size()},
               {"coherence", rep.mu},    {"pair", {rep.u, rep.v}},
               {"bound", bound.value},   {"regime", to_string(bound.regime)},
               {"metadata", meta}};
        std::printf("%s\n", j.dump(2).c_str());
        return;
    }
    std::printf("m=%d n=%d coherence %.6f (pair %d/%d), composite bound %.6f [%s]\n",
                code.dim(), code.size(), rep.mu, rep.u, rep.v, bound.value,
                to_string(bound.regime));
}

// ---- sweep ----------------------------------------------------------------

struct CaseStats {
    int failed_runs = 0;
    long fallbacks = 0;
    int ok = 0;
    double mu_mean = 0, mu_min = 0, mu_max = 0;
    double wall_mean = 0, wall_min = 0, wall_max = 0;
};

CaseStats summarize_case(const std::vector<RunSummary>& runs) {
    CaseStats c;
    double mu_sum = 0, wall_sum = 0;
    for (const auto& r : runs) {
        if (r.failed) {
            c.failed_runs++;
            continue;
        }
        c.fallbacks += r.radius_fallbacks;
        if (c.ok == 0) {
            c.mu_min = c.mu_max = r.coherence;
            c.wall_min = c.wall_max = r.wall_seconds;
        } else {
            c.mu_min = std::min(c.mu_min, r.coherence);
            c.mu_max = std::max(c.mu_max, r.coherence);
            c.wall_min = std::min(c.wall_min, r.wall_seconds);
            c.wall_max = std::max(c.wall_max, r.wall_seconds);
        }
        mu_sum += r.coherence;
        wall_sum += r.wall_seconds;
        c.ok++;
    }
    if (c.ok > 0) {
        c.mu_mean = mu_sum / c.ok;
        c.wall_mean = wall_sum / c.ok;
    } else {
        c.mu_mean = c.mu_min = c.mu_max = std::nan("");
        c.wall_mean = c.wall_min = c.wall_max = std::nan("");
    }
    return c;
}

void cmd_sweep(const ConstructFlags& base, const std::string& axis, double from, double to,
               double step, const std::string& out_arg, bool as_json) {
    Timer timer;
    if (step <= 0) throw Error("sweep requires --step > 0");
    if (to < from) throw Error("sweep requires --to >= --from");

    std::string out = resolve_out(out_arg);
    std::string csv_path = out + ".csv";
    std::string manifest_path = out + "_manifest.json";
    CsvWriter csv(csv_path);
    csv.row("axis", "value", "runs", "failed_runs", "radius_fallbacks", "failed",
            "coherence_mean", "coherence_min", "coherence_max", "wall_mean", "wall_min",
            "wall_max");

    auto seeds = run_seeds(base.seed, base.runs);
    int cases = 0, failed_cases = 0;
    for (double v = from; v <= to + 1e-12; v += step) {
        ConstructFlags f = base;
        f.cfg.policy = policy_from(f.neighbor);
        if (axis == "k") {
            f.cfg.knn = static_cast<int>(std::lround(v));
            f.cfg.policy = NeighborPolicy::Knn;
        } else if (axis == "radius") {
            f.cfg.radius = v;
            f.cfg.policy = NeighborPolicy::Radius;
        } else if (axis == "nrot") {
            f.cfg.n_rot = static_cast<int>(std::lround(v));
        } else if (axis == "m") {
            f.m = static_cast<int>(std::lround(v));
        } else {
            f.n = static_cast<int>(std::lround(v));
        }

        CaseStats c;
        try {
            BestOfRuns best = best_of_runs(f.m, f.n, f.cfg, seeds, f.threads);
            c = summarize_case(best.runs);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "case %s=%g failed: %s\n", axis.c_str(), v, e.what());
            c = summarize_case({});  // all-failed row
            c.failed_runs = base.runs;
        }
        bool row_failed = c.failed_runs > 0 || c.fallbacks > 0;
        csv.row(axis, v, base.runs, c.failed_runs, c.fallbacks, static_cast<int>(row_failed),
                c.mu_mean, c.mu_min, c.mu_max, c.wall_mean, c.wall_min, c.wall_max);
        cases++;
        if (row_failed) failed_cases++;
    }
    csv.close();

    json config = config_json(base);
    config["axis"] = axis;
    config["from"] = from;
    config["to"] = to;
    config["step"] = step;
    json manifest =
        make_manifest("sweep", config, seeds, base.threads, timer.secs(), {csv_path});
    write_json_file(manifest_path, manifest);

    if (as_json) {
        json j{{"command", "sweep"}, {"cases", cases}, {"failed_cases", failed_cases},
               {"manifest", manifest}};
        std::printf("%s\n", j.dump(2).c_str());
        return;
    }
    std::printf("swept %d case(s), %d failed; wrote %s %s\n", cases, failed_cases,
                csv_path.c_str(), manifest_path.c_str());
}

// ---- phase-diagram / stats ------------------------------------------------

void write_cells_csv(const std::string& path, const PhaseDiagram& d) {
    CsvWriter csv(path);
    csv.row("delta_index", "rho_index", "delta", "rho", "m", "s", "error", "converged",
            "iterations", "failed");
    for (const auto& c : d.cells)
        csv.row(c.delta_index, c.rho_index, c.delta, c.rho, c.m, c.s, c.error,
                static_cast<int>(c.converged), c.iterations, static_cast<int>(c.failed));
    csv.close();
}

void write_stats_csvs(const std::string& hist_path, const std::string& surv_path,
                      const ErrorStatistics& st) {
    CsvWriter hist(hist_path);
    hist.row("bin_left", "count");
    for (std::size_t i = 0; i < st.bin_left.size(); ++i) hist.row(st.bin_left[i], st.counts[i]);
    hist.close();
    CsvWriter surv(surv_path);
    surv.row("edge", "survivor");
    for (std::size_t i = 0; i < st.survivor_edges.size(); ++i)
        surv.row(st.survivor_edges[i], st.survivor[i]);
    surv.close();
}

void cmd_phase_diagram(const ConstructFlags& f, int grid, double stop_tol, long max_iters,
                       const std::string& kind_str, const std::string& out_arg, bool as_json) {
    Timer timer;
    MatrixKind kind = matrix_kind_from_string(kind_str);
    ConstructionConfig cfg = f.cfg;
    cfg.policy = policy_from(f.neighbor);
    L1Params lp;
    lp.stop_tol = stop_tol;
    lp.max_iters = max_iters;
    PhaseDiagram d = phase_diagram(f.n, kind, grid, f.seed, cfg, lp, f.threads);

    std::string out = resolve_out(out_arg);
    std::string cells_path = out + "_cells.csv";
    std::string hist_path = out + "_hist.csv";
    std::string surv_path = out + "_surv.csv";
    std::string manifest_path = out + "_manifest.json";
    write_cells_csv(cells_path, d);
    std::vector<std::string> files{cells_path};

    int recovered = exact_recovery_count(d);
    bool have_stats = false;
    try {
        ErrorStatistics st = error_statistics(d);
        write_stats_csvs(hist_path, surv_path, st);
        files.push_back(hist_path);
        files.push_back(surv_path);
        have_stats = true;
    } catch (const Error& e) {
        std::fprintf(stderr, "statistics skipped: %s\n", e.what());
    }

    json config = config_json(f);
    config["kind"] = kind_str;
    config["grid"] = grid;
    config["stop_tol"] = stop_tol;
    config["max_iters"] = max_iters;
    json manifest =
        make_manifest("phase-diagram", config, {f.seed}, f.threads, timer.secs(), files);
    write_json_file(manifest_path, manifest);

    if (as_json) {
        json j{{"command", "phase-diagram"},
               {"kind", kind_str},
               {"cells", static_cast<int>(d.cells.size())},
               {"exact_recovered", recovered},
               {"have_statistics", have_stats},
               {"manifest", manifest}};
        std::printf("%s\n", j.dump(2).c_str());
        return;
    }
    std::printf("%s n=%d grid=%dx%d: %d of %zu cells recovered exactly\n", kind_str.c_str(),
                f.n, grid, grid, recovered, d.cells.size());
    std::printf("wrote %s%s %s\n", cells_path.c_str(),
                have_stats ? (" " + hist_path + " " + surv_path).c_str() : "",
                manifest_path.c_str());
}

void cmd_stats(const std::string& cells_file, const std::string& out_arg, bool as_json,
               std::uint64_t seed, int threads) {
    Timer timer;
    auto rows = read_csv(cells_file);
    if (rows.empty()) throw IoError("empty cells file: " + cells_file);
    std::vector<PhaseCell> cells;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (i == 0 && !r.empty() && r[0] == "delta_index") continue;  // header
        if (r.size() < 10) throw IoError("malformed cells row in " + cells_file);
        PhaseCell c;
        c.delta_index = static_cast<int>(parse_double(r[0]));
        c.rho_index = static_cast<int>(parse_double(r[1]));
        c.delta = parse_double(r[2]);
        c.rho = parse_double(r[3]);
        c.m = static_cast<int>(parse_double(r[4]));
        c.s = static_cast<int>(parse_double(r[5]));
        c.error = parse_double(r[6]);
        c.converged = parse_double(r[7]) != 0.0;
        c.iterations = static_cast<long>(parse_double(r[8]));
        c.failed = parse_double(r[9]) != 0.0;
        cells.push_back(c);
    }
    ErrorStatistics st = error_statistics(cells);
    int recovered = 0;
    for (const auto& c : cells)
        if (!c.failed && c.error < 1e-6) recovered++;

    std::vector<std::string> files;
    std::string manifest_path;
    if (!out_arg.empty()) {
        std::string out = resolve_out(out_arg);
        std::string hist_path = out + "_hist.csv";
        std::string surv_path = out + "_surv.csv";
        manifest_path = out + "_manifest.json";
        write_stats_csvs(hist_path, surv_path, st);
        files = {hist_path, surv_path};
        json manifest = make_manifest("stats", json{{"cells", cells_file}}, {seed}, threads,
                                      timer.secs(), files);
        write_json_file(manifest_path, manifest);
    }

    if (as_json) {
        json j{{"command", "stats"},
               {"cells", static_cast<int>(cells.size())},
               {"exact_recovered", recovered},
               {"bin_left", st.bin_left},
               {"counts", st.counts},
               {"survivor_edges", st.survivor_edges},
               {"survivor", st.survivor}};
        std::printf("%s\n", j.dump(2).c_str());
        return;
    }
    std::printf("%zu cell(s), %d recovered exactly\n", cells.size(), recovered);
    for (std::size_t i = 0; i < st.bin_left.size(); ++i)
        std::printf("  [%5.2f, %5.2f)  %ld\n", st.bin_left[i], st.bin_left[i] + 0.5,
                    st.counts[i]);
    if (!files.empty())
        std::printf("wrote %s %s %s\n", files[0].c_str(), files[1].c_str(),
                    manifest_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spherical code construction and measurement-matrix evaluation"};
    app.require_subcommand(1);

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "print coherence lower bounds for (m, n)");
    int b_m = 0, b_n = 0;
    bool b_json = false;
    std::uint64_t b_seed = 1;
    bounds_cmd->add_option("--m", b_m, "vector dimension")->required();
    bounds_cmd->add_option("--n", b_n, "number of codewords")->required();
    bounds_cmd->add_flag("--json", b_json, "JSON output");
    bounds_cmd->add_option("--seed", b_seed, "unused; accepted for interface uniformity");
    bounds_cmd->callback([&] { cmd_bounds(b_m, b_n, b_json); });

    // construct
    auto* con_cmd = app.add_subcommand("construct", "build a code by damped force iteration");
    ConstructFlags con;
    std::string con_out = "code";
    bool con_json = false;
    con_cmd->add_option("--m", con.m, "vector dimension")->required();
    con_cmd->add_option("--n", con.n, "number of codewords")->required();
    con_cmd->add_option("--seed", con.seed, "base seed; run i uses seed+i");
    add_construct_flags(con_cmd, con);
    con_cmd->add_option("--out", con_out, "output prefix");
    con_cmd->add_flag("--json", con_json, "JSON output");
    con_cmd->callback([&] { cmd_construct(con, con_out, con_json); });

    // coherence
    auto* coh_cmd = app.add_subcommand("coherence", "report the coherence of a saved code");
    std::string coh_file;
    bool coh_json = false;
    std::uint64_t coh_seed = 1;
    coh_cmd->add_option("file", coh_file, "code JSON file")->required();
    coh_cmd->add_flag("--json", coh_json, "JSON output");
    coh_cmd->add_option("--seed", coh_seed, "unused; accepted for interface uniformity");
    coh_cmd->callback([&] { cmd_coherence(coh_file, coh_json); });

    // sweep
    auto* sw_cmd = app.add_subcommand("sweep", "repeat construction along one parameter axis");
    ConstructFlags sw;
    std::string sw_axis, sw_out = "sweep";
    double sw_from = 0, sw_to = 0, sw_step = 1;
    bool sw_json = false;
    sw_cmd->add_option("--axis", sw_axis, "swept parameter")
        ->required()
        ->check(CLI::IsMember({"k", "radius", "nrot", "m", "n"}));
    sw_cmd->add_option("--from", sw_from, "first axis value")->required();
    sw_cmd->add_option("--to", sw_to, "last axis value")->required();
    sw_cmd->add_option("--step", sw_step, "axis increment");
    sw_cmd->add_option("--m", sw.m, "vector dimension");
    sw_cmd->add_option("--n", sw.n, "number of codewords");
    sw_cmd->add_option("--seed", sw.seed, "base seed; run i uses seed+i");
    add_construct_flags(sw_cmd, sw);
    sw_cmd->add_option("--out", sw_out, "output prefix");
    sw_cmd->add_flag("--json", sw_json, "JSON output");
    sw_cmd->callback([&] { cmd_sweep(sw, sw_axis, sw_from, sw_to, sw_step, sw_out, sw_json); });

    // phase-diagram
    auto* pd_cmd = app.add_subcommand(
        "phase-diagram", "sparse-recovery success grid for one matrix ensemble");
    ConstructFlags pd;
    pd.n = 128;
    std::string pd_kind = "gaussian", pd_out = "phase";
    int pd_grid = 16;
    double pd_stop_tol = 1e-10;
    long pd_max_iters = 20000;
    bool pd_json = false;
    pd_cmd->add_option("--n", pd.n, "signal length");
    pd_cmd->add_option("--kind", pd_kind, "matrix ensemble")
        ->check(CLI::IsMember({"gaussian", "fourier", "ann-bcasc", "reference-bcasc"}));
    pd_cmd->add_option("--grid", pd_grid, "grid steps per axis")->check(CLI::PositiveNumber);
    pd_cmd->add_option("--seed", pd.seed, "sweep seed");
    pd_cmd->add_option("--stop-tol", pd_stop_tol, "solver stopping tolerance");
    pd_cmd->add_option("--max-iters", pd_max_iters, "solver iteration cap");
    add_construct_flags(pd_cmd, pd);
    pd_cmd->add_option("--out", pd_out, "output prefix");
    pd_cmd->add_flag("--json", pd_json, "JSON output");
    pd_cmd->callback([&] {
        cmd_phase_diagram(pd, pd_grid, pd_stop_tol, pd_max_iters, pd_kind, pd_out, pd_json);
    });

    // stats
    auto* st_cmd =
        app.add_subcommand("stats", "recompute error statistics from a cells CSV");
    std::string st_cells, st_out;
    bool st_json = false;
    std::uint64_t st_seed = 1;
    int st_threads = 1;
    st_cmd->add_option("--cells", st_cells, "cells CSV from phase-diagram")->required();
    st_cmd->add_option("--out", st_out, "optional output prefix");
    st_cmd->add_flag("--json", st_json, "JSON output");
    st_cmd->add_option("--seed", st_seed, "unused; accepted for interface uniformity");
    st_cmd->callback([&] { cmd_stats(st_cells, st_out, st_json, st_seed, st_threads); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
