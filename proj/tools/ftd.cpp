#include "ftd/ftd.hpp"
#include "ftd/rng.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace ftd;

namespace
{
    std::string fmt(double x)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }

    /// "ftd <sub>" followed by every long flag, global ones first, with its effective value.
    std::vector<std::string> provenance(const CLI::App *sub)
    {
        std::vector<std::string> lines{"ftd " + sub->get_name()};
        std::vector<const CLI::Option *> options = sub->get_parent()->get_options();
        for (const CLI::Option *opt : sub->get_options())
            options.push_back(opt);
        for (const CLI::Option *opt : options) {
            std::string name = opt->get_name(false, true);
            if (name.empty() || name == "--help" || name == "-h" || name == "--config")
                continue;
            auto longs = opt->get_lnames();
            if (longs.empty())
                continue;
            std::string value;
            if (opt->count() > 0) {
                for (const auto &r : opt->results())
                    value += (value.empty() ? "" : " ") + r;
                if (value.empty())
                    value = "true";
            }
            else {
                value = opt->get_default_str();
                if (value.empty())
                    continue;
            }
            lines.push_back("--" + longs.front() + "=" + value);
        }
        return lines;
    }

    void print_header(std::ostream &out, const std::vector<std::string> &lines)
    {
        for (const auto &l : lines)
            out << "# " << l << '\n';
    }

    fs::path output_path(const std::string &out_dir, const std::string &file)
    {
        fs::path dir(out_dir);
        fs::create_directories(dir);
        return dir / file;
    }

    std::ofstream open_out(const fs::path &path)
    {
        std::ofstream out(path);
        if (! out)
            throw InvalidInput("cannot write " + path.string());
        return out;
    }

    struct GraphSource
    {
        std::string file;
        Vertex n = 0;
        double p = -1.0;
        std::uint64_t seed = 1;

        void add(CLI::App *sub)
        {
            sub->add_option("--graph", file, "Graph file");
            sub->add_option("--n", n, "Vertices for G(n, p)");
            sub->add_option("--p", p, "Edge probability for G(n, p)");
            sub->add_option("--seed", seed, "Seed for G(n, p)")->capture_default_str();
        }

        Graph load() const
        {
            if (! file.empty())
                return read_graph(fs::path(file));
            if (n <= 0 || p < 0.0)
                throw InvalidInput("give --graph or both --n and --p");
            return gen_gnp(n, p, seed);
        }

        /// Edge probability to compare against: the given p, or the empirical density of a file.
        double density(const Graph &g) const
        {
            if (file.empty())
                return p;
            double pairs = g.num_vertices() * (g.num_vertices() - 1.0) / 2.0;
            return pairs > 0 ? static_cast<double>(g.num_edges()) / pairs : 0.0;
        }
    };

    struct SolverFlags
    {
        SolveOptions opts;
        std::string op = "pinwheel";

        void add(CLI::App *sub)
        {
            sub->add_option("--k", opts.k, "Wheel half-length (pinwheels use 2k-cycles)")->capture_default_str();
            sub->add_option("--eps-stop", opts.eps_stop, "Stop once delta_inf is at most this")->capture_default_str();
            sub->add_option("--eps-neg", opts.eps_neg, "Tolerated negative weight")->capture_default_str();
            sub->add_option("--max-iters", opts.max_iters, "Stage-3 iteration cap")->capture_default_str();
            sub->add_option("--op", op, "Discrepancy operator: pinwheel or naive")->capture_default_str();
            sub->add_option("--matrix-budget", opts.matrix_budget, "Doubles of per-centre matrices to precompute")->capture_default_str();
        }

        SolveOptions get(int threads) const
        {
            SolveOptions o = opts;
            if (op == "pinwheel")
                o.op = Operator::pinwheel;
            else if (op == "naive")
                o.op = Operator::naive;
            else
                throw InvalidInput("unknown operator \"" + op + "\"");
            o.threads = threads;
            o.validate();
            return o;
        }
    };

    void print_report(std::ostream &out, const std::string &what, const DiscrepancyReport &r)
    {
        out << what << ": delta_inf=" << fmt(r.delta_inf) << " max_vertex_defect=" << fmt(r.max_vertex_defect) << " total_weight=" << fmt(r.total_weight)
            << " min_weight=" << fmt(r.min_weight) << '\n';
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Fractional triangle decompositions of random graphs"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with flag values");
    std::string out_dir = ".";
    int threads = 1;
    app.add_option("--out-dir", out_dir, "Directory for all artifacts")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads; results do not depend on it")->capture_default_str();

    std::map<std::string, std::function<int(CLI::App *)>> handlers;

    // gen
    auto *gen = app.add_subcommand("gen", "Sample G(n, p) or the random graph process");
    Vertex gen_n = 0;
    double gen_p = -1.0;
    std::uint64_t gen_seed = 1;
    bool gen_process_flag = false;
    std::string gen_out;
    gen->add_option("--n", gen_n, "Vertices")->required();
    gen->add_option("--p", gen_p, "Edge probability");
    gen->add_flag("--process", gen_process_flag, "Random graph process up to completion, with tau");
    gen->add_option("--seed", gen_seed, "Seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output file name (inside --out-dir)");
    handlers["gen"] = [&](CLI::App *sub) {
        auto header = provenance(sub);
        if (gen_process_flag) {
            auto trace = gen_process(gen_n, gen_seed);
            auto out = open_out(output_path(out_dir, gen_out.empty() ? "process.txt" : gen_out));
            print_header(out, header);
            write_process(out, trace);
            std::cout << "n=" << gen_n << " steps=" << trace.order.size() << " tau=" << trace.tau << '\n';
            return 0;
        }
        if (gen_p < 0.0)
            throw InvalidInput("gen needs --p or --process");
        Graph g = gen_gnp(gen_n, gen_p, gen_seed);
        auto out = open_out(output_path(out_dir, gen_out.empty() ? "graph.txt" : gen_out));
        write_graph(out, g, header);
        std::cout << "n=" << g.num_vertices() << " m=" << g.num_edges() << '\n';
        return 0;
    };

    // solve
    auto *solve_cmd = app.add_subcommand("solve", "Run the three-stage solver");
    GraphSource solve_src;
    SolverFlags solve_flags;
    solve_src.add(solve_cmd);
    solve_flags.add(solve_cmd);
    handlers["solve"] = [&](CLI::App *sub) {
        auto header = provenance(sub);
        Graph g = solve_src.load();
        TriangleIndex ti(g);
        auto opts = solve_flags.get(threads);
        auto rep = solve(g, ti, opts);
        header.push_back("status " + to_string(rep.status));
        {
            auto out = open_out(output_path(out_dir, "weighting.txt"));
            write_weighting(out, ti, rep.weighting, header);
        }
        {
            auto out = open_out(output_path(out_dir, "trajectory.csv"));
            write_trajectory(out, rep.trajectory, header);
        }
        std::cout << "status " << to_string(rep.status) << (rep.message.empty() ? "" : ": " + rep.message) << '\n';
        std::cout << "n=" << g.num_vertices() << " m=" << g.num_edges() << " triangles=" << ti.size() << " iterations=" << rep.iterations << '\n';
        print_report(std::cout, "final", rep.final_report);
        return 0;
    };

    // check
    auto *check = app.add_subcommand("check", "Discrepancy report and FTD verdict for a weighting");
    std::string check_graph, check_weighting;
    double check_tol = 1e-9;
    check->add_option("--graph", check_graph, "Graph file")->required();
    check->add_option("--weighting", check_weighting, "Weighting file")->required();
    check->add_option("--tol", check_tol, "Tolerance for the FTD verdict")->capture_default_str();
    handlers["check"] = [&](CLI::App *) {
        Graph g = read_graph(fs::path(check_graph));
        TriangleIndex ti(g);
        std::ifstream in(check_weighting);
        if (! in)
            throw InvalidInput("cannot open " + check_weighting);
        Weighting w = read_weighting(in, ti);
        print_report(std::cout, "report", report(g, ti, w));
        std::cout << "ftd " << (is_ftd(g, ti, w, check_tol) ? "yes" : "no") << '\n';
        return 0;
    };

    // oracle
    auto *oracle = app.add_subcommand("oracle", "Decide FTD existence by linear programming");
    GraphSource oracle_src;
    bool oracle_force = false, oracle_exact = false;
    oracle_src.add(oracle);
    oracle->add_flag("--force-lp", oracle_force, "Skip the uncovered-edge shortcut");
    oracle->add_flag("--exact", oracle_exact, "Exact rational arithmetic (n <= 12)");
    handlers["oracle"] = [&](CLI::App *sub) {
        auto header = provenance(sub);
        Graph g = oracle_src.load();
        TriangleIndex ti(g);
        OracleOptions o;
        o.force_lp = oracle_force;
        o.exact = oracle_exact;
        auto r = decide_ftd(g, ti, o);
        bool verified = verify_certificate(g, ti, r);
        header.push_back("verdict " + to_string(r.verdict) + " method " + r.method);
        if (r.verdict == Verdict::feasible) {
            auto out = open_out(output_path(out_dir, "witness.txt"));
            write_weighting(out, ti, r.weighting, header);
        }
        else if (! r.certificate.empty()) {
            auto out = open_out(output_path(out_dir, "farkas.txt"));
            write_certificate(out, g, r, header);
        }
        std::cout << to_string(r.verdict);
        if (r.uncovered_edge)
            std::cout << " edge " << r.uncovered_edge->u << "-" << r.uncovered_edge->v;
        std::cout << " method=" << r.method << " verified=" << (verified ? "yes" : "no") << (r.message.empty() ? "" : " (" + r.message + ")") << '\n';
        return 0;
    };

    // verify
    auto *verify = app.add_subcommand("verify", "Rooted density and degeneracy checks");
    std::string verify_family = "suite", verify_pattern, verify_alpha, verify_hdir;
    std::vector<int> verify_params;
    int verify_k = -1;
    verify->add_option("--family", verify_family, "suite, P, Q, or a family name: wheel, segment, bowtie, W, W2")->capture_default_str();
    verify->add_option("--params", verify_params, "Family parameters, e.g. 2 for W(2)");
    verify->add_option("--pattern", verify_pattern, "Pattern file");
    verify->add_option("--alpha", verify_alpha, "Density bound, e.g. 11/4");
    verify->add_option("--k", verify_k, "Degeneracy bound");
    verify->add_option("--h-dir", verify_hdir, "Directory with H1.pat .. H6.pat");
    handlers["verify"] = [&](CLI::App *sub) {
        auto header = provenance(sub);
        SuiteReport rep;
        if (! verify_pattern.empty() || (verify_family != "suite" && verify_family != "P" && verify_family != "Q")) {
            RootedPattern p = verify_pattern.empty() ? build_family(verify_family, verify_params) : read_pattern(fs::path(verify_pattern));
            if (verify_k >= 0)
                rep.rows.push_back(check_degeneracy(p.name, p, verify_k));
            if (! verify_alpha.empty() || verify_k < 0)
                rep.rows.push_back(check_density(p.name, p, parse_ratio(verify_alpha.empty() ? "11/4" : verify_alpha)));
        }
        else if (verify_family == "suite") {
            SuiteOptions so;
            if (! verify_hdir.empty())
                so.h_dir = fs::path(verify_hdir);
            so.threads = threads;
            rep = verify_standard_suite(so);
        }
        else {
            auto cases = verify_family == "P" ? p_cases() : q_cases();
            for (const auto &c : cases)
                rep.rows.push_back(verify_k >= 0 ? check_degeneracy(c.id, c.pattern, verify_k)
                                                 : check_density(c.id, c.pattern, parse_ratio(verify_alpha.empty() ? "11/4" : verify_alpha)));
        }
        write_suite_table(std::cout, rep);
        auto out = open_out(output_path(out_dir, "verify.csv"));
        write_suite_csv(out, rep, header);
        return 0;
    };

    // scan
    auto *scan = app.add_subcommand("scan", "Threshold scan over c with p = c p_Delta");
    ScanConfig scan_cfg;
    std::string scan_method = "lp";
    SolverFlags scan_solver;
    scan->add_option("--n", scan_cfg.n, "Vertices")->capture_default_str();
    scan->add_option("--c", scan_cfg.c_grid, "Grid of multipliers")->capture_default_str()->delimiter(',');
    scan->add_option("--trials", scan_cfg.trials, "Trials per grid point")->capture_default_str();
    scan->add_option("--seed", scan_cfg.seed, "Base seed")->capture_default_str();
    scan->add_option("--method", scan_method, "lp, solver or both")->capture_default_str();
    scan->add_flag("--timing", scan_cfg.timing, "Fill the secs column (makes the CSV run-dependent)");
    scan_solver.add(scan);
    handlers["scan"] = [&](CLI::App *sub) {
        auto header = provenance(sub);
        scan_cfg.method = parse_decision_method(scan_method);
        scan_cfg.threads = threads;
        scan_cfg.solve = scan_solver.get(1);
        auto rows = threshold_scan(scan_cfg);
        for (const auto &r : rows) {
            std::cout << "c=" << fmt(r.c) << " p=" << fmt(r.p) << " uncovered=" << r.uncovered << " ftd=" << r.ftd << " anomaly=" << r.anomaly;
            if (r.inconclusive)
                std::cout << " (inconclusive " << r.inconclusive << ")";
            if (scan_cfg.method == DecisionMethod::both)
                std::cout << " solver_misses=" << r.solver_misses;
            std::cout << '\n';
        }
        auto out = open_out(output_path(out_dir, "scan.csv"));
        write_scan_csv(out, scan_cfg.n, rows, header);
        return 0;
    };

    // hitting
    auto *hitting = app.add_subcommand("hitting", "FTD at the hitting time of triangle coverage");
    Vertex hit_n = 200;
    int hit_trials = 20;
    std::uint64_t hit_seed = 1;
    bool hit_later = false;
    hitting->add_option("--n", hit_n, "Vertices")->capture_default_str();
    hitting->add_option("--trials", hit_trials, "Trials")->capture_default_str();
    hitting->add_option("--seed", hit_seed, "Base seed")->capture_default_str();
    hitting->add_flag("--later", hit_later, "Also decide at tau + 10 and tau + 50");
    handlers["hitting"] = [&](CLI::App *sub) {
        auto header = provenance(sub);
        auto records = hitting_time_trials(hit_n, hit_trials, hit_seed, hit_later, threads);
        int feasible = 0;
        for (const auto &r : records)
            feasible += r.verdict == Verdict::feasible;
        std::cout << feasible << "/" << records.size() << " FEASIBLE at tau\n";
        auto out = open_out(output_path(out_dir, "hitting.csv"));
        write_hitting_csv(out, hit_n, records, header);
        return 0;
    };

    // profile
    auto *profile = app.add_subcommand("profile", "Solver convergence profile over seeds");
    Vertex prof_n = 50;
    double prof_p = 0.4;
    std::vector<std::uint64_t> prof_seeds{1, 2, 3, 4, 5};
    SolverFlags prof_solver;
    profile->add_option("--n", prof_n, "Vertices")->capture_default_str();
    profile->add_option("--p", prof_p, "Edge probability")->capture_default_str();
    profile->add_option("--seeds", prof_seeds, "Seeds")->capture_default_str()->delimiter(',');
    prof_solver.add(profile);
    handlers["profile"] = [&](CLI::App *sub) {
        auto header = provenance(sub);
        auto res = convergence_profile(prof_n, prof_p, prof_seeds, prof_solver.get(1), threads);
        if (res.warning)
            std::cerr << "warning: " << *res.warning << '\n';
        for (const auto &run : res.runs)
            std::cout << "seed " << run.seed << ": " << to_string(run.status) << " after " << (run.trajectory.empty() ? 0 : run.trajectory.back().iter)
                      << " iterations, delta_inf " << (run.trajectory.empty() ? std::string("n/a") : fmt(run.trajectory.back().delta_inf))
                      << (run.message.empty() ? "" : " (" + run.message + ")") << '\n';
        auto out = open_out(output_path(out_dir, "profile.csv"));
        write_profile_csv(out, res, header);
        return 0;
    };

    // plot
    auto *plot = app.add_subcommand("plot", "SVG from a scan or trajectory CSV");
    std::string plot_csv, plot_kind, plot_out;
    plot->add_option("--csv", plot_csv, "Input CSV")->required();
    plot->add_option("--kind", plot_kind, "scan or trajectory")->required();
    plot->add_option("--out", plot_out, "Output SVG name (inside --out-dir)");
    handlers["plot"] = [&](CLI::App *) {
        auto kind = parse_plot_kind(plot_kind);
        std::string name = plot_out.empty() ? fs::path(plot_csv).stem().string() + ".svg" : plot_out;
        fs::path target = fs::path(out_dir) / name;
        fs::create_directories(fs::path(out_dir));
        emit_plot(fs::path(plot_csv), kind, target);
        std::cout << "wrote " << target.string() << '\n';
        return 0;
    };

    // stats
    auto *stats = app.add_subcommand("stats", "Degree/codegree concentration and gadget counts");
    GraphSource stats_src;
    int stats_k = 4;
    stats_src.add(stats);
    stats->add_option("--k", stats_k, "Wheel half-length")->capture_default_str();
    handlers["stats"] = [&](CLI::App *) {
        Graph g = stats_src.load();
        double p = stats_src.density(g);
        auto s = graph_stats(g, p);
        std::cout << "n=" << s.n << " m=" << s.m << " p=" << fmt(p) << " np^2=" << fmt(s.n * p * p) << '\n';
        std::cout << "degree " << s.min_degree << ".." << s.max_degree << " deviation " << fmt(s.degree_deviation) << " tolerance " << fmt(s.degree_tolerance)
                  << (s.degrees_concentrated ? " ok" : " OUT") << '\n';
        std::cout << "codegree " << s.min_codegree << ".." << s.max_codegree << " deviation " << fmt(s.codegree_deviation) << " tolerance "
                  << fmt(s.codegree_tolerance) << (s.codegrees_concentrated ? " ok" : " OUT") << '\n';
        auto d = stage_diagnostics(g, p, stats_k, threads);
        std::cout << "bowties per ordered pair " << d.bowtie_min << ".." << d.bowtie_max << " expected " << fmt(d.bowtie_expected) << " deviation "
                  << fmt(d.bowtie_deviation) << (d.all_bowties_positive ? "" : " (some pair has none)") << '\n';
        std::cout << "pinwheels per edge " << d.pinwheel_min << ".." << d.pinwheel_max << " expected " << fmt(d.pinwheel_expected) << " deviation "
                  << fmt(d.pinwheel_deviation) << (d.all_pinwheels_positive ? "" : " (some edge has none)") << '\n';
        return 0;
    };

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        for (auto *sub : app.get_subcommands())
            return handlers.at(sub->get_name())(sub);
    }
    catch (const CapacityExceeded &e) {
        std::cerr << "refused: " << e.what() << '\n';
        return 2;
    }
    catch (const SizeLimit &e) {
        std::cerr << "refused: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
