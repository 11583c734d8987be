// spmesl: generate / penalty / estimate / evaluate / bench / pipeline.
#include <spmesl/bench.hpp>
#include <spmesl/config.hpp>
#include <spmesl/csv_io.hpp>
#include <spmesl/metrics.hpp>
#include <spmesl/networks.hpp>
#include <spmesl/pipeline.hpp>
#include <spmesl/rng.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <sstream>

using namespace spmesl;
using nlohmann::json;

namespace {

// Value from the command line if given, else from the config, else the default.
template <class T>
void merge(const CLI::Option* opt, T& target, const T& from_config)
{
    if (opt == nullptr || opt->count() == 0)
        target = from_config;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tuning-free sparse precision matrix estimation via the scaled lasso"};
    app.require_subcommand(1);
    std::string config_path;
    std::size_t threads = 0;
    app.add_option("--config", config_path, "RunConfig JSON; explicit flags take precedence");
    auto* threads_opt = app.add_option("--threads", threads, "worker cap (0 = auto)");

    // generate
    auto* gen = app.add_subcommand("generate", "ground-truth network and Gaussian samples");
    std::string g_kind = "ar1", g_data, g_omega, g_edges;
    std::size_t g_p = 100, g_n = 250, g_sub = 100;
    std::uint64_t g_seed = 1;
    double g_alpha = 2.3;
    auto* g_kind_opt = gen->add_option("--kind", g_kind, "ar1|ar4|sf|hub");
    auto* g_p_opt = gen->add_option("--p", g_p, "variables");
    auto* g_n_opt = gen->add_option("--n", g_n, "samples");
    auto* g_seed_opt = gen->add_option("--seed", g_seed, "seed");
    auto* g_alpha_opt = gen->add_option("--alpha", g_alpha, "power-law exponent (sf)");
    auto* g_sub_opt = gen->add_option("--subnetwork-size", g_sub, "block size (sf, hub)");
    gen->add_option("--out-data", g_data, "samples CSV")->required();
    gen->add_option("--out-omega", g_omega, "true precision CSV");
    gen->add_option("--out-edges", g_edges, "true edge list CSV");

    // penalty
    auto* pen = app.add_subcommand("penalty", "print a penalty level as JSON");
    std::size_t pen_n = 0, pen_p = 0;
    std::string pen_rule = "ub";
    std::optional<double> pen_A, pen_lambda0;
    pen->add_option("--n", pen_n, "samples")->required();
    pen->add_option("--p", pen_p, "variables")->required();
    auto* pen_rule_opt = pen->add_option("--rule", pen_rule, "univ|ub|pb|fixed");
    auto* pen_A_opt = pen->add_option("--A", pen_A, "amplification constant");
    auto* pen_l_opt = pen->add_option("--lambda0", pen_lambda0, "value for rule=fixed");

    // estimate
    auto* est = app.add_subcommand("estimate", "estimate a sparse precision matrix");
    std::string e_data, e_rule = "ub", e_solver = "cd", e_out, e_edges, e_summary;
    std::optional<double> e_A, e_lambda0;
    double e_delta = 1e-4;
    std::size_t e_max_outer = 100, e_max_inner = 10000;
    auto* e_data_opt = est->add_option("--data", e_data, "samples CSV (rows = samples)");
    auto* e_rule_opt = est->add_option("--rule", e_rule, "univ|ub|pb|fixed");
    auto* e_A_opt = est->add_option("--A", e_A, "amplification constant");
    auto* e_l_opt = est->add_option("--lambda0", e_lambda0, "value for rule=fixed");
    auto* e_solver_opt = est->add_option("--solver", e_solver, "cd|pcd");
    auto* e_delta_opt = est->add_option("--delta", e_delta, "convergence tolerance");
    auto* e_mo_opt = est->add_option("--max-outer", e_max_outer, "outer iteration cap");
    auto* e_mi_opt = est->add_option("--max-inner", e_max_inner, "inner sweep cap");
    est->add_option("--out", e_out, "estimated precision CSV")->required();
    est->add_option("--edges", e_edges, "estimated edge list CSV");
    est->add_option("--summary", e_summary, "run summary JSON");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "edge recovery and Frobenius error");
    std::string ev_est, ev_truth, ev_out;
    ev->add_option("--estimate", ev_est, "estimated precision CSV")->required();
    ev->add_option("--truth", ev_truth, "true precision CSV")->required();
    ev->add_option("--out", ev_out, "report JSON (stdout if omitted)");

    // bench
    auto* be = app.add_subcommand("bench", "time the solvers over a grid of simulated datasets");
    std::string b_networks = "ar1", b_p = "200", b_n = "100", b_solvers = "cd", b_rule = "ub";
    std::string b_records = "bench_records.csv", b_summary = "bench_summary.csv";
    std::size_t b_reps = 3;
    std::uint64_t b_seed = 1;
    auto* b_net_opt = be->add_option("--networks", b_networks, "comma list of ar1|ar4|sf|hub");
    auto* b_p_opt = be->add_option("--p", b_p, "comma list of p");
    auto* b_n_opt = be->add_option("--n", b_n, "comma list of n");
    auto* b_sol_opt = be->add_option("--solvers", b_solvers, "comma list of cd|pcd");
    auto* b_rep_opt = be->add_option("--replicates", b_reps, "datasets per cell");
    auto* b_seed_opt = be->add_option("--seed", b_seed, "seed");
    auto* b_rule_opt = be->add_option("--rule", b_rule, "univ|ub|pb");
    be->add_option("--out-records", b_records, "raw records CSV");
    be->add_option("--out-summary", b_summary, "per-cell mean/stderr CSV");

    // pipeline
    auto* pl = app.add_subcommand("pipeline", "generate -> penalty -> estimate -> evaluate");
    std::string pl_kind = "ar1", pl_rule = "ub", pl_solver = "cd", pl_out = "out", pl_data;
    std::size_t pl_p = 100, pl_n = 250;
    std::uint64_t pl_seed = 1;
    pl->add_option("--kind", pl_kind, "network kind when generating");
    pl->add_option("--p", pl_p, "variables");
    pl->add_option("--n", pl_n, "samples");
    pl->add_option("--seed", pl_seed, "seed");
    pl->add_option("--rule", pl_rule, "univ|ub|pb|fixed");
    pl->add_option("--solver", pl_solver, "cd|pcd");
    pl->add_option("--data", pl_data, "use this CSV instead of generating");
    pl->add_option("--out-dir", pl_out, "artifact directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::optional<RunConfig> cfg;
        if (!config_path.empty())
            cfg = load_run_config(config_path);
        if (cfg)
            merge(threads_opt, threads, cfg->threads);

        if (gen->parsed()) {
            if (cfg && cfg->generate) {
                merge(g_kind_opt, g_kind, cfg->generate->kind);
                merge(g_p_opt, g_p, cfg->generate->p);
                merge(g_n_opt, g_n, cfg->generate->n);
                merge(g_alpha_opt, g_alpha, cfg->generate->alpha);
                merge(g_sub_opt, g_sub, cfg->generate->subnetwork_size);
                merge(g_seed_opt, g_seed, cfg->seed);
            }
            sim::NetworkSpec spec;
            spec.kind = sim::parse_network_kind(g_kind);
            spec.p = g_p;
            spec.seed = g_seed;
            spec.alpha = g_alpha;
            spec.subnetwork_size = g_sub;
            const auto truth = sim::generate(spec);
            io::write_matrix_csv(g_data, sim::sample_gaussian(truth, g_n, derive_seed(g_seed, 0xDA7A)));
            if (!g_omega.empty())
                io::write_matrix_csv(g_omega, truth.omega);
            if (!g_edges.empty())
                io::write_edges_csv(g_edges, truth.omega);
        } else if (pen->parsed()) {
            if (cfg) {
                merge(pen_rule_opt, pen_rule, cfg->penalty.rule);
                merge(pen_A_opt, pen_A, cfg->penalty.A);
                merge(pen_l_opt, pen_lambda0, cfg->penalty.lambda0);
            }
            const auto s = resolve_penalty(parse_penalty_kind(pen_rule), pen_n, pen_p, pen_A, pen_lambda0);
            std::cout << penalty_json(s).dump() << "\n";
        } else if (est->parsed()) {
            if (cfg) {
                if (cfg->estimate.data)
                    merge(e_data_opt, e_data, *cfg->estimate.data);
                merge(e_rule_opt, e_rule, cfg->penalty.rule);
                merge(e_A_opt, e_A, cfg->penalty.A);
                merge(e_l_opt, e_lambda0, cfg->penalty.lambda0);
                merge(e_solver_opt, e_solver, cfg->estimate.solver);
                merge(e_delta_opt, e_delta, cfg->estimate.delta);
                merge(e_mo_opt, e_max_outer, cfg->estimate.max_outer);
                merge(e_mi_opt, e_max_inner, cfg->estimate.max_inner);
            }
            if (e_data.empty())
                throw ValidationError("--data is required");
            const auto raw = io::read_matrix_csv(e_data);
            const auto penalty = resolve_penalty(parse_penalty_kind(e_rule), raw.rows(), raw.cols(),
                                                 e_A, e_lambda0);
            SolverOptions opts;
            opts.delta = e_delta;
            opts.max_outer = e_max_outer;
            opts.max_inner = e_max_inner;
            opts.threads = threads;
            const auto result = estimate(raw, penalty, parse_solver_kind(e_solver), opts);
            io::write_matrix_csv(e_out, result.omega);
            if (!e_edges.empty())
                io::write_edges_csv(e_edges, result.omega);
            if (!e_summary.empty())
                io::write_file(e_summary, estimate_summary_json(result).dump(2) + "\n");
            if (result.converged_columns < raw.cols()) {
                std::cerr << "warning: " << raw.cols() - result.converged_columns
                          << " column(s) did not converge\n";
                return 3;
            }
        } else if (ev->parsed()) {
            const auto hat = io::read_matrix_csv(ev_est);
            const auto truth = io::read_matrix_csv(ev_truth);
            const auto report = metrics::evaluate(metrics::confusion(hat, truth), hat, truth);
            const auto text = report_json(report).dump(2) + "\n";
            if (ev_out.empty())
                std::cout << text;
            else
                io::write_file(ev_out, text);
        } else if (be->parsed()) {
            if (cfg && cfg->bench) {
                const auto& b = *cfg->bench;
                auto join = [](const auto& v) {
                    std::string s;
                    for (const auto& x : v) {
                        std::ostringstream os;
                        os << x;
                        s += (s.empty() ? "" : ",") + os.str();
                    }
                    return s;
                };
                merge(b_net_opt, b_networks, join(b.networks));
                merge(b_p_opt, b_p, join(b.p));
                merge(b_n_opt, b_n, join(b.n));
                merge(b_sol_opt, b_solvers, join(b.solvers));
                merge(b_rep_opt, b_reps, b.replicates);
                merge(b_rule_opt, b_rule, b.rule);
                merge(b_seed_opt, b_seed, cfg->seed);
            }
            bench::BenchGrid grid;
            grid.networks.clear();
            for (const auto& s : split_list(b_networks))
                grid.networks.push_back(sim::parse_network_kind(s));
            grid.p_list.clear();
            for (const auto& s : split_list(b_p))
                grid.p_list.push_back(std::stoul(s));
            grid.n_list.clear();
            for (const auto& s : split_list(b_n))
                grid.n_list.push_back(std::stoul(s));
            grid.solvers.clear();
            for (const auto& s : split_list(b_solvers))
                grid.solvers.push_back(parse_solver_kind(s));
            grid.replicates = b_reps;
            grid.seed = b_seed;
            grid.rule = parse_penalty_kind(b_rule);
            grid.options.threads = threads;
            const auto result = bench::run_bench(grid);
            bench::write_records_csv(b_records, result.records);
            bench::write_summary_csv(b_summary, result.cells);
            for (const auto& c : result.cells)
                std::cout << sim::to_string(c.network) << " p=" << c.p << " n=" << c.n << " "
                          << to_string(c.solver) << ": " << c.mean << " s (se " << c.std_error
                          << ", " << c.count << " reps)\n";
        } else if (pl->parsed()) {
            RunConfig rc;
            if (cfg) {
                rc = *cfg;
            } else {
                rc.seed = pl_seed;
                rc.out_dir = pl_out;
                rc.penalty.rule = pl_rule;
                rc.estimate.solver = pl_solver;
                if (pl_data.empty()) {
                    GenerateConfig g;
                    g.kind = pl_kind;
                    g.p = pl_p;
                    g.n = pl_n;
                    rc.generate = g;
                } else {
                    rc.estimate.data = pl_data;
                }
            }
            rc.threads = threads;
            const auto result = run_pipeline(rc);
            for (const auto& [name, path] : result.artifacts)
                std::cout << name << " " << path.string() << "\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
