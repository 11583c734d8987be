#include <spmesl/bench.hpp>
#include <spmesl/csv_io.hpp>
#include <spmesl/errors.hpp>
#include <spmesl/rng.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

namespace spmesl::bench {

std::uint64_t replicate_seed(std::uint64_t seed, sim::NetworkKind network, std::size_t p,
                             std::size_t n, std::size_t replicate)
{
    const std::uint64_t cell = mix64(static_cast<std::uint64_t>(network) * 0x100000001B3ULL ^
                                     mix64(p) ^ (mix64(n) << 1));
    return derive_seed(seed, cell, replicate);
}

BenchResult run_bench(const BenchGrid& grid)
{
    BenchResult out;
    for (auto network : grid.networks)
        for (auto n : grid.n_list)
            for (auto p : grid.p_list)
                for (std::size_t r = 0; r < grid.replicates; ++r) {
                    const auto seed = replicate_seed(grid.seed, network, p, n, r);
                    Matrix data;
                    std::string gen_error;
                    try {
                        sim::NetworkSpec spec;
                        spec.kind = network;
                        spec.p = p;
                        spec.seed = seed;
                        if (p < spec.subnetwork_size)
                            spec.subnetwork_size = p;
                        const auto truth = sim::generate(spec);
                        data = sim::sample_gaussian(truth, n, derive_seed(seed, 0xDA7A));
                    } catch (const std::exception& e) {
                        gen_error = std::string("generate: ") + e.what();
                    }
                    for (auto solver : grid.solvers) {
                        BenchRecord rec;
                        rec.solver = solver;
                        rec.network = network;
                        rec.p = p;
                        rec.n = n;
                        rec.replicate = r;
                        if (!gen_error.empty()) {
                            rec.error = gen_error;
                            out.records.push_back(rec);
                            continue;
                        }
                        try {
                            const auto penalty = resolve_penalty(grid.rule, n, p);
                            const auto t0 = std::chrono::steady_clock::now();
                            const auto est = estimate(data, penalty, solver, grid.options);
                            const auto t1 = std::chrono::steady_clock::now();
                            rec.wall_seconds =
                                std::max(std::chrono::duration<double>(t1 - t0).count(), 1e-9);
                            const auto& f = est.fit;
                            rec.outer_iterations =
                                f.outer_iterations.empty()
                                    ? 0
                                    : *std::max_element(f.outer_iterations.begin(),
                                                        f.outer_iterations.end());
                            if (solver == SolverKind::PCD) {
                                for (auto s : f.sweep_history)
                                    rec.total_sweeps += s;
                            } else {
                                for (auto s : f.sweeps)
                                    rec.total_sweeps += s;
                            }
                            rec.converged = est.converged_columns == p;
                        } catch (const std::exception& e) {
                            rec.error = std::string("estimate: ") + e.what();
                        }
                        out.records.push_back(rec);
                    }
                }
    out.cells = summarize(out.records);
    return out;
}

std::vector<CellSummary> summarize(const std::vector<BenchRecord>& records)
{
    using Key = std::tuple<int, std::size_t, std::size_t, int>;
    std::map<Key, std::vector<double>> times;
    std::vector<Key> order;
    for (const auto& r : records) {
        const Key key{static_cast<int>(r.network), r.p, r.n, static_cast<int>(r.solver)};
        if (!times.contains(key))
            order.push_back(key);
        auto& v = times[key];
        if (r.error.empty())
            v.push_back(r.wall_seconds);
    }
    std::vector<CellSummary> cells;
    for (const auto& key : order) {
        const auto& v = times[key];
        CellSummary c;
        c.network = static_cast<sim::NetworkKind>(std::get<0>(key));
        c.p = std::get<1>(key);
        c.n = std::get<2>(key);
        c.solver = static_cast<SolverKind>(std::get<3>(key));
        c.count = v.size();
        if (!v.empty()) {
            double sum = 0.0;
            for (double t : v)
                sum += t;
            c.mean = sum / static_cast<double>(v.size());
            if (v.size() > 1) {
                double ss = 0.0;
                for (double t : v)
                    ss += (t - c.mean) * (t - c.mean);
                const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
                c.std_error = sd / std::sqrt(static_cast<double>(v.size()));
            }
        }
        cells.push_back(c);
    }
    return cells;
}

void write_records_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& records)
{
    std::string out = "solver,network,p,n,replicate,wall_seconds,outer_iterations,total_sweeps,converged,error\n";
    for (const auto& r : records) {
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out += std::string(to_string(r.solver)) + ',' + std::string(sim::to_string(r.network)) +
               ',' + std::to_string(r.p) + ',' + std::to_string(r.n) + ',' +
               std::to_string(r.replicate) + ',' + io::format_double(r.wall_seconds) + ',' +
               std::to_string(r.outer_iterations) + ',' + std::to_string(r.total_sweeps) + ',' +
               (r.converged ? "1" : "0") + ',' + err + '\n';
    }
    io::write_file(path, out);
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<CellSummary>& cells)
{
    std::vector<std::size_t> ps;
    std::vector<SolverKind> solvers;
    std::vector<std::pair<sim::NetworkKind, std::size_t>> rows;
    std::map<std::tuple<int, std::size_t, std::size_t, int>, const CellSummary*> lookup;
    for (const auto& c : cells) {
        if (std::find(ps.begin(), ps.end(), c.p) == ps.end())
            ps.push_back(c.p);
        if (std::find(solvers.begin(), solvers.end(), c.solver) == solvers.end())
            solvers.push_back(c.solver);
        const std::pair row{c.network, c.n};
        if (std::find(rows.begin(), rows.end(), row) == rows.end())
            rows.push_back(row);
        lookup[{static_cast<int>(c.network), c.n, c.p, static_cast<int>(c.solver)}] = &c;
    }
    std::sort(ps.begin(), ps.end());

    std::string out = "network,n";
    for (auto p : ps)
        for (auto s : solvers) {
            const auto prefix = ",p" + std::to_string(p) + "_" + std::string(to_string(s));
            out += prefix + "_mean" + prefix + "_se";
        }
    out += '\n';
    for (const auto& [network, n] : rows) {
        out += std::string(sim::to_string(network)) + ',' + std::to_string(n);
        for (auto p : ps)
            for (auto s : solvers) {
                auto it = lookup.find({static_cast<int>(network), n, p, static_cast<int>(s)});
                if (it == lookup.end() || it->second->count == 0)
                    out += ",,";
                else
                    out += ',' + io::format_double(it->second->mean) + ',' +
                           io::format_double(it->second->std_error);
            }
        out += '\n';
    }
    io::write_file(path, out);
}

} // namespace spmesl::bench
