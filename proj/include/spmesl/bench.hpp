#pragma once
#include <spmesl/networks.hpp>
#include <spmesl/penalty.hpp>
#include <spmesl/spmesl.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spmesl::bench {

struct BenchGrid
{
    std::vector<sim::NetworkKind> networks{sim::NetworkKind::AR1};
    std::vector<std::size_t> p_list{200};
    std::vector<std::size_t> n_list{100};
    std::vector<SolverKind> solvers{SolverKind::CD};
    std::size_t replicates = 3;
    std::uint64_t seed = 1;
    PenaltyKind rule = PenaltyKind::UnionBound;
    SolverOptions options;
};

struct BenchRecord
{
    SolverKind solver = SolverKind::CD;
    sim::NetworkKind network = sim::NetworkKind::AR1;
    std::size_t p = 0;
    std::size_t n = 0;
    std::size_t replicate = 0;
    double wall_seconds = 0.0;
    std::size_t outer_iterations = 0;
    std::size_t total_sweeps = 0;
    bool converged = false;
    /// Non-empty when the cell failed; the run carries on.
    std::string error;
};

struct CellSummary
{
    sim::NetworkKind network = sim::NetworkKind::AR1;
    std::size_t p = 0;
    std::size_t n = 0;
    SolverKind solver = SolverKind::CD;
    std::size_t count = 0;
    double mean = 0.0;
    /// sample standard deviation / sqrt(count); 0 for a single replicate.
    double std_error = 0.0;
};

struct BenchResult
{
    std::vector<BenchRecord> records;
    std::vector<CellSummary> cells;
};

/// Seed of replicate r in cell (network, p, n); shared by all solvers.
std::uint64_t replicate_seed(std::uint64_t seed, sim::NetworkKind network, std::size_t p,
                             std::size_t n, std::size_t replicate);

/// Cells run sequentially; only the estimate call is timed.
BenchResult run_bench(const BenchGrid& grid);

/// Mean and standard error per (network, p, n, solver) over successful records.
std::vector<CellSummary> summarize(const std::vector<BenchRecord>& records);

void write_records_csv(const std::filesystem::path& path, const std::vector<BenchRecord>& records);

/// One row per (network, n); for each p and solver a mean and a std-error column.
void write_summary_csv(const std::filesystem::path& path, const std::vector<CellSummary>& cells);

} // namespace spmesl::bench
