#pragma once
#include <spmesl/config.hpp>
#include <spmesl/errors.hpp>
#include <spmesl/metrics.hpp>
#include <spmesl/penalty.hpp>
#include <spmesl/spmesl.hpp>

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

namespace spmesl {

/// Error from a pipeline stage; `exit_code` follows the CLI convention
/// (2 validation, 3 convergence, 1 anything else).
class StageError : public Error
{
public:
    StageError(std::string stage, const std::string& message, int exit_code)
        : Error(stage + ": " + message), stage_(std::move(stage)), exit_code_(exit_code)
    {}
    const std::string& stage() const noexcept { return stage_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    std::string stage_;
    int exit_code_;
};

/// CLI exit code for an exception thrown by the library.
int exit_code_for(const std::exception& e) noexcept;

nlohmann::json penalty_json(const PenaltySpec& s);
/// Iterations, convergence flags and timings of one estimate run.
nlohmann::json estimate_summary_json(const PrecisionEstimate& est);
/// Raw values plus x100 percentages.
nlohmann::json report_json(const metrics::EvalReport& r);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct PipelineResult
{
    /// artifact name -> path
    std::map<std::string, std::filesystem::path> artifacts;
    /// artifact name -> sha256 of the file content
    std::map<std::string, std::string> hashes;
};

/**
 * generate (or load estimate.data) -> penalty -> estimate -> evaluate.
 * Writes into config.out_dir: data.csv, omega_true.csv, edges_true.csv
 * (when generating), omega.csv, edges.csv, report.json (when a truth is
 * available) and run.json, which lists every artifact with its SHA-256.
 * Failures are rethrown as StageError naming the stage.
 */
PipelineResult run_pipeline(const RunConfig& config);

} // namespace spmesl
