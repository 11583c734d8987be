#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace spmesl {

struct GenerateConfig
{
    std::string kind = "ar1";
    std::size_t p = 100;
    std::size_t n = 250;
    double alpha = 2.3;
    std::size_t subnetwork_size = 100;
    double magnitude_floor = 0.1;
};

struct PenaltyConfig
{
    std::string rule = "ub";
    std::optional<double> A;
    std::optional<double> lambda0;
};

struct EstimateConfig
{
    /// Input data CSV; when absent the pipeline generates data instead.
    std::optional<std::string> data;
    std::string solver = "cd";
    double delta = 1e-4;
    std::size_t max_outer = 100;
    std::size_t max_inner = 10000;
};

struct EvaluateConfig
{
    /// Ground-truth precision CSV; defaults to the generated one.
    std::optional<std::string> truth;
};

struct BenchConfig
{
    std::vector<std::string> networks{"ar1"};
    std::vector<std::size_t> p{200};
    std::vector<std::size_t> n{100};
    std::vector<std::string> solvers{"cd"};
    std::size_t replicates = 3;
    std::string rule = "ub";
};

/// Everything a CLI run needs, as one JSON document. Unknown keys are rejected.
struct RunConfig
{
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    std::string out_dir = "out";
    std::optional<GenerateConfig> generate;
    PenaltyConfig penalty;
    EstimateConfig estimate;
    std::optional<EvaluateConfig> evaluate;
    std::optional<BenchConfig> bench;
};

nlohmann::json to_json(const RunConfig& c);
/// Throws ValidationError on unknown keys or wrongly typed values.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

} // namespace spmesl
