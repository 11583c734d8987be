#include <spmesl/pipeline.hpp>
#include <spmesl/csv_io.hpp>
#include <spmesl/networks.hpp>
#include <spmesl/rng.hpp>

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>

namespace spmesl {

using nlohmann::json;

int exit_code_for(const std::exception& e) noexcept
{
    if (auto s = dynamic_cast<const StageError*>(&e))
        return s->exit_code();
    if (dynamic_cast<const NonConvergence*>(&e))
        return 3;
    if (dynamic_cast<const ValidationError*>(&e))
        return 2;
    return 1;
}

json penalty_json(const PenaltySpec& s)
{
    json j;
    j["rule"] = std::string(to_string(s.kind));
    j["n"] = s.n;
    j["p"] = s.p;
    j["A"] = s.A;
    j["k"] = s.k_solution ? json(*s.k_solution) : json(nullptr);
    j["lambda0"] = s.value;
    if (s.boundary_A)
        j["warning"] = "A = 1 is outside the A > 1 range of the union-bound guarantee";
    return j;
}

json estimate_summary_json(const PrecisionEstimate& est)
{
    const auto& f = est.fit;
    json j;
    j["solver"] = std::string(to_string(est.solver));
    j["penalty"] = penalty_json(est.penalty);
    j["p"] = est.omega.rows();
    j["converged_columns"] = est.converged_columns;
    j["scale"] = est.scale == EstimateScale::Original ? "original" : "standardized";
    j["fit_seconds"] = est.fit_seconds;
    j["outer_iterations"] = f.outer_iterations;
    j["sweeps"] = f.sweeps;
    std::vector<bool> conv(f.converged.begin(), f.converged.end());
    j["converged"] = conv;
    j["sigma"] = est.per_column_sigma;
    if (est.solver == SolverKind::PCD) {
        j["active_history"] = f.active_history;
        j["sweep_history"] = f.sweep_history;
    }
    std::size_t edges = 0;
    for (std::size_t k = 1; k < est.omega.cols(); ++k)
        for (std::size_t i = 0; i < k; ++i)
            edges += est.omega(i, k) != 0.0 ? 1 : 0;
    j["estimated_edges"] = edges;
    return j;
}

json report_json(const metrics::EvalReport& r)
{
    json j;
    j["tp"] = r.counts.tp;
    j["fp"] = r.counts.fp;
    j["tn"] = r.counts.tn;
    j["fn"] = r.counts.fn;
    j["estimated_edges"] = r.estimated_edges;
    j["true_edges"] = r.true_edges;
    j["sen"] = r.sen;
    j["spe"] = r.spe;
    j["fdr"] = r.fdr;
    j["misr"] = r.misr;
    j["mcc"] = r.mcc;
    j["frobenius_error"] = r.frobenius_error;
    j["sen_pct"] = 100.0 * r.sen;
    j["spe_pct"] = 100.0 * r.spe;
    j["fdr_pct"] = 100.0 * r.fdr;
    j["misr_pct"] = 100.0 * r.misr;
    j["mcc_pct"] = 100.0 * r.mcc;
    return j;
}

std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string sha256_file(const std::filesystem::path& path)
{
    return sha256_hex(io::read_file(path));
}

namespace {

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what(), exit_code_for(e));
    }
}

} // namespace

PipelineResult run_pipeline(const RunConfig& config)
{
    namespace fs = std::filesystem;
    PipelineResult result;
    const fs::path dir = config.out_dir;
    stage("setup", [&] { fs::create_directories(dir); });

    auto record = [&](const std::string& name, const fs::path& path) {
        result.artifacts[name] = path;
        result.hashes[name] = sha256_file(path);
    };

    Matrix data;
    std::optional<Matrix> truth_omega;
    if (config.generate) {
        stage("generate", [&] {
            const auto& g = *config.generate;
            sim::NetworkSpec spec;
            spec.kind = sim::parse_network_kind(g.kind);
            spec.p = g.p;
            spec.seed = config.seed;
            spec.alpha = g.alpha;
            spec.subnetwork_size = g.subnetwork_size;
            spec.magnitude_floor = g.magnitude_floor;
            const auto truth = sim::generate(spec);
            data = sim::sample_gaussian(truth, g.n, derive_seed(config.seed, 0xDA7A));
            io::write_matrix_csv(dir / "data.csv", data);
            io::write_matrix_csv(dir / "omega_true.csv", truth.omega);
            io::write_edges_csv(dir / "edges_true.csv", truth.omega);
            record("data", dir / "data.csv");
            record("omega_true", dir / "omega_true.csv");
            record("edges_true", dir / "edges_true.csv");
            truth_omega = truth.omega;
        });
    } else {
        stage("load", [&] {
            if (!config.estimate.data)
                throw ValidationError("no input data: set estimate.data or a generate section");
            data = io::read_matrix_csv(*config.estimate.data);
        });
    }
    if (config.evaluate && config.evaluate->truth)
        stage("load", [&] { truth_omega = io::read_matrix_csv(*config.evaluate->truth); });

    const auto penalty = stage("penalty", [&] {
        return resolve_penalty(parse_penalty_kind(config.penalty.rule), data.rows(), data.cols(),
                               config.penalty.A, config.penalty.lambda0);
    });

    const auto est = stage("estimate", [&] {
        SolverOptions opts;
        opts.delta = config.estimate.delta;
        opts.max_outer = config.estimate.max_outer;
        opts.max_inner = config.estimate.max_inner;
        opts.threads = config.threads;
        auto e = estimate(data, penalty, parse_solver_kind(config.estimate.solver), opts);
        io::write_matrix_csv(dir / "omega.csv", e.omega);
        io::write_edges_csv(dir / "edges.csv", e.omega);
        record("omega", dir / "omega.csv");
        record("edges", dir / "edges.csv");
        return e;
    });

    std::optional<metrics::EvalReport> report;
    if (truth_omega) {
        stage("evaluate", [&] {
            const auto counts = metrics::confusion(est.omega, *truth_omega);
            report = metrics::evaluate(counts, est.omega, *truth_omega);
            io::write_file(dir / "report.json", report_json(*report).dump(2) + "\n");
            record("report", dir / "report.json");
        });
    }

    stage("summary", [&] {
        json run;
        run["config"] = to_json(config);
        run["rng"] = Rng::kName;
        run["estimate"] = estimate_summary_json(est);
        json artifacts = json::object();
        for (const auto& [name, path] : result.artifacts)
            artifacts[name] = {{"path", path.filename().string()}, {"sha256", result.hashes[name]}};
        run["artifacts"] = artifacts;
        io::write_file(dir / "run.json", run.dump(2) + "\n");
        result.artifacts["run"] = dir / "run.json";
    });
    return result;
}

} // namespace spmesl
