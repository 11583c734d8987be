#include <doctest.h>

#include <spmesl/bench.hpp>
#include <spmesl/config.hpp>
#include <spmesl/csv_io.hpp>
#include <spmesl/errors.hpp>
#include <spmesl/pipeline.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

using namespace spmesl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir()
{
    static const fs::path d = [] {
        auto p = fs::temp_directory_path() / "spmesl_test_cli";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return d;
}

/// Runs the CLI with `args`; returns its exit status. stdout goes to `out` if given.
int cli(const std::string& args, const fs::path& out = {})
{
    std::string cmd = std::string("\"") + SPMESL_CLI_PATH + "\" " + args;
    cmd += out.empty() ? " > /dev/null" : " > \"" + out.string() + "\"";
    cmd += " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p)
{
    return "\"" + p.string() + "\"";
}

} // namespace

TEST_CASE("sha256 of a known string")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("RunConfig round-trips and rejects unknown keys")
{
    RunConfig c;
    c.seed = 9;
    c.threads = 2;
    c.generate = GenerateConfig{};
    c.generate->kind = "hub";
    c.penalty.rule = "pb";
    c.penalty.A = 1.2;
    c.bench = BenchConfig{};
    const auto j = to_json(c);
    const auto back = run_config_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.generate->kind == "hub");
    CHECK(*back.penalty.A == 1.2);

    auto top = j;
    top["sede"] = 1;
    CHECK_THROWS_AS(run_config_from_json(top), ValidationError);
    auto nested = j;
    nested["penalty"]["lambda"] = 0.1;
    CHECK_THROWS_AS(run_config_from_json(nested), ValidationError);
    auto typed = j;
    typed["seed"] = "nine";
    CHECK_THROWS_AS(run_config_from_json(typed), ValidationError);
    io::write_file(work_dir() / "broken.json", "{ not json");
    CHECK_THROWS_AS(load_run_config((work_dir() / "broken.json").string()), ValidationError);
}

TEST_CASE("CLI penalty prints the level as JSON")
{
    const auto out = work_dir() / "pen.json";
    REQUIRE(cli("penalty --n 100 --p 1000 --rule pb", out) == 0);
    const auto j = json::parse(io::read_file(out));
    CHECK(std::abs(j["lambda0"].get<double>() - 0.2810) <= 5e-4);
    CHECK(std::abs(j["k"].get<double>() - 23.4748) <= 1e-3);
    CHECK(j["rule"] == "pb");

    REQUIRE(cli("penalty --n 100 --p 1000 --rule ub", out) == 0);
    const auto u = json::parse(io::read_file(out));
    CHECK(u["k"].is_null());
    CHECK(u.contains("warning"));
}

TEST_CASE("CLI exit codes")
{
    const auto d = work_dir();
    CHECK(cli("penalty --n 100") == 2);                         // missing required flag
    CHECK(cli("penalty --n 100 --p 1000 --rule bic") == 2);     // bad enum
    CHECK(cli("penalty --n 100 --p 1000 --rule ub --A 0") == 2); // domain
    CHECK(cli("estimate --data " + q(d / "nope.csv") + " --out " + q(d / "o.csv")) == 2);
    CHECK(cli("frobnicate") == 2);
    CHECK(cli("--config " + q(d / "missing.json") + " penalty --n 10 --p 20") == 2);

    REQUIRE(cli("generate --kind ar1 --p 20 --n 50 --seed 3 --out-data " + q(d / "small.csv")) ==
            0);
    CHECK(cli("estimate --data " + q(d / "small.csv") + " --rule univ --max-outer 1 --delta 1e-15 "
              "--out " + q(d / "o.csv")) == 3);
}

TEST_CASE("CLI generate -> estimate -> evaluate")
{
    const auto d = work_dir() / "flow";
    REQUIRE(cli("generate --kind ar1 --p 100 --n 250 --seed 5 --out-data " + q(d / "x.csv") +
                " --out-omega " + q(d / "omega_true.csv") + " --out-edges " +
                q(d / "edges_true.csv")) == 0);
    const auto edges = io::read_file(d / "edges_true.csv");
    CHECK(edges.rfind("j,k,value\n", 0) == 0);
    CHECK(std::count(edges.begin(), edges.end(), '\n') == 100); // header + 99 edges

    REQUIRE(cli("estimate --data " + q(d / "x.csv") + " --rule ub --solver cd --out " +
                q(d / "omega.csv") + " --edges " + q(d / "edges.csv") + " --summary " +
                q(d / "run.json")) == 0);
    const auto summary = json::parse(io::read_file(d / "run.json"));
    CHECK(summary["converged_columns"] == 100);
    CHECK(summary["penalty"]["rule"] == "ub");
    CHECK(summary["outer_iterations"].size() == 100);

    REQUIRE(cli("evaluate --estimate " + q(d / "omega.csv") + " --truth " +
                q(d / "omega_true.csv") + " --out " + q(d / "report.json")) == 0);
    const auto report = json::parse(io::read_file(d / "report.json"));
    CHECK(report["sen"].get<double>() == 1.0);
    CHECK(report["fdr"].get<double>() <= 0.05);
    CHECK(report["sen_pct"].get<double>() == 100.0);
}

TEST_CASE("CLI estimate with PCD is bit-identical across thread caps")
{
    const auto d = work_dir() / "threads";
    REQUIRE(cli("generate --kind ar4 --p 60 --n 120 --seed 8 --out-data " + q(d / "x.csv")) == 0);
    std::string first;
    for (int t : {1, 2, 4, 0}) {
        const auto out = d / ("omega_t" + std::to_string(t) + ".csv");
        REQUIRE(cli("--threads " + std::to_string(t) + " estimate --data " + q(d / "x.csv") +
                    " --rule univ --solver pcd --out " + q(out)) == 0);
        const auto text = io::read_file(out);
        if (first.empty())
            first = text;
        CHECK(text == first);
    }
}

TEST_CASE("CLI flags override the config file")
{
    const auto d = work_dir() / "cfg";
    RunConfig c;
    c.penalty.rule = "univ";
    io::write_file(d / "run.json", to_json(c).dump());
    const auto out = d / "pen.json";
    REQUIRE(cli("--config " + q(d / "run.json") + " penalty --n 100 --p 1000", out) == 0);
    CHECK(json::parse(io::read_file(out))["rule"] == "univ");
    REQUIRE(cli("--config " + q(d / "run.json") + " penalty --n 100 --p 1000 --rule ub", out) == 0);
    CHECK(json::parse(io::read_file(out))["rule"] == "ub");
}

TEST_CASE("pipeline: artifacts, stable hashes and stage-tagged errors")
{
    RunConfig c;
    c.seed = 4;
    c.out_dir = (work_dir() / "pipe1").string();
    c.generate = GenerateConfig{};
    c.generate->p = 100;
    c.generate->n = 250;
    const auto a = run_pipeline(c);
    for (const auto* name : {"data", "omega_true", "edges_true", "omega", "edges", "report", "run"})
        CHECK(fs::exists(a.artifacts.at(name)));
    const auto report = json::parse(io::read_file(a.artifacts.at("report")));
    CHECK(report["sen"].get<double>() == 1.0);
    const auto run = json::parse(io::read_file(a.artifacts.at("run")));
    CHECK(run["artifacts"]["omega"]["sha256"] == a.hashes.at("omega"));
    CHECK(run["rng"] == "splitmix64-v1");

    c.out_dir = (work_dir() / "pipe2").string();
    const auto b = run_pipeline(c);
    CHECK(a.hashes == b.hashes);

    RunConfig bad;
    bad.out_dir = (work_dir() / "pipe3").string();
    bad.estimate.data = (work_dir() / "does_not_exist.csv").string();
    try {
        run_pipeline(bad);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "load");
        CHECK(e.exit_code() == 2);
    }
    CHECK(cli("pipeline --data " + q(work_dir() / "does_not_exist.csv") + " --out-dir " +
              q(work_dir() / "pipe4")) == 2);
}

TEST_CASE("CLI pipeline reruns give identical artifacts")
{
    const auto d = work_dir();
    for (const char* sub : {"cp1", "cp2"})
        REQUIRE(cli("pipeline --kind hub --p 100 --n 150 --seed 2 --solver pcd --out-dir " +
                    q(d / sub)) == 0);
    for (const char* f : {"data.csv", "omega.csv", "edges.csv", "report.json"})
        CHECK(sha256_file(d / "cp1" / f) == sha256_file(d / "cp2" / f));
}

TEST_CASE("bench: smoke grid converges and aggregates correctly")
{
    bench::BenchGrid g;
    g.replicates = 3;
    const auto r = bench::run_bench(g);
    REQUIRE(r.records.size() == 3);
    for (const auto& rec : r.records) {
        CHECK(rec.error.empty());
        CHECK(rec.converged);
        CHECK(rec.wall_seconds > 0.0);
        CHECK(rec.p == 200);
        CHECK(rec.n == 100);
    }
    CHECK(r.records[0].replicate != r.records[1].replicate);
    REQUIRE(r.cells.size() == 1);

    // Reference aggregation.
    double mean = 0.0;
    for (const auto& rec : r.records)
        mean += rec.wall_seconds;
    mean /= 3.0;
    double ss = 0.0;
    for (const auto& rec : r.records)
        ss += (rec.wall_seconds - mean) * (rec.wall_seconds - mean);
    const double se = std::sqrt(ss / 2.0) / std::sqrt(3.0);
    CHECK(r.cells[0].count == 3);
    CHECK(r.cells[0].mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(r.cells[0].std_error == doctest::Approx(se).epsilon(1e-12));

    const auto path = work_dir() / "bench_summary.csv";
    bench::write_summary_csv(path, r.cells);
    const auto text = io::read_file(path);
    CHECK(text.rfind("network,n,p200_cd_mean,p200_cd_se\n", 0) == 0);
    bench::write_records_csv(work_dir() / "bench_records.csv", r.records);
    const auto rec_text = io::read_file(work_dir() / "bench_records.csv");
    CHECK(std::count(rec_text.begin(), rec_text.end(), '\n') == 4);
}

TEST_CASE("bench: summary over hand-made records")
{
    std::vector<bench::BenchRecord> recs(4);
    const double times[] = {1.0, 2.0, 4.0, 8.0};
    for (std::size_t i = 0; i < 4; ++i) {
        recs[i].p = 50;
        recs[i].n = 10;
        recs[i].replicate = i;
        recs[i].wall_seconds = times[i];
        recs[i].converged = true;
    }
    recs[3].error = "boom"; // failed records are excluded
    const auto cells = bench::summarize(recs);
    REQUIRE(cells.size() == 1);
    CHECK(cells[0].count == 3);
    CHECK(cells[0].mean == doctest::Approx(7.0 / 3.0));
    CHECK(cells[0].std_error == doctest::Approx(std::sqrt(7.0 / 3.0) / std::sqrt(3.0)));
}

TEST_CASE("bench: replicate seeds are shared across solvers and distinct across cells")
{
    using sim::NetworkKind;
    CHECK(bench::replicate_seed(1, NetworkKind::AR1, 200, 100, 0) ==
          bench::replicate_seed(1, NetworkKind::AR1, 200, 100, 0));
    CHECK(bench::replicate_seed(1, NetworkKind::AR1, 200, 100, 0) !=
          bench::replicate_seed(1, NetworkKind::AR1, 200, 100, 1));
    CHECK(bench::replicate_seed(1, NetworkKind::AR1, 200, 100, 0) !=
          bench::replicate_seed(1, NetworkKind::AR4, 200, 100, 0));
}

TEST_CASE("bench: CD time grows with n at fixed p")
{
    bench::BenchGrid g;
    g.n_list = {100, 200, 400};
    g.replicates = 5;
    const auto r = bench::run_bench(g);
    REQUIRE(r.cells.size() == 3);
    // Cells come out in grid order.
    CHECK(r.cells[0].n == 100);
    CHECK(r.cells[2].n == 400);
    CHECK(r.cells[0].mean < r.cells[1].mean);
    CHECK(r.cells[1].mean < r.cells[2].mean);
}

TEST_CASE("CLI bench writes both tables")
{
    const auto d = work_dir() / "bench";
    fs::create_directories(d);
    REQUIRE(cli("bench --networks ar1,hub --p 100 --n 80 --solvers cd,pcd --replicates 2 "
                "--out-records " + q(d / "r.csv") + " --out-summary " + q(d / "s.csv")) == 0);
    const auto s = io::read_file(d / "s.csv");
    CHECK(s.rfind("network,n,p100_cd_mean,p100_cd_se,p100_pcd_mean,p100_pcd_se\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 3);
    const auto r = io::read_file(d / "r.csv");
    CHECK(std::count(r.begin(), r.end(), '\n') == 9);
}
