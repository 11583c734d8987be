#include <spmesl/config.hpp>
#include <spmesl/csv_io.hpp>
#include <spmesl/errors.hpp>

#include <initializer_list>
#include <string_view>

namespace spmesl {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::string_view where, std::initializer_list<std::string_view> keys)
{
    if (!j.is_object())
        throw ValidationError(std::string(where) + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto k : keys)
            known = known || key == k;
        if (!known)
            throw ValidationError(std::string(where) + ": unknown key '" + key + "'");
    }
}

template <class T>
void read(const json& j, const char* key, T& out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out)
{
    if (j.contains(key) && !j.at(key).is_null())
        out = j.at(key).get<T>();
}

template <class T>
void write(json& j, const char* key, const std::optional<T>& v)
{
    if (v)
        j[key] = *v;
}

} // namespace

json to_json(const RunConfig& c)
{
    json j;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["out_dir"] = c.out_dir;
    if (c.generate) {
        const auto& g = *c.generate;
        j["generate"] = {{"kind", g.kind}, {"p", g.p}, {"n", g.n}, {"alpha", g.alpha},
                         {"subnetwork_size", g.subnetwork_size},
                         {"magnitude_floor", g.magnitude_floor}};
    }
    json pen = {{"rule", c.penalty.rule}};
    write(pen, "A", c.penalty.A);
    write(pen, "lambda0", c.penalty.lambda0);
    j["penalty"] = pen;
    json est = {{"solver", c.estimate.solver}, {"delta", c.estimate.delta},
                {"max_outer", c.estimate.max_outer}, {"max_inner", c.estimate.max_inner}};
    write(est, "data", c.estimate.data);
    j["estimate"] = est;
    if (c.evaluate) {
        json ev = json::object();
        write(ev, "truth", c.evaluate->truth);
        j["evaluate"] = ev;
    }
    if (c.bench) {
        const auto& b = *c.bench;
        j["bench"] = {{"networks", b.networks}, {"p", b.p}, {"n", b.n}, {"solvers", b.solvers},
                      {"replicates", b.replicates}, {"rule", b.rule}};
    }
    return j;
}

RunConfig run_config_from_json(const json& j)
{
    RunConfig c;
    try {
        reject_unknown(j, "config", {"seed", "threads", "out_dir", "generate", "penalty",
                                     "estimate", "evaluate", "bench"});
        read(j, "seed", c.seed);
        read(j, "threads", c.threads);
        read(j, "out_dir", c.out_dir);
        if (j.contains("generate")) {
            const auto& g = j.at("generate");
            reject_unknown(g, "generate",
                           {"kind", "p", "n", "alpha", "subnetwork_size", "magnitude_floor"});
            GenerateConfig gc;
            read(g, "kind", gc.kind);
            read(g, "p", gc.p);
            read(g, "n", gc.n);
            read(g, "alpha", gc.alpha);
            read(g, "subnetwork_size", gc.subnetwork_size);
            read(g, "magnitude_floor", gc.magnitude_floor);
            c.generate = gc;
        }
        if (j.contains("penalty")) {
            const auto& p = j.at("penalty");
            reject_unknown(p, "penalty", {"rule", "A", "lambda0"});
            read(p, "rule", c.penalty.rule);
            read(p, "A", c.penalty.A);
            read(p, "lambda0", c.penalty.lambda0);
        }
        if (j.contains("estimate")) {
            const auto& e = j.at("estimate");
            reject_unknown(e, "estimate", {"data", "solver", "delta", "max_outer", "max_inner"});
            read(e, "data", c.estimate.data);
            read(e, "solver", c.estimate.solver);
            read(e, "delta", c.estimate.delta);
            read(e, "max_outer", c.estimate.max_outer);
            read(e, "max_inner", c.estimate.max_inner);
        }
        if (j.contains("evaluate")) {
            const auto& e = j.at("evaluate");
            reject_unknown(e, "evaluate", {"truth"});
            EvaluateConfig ec;
            read(e, "truth", ec.truth);
            c.evaluate = ec;
        }
        if (j.contains("bench")) {
            const auto& b = j.at("bench");
            reject_unknown(b, "bench", {"networks", "p", "n", "solvers", "replicates", "rule"});
            BenchConfig bc;
            read(b, "networks", bc.networks);
            read(b, "p", bc.p);
            read(b, "n", bc.n);
            read(b, "solvers", bc.solvers);
            read(b, "replicates", bc.replicates);
            read(b, "rule", bc.rule);
            c.bench = bc;
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const std::string& path)
{
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
        throw ValidationError("config " + path + ": " + e.what());
    }
    return run_config_from_json(j);
}

} // namespace spmesl
