#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dhlab/errors.hpp"
#include "dhlab/harness.hpp"
#include "json.hpp"

namespace dhlab {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where) {
    if (!j.is_object()) throw DomainError(std::string("config: ") + where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (const char* k : keys) known = known || key == k;
        if (!known) throw DomainError(std::string("config: unknown key '") + key + "' in " + where);
    }
}

template <class T>
void get(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_instance(const json& j, ProblemInstance& in) {
    reject_unknown(j, {"lambda1", "lambda2", "lambda3", "k", "omega", "delta", "epsilon"}, "instance");
    get(j, "lambda1", in.lambda1);
    get(j, "lambda2", in.lambda2);
    get(j, "lambda3", in.lambda3);
    get(j, "k", in.k);
    get(j, "omega", in.omega);
    get(j, "delta", in.delta);
    get(j, "epsilon", in.epsilon);
}

void read_lemmas(const json& j, LemmaSuiteConfig& c) {
    reject_unknown(j,
                   {"levels", "base_x", "eta", "gamma", "tau", "short_interval_samples",
                    "witness_samples", "hua_growth_limit", "measure_z_fraction", "measure_y",
                    "measure_samples"},
                   "lemmas");
    get(j, "levels", c.levels);
    if (j.contains("base_x")) {
        const auto& b = j.at("base_x");
        if (!b.is_object()) throw DomainError("config: lemmas.base_x must be an object");
        for (const auto& [key, v] : b.items()) {
            if (!c.base_x.count(key)) throw DomainError("config: unknown lemma '" + key + "'");
            c.base_x[key] = v.get<double>();
        }
    }
    get(j, "eta", c.eta);
    get(j, "gamma", c.gamma);
    get(j, "tau", c.tau);
    get(j, "short_interval_samples", c.short_interval_samples);
    get(j, "witness_samples", c.witness_samples);
    get(j, "hua_growth_limit", c.hua_growth_limit);
    get(j, "measure_z_fraction", c.measure_z_fraction);
    get(j, "measure_y", c.measure_y);
    get(j, "measure_samples", c.measure_samples);
    if (c.levels < 2) throw DomainError("config: lemmas.levels must be >= 2");
}

void read_theorem(const json& j, TheoremConfig& c) {
    reject_unknown(j, {"count", "cap", "eta_steps_down", "eta_steps_up", "duality_max_x"}, "theorem");
    get(j, "count", c.count);
    get(j, "cap", c.cap);
    get(j, "eta_steps_down", c.eta_steps_down);
    get(j, "eta_steps_up", c.eta_steps_up);
    get(j, "duality_max_x", c.duality_max_x);
}

void read_measure(const json& j, MeasureConfig& c) {
    reject_unknown(j, {"X", "z1", "z2", "y", "samples"}, "measure");
    get(j, "X", c.X);
    get(j, "z1", c.z1);
    get(j, "z2", c.z2);
    get(j, "y", c.y);
    get(j, "samples", c.samples);
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    try {
        reject_unknown(j, {"instance", "x_list", "out_dir", "seed", "threads", "lemmas", "theorem", "measure"},
                       "top level");
        if (j.contains("instance")) read_instance(j.at("instance"), c.instance);
        get(j, "x_list", c.x_list);
        get(j, "out_dir", c.out_dir);
        get(j, "seed", c.seed);
        get(j, "threads", c.threads);
        if (j.contains("lemmas")) read_lemmas(j.at("lemmas"), c.lemmas);
        if (j.contains("theorem")) read_theorem(j.at("theorem"), c.theorem);
        if (j.contains("measure")) read_measure(j.at("measure"), c.measure);
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    c.instance.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    const auto& in = c.instance;
    j["instance"] = {{"lambda1", in.lambda1}, {"lambda2", in.lambda2}, {"lambda3", in.lambda3},
                     {"k", in.k},             {"omega", in.omega},     {"delta", in.delta},
                     {"epsilon", in.epsilon}};
    j["x_list"] = c.x_list;
    j["out_dir"] = c.out_dir;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    const auto& l = c.lemmas;
    j["lemmas"] = {{"levels", l.levels},
                   {"base_x", l.base_x},
                   {"eta", l.eta},
                   {"gamma", l.gamma},
                   {"tau", l.tau},
                   {"short_interval_samples", l.short_interval_samples},
                   {"witness_samples", l.witness_samples},
                   {"hua_growth_limit", l.hua_growth_limit},
                   {"measure_z_fraction", l.measure_z_fraction},
                   {"measure_y", l.measure_y},
                   {"measure_samples", l.measure_samples}};
    const auto& t = c.theorem;
    j["theorem"] = {{"count", t.count},
                    {"cap", t.cap},
                    {"eta_steps_down", t.eta_steps_down},
                    {"eta_steps_up", t.eta_steps_up},
                    {"duality_max_x", t.duality_max_x}};
    const auto& m = c.measure;
    j["measure"] = {{"X", m.X}, {"z1", m.z1}, {"z2", m.z2}, {"y", m.y}, {"samples", m.samples}};
    return j.dump(2);
}

}  // namespace dhlab
