#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "dhlab/errors.hpp"
#include "dhlab/harness.hpp"
#include "json.hpp"

using namespace dhlab;
namespace fs = std::filesystem;

namespace {

std::string golden(const std::string& name) {
    std::ifstream in(fs::path(DHLAB_GOLDEN_DIR) / (name + ".header"));
    std::string line;
    std::getline(in, line);
    return line;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DHLAB_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.lemmas.levels = 2;
    for (auto& [_, x] : c.lemmas.base_x) x = 1000;
    c.lemmas.base_x["L11"] = 500;
    c.lemmas.measure_samples = 500;
    c.theorem.cap = 30000;
    return c;
}

}  // namespace

TEST_CASE("config round trip and validation") {
    ExperimentConfig c;
    c.seed = 42;
    c.x_list = {1000, 2000};
    c.lemmas.base_x["L3"] = 777;
    c.instance.omega = 0.5;
    const auto back = config_from_json(config_to_json(c));
    CHECK(back.seed == 42);
    CHECK(back.x_list == c.x_list);
    CHECK(back.lemmas.base_x.at("L3") == 777);
    CHECK(back.instance.omega == 0.5);
    CHECK(back.instance.lambda2 == c.instance.lambda2);
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK_THROWS_AS(config_from_json(R"({"bogus": 1})"), DomainError);
    CHECK_THROWS_AS(config_from_json(R"({"lemmas": {"base_x": {"L13": 5}}})"), DomainError);
    CHECK_THROWS_AS(config_from_json(R"({"instance": {"k": 4}})"), DomainError);
    CHECK_THROWS_AS(config_from_json("{not json"), DomainError);
    CHECK(config_from_json("{}").seed == 1);
}

TEST_CASE("CSV schemas match the golden headers") {
    CHECK(std::string(kLemmaCsvHeader) == golden("lemmas"));
    CHECK(std::string(kTheoremCsvHeader) == golden("theorem"));
    CHECK(std::string(kEtaGridCsvHeader) == golden("eta_grid"));
    CHECK(std::string(kMeasureCsvHeader) == golden("measure"));
    std::ostringstream a, b, c, d;
    write_lemma_csv(a, {});
    write_theorem_csv(b, {});
    write_eta_grid_csv(c, {});
    write_measure_csv(d, {});
    CHECK(first_line(a.str()) == golden("lemmas"));
    CHECK(first_line(b.str()) == golden("theorem"));
    CHECK(first_line(c.str()) == golden("eta_grid"));
    CHECK(first_line(d.str()) == golden("measure"));
    std::ostringstream s;
    write_solutions_csv(s, {});
    CHECK(first_line(s.str()) == golden("solutions"));
}

TEST_CASE("measure sampler: trivial thresholds and range") {
    const auto t = sieve(20000);
    const ProblemInstance in{1, std::sqrt(2.0), -1, 2, 0, 0.1, 0.01};
    const double s0 = prime_terms({1, 0.1, 1e4}, t).total_weight();
    auto m = sample_large_sum_measure(in, 1e4, 1.01 * s0, 1.01 * s0, 0.1, 2000, 1, t);
    CHECK(m.sampled_measure == 0.0);
    m = sample_large_sum_measure(in, 1e4, 0, 0, 0.1, 2000, 1, t);
    CHECK(m.sampled_measure == doctest::Approx(0.2));
    m = sample_large_sum_measure(in, 1e4, 0.05 * s0, 0.05 * s0, 2e-4, 3000, 7, t);
    CHECK(m.sampled_measure >= 0);
    CHECK(m.sampled_measure <= 2 * 2e-4);
    CHECK(m.hits > 0);
    CHECK(m.hits < m.samples);
    const auto again = sample_large_sum_measure(in, 1e4, 0.05 * s0, 0.05 * s0, 2e-4, 3000, 7, t);
    CHECK(again.hits == m.hits);
    const auto other = sample_large_sum_measure(in, 1e4, 0.05 * s0, 0.05 * s0, 2e-4, 3000, 8, t);
    CHECK(measures_consistent(m, other));
    CHECK_THROWS_AS(sample_large_sum_measure(in, 1e4, 1, 1, 0, 10, 1, t), DomainError);
}

TEST_CASE("measure sampler: seed change at the reference size") {
    const auto t = sieve(20000);
    const ProblemInstance in{1, std::sqrt(2.0), -1, 2, 0, 0.1, 0.01};
    const double s0 = prime_terms({1, 0.1, 1e4}, t).total_weight();
    const auto a = sample_large_sum_measure(in, 1e4, 0.5 * s0, 0.5 * s0, 0.1, 20000, 1, t);
    const auto b = sample_large_sum_measure(in, 1e4, 0.5 * s0, 0.5 * s0, 0.1, 20000, 2, t);
    CHECK(measures_consistent(a, b));
    CHECK(a.bound == doctest::Approx(0.1 * std::pow(1e4, 8.0 / 3 + 0.01) / std::pow(0.5 * s0, 4)));
}

TEST_CASE("lemma suite: coverage, determinism, skipped rows") {
    auto c = small_config();
    const auto r = run_lemma_suite(c);
    CHECK(r.coverage_complete);
    CHECK(r.rows.size() == 12 * 2);
    for (const auto& row : r.rows) CHECK(row.status != Status::Fail);
    std::ostringstream a, b;
    write_lemma_csv(a, r);
    write_lemma_csv(b, run_lemma_suite(c));
    CHECK(a.str() == b.str());

    // Lemma 11 with a window holding no prime cube.
    c.lemmas.base_x["L11"] = 2;
    const auto s = run_lemma_suite(c);
    CHECK(s.verdicts.at("L11") == Status::Skipped);
    for (const auto& row : s.rows)
        if (row.lemma == "L11") CHECK(row.status == Status::Skipped);
}

TEST_CASE("theorem experiment flags") {
    auto c = small_config();
    auto r = run_theorem_experiment(c);
    CHECK_FALSE(r.rational_flag);
    REQUIRE(!r.rows.empty());
    CHECK(r.rows.back().status == Status::Pass);
    for (const auto& row : r.rows)
        if (row.status != Status::Skipped) CHECK(row.weighted_bound_ok);

    c.instance.lambda2 = 2;
    CHECK(run_theorem_experiment(c).rational_flag);

    c.instance = ProblemInstance{1, std::sqrt(2.0), 1, 2, -1, 0.1, 0.01};
    r = run_theorem_experiment(c);
    CHECK(r.sign_infeasible);
    for (const auto& g : r.eta_grid) CHECK(g.count == 0);
    for (const auto& row : r.rows) CHECK(row.status != Status::Fail);
}

TEST_CASE("CLI exit codes and outputs") {
    const fs::path out = fs::temp_directory_path() / "dhlab_cli_test";
    fs::remove_all(out);
    CHECK(run_cli("--out " + out.string() + " quadruples --N 2 --gamma 0.5 --k 2") == 0);
    CHECK(slurp(out / "quadruples.csv") == "N,k,gamma,count\n2,2,0.5,6\n");
    const auto js = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(js["status"] == "PASS");
    CHECK(run_cli("--out " + out.string() + " --lambda2 1 --delta 0.01 solve --X 100 --eta 0.5 --B 100") == 0);
    CHECK(first_line(slurp(out / "solutions.csv")) == golden("solutions"));
    CHECK(run_cli("--out " + out.string() + " cf --x 1.4142135623730951 --n 6") == 0);
    CHECK(first_line(slurp(out / "convergents.csv")) == golden("convergents"));
    CHECK(run_cli("--out " + out.string() + " expsum --X 100 --alpha 0.1 --step 0.01 --count 5") == 0);
    CHECK(first_line(slurp(out / "expsum.csv")) == golden("expsum"));
    CHECK(run_cli("--out " + out.string() + " arcs --X 1e6") == 0);
    CHECK(fs::exists(out / "arcs.json"));
    CHECK(run_cli("--out " + out.string() + " sieve --limit 100") == 0);
    CHECK(slurp(out / "sieve.csv").find("100,25,") != std::string::npos);
    // Usage errors.
    CHECK(run_cli("") == 2);
    CHECK(run_cli("nonsense") == 2);
    CHECK(run_cli("--out " + out.string() + " sieve --limit 1") == 2);
    CHECK(run_cli("--out " + out.string() + " --k 7 solve --X 100") == 2);
    CHECK(run_cli("--config /nonexistent.json sieve --limit 10") == 2);
    fs::remove_all(out);
}
