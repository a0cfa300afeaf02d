#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dhlab/solver.hpp"

namespace dhlab {

struct LemmaSuiteConfig {
    int levels = 4;
    /// Smallest X of each lemma's doubling sweep, keyed "L1".."L12".
    std::map<std::string, double> base_x = {
        {"L1", 1000},  {"L2", 10000}, {"L3", 10000}, {"L4", 1000},
        {"L5", 1000},  {"L6", 1000},  {"L7", 10000}, {"L8", 1000},
        {"L9", 1000},  {"L10", 1000}, {"L11", 500},  {"L12", 10000}};
    double eta = 0.1;       // L9, L10
    double gamma = 1.0;     // L3
    double tau = 0.5;       // L4, L5
    int short_interval_samples = 24;  // L7
    int witness_samples = 64;         // L8
    double hua_growth_limit = 1.189207115002721;  // 2^{1/4}
    double measure_z_fraction = 0.05;  // L12 thresholds as a fraction of S_1(0)
    double measure_y = 2.0;  // L12 band +-[y, 2y] in units of 1/X
    std::int64_t measure_samples = 4000;
};

struct TheoremConfig {
    int count = 16;
    double cap = 1e6;
    int eta_steps_down = 24;
    int eta_steps_up = 4;
    /// I_numeric is only attempted up to this X.
    double duality_max_x = 1000;
};

struct MeasureConfig {
    double X = 10000;
    double z1 = -1;  // < 0: half of S_1(0)
    double z2 = -1;
    double y = 0.1;
    std::int64_t samples = 100000;
};

struct ExperimentConfig {
    ProblemInstance instance{1.0, 1.4142135623730951, -1.0, 2.0, 0.0, 0.1, 0.01};
    std::vector<double> x_list;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int threads = 0;
    LemmaSuiteConfig lemmas;
    TheoremConfig theorem;
    MeasureConfig measure;
};

/// Parses the JSON config format; unknown keys are rejected.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

enum class Status { Pass, Fail, Skipped, Info };
const char* status_name(Status s);

struct LemmaRow {
    std::string lemma;
    int level = 0;
    double X = 0.0;
    double value = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    double growth = 0.0;  // ratio / previous ratio, NaN on the first level
    double limit = 0.0;   // admissible growth
    Status status = Status::Pass;
    std::string note;
};

struct LemmaSuiteReport {
    std::vector<LemmaRow> rows;
    /// Every lemma appears exactly once per level.
    bool coverage_complete = false;
    std::map<std::string, Status> verdicts;

    bool any_fail() const;
};

LemmaSuiteReport run_lemma_suite(const ExperimentConfig& config);

struct MeasureSample {
    double X = 0.0;
    double Z1 = 0.0, Z2 = 0.0;
    double y = 0.0;
    std::int64_t samples = 0;
    std::int64_t hits = 0;
    double sampled_measure = 0.0;
    double std_error = 0.0;
    double bound = 0.0;  // y X^{8/3+eps} Z1^{-2} Z2^{-2}
    std::uint64_t seed = 0;
};

/// Stratified Monte-Carlo measure of {alpha in +-[y, 2y] : |S_1(l1 a)| > Z1, |S_1(l2 a)| > Z2}.
MeasureSample sample_large_sum_measure(const ProblemInstance& inst, double X, double Z1,
                                       double Z2, double y, std::int64_t samples,
                                       std::uint64_t seed, const PrimeTable& table);

/// |m1 - m2| <= 3 sqrt(se1^2 + se2^2)
bool measures_consistent(const MeasureSample& a, const MeasureSample& b);

struct EtaGridRow {
    double X = 0.0;
    int j = 0;
    double eta = 0.0;
    std::size_t count = 0;
    double weighted = 0.0;
};

struct TheoremRow {
    std::int64_t q = 0;
    double X = 0.0;
    Status status = Status::Pass;
    std::string note;
    double eta_theory = 0.0;
    std::size_t count_theory = 0;
    double weighted_theory = 0.0;
    bool weighted_bound_ok = true;
    double eta_min = 0.0;  // smallest residual found (NaN when none)
    SolutionRecord best;
    bool best_reverified = false;
    double duality_residual_10 = 0.0;  // NaN when not attempted
    double duality_residual_50 = 0.0;
    double duality_tail_10 = 0.0;
    double duality_tail_50 = 0.0;
};

struct TheoremReport {
    bool rational_flag = false;
    bool sign_infeasible = false;
    bool same_sign = false;
    std::vector<TheoremRow> rows;
    std::vector<EtaGridRow> eta_grid;
};

TheoremReport run_theorem_experiment(const ExperimentConfig& config);

// Stable CSV schemas.
inline constexpr const char* kLemmaCsvHeader =
    "lemma,level,X,value,bound,ratio,growth,limit,status,note";
inline constexpr const char* kTheoremCsvHeader =
    "q,X,status,eta_theory,count_theory,weighted_theory,weighted_bound_ok,eta_min,"
    "best_p1,best_p2,best_p3,best_residual,best_reverified,duality_residual_10,"
    "duality_tail_10,duality_residual_50,duality_tail_50,note";
inline constexpr const char* kEtaGridCsvHeader = "X,j,eta,count,weighted_count";
inline constexpr const char* kMeasureCsvHeader =
    "X,Z1,Z2,y,samples,hits,sampled_measure,std_error,bound,seed";

void write_lemma_csv(std::ostream& os, const LemmaSuiteReport& report);
void write_theorem_csv(std::ostream& os, const TheoremReport& report);
void write_eta_grid_csv(std::ostream& os, const TheoremReport& report);
void write_measure_csv(std::ostream& os, const std::vector<MeasureSample>& samples);

}  // namespace dhlab
