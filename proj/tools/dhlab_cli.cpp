// dhlab: command-line front end for the experiments.
//
//   dhlab [--config f.json] [--out dir] [--seed n] [--threads n] <command> [options]
//
// Every command writes its CSV(s) plus summary.json into the output directory.
// Exit status: 0 all PASS/SKIPPED, 1 any FAIL, 2 usage error.

#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dhlab/arcs.hpp"
#include "dhlab/diophantine.hpp"
#include "dhlab/errors.hpp"
#include "dhlab/expsums.hpp"
#include "dhlab/harness.hpp"
#include "dhlab/norms.hpp"
#include "dhlab/primes.hpp"
#include "dhlab/report.hpp"
#include "dhlab/solver.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace dhlab;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    return os;
}

std::uint64_t sieve_limit_for(double X, double k = 1.0) {
    return static_cast<std::uint64_t>(std::floor(std::pow(X, 1 / k) * (1 + 1e-12))) + 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Davenport-Heilbronn numerical laboratory"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (default: config out_dir)");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");

    // Instance overrides; flags win over the config file.
    std::optional<double> l1, l2, l3, kk, omega, delta, epsilon;
    app.add_option("--lambda1", l1);
    app.add_option("--lambda2", l2);
    app.add_option("--lambda3", l3);
    app.add_option("--k", kk, "exponent k");
    app.add_option("--omega", omega);
    app.add_option("--delta", delta);
    app.add_option("--epsilon", epsilon);

    auto* sieve_cmd = app.add_subcommand("sieve", "primes up to a limit and theta");
    std::uint64_t sieve_lim = 1000000;
    bool list_primes = false;
    sieve_cmd->add_option("--limit", sieve_lim, "sieve limit")->required();
    sieve_cmd->add_flag("--list", list_primes, "also write primes.csv");

    auto* expsum_cmd = app.add_subcommand("expsum", "S_k, U_k or T_k at a point or on a grid");
    std::string kind = "S";
    double X = 1e4, alpha = 0.0, step = 0.0;
    std::int64_t count = 0;
    expsum_cmd->add_option("--kind", kind, "S, U or T")->check(CLI::IsMember({"S", "U", "T"}));
    expsum_cmd->add_option("--X", X, "X")->required();
    expsum_cmd->add_option("--alpha", alpha, "alpha (grid start when --count is given)");
    expsum_cmd->add_option("--step", step, "grid step");
    expsum_cmd->add_option("--count", count, "grid points");

    auto* moments_cmd = app.add_subcommand("moments", "trapezoid moment of |S|^p on [lo, hi]");
    std::string msum = "Sk";
    int mexp = 2;
    double lo = 0.0, hi = 1.0;
    std::optional<double> meta;
    moments_cmd->add_option("--sum", msum, "S1 or Sk")->check(CLI::IsMember({"S1", "Sk"}));
    moments_cmd->add_option("--p", mexp, "exponent 2, 4 or 8");
    moments_cmd->add_option("--X", X)->required();
    moments_cmd->add_option("--lo", lo);
    moments_cmd->add_option("--hi", hi);
    moments_cmd->add_option("--eta", meta, "weight by K_eta (needs 0 <= lo)");

    auto* quad_cmd = app.add_subcommand("quadruples", "count |n1^k+n2^k-n3^k-n4^k| < gamma on (N, 2N]");
    std::int64_t qN = 10;
    double qgamma = 1.0;
    quad_cmd->add_option("--N", qN)->required();
    quad_cmd->add_option("--gamma", qgamma);

    auto* cf_cmd = app.add_subcommand("cf", "convergents and a Dirichlet witness");
    double cfx = std::sqrt(2.0), cfQ = 0.0;
    int cfn = 10;
    cf_cmd->add_option("--x", cfx)->required();
    cf_cmd->add_option("--n", cfn, "number of convergents");
    cf_cmd->add_option("--Q", cfQ, "witness bound Q (0 = skip)");

    auto* arcs_cmd = app.add_subcommand("arcs", "arc decomposition for X");
    std::optional<double> aeta;
    arcs_cmd->add_option("--X", X)->required();
    arcs_cmd->add_option("--eta", aeta, "explicit eta");

    auto* solve_cmd = app.add_subcommand("solve", "enumerate solutions; optional duality check");
    double seta = 0.5, sB = 0.0;
    solve_cmd->add_option("--X", X)->required();
    solve_cmd->add_option("--eta", seta);
    solve_cmd->add_option("--B", sB, "also integrate over [-B, B] (0 = skip)");

    auto* lemmas_cmd = app.add_subcommand("lemmas", "lemma-bound ratio suite");
    auto* theorem_cmd = app.add_subcommand("theorem", "solutions along X = q^3");
    auto* measure_cmd = app.add_subcommand("measure", "large-values measure sampling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        ExperimentConfig cfg;
        try {
            if (!config_path.empty()) cfg = load_config(config_path);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed) cfg.seed = *seed;
        if (threads) cfg.threads = *threads;
        auto& in = cfg.instance;
        if (l1) in.lambda1 = *l1;
        if (l2) in.lambda2 = *l2;
        if (l3) in.lambda3 = *l3;
        if (kk) in.k = *kk;
        if (omega) in.omega = *omega;
        if (delta) in.delta = *delta;
        if (epsilon) in.epsilon = *epsilon;
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);

        const fs::path out = cfg.out_dir;
        fs::create_directories(out);

        json summary;
        summary["config"] = json::parse(config_to_json(cfg));
        bool failed = false;
        auto usage = [](bool ok, const std::string& what) {
            if (!ok) throw UsageError(what);
        };

        if (*sieve_cmd) {
            usage(sieve_lim >= 2, "--limit must be >= 2");
            const PrimeTable t = sieve(sieve_lim);
            auto os = open_out(out, "sieve.csv");
            os << "limit,count,theta\n"
               << sieve_lim << ',' << t.primes().size() << ','
               << fmt_double(theta(static_cast<double>(sieve_lim), t)) << '\n';
            if (list_primes) {
                auto pl = open_out(out, "primes.csv");
                pl << "p\n";
                for (auto p : t.primes()) pl << p << '\n';
            }
            summary["command"] = "sieve";
            summary["count"] = t.primes().size();
            summary["theta"] = theta(static_cast<double>(sieve_lim), t);
        } else if (*expsum_cmd) {
            usage(X > 0, "--X must be > 0");
            const SumRange r{in.k, in.delta, X};
            const PrimeTable t = sieve(sieve_limit_for(X, in.k));
            auto os = open_out(out, "expsum.csv");
            summary["command"] = "expsum";
            if (count > 0) {
                usage(kind != "T", "grid evaluation supports S and U only");
                usage(step > 0, "--step must be > 0 with --count");
                const GridSpec spec{alpha, step, count, 1.0};
                const auto g = eval_grid(kind == "S" ? SumKind::S : SumKind::U, r, t, spec);
                write_grid_csv(os, g);
                summary["points"] = count;
            } else {
                const cplx v = kind == "S" ? eval_S_k(alpha, r, t) : kind == "U" ? eval_U_k(alpha, r) : eval_T_k(alpha, r);
                os << "alpha,re,im,abs\n"
                   << fmt_double(alpha) << ',' << fmt_double(v.real()) << ',' << fmt_double(v.imag()) << ','
                   << fmt_double(std::abs(v)) << '\n';
                summary["re"] = num(v.real());
                summary["im"] = num(v.imag());
            }
        } else if (*moments_cmd) {
            usage(hi > lo, "--hi must exceed --lo");
            const SumRange r{in.k, in.delta, X};
            const PrimeTable t = sieve(sieve_limit_for(X));
            MomentReport rep;
            if (meta) {
                usage(lo >= 0, "weighted moments need --lo >= 0");
                WeightedMomentSpec spec;
                spec.exponent = mexp;
                spec.eta = *meta;
                spec.range = {lo, hi};
                const SumRange rr{msum == "S1" ? 1.0 : in.k, in.delta, X};
                spec.integral_frequencies = is_integral_exponent(rr.k);
                rep.exponent = mexp;
                rep.lo = lo;
                rep.hi = hi;
                rep.X = X;
                rep.k = rr.k;
                rep.eta = *meta;
                rep.value = weighted_moment(prime_terms(rr, t), spec);
                rep.bound = std::numeric_limits<double>::quiet_NaN();
                rep.ratio = std::numeric_limits<double>::quiet_NaN();
            } else {
                rep = moment_integral(msum == "S1" ? MomentSum::S1 : MomentSum::Sk, mexp, {lo, hi}, r, t);
            }
            auto os = open_out(out, "moments.csv");
            os << "exponent,lo,hi,X,k,eta,value,bound,ratio\n"
               << rep.exponent << ',' << fmt_double(rep.lo) << ',' << fmt_double(rep.hi) << ','
               << fmt_double(rep.X) << ',' << fmt_double(rep.k) << ',' << fmt_double(rep.eta) << ','
               << fmt_double(rep.value) << ',' << fmt_double(rep.bound) << ',' << fmt_double(rep.ratio) << '\n';
            summary["command"] = "moments";
            summary["moment"] = json::parse(rep.to_json());
        } else if (*quad_cmd) {
            usage(qN >= 1 && qgamma > 0, "need --N >= 1 and --gamma > 0");
            const auto c = count_quadruples(qN, in.k, qgamma);
            auto os = open_out(out, "quadruples.csv");
            os << "N,k,gamma,count\n"
               << c.N << ',' << fmt_double(c.k) << ',' << fmt_double(c.gamma) << ',' << c.count << '\n';
            summary["command"] = "quadruples";
            summary["count"] = c.count;
        } else if (*cf_cmd) {
            usage(cfn >= 1 && cfn <= 40, "--n must lie in [1, 40]");
            const auto list = convergents(cfx, cfn);
            auto os = open_out(out, "convergents.csv");
            write_convergents_csv(os, list);
            summary["command"] = "cf";
            summary["truncated"] = list.truncated;
            summary["terminated"] = list.terminated;
            if (cfQ >= 1) {
                const auto w = find_rational_witness(cfx, cfQ);
                summary["witness"] = {{"a", w.a}, {"q", w.q}, {"residual", w.residual}, {"flagged", w.flagged}};
            }
        } else if (*arcs_cmd) {
            const auto d = aeta ? choose_parameters(in, X, *aeta) : choose_parameters(in, X);
            auto os = open_out(out, "arcs.json");
            os << json::parse(d.to_json()).dump(2) << '\n';
            summary["command"] = "arcs";
            summary["arcs"] = json::parse(d.to_json());
            const auto wf = window_feasibility(in);
            summary["windows_feasible"] = wf.feasible;
        } else if (*solve_cmd) {
            usage(X > 0 && seta >= 0, "need --X > 0 and --eta >= 0");
            in.validate();
            const PrimeTable t = sieve(sieve_limit_for(X));
            const auto sols = enumerate_solutions(in, X, seta, t);
            auto os = open_out(out, "solutions.csv");
            write_solutions_csv(os, sols);
            RunSummary rs;
            rs.X = X;
            rs.eta = seta;
            rs.count = sols.size();
            rs.weighted_count = weighted_count(sols, seta);
            rs.I_real = rs.I_imag = rs.tail_bound = std::numeric_limits<double>::quiet_NaN();
            if (sB > 0) {
                const auto I = I_numeric(in, X, seta, {-sB, sB}, 0.0, t);
                rs.I_real = I.value.real();
                rs.I_imag = I.value.imag();
                rs.tail_bound = duality_tail_bound(in, X, t, sB);
                const double tol = 0.02 * rs.weighted_count + rs.tail_bound;
                const bool ok = std::fabs(rs.I_real - rs.weighted_count) <= tol;
                summary["duality"] = ok ? "PASS" : "FAIL";
                failed = !ok;
            }
            summary["command"] = "solve";
            summary["run"] = json::parse(rs.to_json());
            summary["same_sign"] = in.same_sign();
        } else if (*lemmas_cmd) {
            const auto rep = run_lemma_suite(cfg);
            auto os = open_out(out, "lemmas.csv");
            write_lemma_csv(os, rep);
            summary["command"] = "lemmas";
            summary["coverage_complete"] = rep.coverage_complete;
            for (const auto& [name, s] : rep.verdicts) summary["verdicts"][name] = status_name(s);
            failed = rep.any_fail();
        } else if (*theorem_cmd) {
            const auto rep = run_theorem_experiment(cfg);
            {
                auto os = open_out(out, "theorem.csv");
                write_theorem_csv(os, rep);
            }
            auto eg = open_out(out, "eta_grid.csv");
            write_eta_grid_csv(eg, rep);
            summary["command"] = "theorem";
            summary["rational_flag"] = rep.rational_flag;
            summary["sign_infeasible"] = rep.sign_infeasible;
            summary["same_sign"] = rep.same_sign;
            for (const auto& r : rep.rows) {
                summary["rows"].push_back({{"q", r.q}, {"X", r.X}, {"status", status_name(r.status)},
                                           {"eta_theory", num(r.eta_theory)}, {"eta_min", num(r.eta_min)}});
                failed = failed || r.status == Status::Fail;
            }
        } else if (*measure_cmd) {
            const auto& m = cfg.measure;
            usage(m.y > 0 && m.samples >= 1, "measure: need y > 0 and samples >= 1");
            const PrimeTable t = sieve(sieve_limit_for(m.X));
            const double s0 = prime_terms({1.0, in.delta, m.X}, t).total_weight();
            const double z1 = m.z1 < 0 ? 0.5 * s0 : m.z1;
            const double z2 = m.z2 < 0 ? 0.5 * s0 : m.z2;
            const auto a = sample_large_sum_measure(in, m.X, z1, z2, m.y, m.samples, cfg.seed, t);
            const auto b = sample_large_sum_measure(in, m.X, z1, z2, m.y, m.samples, cfg.seed + 1, t);
            auto os = open_out(out, "measure.csv");
            write_measure_csv(os, {a, b});
            const bool ok = measures_consistent(a, b);
            summary["command"] = "measure";
            summary["S1_0"] = s0;
            summary["consistent"] = ok ? "PASS" : "FAIL";
            failed = !ok;
        }

        summary["status"] = failed ? "FAIL" : "PASS";
        auto js = open_out(out, "summary.json");
        js << summary.dump(2) << '\n';
        std::cout << summary["command"].get<std::string>() << ": " << summary["status"].get<std::string>()
                  << " (" << out.string() << ")\n";
        return failed ? 1 : 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << " (" << e.inequality() << ", minimal X "
                  << fmt_double(e.minimal_x()) << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
