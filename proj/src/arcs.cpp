#include "dhlab/arcs.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "dhlab/errors.hpp"
#include "dhlab/solver.hpp"
#include "json.hpp"

namespace dhlab {

double psi(double k) {
    if (!(k > 1.0 && k <= 3.0)) throw DomainError("psi: k must lie in (1, 3]");
    if (k <= 6.0 / 5.0) return (3 - 2 * k) / (6 * k);
    if (k <= 2.0) return 1.0 / 12.0;
    if (k < 3.0) return (3 - k) / (6 * k);
    return 1.0 / 24.0;
}

double phi(double k) { return (4 - 3 * k) / (10 * k); }

const char* region_name(Region r) {
    switch (r) {
        case Region::Major: return "major";
        case Region::Intermediate: return "intermediate";
        case Region::Minor: return "minor";
        case Region::Trivial: return "trivial";
    }
    return "?";
}

namespace {

constexpr double kMinX = 100.0;

/// Smallest X >= 100 where `holds` is true, assuming it stays true beyond;
/// NaN if no X up to 1e300 works.
double minimal_x(const std::function<bool(double)>& holds) {
    double hi = kMinX;
    while (!holds(hi)) {
        hi *= 2;
        if (hi > 1e300) return std::numeric_limits<double>::quiet_NaN();
    }
    if (hi == kMinX) return kMinX;
    double lo = hi / 2;
    for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
        const double mid = (lo + hi) / 2;
        (holds(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::vector<EtaConstraint> eta_constraints(double k, double X, double eta) {
    std::vector<EtaConstraint> out;
    const double log_eta = std::log(eta) / std::log(X);
    auto add = [&](std::string label, double e) {
        out.push_back({std::move(label), e, log_eta > e - 1e-12});
    };
    if (k <= 6.0 / 5.0)
        add("minor-L2", 1.0 / 3 - 1 / (2 * k));
    else if (k < 3.0)
        add("minor-L4", std::max(1.0 / 6 - 1 / (2 * k), -1.0 / 12));
    else
        add("minor-L8", -1.0 / 24);
    return out;
}

}  // namespace

ArcDecomposition choose_parameters(const ProblemInstance& inst, double X, double eta) {
    const double k = inst.k, eps = inst.epsilon;
    if (!(X >= kMinX)) throw DomainError("choose_parameters: X must be >= 100");
    if (!(eps > 0 && eps < 1.0 / 24)) throw DomainError("choose_parameters: epsilon must lie in (0, 1/24)");
    psi(k);  // validates k

    if (!(eta > 0 && eta < 1))
        throw ParameterError("choose_parameters: eta must lie in (0, 1)", "eta < 1",
                             std::numeric_limits<double>::quiet_NaN());

    const double p_exp = 5 / (6 * k) - eps;
    auto P_of = [&](double x) { return std::pow(x, p_exp); };
    if (!(P_of(X) > 1))
        throw ParameterError("choose_parameters: P > 1 fails", "P > 1",
                             minimal_x([&](double x) { return P_of(x) > 1; }));

    auto R_of = [&](double x) { return std::pow(std::log(x), 1.5) / (eta * eta); };
    if (!(R_of(X) > 1 / eta))
        throw ParameterError("choose_parameters: R > 1/eta fails", "R > 1/eta",
                             minimal_x([&](double x) { return R_of(x) > 1 / eta; }));

    ArcDecomposition d;
    d.k = k;
    d.X = X;
    d.epsilon = eps;
    d.eta = eta;
    d.P = P_of(X);
    d.R = R_of(X);
    const double edge = d.P / X;
    d.major = {0.0, edge};
    const double three_fifths = std::pow(X, -0.6);
    if (k >= 2.5 && edge < three_fifths) {
        d.intermediate = {edge, three_fifths};
        d.minor = {three_fifths, d.R};
    } else {
        d.intermediate = {edge, edge};
        d.minor = {edge, d.R};
    }
    d.trivial_from = d.R;
    d.constraints = eta_constraints(k, X, eta);
    return d;
}

ArcDecomposition choose_parameters(const ProblemInstance& inst, double X) {
    psi(inst.k);
    const double exponent = -psi(inst.k) + inst.epsilon;
    if (!(exponent < 0))
        throw ParameterError("choose_parameters: eta = X^{-psi+eps} is not below 1", "eta < 1",
                             std::numeric_limits<double>::quiet_NaN());
    return choose_parameters(inst, X, std::pow(X, exponent));
}

Region locate(double alpha, const ArcDecomposition& d) {
    const double a = std::fabs(alpha);
    if (a <= d.major.hi) return Region::Major;
    if (d.has_intermediate() && a <= d.intermediate.hi) return Region::Intermediate;
    if (a <= d.minor.hi) return Region::Minor;
    return Region::Trivial;
}

std::string ArcDecomposition::to_json() const {
    using nlohmann::json;
    auto pair = [](ArcInterval iv) { return json::array({iv.lo, iv.hi}); };
    json j;
    j["k"] = k;
    j["X"] = X;
    j["epsilon"] = epsilon;
    j["eta"] = eta;
    j["P"] = P;
    j["R"] = R;
    j["major"] = json::array({-major.hi, major.hi});
    j["intermediate"] = has_intermediate() ? json::array({pair({-intermediate.hi, -intermediate.lo}),
                                                          pair(intermediate)})
                                           : json::array();
    j["minor"] = json::array({pair({-minor.hi, -minor.lo}), pair(minor)});
    j["trivial"] = {{"abs_alpha_above", trivial_from}};
    json cs = json::array();
    for (const auto& c : constraints)
        cs.push_back({{"label", c.label}, {"exponent", c.exponent}, {"satisfied", c.satisfied}});
    j["eta_constraints"] = cs;
    return j.dump(2);
}

WindowFeasibility window_feasibility(const ProblemInstance& inst) {
    WindowFeasibility f;
    const double d = inst.delta, l3 = std::fabs(inst.lambda3);
    f.a1 = 2 * d * l3 / std::fabs(inst.lambda1);
    f.b1 = 1.5 * f.a1;
    f.a2 = 2 * d * l3 / std::fabs(inst.lambda2);
    f.b2 = 1.5 * f.a2;
    f.feasible = f.a1 >= d && f.b1 <= 1 - d && f.a2 >= d && f.b2 <= 1 - d;
    return f;
}

}  // namespace dhlab
