#pragma once

#include <string>
#include <vector>

namespace dhlab {

struct ProblemInstance;

/// Exponent of the admissible eta: four branches on (1, 3].
double psi(double k);
/// The earlier exponent (4 - 3k) / (10k) on 1 < k < 4/3.
double phi(double k);

struct ArcInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return !(hi > lo); }
};

enum class Region { Major, Intermediate, Minor, Trivial };
const char* region_name(Region r);

/// One of the eta constraints the minor arc imposes; eta must grow faster
/// than X^{exponent}.
struct EtaConstraint {
    std::string label;
    double exponent = 0.0;
    bool satisfied = false;
};

/// R is split into major [-P/X, P/X], intermediate +-[P/X, X^{-3/5}] (only for
/// 5/2 <= k <= 3), minor +-[T, R] and trivial |alpha| > R. Intervals hold the
/// positive half; regions are symmetric.
struct ArcDecomposition {
    double k = 0.0;
    double X = 0.0;
    double epsilon = 0.0;
    double eta = 0.0;
    double P = 0.0;
    double R = 0.0;
    ArcInterval major;         // [0, P/X]
    ArcInterval intermediate;  // [P/X, X^{-3/5}] or empty
    ArcInterval minor;         // [T, R]
    double trivial_from = 0.0; // R
    std::vector<EtaConstraint> constraints;

    bool has_intermediate() const { return !intermediate.empty(); }
    std::string to_json() const;
};

/// eta = X^{-psi(k)+eps}, P = X^{5/(6k)-eps}, R = eta^{-2} log^{3/2} X.
ArcDecomposition choose_parameters(const ProblemInstance& instance, double X);
/// Same with an explicit eta (desk-scale override).
ArcDecomposition choose_parameters(const ProblemInstance& instance, double X, double eta);

/// Boundary points go to the region of smaller |alpha|.
Region locate(double alpha, const ArcDecomposition& d);

/// Windows a_j X .. (3/2) a_j X with a_j = 2 delta |lambda_3| / |lambda_j| must
/// fit inside [delta X, (1 - delta) X].
struct WindowFeasibility {
    double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
    bool feasible = false;
};
WindowFeasibility window_feasibility(const ProblemInstance& instance);

}  // namespace dhlab
