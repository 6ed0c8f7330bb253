#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pinchflow/flow.hpp"
#include "pinchflow/thresholds.hpp"

namespace pinchflow {

/// Evaluation grid in x = H^2: log-spaced on [lo * c, c), linear on
/// [c, hi * c], merged with the distinguished points x0, x1, (n-2)^2 c and
/// x2 (duplicates within 1e-12 relative are dropped).
struct GridSpec {
    int log_points = 2000;
    int linear_points = 10000;
    double lo = 1e-8;
    double hi = 100.0;
};

std::vector<double> make_grid(const Thresholds& t, const GridSpec& spec);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct CheckReport {
    std::string check_id;
    int n = 0;
    double c = 0.0;
    std::size_t grid_size = 0;
    double worst_margin = 0.0; // normalized; negative means violated
    double worst_x = 0.0;
    bool passed = false;
    std::vector<Interval> equality_loci;
    std::string detail;
};

/// Throws CheckFailure describing the report when it did not pass.
void require_passed(const CheckReport& report);

// Tolerances shared by the checks and their tests.
inline constexpr double kEqualityTol = 1e-8;   // |lhs - rhs| <= tol * scale counts as equality
inline constexpr double kStrictTol = 1e-12;    // strict inequalities need margin >= tol * scale
inline constexpr double kIdentityTol = 1e-10;  // relative residual of identities

/// The six properties of gamma, ids "gamma.i" ... "gamma.vi".
std::vector<CheckReport> check_gamma_properties(const Thresholds& t, const GridSpec& spec);
/// Algebraic identities of alpha, ids "identity.slope" and "identity.traceless".
std::vector<CheckReport> check_alpha_identities(const Thresholds& t, const GridSpec& spec);
/// 2x alpha'' + alpha': closed form, monotonicity, limit, values at x0, x1.
CheckReport check_phi1(const Thresholds& t, const GridSpec& spec);
/// The three properties of omega, ids "omega.i" ... "omega.iii".
std::vector<CheckReport> check_omega_properties(const Thresholds& t, const GridSpec& spec);
CheckReport check_constants(const Thresholds& t);
CheckReport check_gamma_lower_bound(const Thresholds& t, const GridSpec& spec);
CheckReport check_alpha_minimum(const Thresholds& t, const GridSpec& spec);
/// Centered differences against every closed-form derivative.
CheckReport check_derivatives(const Thresholds& t, std::uint64_t seed, int points = 100);
/// Traceless cubic bound and the W lower bound on random principal multisets.
CheckReport check_okumura(const PinchingParams& p, std::uint64_t seed, int samples = 100000);
/// Exact versus numeric flows, reaction equations and pinching preservation.
std::vector<CheckReport> check_flow_oracles(const PinchingParams& p);

// Building blocks of the flow checks, reused by tests.

/// First-derivative weights at x0 for arbitrary distinct nodes.
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes);

struct ReactionResidual {
    double H_rel = 0.0;  // worst relative mismatch of dH/dt
    double h2_rel = 0.0; // worst relative mismatch of d|h|^2/dt
    std::size_t points = 0;
};

/// Five-point differences in time over consecutive accepted samples of a
/// homogeneous trace, compared against the reaction right-hand sides.
ReactionResidual reaction_residual(const FlowTrace& trace, double t_limit);

/// Product state with H^2 = x0, on the boundary of the pinching region.
ProductSn1S1 boundary_product(const Thresholds& t);

struct SuiteOptions {
    std::vector<int> dimensions{3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<double> curvatures{0.25, 1.0, 4.0};
    GridSpec grid;
    std::uint64_t seed = 20240531;
    int okumura_samples = 100000;
    bool include_flows = true;
    unsigned threads = 0; // 0: PINCHFLOW_THREADS or hardware concurrency
};

/// Runs every check for every (n, c) concurrently; order is deterministic.
std::vector<CheckReport> run_suite(const SuiteOptions& options);

unsigned default_thread_count();

} // namespace pinchflow
