#pragma once

#include <optional>

#include "pinchflow/jet.hpp"

namespace pinchflow {

/// Ambient data every threshold is parametrized by: hypersurface dimension n
/// and sectional curvature c of the spherical space form.
struct PinchingParams {
    int n = 10;
    double c = 1.0;

    /// Validates n >= 3 and finite c > 0, throwing DomainError otherwise.
    static PinchingParams make(int n, double c);
};

enum class Branch { Alpha, Beta };

const char* to_string(Branch branch) noexcept;

struct AlphaJet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

struct QuadraticJet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

enum class KnBranch {
    TaylorAtZero, // n = 3: the beta polynomial evaluated at zero
    Vertex,       // n >= 4: the vertex value of the beta polynomial
};

const char* to_string(KnBranch branch) noexcept;

struct KnValue {
    double value = 0.0; // multiple of c
    KnBranch branch = KnBranch::Vertex;
};

struct CriticalConstants {
    double y_n = 0.0;
    double x0 = 0.0; // y_n * c, where the pinching function switches branch
    double x1 = 0.0; // minimiser of alpha
    double k_n = 0.0;
    KnBranch k_n_branch = KnBranch::Vertex;
    double bneq_residual = 0.0; // relative residual of the cubic at y_n
    double y_n_scan = 0.0;      // independent root from the sign-change scan
};

struct ThresholdBundle {
    double x = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    // Undefined at x = 0 where the radical in alpha has its branch point.
    std::optional<double> alpha_d1, alpha_d2, alpha_d3;
    double beta_d1 = 0.0;
    double beta_d2 = 0.0;
    double gamma_d1 = 0.0;
    double gamma_d2 = 0.0;
    double omega = 0.0;
    double omega_d1 = 0.0;
    double omega_d2 = 0.0;
    Branch active_branch = Branch::Alpha;
};

// Closed forms. x is always H^2 and must be nonnegative.
double alpha_value(const PinchingParams& p, double x);
AlphaJet eval_alpha(const PinchingParams& p, double x);
Jet omega_closed_form(const PinchingParams& p, double x);

/// Solves for y_n in extended precision and certifies it against a
/// sign-change scan of the defining cubic. Also fills x0, x1 and k_n.
CriticalConstants compute_y_n(const PinchingParams& p);

KnValue compute_k_n(const PinchingParams& p);

/// Cached evaluator for one (n, c). Construction computes the critical
/// constants and the Taylor data at x0 used by beta and by the extension of
/// omega below x0; it throws DomainError if that extension is not positive.
class Thresholds {
public:
    explicit Thresholds(PinchingParams params);

    const PinchingParams& params() const noexcept { return params_; }
    const CriticalConstants& constants() const noexcept { return constants_; }
    int n() const noexcept { return params_.n; }
    double c() const noexcept { return params_.c; }
    double x0() const noexcept { return constants_.x0; }

    double alpha(double x) const { return alpha_value(params_, x); }
    AlphaJet alpha_jet(double x) const { return eval_alpha(params_, x); }
    QuadraticJet beta(double x) const;
    QuadraticJet gamma(double x) const;
    QuadraticJet omega(double x) const;
    Branch branch(double x) const { return x >= constants_.x0 ? Branch::Alpha : Branch::Beta; }
    ThresholdBundle evaluate(double x) const;

    // Taylor data of alpha and omega at x0.
    const AlphaJet& alpha_at_x0() const noexcept { return alpha_x0_; }
    const Jet& omega_at_x0() const noexcept { return omega_x0_; }

private:
    PinchingParams params_;
    CriticalConstants constants_;
    AlphaJet alpha_x0_;
    Jet omega_x0_;
};

// Operation-level entry points mirroring the methods above.
QuadraticJet eval_beta(const Thresholds& t, double x);
ThresholdBundle eval_gamma(const Thresholds& t, double x);
QuadraticJet eval_omega(const Thresholds& t, double x);

} // namespace pinchflow
