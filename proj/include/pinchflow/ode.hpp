#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace pinchflow {

using OdeState = std::vector<double>;

/// Right-hand side f(t, y) -> dy. Throwing pinchflow::Error from inside is
/// treated as a rejected trial step and retried with a smaller dt.
using OdeRhs = std::function<void(double t, const OdeState& y, OdeState& dy)>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double dt_initial = 1e-4;
    double dt_min = 1e-14;
    double dt_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 10'000'000;
};

enum class ObserverAction { Continue, Stop };

/// Accepted step from (t_prev, y_prev) to (t, y). The observer may project y
/// (for instance to reparametrize a curve); the integrator then re-evaluates
/// the derivative at the modified state.
struct AcceptedStep {
    double t_prev = 0.0;
    double t = 0.0;
    const OdeState* y_prev = nullptr;
    const OdeState* dy_prev = nullptr;
    OdeState* y = nullptr;
    const OdeState* dy = nullptr;
    bool modified = false; // set by an observer that changed *y
    double* atol = nullptr; // live absolute tolerance; observers may rescale it

    /// Cubic Hermite interpolation of component i at time s in the step.
    double hermite(std::size_t i, double s) const;
    double hermite_derivative(std::size_t i, double s) const;
};

using OdeObserver = std::function<ObserverAction(AcceptedStep& step)>;

struct OdeResult {
    double t = 0.0;
    OdeState y;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    bool stopped_by_observer = false;
};

/// Dormand-Prince 5(4) with a PI step-size controller. Integrates from t0 to
/// t_end unless the observer stops earlier; throws StepUnderflow if the step
/// falls below dt_min.
OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, OdeState y0, double t_end,
                           const OdeOptions& options, const OdeObserver& observer = {});

} // namespace pinchflow
