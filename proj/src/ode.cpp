#include "pinchflow/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pinchflow/error.hpp"

namespace pinchflow {

double AcceptedStep::hermite(std::size_t i, double s) const {
    const double h = t - t_prev;
    const double th = (s - t_prev) / h;
    const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
    const double h10 = th * (1.0 - th) * (1.0 - th);
    const double h01 = th * th * (3.0 - 2.0 * th);
    const double h11 = th * th * (th - 1.0);
    return h00 * (*y_prev)[i] + h10 * h * (*dy_prev)[i] + h01 * (*y)[i] + h11 * h * (*dy)[i];
}

double AcceptedStep::hermite_derivative(std::size_t i, double s) const {
    const double h = t - t_prev;
    const double th = (s - t_prev) / h;
    const double d00 = 6.0 * th * (th - 1.0) / h;
    const double d10 = (1.0 - th) * (1.0 - 3.0 * th);
    const double d01 = -d00;
    const double d11 = th * (3.0 * th - 2.0);
    return d00 * (*y_prev)[i] + d10 * (*dy_prev)[i] + d01 * (*y)[i] + d11 * (*dy)[i];
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 5.0;

} // namespace

OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, OdeState y0, double t_end,
                           const OdeOptions& options, const OdeObserver& observer) {
    if (!(t_end >= t0)) fail(ErrorCode::InvalidArgument, "integration interval is reversed");
    if (!(options.rtol > 0.0) || !(options.atol >= 0.0)) {
        fail(ErrorCode::InvalidArgument, "integrator tolerances must be positive");
    }
    const std::size_t m = y0.size();
    double atol = options.atol;
    OdeResult result;
    result.t = t0;
    result.y = std::move(y0);
    OdeState& y = result.y;
    OdeState k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m), tmp(m), y_new(m), y_prev(m), dy_prev(m);
    rhs(result.t, y, k1);

    double h = std::min({options.dt_initial, options.dt_max, t_end - t0});
    double err_old = 1e-4;
    bool last_rejected = false;
    std::string last_failure;

    while (result.t < t_end) {
        if (result.accepted >= options.max_steps) {
            fail(ErrorCode::StepUnderflow, "step budget exhausted at t = " + std::to_string(result.t));
        }
        const double t = result.t;
        const bool final_step = t + h >= t_end;
        if (final_step) h = t_end - t;
        if (h < options.dt_min && !final_step) {
            std::ostringstream os;
            os.precision(17);
            os << "step size " << h << " fell below dt_min = " << options.dt_min << " at t = " << t;
            if (!last_failure.empty()) os << " (" << last_failure << ")";
            fail(ErrorCode::StepUnderflow, os.str());
        }

        double err = 0.0;
        bool stage_failed = false;
        try {
            for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * a21 * k1[i];
            rhs(t + c2 * h, tmp, k2);
            for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            rhs(t + c3 * h, tmp, k3);
            for (std::size_t i = 0; i < m; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            rhs(t + c4 * h, tmp, k4);
            for (std::size_t i = 0; i < m; ++i)
                tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            rhs(t + c5 * h, tmp, k5);
            for (std::size_t i = 0; i < m; ++i)
                tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            rhs(t + h, tmp, k6);
            for (std::size_t i = 0; i < m; ++i)
                y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            rhs(t + h, y_new, k7);
            double sum = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                const double scale = atol + options.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
                if (scale > 0.0) sum += (e / scale) * (e / scale);
            }
            err = m > 0 ? std::sqrt(sum / static_cast<double>(m)) : 0.0;
            if (!std::isfinite(err)) {
                stage_failed = true;
                last_failure = "non-finite error estimate";
            }
        } catch (const Error& e) {
            stage_failed = true;
            last_failure = e.what();
        }

        if (stage_failed) {
            ++result.rejected;
            h *= 0.25;
            last_rejected = true;
            continue;
        }

        if (err <= 1.0) {
            const double fac = err == 0.0 ? kFacMax
                                          : kSafety * std::pow(err, -kAlpha) * std::pow(err_old, kBeta);
            double h_next = h * std::clamp(fac, kFacMin, last_rejected ? 1.0 : kFacMax);
            err_old = std::max(err, 1e-4);

            y_prev = y;
            dy_prev = k1;
            y.swap(y_new);
            k1.swap(k7);
            result.t = final_step ? t_end : t + h;
            ++result.accepted;
            last_rejected = false;
            last_failure.clear();

            if (observer) {
                AcceptedStep step{t, result.t, &y_prev, &dy_prev, &y, &k1, false, &atol};
                const ObserverAction action = observer(step);
                if (step.modified) rhs(result.t, y, k1);
                if (action == ObserverAction::Stop) {
                    result.stopped_by_observer = true;
                    return result;
                }
            }
            h = std::min(h_next, options.dt_max);
        } else {
            ++result.rejected;
            h *= std::max(kFacMin, kSafety * std::pow(err, -kAlpha));
            last_rejected = true;
        }
    }
    return result;
}

} // namespace pinchflow
