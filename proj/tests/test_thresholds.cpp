#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pinchflow/error.hpp"
#include "pinchflow/thresholds.hpp"

using namespace pinchflow;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

} // namespace

TEST_CASE("parameters are validated") {
    CHECK(code_of([] { PinchingParams::make(2, 1.0); }) == ErrorCode::DomainError);
    CHECK(code_of([] { PinchingParams::make(3, 0.0); }) == ErrorCode::DomainError);
    CHECK(code_of([] { PinchingParams::make(3, -1.0); }) == ErrorCode::DomainError);
    CHECK(code_of([] { PinchingParams::make(3, NAN); }) == ErrorCode::DomainError);
    CHECK(code_of([] { PinchingParams::make(3, INFINITY); }) == ErrorCode::DomainError);
    CHECK(PinchingParams::make(3, 0.25).n == 3);
}

TEST_CASE("alpha agrees with the long double formula") {
    for (int n = 3; n <= 12; ++n) {
        for (double c : {0.25, 1.0, 4.0}) {
            const PinchingParams p = PinchingParams::make(n, c);
            for (double x : {0.0, 1e-9, 0.3, 1.0, 7.5, 120.0}) {
                const double ref = static_cast<double>(oracle::alpha(n, c, x));
                CHECK(alpha_value(p, x) == doctest::Approx(ref).epsilon(1e-14));
            }
            CHECK(alpha_value(p, 0.0) == doctest::Approx(n * c).epsilon(1e-15));
        }
    }
}

TEST_CASE("alpha derivatives agree with high-order differences") {
    for (int n : {3, 7, 12}) {
        const PinchingParams p = PinchingParams::make(n, 1.0);
        for (double x : {0.05, 2.0, 40.0}) {
            const AlphaJet a = eval_alpha(p, x);
            CHECK(a.d1 == doctest::Approx(static_cast<double>(oracle::alpha_d1(n, 1.0L, x))).epsilon(1e-9));
            CHECK(a.d2 == doctest::Approx(static_cast<double>(oracle::alpha_d2(n, 1.0L, x))).epsilon(1e-6));
        }
    }
}

TEST_CASE("alpha derivatives are undefined at zero") {
    const PinchingParams p = PinchingParams::make(4, 1.0);
    CHECK(code_of([&] { eval_alpha(p, 0.0); }) == ErrorCode::DerivativeAtZero);
    CHECK(code_of([&] { alpha_value(p, -1.0); }) == ErrorCode::DomainError);
    const Thresholds t(p);
    CHECK_FALSE(t.evaluate(0.0).alpha_d1.has_value());
    CHECK(t.evaluate(1.0).alpha_d1.has_value());
}

TEST_CASE("alpha is homogeneous of degree one in (x, c)") {
    const PinchingParams a = PinchingParams::make(6, 1.0);
    const PinchingParams b = PinchingParams::make(6, 3.0);
    for (double x : {0.1, 2.0, 30.0}) CHECK(alpha_value(b, 3.0 * x) == doctest::Approx(3.0 * alpha_value(a, x)));
}

TEST_CASE("y_n matches an independent bisection") {
    for (int n = 3; n <= 12; ++n) {
        const CriticalConstants k = compute_y_n(PinchingParams::make(n, 1.0));
        CHECK(k.y_n == doctest::Approx(static_cast<double>(oracle::y_n(n))).epsilon(1e-13));
        CHECK(k.bneq_residual < 1e-10);
        CHECK(std::abs(k.y_n - k.y_n_scan) <= 1e-9 * k.y_n);
    }
    CHECK(compute_y_n(PinchingParams::make(10, 1.0)).y_n == doctest::Approx(12.0).epsilon(1e-15));
}

TEST_CASE("x0 and x1 scale with c") {
    for (double c : {0.25, 4.0}) {
        const CriticalConstants k1 = compute_y_n(PinchingParams::make(5, 1.0));
        const CriticalConstants kc = compute_y_n(PinchingParams::make(5, c));
        CHECK(kc.x0 == doctest::Approx(c * k1.x0));
        CHECK(kc.x1 == doctest::Approx(c * k1.x1));
        CHECK(kc.k_n == doctest::Approx(k1.k_n));
    }
    // x1 minimises alpha
    for (int n : {3, 5, 11}) {
        const PinchingParams p = PinchingParams::make(n, 1.0);
        const double x1 = compute_y_n(p).x1;
        CHECK(alpha_value(p, x1) == doctest::Approx(static_cast<double>(oracle::alpha_min(n, 1.0L))).epsilon(1e-14));
    }
}

TEST_CASE("k_n matches the brute-force minimum of beta") {
    for (int n = 3; n <= 12; ++n) {
        const KnValue k = compute_k_n(PinchingParams::make(n, 1.0));
        CHECK(k.value == doctest::Approx(static_cast<double>(oracle::k_n(n))).epsilon(1e-7));
        CHECK(k.branch == (n == 3 ? KnBranch::TaylorAtZero : KnBranch::Vertex));
    }
    CHECK(compute_k_n(PinchingParams::make(10, 1.0)).value == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("gamma switches branch at x0 and is C2 there") {
    for (int n : {3, 4, 10, 12}) {
        const Thresholds t(PinchingParams::make(n, 1.0));
        const double x0 = t.x0();
        CHECK(t.branch(0.5 * x0) == Branch::Beta);
        CHECK(t.branch(x0) == Branch::Alpha);
        const QuadraticJet below = t.gamma(std::nextafter(x0, 0.0));
        const AlphaJet above = t.alpha_jet(x0);
        CHECK(below.value == doctest::Approx(above.value).epsilon(1e-14));
        CHECK(below.d1 == doctest::Approx(above.d1).epsilon(1e-12));
        CHECK(below.d2 == doctest::Approx(above.d2).epsilon(1e-12));
        const oracle::Beta b = oracle::beta(n, 1.0L);
        for (double x : {0.0, 0.3 * x0, 0.9 * x0}) {
            CHECK(t.beta(x).value == doctest::Approx(static_cast<double>(b(x))).epsilon(1e-9));
            CHECK(t.gamma(x).value == t.beta(x).value);
        }
        CHECK(t.gamma(2.0 * x0).value == t.alpha(2.0 * x0));
    }
}

TEST_CASE("n = 3 at x = 0 sits on the beta branch") {
    const Thresholds t(PinchingParams::make(3, 1.0));
    const ThresholdBundle b = t.evaluate(0.0);
    CHECK(b.active_branch == Branch::Beta);
    CHECK(b.gamma == b.beta);
    CHECK(b.gamma == doctest::Approx(static_cast<double>(oracle::k_n(3))).epsilon(1e-7));
}

TEST_CASE("n = 10 beta at zero") {
    // beta(0) = alpha(12) - 12 alpha'(12) + 72 alpha''(12) with alpha(12) = 6,
    // alpha'(12) = 0 and alpha''(12) = 2 * 8 * 9 / 576^(3/2) = 1/96
    const Thresholds t(PinchingParams::make(10, 1.0));
    CHECK(t.beta(0.0).value == doctest::Approx(6.75).epsilon(1e-13));
}

TEST_CASE("omega matches the displayed formula above x0 and stays positive") {
    for (int n : {3, 5, 9, 12}) {
        for (double c : {0.25, 1.0}) {
            const Thresholds t(PinchingParams::make(n, c));
            for (double f : {1.0, 1.5, 4.0, 50.0}) {
                const double x = f * t.x0();
                CHECK(t.omega(x).value == doctest::Approx(static_cast<double>(oracle::omega(n, c, x))).epsilon(1e-13));
            }
            for (double f : {0.0, 0.2, 0.7, 0.999}) CHECK(t.omega(f * t.x0()).value > 0.0);
        }
    }
}

TEST_CASE("omega jets agree with differences of the displayed formula") {
    const int n = 4;
    const double c = 2.0;
    const Thresholds t(PinchingParams::make(n, c));
    for (double f : {1.2, 3.0, 20.0}) {
        const double x = f * t.x0();
        const oracle::ld h = 1e-4L * x;
        const oracle::ld d1 = (oracle::omega(n, c, x + h) - oracle::omega(n, c, x - h)) / (2 * h);
        const oracle::ld d2 = (oracle::omega(n, c, x + h) - 2 * oracle::omega(n, c, x) + oracle::omega(n, c, x - h)) / (h * h);
        CHECK(t.omega(x).d1 == doctest::Approx(static_cast<double>(d1)).epsilon(1e-7));
        CHECK(t.omega(x).d2 == doctest::Approx(static_cast<double>(d2)).epsilon(1e-5));
    }
}
