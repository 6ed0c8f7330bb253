#pragma once

#include <cmath>

namespace pinchflow {

// Truncated Taylor jet (f, f', f'') in one variable. Arithmetic propagates the
// first two derivatives exactly, so a closed form written over Jet yields its
// analytic derivatives without symbolic work.
struct Jet {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    static constexpr Jet variable(double x) { return {x, 1.0, 0.0}; }
    static constexpr Jet constant(double x) { return {x, 0.0, 0.0}; }
};

constexpr Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
constexpr Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
constexpr Jet operator-(Jet a) { return {-a.v, -a.d1, -a.d2}; }
constexpr Jet operator*(Jet a, Jet b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}
constexpr Jet operator*(double s, Jet a) { return {s * a.v, s * a.d1, s * a.d2}; }
constexpr Jet operator*(Jet a, double s) { return s * a; }
constexpr Jet operator+(Jet a, double s) { return {a.v + s, a.d1, a.d2}; }
constexpr Jet operator+(double s, Jet a) { return a + s; }
constexpr Jet operator-(double s, Jet a) { return {s - a.v, -a.d1, -a.d2}; }
constexpr Jet operator-(Jet a, double s) { return {a.v - s, a.d1, a.d2}; }

// Chain rule for g(a) given g, g', g'' at a.v.
constexpr Jet compose(Jet a, double g, double g1, double g2) {
    return {g, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2};
}

constexpr Jet reciprocal(Jet a) {
    const double r = 1.0 / a.v;
    return compose(a, r, -r * r, 2.0 * r * r * r);
}

constexpr Jet operator/(Jet a, Jet b) { return a * reciprocal(b); }
constexpr Jet operator/(Jet a, double s) { return (1.0 / s) * a; }
constexpr Jet operator/(double s, Jet a) { return s * reciprocal(a); }

inline Jet sqrt(Jet a) {
    const double r = std::sqrt(a.v);
    return compose(a, r, 0.5 / r, -0.25 / (r * a.v));
}

inline Jet pow(Jet a, double p) {
    const double r = std::pow(a.v, p);
    return compose(a, r, p * r / a.v, p * (p - 1.0) * r / (a.v * a.v));
}

} // namespace pinchflow
