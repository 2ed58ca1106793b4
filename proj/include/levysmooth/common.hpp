#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace levysmooth {

// Points live in R^d with d in {1,2}. Fixed-capacity value type; the active
// dimension is carried by the model/grid that owns the computation.
using Vec = std::array<double, 2>;

inline constexpr double kPi = 3.14159265358979323846;

inline Vec vec1(double x) { return {x, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y}; }

inline double dot(const Vec& a, const Vec& b, int d) {
    double s = a[0] * b[0];
    if (d > 1) s += a[1] * b[1];
    return s;
}

inline double norm(const Vec& a, int d) { return std::sqrt(dot(a, a, d)); }

inline Vec add(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec scale(const Vec& a, double c) { return {a[0] * c, a[1] * c}; }

// Surface measure of the unit sphere S^{d-1}: 2 for d=1, 2*pi for d=2.
inline double sphere_surface(int d) {
    if (d == 1) return 2.0;
    if (d == 2) return 2.0 * kPi;
    throw std::invalid_argument("dimension must be 1 or 2");
}

// Volume of the unit ball: 2 for d=1 (the interval [-1,1]), pi for d=2.
inline double ball_volume(int d) { return sphere_surface(d) / d; }

struct NumericalError : std::runtime_error {
    double residual = std::numeric_limits<double>::quiet_NaN();
    explicit NumericalError(const std::string& what, double resid = 0.0)
        : std::runtime_error(what), residual(resid) {}
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool nearly_equal(double a, double b, double rel, double abs_tol = 0.0) {
    return std::abs(a - b) <= abs_tol + rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace levysmooth
