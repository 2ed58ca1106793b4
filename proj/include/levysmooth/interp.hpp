#pragma once

#include "levysmooth/common.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace levysmooth {

// Fritsch-Carlson monotone cubic interpolant on strictly increasing knots.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: need >= 2 knots");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i + 1] > x_[i])) throw std::invalid_argument("MonotoneCubic: knots must increase");
        slope_.resize(n);
        std::vector<double> d(n - 1), h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            d[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        slope_[0] = d[0];
        slope_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                slope_[i] = 0.0;
            } else {
                double w1 = 2.0 * h[i] + h[i - 1];
                double w2 = h[i] + 2.0 * h[i - 1];
                slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    double operator()(double x) const {
        const std::size_t n = x_.size();
        if (x <= x_.front()) return extrapolate(0, x);
        if (x >= x_.back()) return extrapolate(n - 2, x);
        std::size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1;
        return hermite(i, x);
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    double hermite(std::size_t i, double x) const {
        double h = x_[i + 1] - x_[i];
        double t = (x - x_[i]) / h;
        double t2 = t * t, t3 = t2 * t;
        return y_[i] * (2 * t3 - 3 * t2 + 1) + h * slope_[i] * (t3 - 2 * t2 + t) +
               y_[i + 1] * (-2 * t3 + 3 * t2) + h * slope_[i + 1] * (t3 - t2);
    }
    // linear continuation with the boundary slope
    double extrapolate(std::size_t i, double x) const {
        std::size_t j = (i == 0) ? 0 : x_.size() - 1;
        return y_[j] + slope_[j] * (x - x_[j]);
    }

    std::vector<double> x_, y_, slope_;
};

// Periodic Catmull-Rom interpolation over n uniformly spaced samples on
// [origin, origin + n*h). Fourth-order accurate for smooth periodic data.
inline double periodic_cubic(const double* values, std::size_t n, double origin, double h, double x) {
    double u = (x - origin) / h;
    double fl = std::floor(u);
    double t = u - fl;
    std::int64_t i = static_cast<std::int64_t>(fl) % static_cast<std::int64_t>(n);
    if (i < 0) i += static_cast<std::int64_t>(n);
    auto at = [&](std::int64_t k) {
        std::int64_t j = (i + k) % static_cast<std::int64_t>(n);
        if (j < 0) j += static_cast<std::int64_t>(n);
        return values[j];
    };
    double p0 = at(-1), p1 = at(0), p2 = at(1), p3 = at(2);
    double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    double c = 0.5 * (p2 - p0);
    return ((a * t + b) * t + c) * t + p1;
}

}  // namespace levysmooth
