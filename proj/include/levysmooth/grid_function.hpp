#pragma once

#include "levysmooth/common.hpp"
#include "levysmooth/interp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace levysmooth {

// Scalar function sampled on a uniform periodic grid over [-R, R)^d, d in
// {1, 2}, n a power of two per axis. The workhorse of the Fourier backends.
class GridFunction {
public:
    GridFunction(int dim, int n, double half_width)
        : dim_(dim), n_(n), half_width_(half_width) {
        if (dim != 1 && dim != 2) throw ConfigError("GridFunction: dimension must be 1 or 2");
        if (n < 2 || (n & (n - 1)) != 0) throw ConfigError("GridFunction: n must be a power of two");
        if (!(half_width > 0.0)) throw ConfigError("GridFunction: half width must be positive");
        values_.assign(dim == 1 ? std::size_t(n) : std::size_t(n) * n, 0.0);
    }

    static GridFunction from_function(int dim, int n, double half_width,
                                      const std::function<double(Vec)>& f) {
        GridFunction g(dim, n, half_width);
        if (dim == 1) {
            for (int i = 0; i < n; ++i) g.values_[i] = f(vec1(g.coord(i)));
        } else {
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix)
                    g.values_[std::size_t(iy) * n + ix] = f(vec2(g.coord(ix), g.coord(iy)));
        }
        g.check_finite();
        return g;
    }

    static GridFunction constant(int dim, int n, double half_width, double c) {
        GridFunction g(dim, n, half_width);
        std::fill(g.values_.begin(), g.values_.end(), c);
        return g;
    }

    int dimension() const { return dim_; }
    int resolution() const { return n_; }
    double half_width() const { return half_width_; }
    double spacing() const { return 2.0 * half_width_ / n_; }
    double coord(int i) const { return -half_width_ + spacing() * i; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double at(int ix, int iy = 0) const {
        return dim_ == 1 ? values_[ix] : values_[std::size_t(iy) * n_ + ix];
    }
    double& at(int ix, int iy = 0) {
        return dim_ == 1 ? values_[ix] : values_[std::size_t(iy) * n_ + ix];
    }

    bool same_geometry(const GridFunction& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && half_width_ == o.half_width_;
    }

    double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
    double max_value() const { return *std::max_element(values_.begin(), values_.end()); }
    double sup_norm() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    // Periodic cubic evaluation at an arbitrary point (smooth interpolant).
    double sample(const Vec& x) const {
        if (dim_ == 1) return periodic_cubic(values_.data(), n_, -half_width_, spacing(), x[0]);
        // bicubic: interpolate along x for the four bracketing rows, then along y
        double h = spacing();
        double u = (x[1] + half_width_) / h;
        double fl = std::floor(u);
        double t = u - fl;
        std::int64_t iy = static_cast<std::int64_t>(fl) % n_;
        if (iy < 0) iy += n_;
        double row[4];
        for (int k = -1; k <= 2; ++k) {
            std::int64_t j = (iy + k) % n_;
            if (j < 0) j += n_;
            row[k + 1] = periodic_cubic(values_.data() + std::size_t(j) * n_, n_, -half_width_, h, x[0]);
        }
        double a = -0.5 * row[0] + 1.5 * row[1] - 1.5 * row[2] + 0.5 * row[3];
        double b = row[0] - 2.5 * row[1] + 2.0 * row[2] - 0.5 * row[3];
        double c = 0.5 * (row[2] - row[0]);
        return ((a * t + b) * t + c) * t + row[1];
    }

    double sample1d(double x) const { return sample(vec1(x)); }

    // CSV: "# levysmooth-grid v1" header, then x[,y],value rows.
    void write_csv(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot open " + path + " for writing");
        out << "# levysmooth-grid v1 dim=" << dim_ << " n=" << n_ << " R=" << format(half_width_)
            << "\n";
        if (dim_ == 1) {
            out << "x,value\n";
            for (int i = 0; i < n_; ++i) out << format(coord(i)) << ',' << format(values_[i]) << "\n";
        } else {
            out << "x,y,value\n";
            for (int iy = 0; iy < n_; ++iy)
                for (int ix = 0; ix < n_; ++ix)
                    out << format(coord(ix)) << ',' << format(coord(iy)) << ','
                        << format(at(ix, iy)) << "\n";
        }
    }

    static GridFunction read_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open " + path);
        std::string header;
        std::getline(in, header);
        int dim = 0, n = 0;
        double R = 0.0;
        if (std::sscanf(header.c_str(), "# levysmooth-grid v1 dim=%d n=%d R=%lf", &dim, &n, &R) != 3)
            throw ConfigError("bad grid csv header: " + header);
        GridFunction g(dim, n, R);
        std::string line;
        std::getline(in, line);  // column names
        std::size_t idx = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto pos = line.rfind(',');
            if (pos == std::string::npos || idx >= g.values_.size())
                throw ConfigError("bad grid csv row: " + line);
            g.values_[idx++] = std::stod(line.substr(pos + 1));
        }
        if (idx != g.values_.size()) throw ConfigError("grid csv row count mismatch");
        return g;
    }

    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }

private:
    void check_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) throw NumericalError("grid function has non-finite values", v);
    }

    int dim_;
    int n_;
    double half_width_;
    std::vector<double> values_;
};

}  // namespace levysmooth
