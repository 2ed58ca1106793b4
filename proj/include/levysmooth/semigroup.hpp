#pragma once

#include "levysmooth/common.hpp"
#include "levysmooth/fft.hpp"
#include "levysmooth/grid_function.hpp"
#include "levysmooth/interp.hpp"
#include "levysmooth/levy_model.hpp"
#include "levysmooth/parallel.hpp"
#include "levysmooth/path_sim.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace levysmooth {

// Signed frequency of DFT index k on an n-point grid over [-R, R).
inline double grid_frequency(int k, int n, double half_width) {
    int signed_k = k < n / 2 ? k : k - n;
    return kPi * double(signed_k) / half_width;
}

// P_t f = E f(. + L_t) as the Fourier multiplier exp(-t psi(xi_k)) on the
// periodic grid. The symbol is precomputed per (model, geometry), so one
// instance amortizes over many times t and inputs f.
//
// Multiplier convention: forward DFT X_k = sum_j f_j e^{-i xi_k x_j}; then
// (P_t f)^_k = X_k exp(-t psi(xi_k)). Pinned by the t = 0 identity and the
// drift direction test (P_t f (x) = f(x + m t) for the pure drift model).
class FourierSemigroup {
public:
    FourierSemigroup(const LevyModel& model, int n, double half_width)
        : model_(model), dim_(model.dimension()), n_(n), half_width_(half_width) {
        if (n < 2 || (n & (n - 1)) != 0) throw ConfigError("FourierSemigroup: n must be a power of two");
        build_symbol();
    }

    explicit FourierSemigroup(const LevyModel& model, const GridFunction& prototype)
        : FourierSemigroup(model, prototype.resolution(), prototype.half_width()) {
        if (prototype.dimension() != model.dimension())
            throw ConfigError("FourierSemigroup: grid/model dimension mismatch");
    }

    const LevyModel& model() const { return model_; }
    int resolution() const { return n_; }
    double half_width() const { return half_width_; }

    GridFunction apply(const GridFunction& f, double t) const {
        if (t < 0.0) throw ConfigError("semigroup: t must be >= 0");
        if (f.dimension() != dim_ || f.resolution() != n_ || f.half_width() != half_width_)
            throw ConfigError("semigroup: grid geometry mismatch");
        std::vector<cdouble> buf(f.values().begin(), f.values().end());
        if (dim_ == 1) {
            fft_forward(buf);
            for (int k = 0; k < n_; ++k) buf[k] *= std::exp(-t * symbol_[k]);
            fft_inverse(buf);
        } else {
            fft2_forward(buf, n_);
            for (int ky = 0; ky < n_; ++ky)
                for (int kx = 0; kx < n_; ++kx)
                    buf[std::size_t(ky) * n_ + kx] *= std::exp(-t * symbol_[std::size_t(ky) * n_ + kx]);
            fft2_inverse(buf, n_);
        }
        GridFunction out(dim_, n_, half_width_);
        for (std::size_t i = 0; i < buf.size(); ++i) out.values()[i] = buf[i].real();
        return out;
    }

    // symbol value at DFT index (kx [, ky])
    cdouble symbol_at(int kx, int ky = 0) const {
        return dim_ == 1 ? symbol_[kx] : symbol_[std::size_t(ky) * n_ + kx];
    }

private:
    void build_symbol() {
        if (dim_ == 1) {
            symbol_.resize(n_);
            // jump part depends on |xi| only; evaluate once per magnitude
            std::vector<double> jump(n_ / 2 + 1, 0.0);
            if (model_.has_jumps()) {
                for (int k = 0; k <= n_ / 2; ++k)
                    jump[k] = levy_symbol_jump(*model_.measure(), kPi * double(k) / half_width_);
            }
            for (int k = 0; k < n_; ++k) {
                double xi = grid_frequency(k, n_, half_width_);
                double quad = 0.5 * model_.gaussian(0, 0) * xi * xi;
                symbol_[k] = cdouble(quad + jump[std::abs(k < n_ / 2 ? k : k - n_)],
                                     -xi * model_.drift()[0]);
            }
        } else {
            symbol_.resize(std::size_t(n_) * n_);
            std::unique_ptr<MonotoneCubic> table;
            if (model_.has_jumps()) table = build_radial_table();
            for (int ky = 0; ky < n_; ++ky) {
                double xy = grid_frequency(ky, n_, half_width_);
                for (int kx = 0; kx < n_; ++kx) {
                    double xx = grid_frequency(kx, n_, half_width_);
                    double quad = 0.5 * (model_.gaussian(0, 0) * xx * xx +
                                         2.0 * model_.gaussian(0, 1) * xx * xy +
                                         model_.gaussian(1, 1) * xy * xy);
                    double jump = 0.0;
                    if (table) {
                        double s = std::hypot(xx, xy);
                        if (s > 0.0) jump = std::exp((*table)(std::log(s)));
                    }
                    symbol_[std::size_t(ky) * n_ + kx] =
                        cdouble(quad + jump, -(xx * model_.drift()[0] + xy * model_.drift()[1]));
                }
            }
        }
    }

    std::unique_ptr<MonotoneCubic> build_radial_table() const {
        const double s_min = kPi / half_width_ * 0.999;
        const double s_max = kPi / half_width_ * double(n_ / 2) * std::sqrt(2.0) * 1.001;
        const int knots = 1024;
        std::vector<double> ls(knots), lpsi(knots);
        for (int i = 0; i < knots; ++i) {
            double s = s_min * std::pow(s_max / s_min, double(i) / (knots - 1));
            ls[i] = std::log(s);
            lpsi[i] = std::log(levy_symbol_jump(*model_.measure(), s));
        }
        return std::make_unique<MonotoneCubic>(std::move(ls), std::move(lpsi));
    }

    LevyModel model_;
    int dim_;
    int n_;
    double half_width_;
    std::vector<cdouble> symbol_;
};

// One-shot convenience wrapper.
inline GridFunction semigroup_fourier(const LevyModel& model, const GridFunction& f, double t) {
    return FourierSemigroup(model, f).apply(f, t);
}

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
};

enum class McBackend { CompoundPoisson, Cms };

struct McOptions {
    double eps_cut = 0.0;  // 0: per-measure default
    McBackend backend = McBackend::CompoundPoisson;
    std::uint64_t block_size = 4096;
};

// P_t f(x) by Monte Carlo over endpoints: sample mean and standard error.
// Each path owns an rng stream (stream id = path index) and the reduction is
// a fixed pairwise tree, so results do not depend on the thread count.
inline McEstimate semigroup_mc(const LevyModel& model, const std::function<double(Vec)>& f,
                               const Vec& x, double t, std::uint64_t n_paths, RngSeed seed,
                               const McOptions& opts = {}) {
    if (n_paths < 100) throw ConfigError("semigroup_mc: need at least 100 paths");
    if (!(t >= 0.0)) throw ConfigError("semigroup_mc: t must be >= 0");
    double eps = opts.eps_cut;
    if (eps == 0.0) eps = model.has_jumps() ? default_eps_cut(*model.measure()) : 1e-3;
    PathSampler sampler(model, eps);
    const bool cms = opts.backend == McBackend::Cms;
    if (cms && !sampler.cms_available())
        throw ConfigError("CMS backend unavailable for this model");

    struct Acc {
        double sum = 0.0, sum_sq = 0.0;
    };
    Acc acc = parallel_block_reduce<Acc>(
        n_paths, opts.block_size,
        [&](std::uint64_t begin, std::uint64_t end) {
            Acc a;
            for (std::uint64_t i = begin; i < end; ++i) {
                Rng rng(seed.seed, seed.stream + i);
                Vec e = cms ? sampler.sample_endpoint_cms(t, rng) : sampler.sample_endpoint(t, rng);
                double v = f(add(x, e));
                a.sum += v;
                a.sum_sq += v * v;
            }
            return a;
        },
        [](Acc a, Acc b) {
            return Acc{a.sum + b.sum, a.sum_sq + b.sum_sq};
        });
    double mean = acc.sum / double(n_paths);
    double var = std::max(0.0, acc.sum_sq / double(n_paths) - mean * mean);
    return {mean, std::sqrt(var / double(n_paths)), n_paths};
}

// P_t (f^2)(x) with either backend; the grid route squares pointwise first.
inline McEstimate semigroup_square_mc(const LevyModel& model, const std::function<double(Vec)>& f,
                                      const Vec& x, double t, std::uint64_t n_paths, RngSeed seed,
                                      const McOptions& opts = {}) {
    return semigroup_mc(model, [&f](Vec y) {
        double v = f(y);
        return v * v;
    }, x, t, n_paths, seed, opts);
}

inline GridFunction semigroup_square_fourier(const FourierSemigroup& sg, const GridFunction& f,
                                             double t) {
    GridFunction f2 = f;
    for (auto& v : f2.values()) v *= v;
    return sg.apply(f2, t);
}

}  // namespace levysmooth
