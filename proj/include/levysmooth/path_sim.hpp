#pragma once

#include "levysmooth/common.hpp"
#include "levysmooth/levy_model.hpp"
#include "levysmooth/qweight.hpp"
#include "levysmooth/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace levysmooth {

struct JumpEvent {
    double time;
    Vec jump;
};

// One simulated trajectory of L_t = m t + W_Q(t) + compensated small jumps +
// large jumps, truncated at eps_cut. Jumps below eps_cut are folded into the
// Gaussian increment with matched covariance.
struct JumpPath {
    double horizon = 0.0;
    double eps_cut = 0.0;
    int dimension = 1;
    std::vector<JumpEvent> events;  // strictly increasing times, |y| >= eps_cut
    Vec brownian_increment{0, 0};   // W_Q(t) sample plus the small-jump Gaussian
    Vec drift_part{0, 0};
    Vec compensator{0, 0};          // t * \int_{eps<=|y|<=1} y nu(dy); zero for radial nu

    Vec endpoint() const {
        Vec e = add(drift_part, brownian_increment);
        for (const auto& ev : events) e = add(e, ev.jump);
        return sub(e, compensator);
    }

    JumpPath with_negated_brownian() const {
        JumpPath p = *this;
        p.brownian_increment = scale(p.brownian_increment, -1.0);
        return p;
    }
};

// eps_cut defaults: stable-type measures keep the alpha rule, the log-stable
// kind trades truncation bias against its very high small-jump activity.
inline double default_eps_cut(const LevyMeasureDescriptor& nu) {
    switch (nu.kind()) {
        case MeasureKind::LogStable: return 1.0 / 64.0;
        case MeasureKind::Stable:
        case MeasureKind::TruncatedStable: return nu.alpha() <= 1.5 ? 1e-3 : 1e-2;
        case MeasureKind::Tabulated: return 1e-3;
    }
    return 1e-3;
}

// Reusable sampler for one (model, eps_cut) pair: precomputed jump intensity,
// inverse-CDF radius table and the combined Gaussian factor. Immutable and
// safe to share across threads; every draw consumes only the caller's Rng.
class PathSampler {
public:
    PathSampler(const LevyModel& model, double eps_cut, int table_knots = 4096)
        : model_(model), dim_(model.dimension()), eps_(eps_cut) {
        if (model.has_jumps()) {
            const auto& nu = *model.measure();
            if (!(eps_cut > 0.0 && eps_cut <= 1.0))
                throw ConfigError("eps_cut must lie in (0, 1]");
            radial_.emplace(nu, eps_cut, table_knots);
            lambda_ = radial_->intensity();
            if (!(lambda_ < 1e9))
                throw ConfigError("jump intensity overflow; increase eps_cut");
            sigma2_small_ = nu.second_moment_inside(eps_cut);
        }
        // combined Gaussian covariance Q + Sigma(eps) (isotropic small-jump part)
        std::array<double, 4> q{};
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) q[i * 2 + j] = model.gaussian(i, j);
        for (int i = 0; i < dim_; ++i) q[i * 2 + i] += sigma2_small_ / dim_;
        LevyModel combined({0, 0}, q, std::nullopt, dim_);
        gauss_factor_ = combined.gaussian_factor();
    }

    double intensity() const { return lambda_; }
    double eps_cut() const { return eps_; }
    double small_jump_variance() const { return sigma2_small_; }
    const LevyModel& model() const { return model_; }

    // Stream the large jumps of one path without materializing times.
    template <class OnJump>
    void for_each_jump(double t, Rng& rng, OnJump&& on_jump) const {
        if (!radial_) return;
        std::uint64_t n = rng.poisson(lambda_ * t);
        if (dim_ == 1) {
            for (std::uint64_t i = 0; i < n; ++i) {
                double r = radial_->sample_radius(rng.u01());
                double sgn = (rng.next() & 1) ? 1.0 : -1.0;
                on_jump(r, vec1(sgn * r));
            }
        } else {
            for (std::uint64_t i = 0; i < n; ++i) {
                double r = radial_->sample_radius(rng.u01());
                double th = 2.0 * kPi * rng.u01();
                on_jump(r, vec2(r * std::cos(th), r * std::sin(th)));
            }
        }
    }

    Vec sample_gaussian_increment(double t, Rng& rng) const {
        double st = std::sqrt(t);
        double g0 = rng.normal();
        double g1 = dim_ == 2 ? rng.normal() : 0.0;
        return {st * (gauss_factor_[0] * g0 + gauss_factor_[1] * g1),
                st * (gauss_factor_[2] * g0 + gauss_factor_[3] * g1)};
    }

    // Full trajectory with ordered jump times.
    JumpPath sample_path(double t, Rng& rng) const {
        if (!(t > 0.0)) throw ConfigError("sample_path: t must be positive");
        JumpPath path;
        path.horizon = t;
        path.eps_cut = eps_;
        path.dimension = dim_;
        path.drift_part = scale(model_.drift(), t);
        for_each_jump(t, rng, [&](double, const Vec& y) {
            path.events.push_back({t * rng.u01_open(), y});
        });
        std::sort(path.events.begin(), path.events.end(),
                  [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
        for (std::size_t i = 1; i < path.events.size(); ++i)
            if (path.events[i].time <= path.events[i - 1].time)
                path.events[i].time = std::nextafter(path.events[i - 1].time, t * 2.0);
        path.brownian_increment = sample_gaussian_increment(t, rng);
        // compensator t \int_{eps<=|y|<=1} y nu(dy) vanishes: radial measures are symmetric
        path.compensator = {0, 0};
        return path;
    }

    // Endpoint-only draw (no event list, same law).
    Vec sample_endpoint(double t, Rng& rng) const {
        Vec e = scale(model_.drift(), t);
        for_each_jump(t, rng, [&](double, const Vec& y) { e = add(e, y); });
        return add(e, sample_gaussian_increment(t, rng));
    }

    bool cms_available() const {
        return model_.has_jumps() && model_.measure()->kind() == MeasureKind::Stable && dim_ == 1;
    }

    // Exact stable endpoint via Chambers-Mallows-Stuck: L_t = m t + W_Q +
    // (c_alpha t)^{1/alpha} S_alpha, matching the cached symbol scale.
    Vec sample_endpoint_cms(double t, Rng& rng) const {
        if (!cms_available())
            throw ConfigError("CMS backend needs the un-truncated stable measure in d = 1");
        double a = model_.measure()->alpha();
        double scale_t = std::pow(stable_symbol_scale(*model_.measure()) * t, 1.0 / a);
        Vec e = scale(model_.drift(), t);
        double g = std::sqrt(std::max(0.0, model_.gaussian(0, 0) * t)) * rng.normal();
        return vec1(e[0] + g + scale_t * sample_sas(rng, a));
    }

private:
    LevyModel model_;
    int dim_;
    double eps_;
    std::optional<RadialJumpSampler> radial_;
    double lambda_ = 0.0;
    double sigma2_small_ = 0.0;
    std::array<double, 4> gauss_factor_{};
};

// Path evaluation of \int_0^t \int q dN~ under the eps_cut truncation:
//   W = sum_i q(y_i) - t \int_{|y| >= eps} q dnu.
// Discarding jumps below eps_cut biases W by O(eps) through the missing
// small-jump terms; Var W -> t ||q||^2_{L2(nu)} as eps_cut -> 0.
class CompensatedIntegrator {
public:
    CompensatedIntegrator(const LevyMeasureDescriptor& nu, const QWeight& q, double eps_cut)
        : q_(q), mean_rate_(nu_integral_above(nu, [&q](double r) { return q.radial(r); }, eps_cut,
                                              q.breakpoints())) {}

    double mean_rate() const { return mean_rate_; }

    double operator()(const JumpPath& path) const {
        double s = 0.0;
        for (const auto& ev : path.events) s += q_.radial(norm(ev.jump, path.dimension));
        return s - path.horizon * mean_rate_;
    }

    // streaming variant: caller accumulated q_sum = sum_i q(|y_i|)
    double from_qsum(double q_sum, double t) const { return q_sum - t * mean_rate_; }

private:
    QWeight q_;
    double mean_rate_;
};

inline double compensated_integral(const JumpPath& path, const QWeight& q,
                                   const LevyMeasureDescriptor& nu) {
    return CompensatedIntegrator(nu, q, path.eps_cut)(path);
}

// Versioned little-endian binary dump of one path, for debugging.
inline void write_path_dump(const JumpPath& path, const std::string& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + file + " for writing");
    const char magic[4] = {'L', 'V', 'S', 'P'};
    std::uint32_t version = 1;
    std::uint32_t dim = std::uint32_t(path.dimension);
    std::uint64_t n = path.events.size();
    out.write(magic, 4);
    auto put = [&](const void* p, std::size_t k) { out.write(static_cast<const char*>(p), k); };
    put(&version, 4);
    put(&dim, 4);
    put(&path.horizon, 8);
    put(&path.eps_cut, 8);
    put(path.drift_part.data(), 8 * dim);
    put(path.brownian_increment.data(), 8 * dim);
    put(path.compensator.data(), 8 * dim);
    put(&n, 8);
    for (const auto& ev : path.events) {
        put(&ev.time, 8);
        put(ev.jump.data(), 8 * dim);
    }
}

inline JumpPath read_path_dump(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + file);
    char magic[4];
    in.read(magic, 4);
    if (std::string(magic, 4) != "LVSP") throw ConfigError("bad path dump magic");
    auto get = [&](void* p, std::size_t k) { in.read(static_cast<char*>(p), k); };
    std::uint32_t version = 0, dim = 0;
    get(&version, 4);
    if (version != 1) throw ConfigError("unsupported path dump version");
    get(&dim, 4);
    JumpPath path;
    path.dimension = int(dim);
    get(&path.horizon, 8);
    get(&path.eps_cut, 8);
    get(path.drift_part.data(), 8 * dim);
    get(path.brownian_increment.data(), 8 * dim);
    get(path.compensator.data(), 8 * dim);
    std::uint64_t n = 0;
    get(&n, 8);
    path.events.resize(n);
    for (auto& ev : path.events) {
        get(&ev.time, 8);
        get(ev.jump.data(), 8 * dim);
    }
    if (!in) throw ConfigError("truncated path dump");
    return path;
}

}  // namespace levysmooth
