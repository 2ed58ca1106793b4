#pragma once

#include "levysmooth/common.hpp"
#include "levysmooth/levy_measure.hpp"
#include "levysmooth/quadrature.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <optional>

namespace levysmooth {

// Generating triplet (m, Q, nu) on R^d, d in {1,2}. Immutable after
// construction; all evaluation paths are pure and reentrant.
class LevyModel {
public:
    LevyModel(Vec drift, std::array<double, 4> gaussian, std::optional<LevyMeasureDescriptor> measure,
              int dimension)
        : drift_(drift), q_(gaussian), measure_(std::move(measure)), dim_(dimension) {
        if (dim_ != 1 && dim_ != 2) throw ConfigError("LevyModel: dimension must be 1 or 2");
        if (measure_ && measure_->dimension() != dim_)
            throw ConfigError("LevyModel: measure dimension mismatch");
        validate_gaussian();
    }

    static LevyModel pure_jump(LevyMeasureDescriptor measure) {
        int d = measure.dimension();
        return LevyModel({0, 0}, {0, 0, 0, 0}, std::move(measure), d);
    }

    static LevyModel gaussian1d(double drift, double variance) {
        return LevyModel({drift, 0}, {variance, 0, 0, 0}, std::nullopt, 1);
    }

    // The alpha-stable model with the un-normalized density |x|^{-d-alpha};
    // its symbol is symbol_scale * |xi|^alpha with the scale cached per (d, alpha).
    static LevyModel stable(double alpha, int dimension) {
        return pure_jump(LevyMeasureDescriptor::stable(alpha, dimension));
    }

    // alpha = 1, K = infinity: the Cauchy-type model, symbol pi * |xi| in d = 1.
    static LevyModel cauchy1d() { return stable(1.0, 1); }

    int dimension() const { return dim_; }
    const Vec& drift() const { return drift_; }
    double gaussian(int i, int j) const { return q_[i * 2 + j]; }
    const std::optional<LevyMeasureDescriptor>& measure() const { return measure_; }

    bool has_jumps() const { return measure_.has_value(); }

    // Matrix B with B B^T = Q (eigen square root, eigenvalues clipped at 0).
    std::array<double, 4> gaussian_factor() const {
        std::array<double, 4> b{0, 0, 0, 0};
        if (dim_ == 1) {
            b[0] = std::sqrt(std::max(0.0, q_[0]));
            return b;
        }
        double a = q_[0], bq = q_[1], c = q_[3];
        double tr = a + c, det = a * c - bq * bq;
        double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        double l1 = tr / 2.0 + disc, l2 = tr / 2.0 - disc;
        l1 = std::max(0.0, l1);
        l2 = std::max(0.0, l2);
        double vx, vy;
        if (std::abs(bq) > 1e-300) {
            vx = l1 - c;
            vy = bq;
        } else {
            vx = a >= c ? 1.0 : 0.0;
            vy = a >= c ? 0.0 : 1.0;
        }
        double nv = std::hypot(vx, vy);
        vx /= nv;
        vy /= nv;
        double s1 = std::sqrt(l1), s2 = std::sqrt(l2);
        // columns: s1 * v, s2 * v_perp
        b = {s1 * vx, -s2 * vy, s1 * vy, s2 * vx};
        return b;
    }

private:
    void validate_gaussian() const {
        if (std::abs(q_[1] - q_[2]) > 1e-12)
            throw ConfigError("LevyModel: Q must be symmetric within 1e-12");
        double a = q_[0], c = dim_ == 2 ? q_[3] : 0.0, b = dim_ == 2 ? q_[1] : 0.0;
        double tr = a + c, det = a * c - b * b;
        double l_min = dim_ == 1 ? a : tr / 2.0 - std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        if (l_min < -1e-12) throw ConfigError("LevyModel: Q has an eigenvalue below -1e-12");
    }

    Vec drift_;
    std::array<double, 4> q_;  // row-major d x d, unused entries zero
    std::optional<LevyMeasureDescriptor> measure_;
    int dim_;
};

namespace detail {

struct SymbolQuadOptions {
    int inner_annuli = 60;
    int base_nodes = 12;
    int node_cap = 512;
    double rel_tol = 1e-11;
};

// 2(1 - cos z) in d = 1, 2 pi (1 - J0(z)) in d = 2: the spherical average of
// 1 - cos<xi, y> over |y| = r with z = |xi| r, times the surface measure.
inline double one_minus_cos_sphere(double z, int d) {
    if (d == 1) {
        double h = std::sin(0.5 * z);  // 2(1-cos z) = 4 sin^2(z/2), no cancellation
        return 4.0 * h * h;
    }
    return 2.0 * kPi * (1.0 - std::cyl_bessel_j(0, z));
}

inline double cos_sphere(double z, int d) {
    if (d == 1) return 2.0 * std::cos(z);
    return 2.0 * kPi * std::cyl_bessel_j(0, z);
}

// Two-term integration-by-parts value of -\int_lo^hi w(r) cos_sphere(s r) dr
// for smooth decaying w, valid once s * lo is large. Returns the value and a
// bound on the neglected remainder. hi may be infinite.
inline std::pair<double, double> osc_tail_by_parts(const LevyMeasureDescriptor& nu, double s,
                                                   double lo, double hi) {
    const int d = nu.dimension();
    auto w_and_slope = [&](double r) {
        double h = 1e-6 * r;
        double w = nu.radial_weight(r);
        double wp = (nu.radial_weight(r + h) - nu.radial_weight(r - h)) / (2.0 * h);
        return std::pair<double, double>{w, wp};
    };
    auto endpoint = [&](double r) -> std::array<double, 3> {
        // returns {value contribution of the endpoint terms, |w|, |w'|}
        if (std::isinf(r)) return {0.0, 0.0, 0.0};
        r *= 1.0 - 1e-7;  // sample just inside a truncated support edge
        auto [w, wp] = w_and_slope(r);
        if (d == 1) {
            // \int w 2cos(sr) dr has antiderivative terms 2 w sin(sr)/s + 2 w' cos(sr)/s^2
            double v = 2.0 * w * std::sin(s * r) / s + 2.0 * wp * std::cos(s * r) / (s * s);
            return {v, std::abs(w), std::abs(wp)};
        }
        // d == 2: J0(z) ~ sqrt(2/(pi z)) cos(z - pi/4); envelope u = 2 pi w sqrt(2/(pi s r))
        double u = 2.0 * kPi * w * std::sqrt(2.0 / (kPi * s * r));
        double up = (2.0 * kPi * wp - kPi * w / r) * std::sqrt(2.0 / (kPi * s * r));
        double z = s * r - kPi / 4.0;
        double v = u * std::sin(z) / s + up * std::cos(z) / (s * s);
        return {v, u, std::abs(up)};
    };
    auto at_lo = endpoint(lo);
    auto at_hi = endpoint(hi);
    // -\int w C = F(lo) - F(hi) up to the third-order remainder
    double value = at_lo[0] - at_hi[0];
    double remainder = 6.0 * (at_lo[2] + at_hi[2]) / (s * s * s * lo) +
                       (d == 2 ? 0.3 * std::pow(s * lo, -1.5) * nu.tail_mass(lo) : 0.0);
    return {value, remainder};
}

// \int (1 - cos<xi,y>) nu(dy) for a radial measure, at |xi| = s.
//
// Inner region: dyadic annuli with oscillation-matched node counts plus a
// geometric small-radius extrapolation. Outer region: exact mean part via
// tail_mass, oscillatory correction integrated while resolvable; beyond that
// the correction is bounded by total-variation / s and dropped.
inline double symbol_jump_radial(const LevyMeasureDescriptor& nu, double s,
                                 const SymbolQuadOptions& opt = {}) {
    if (s == 0.0) return 0.0;
    s = std::abs(s);
    const int d = nu.dimension();
    const double sup = nu.support_radius();
    const double top = std::min(1.0, sup);

    double total = 0.0;
    double prev3 = 0.0, last = 0.0;
    for (int k = 0; k < opt.inner_annuli; ++k) {
        double hi = top * std::exp2(-double(k));
        double lo = 0.5 * hi;
        int n = nodes_for_phase(s * (hi - lo), opt.base_nodes, opt.node_cap);
        double c = gl_integrate(
            [&](double r) { return nu.radial_weight(r) * one_minus_cos_sphere(s * r, d); }, lo, hi, n);
        if (k == opt.inner_annuli - 4) prev3 = c;
        if (k == opt.inner_annuli - 1) last = c;
        total += c;
    }
    if (last > 0.0 && prev3 > 0.0) {
        double ratio = std::cbrt(last / prev3);
        if (ratio < 1.0) total += last * ratio / (1.0 - ratio);
    }

    if (sup > top) {
        total += nu.tail_mass(top);  // mean part of the outer region, exact
        // oscillatory correction - \int w(r) cos_sphere(s r) dr: dyadic annuli
        // while the phase per annulus stays resolvable, then a two-term
        // integration-by-parts tail
        double remainder_bound = 0.0;
        for (int j = 0; j < 90; ++j) {
            double lo = top * std::exp2(double(j));
            if (lo >= sup) break;
            double hi = std::min(2.0 * lo, sup);
            double phase = s * (hi - lo);
            if (phase > 0.75 * opt.node_cap && s * lo > 8.0) {
                auto [value, rem] = osc_tail_by_parts(nu, s, lo, sup);
                total += value;
                remainder_bound = rem;
                break;
            }
            int n = nodes_for_phase(phase, opt.base_nodes, opt.node_cap);
            double c = -gl_integrate(
                [&](double r) { return nu.radial_weight(r) * cos_sphere(s * r, d); }, lo, hi, n);
            total += c;
            if (std::isinf(sup) && std::abs(c) < opt.rel_tol * std::abs(total) && s * lo > 16.0) {
                auto [value, rem] = osc_tail_by_parts(nu, s, hi, sup);
                total += value;
                remainder_bound = rem;
                break;
            }
        }
        if (remainder_bound > 1e-6 * std::abs(total))
            throw NumericalError("levy symbol quadrature: unresolved oscillatory tail",
                                 remainder_bound);
    }
    return total;
}

// Cached symbol scale c_{d,alpha} for the un-truncated stable measure:
// psi_jump(s) = c * s^alpha.
inline double stable_symbol_scale(double alpha, int d) {
    static std::map<std::pair<int, std::uint64_t>, double> cache;
    static std::mutex mutex;
    std::pair<int, std::uint64_t> key{d, std::bit_cast<std::uint64_t>(alpha)};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    double c = symbol_jump_radial(LevyMeasureDescriptor::stable(alpha, d), 1.0);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, c);
    return c;
}

}  // namespace detail

// Jump part of the symbol at radial frequency s = |xi| (real: all built-in
// measures are radial, hence symmetric).
inline double levy_symbol_jump(const LevyMeasureDescriptor& nu, double s) {
    if (nu.kind() == MeasureKind::Stable)
        return detail::stable_symbol_scale(nu.alpha(), nu.dimension()) *
               std::pow(std::abs(s), nu.alpha());
    return detail::symbol_jump_radial(nu, s);
}

// Cached |xi|^alpha coefficient of a Stable model's symbol.
inline double stable_symbol_scale(const LevyMeasureDescriptor& nu) {
    if (nu.kind() != MeasureKind::Stable && nu.kind() != MeasureKind::TruncatedStable)
        throw ConfigError("symbol scale defined for stable measures only");
    return detail::stable_symbol_scale(nu.alpha(), nu.dimension());
}

// The Levy symbol psi with  E exp(i<xi, L_t>) = exp(-t psi(xi)):
//
//   psi(xi) = -i<xi, m> + (1/2)<Q xi, xi> + \int [1 - cos<xi, y>] nu(dy).
//
// The jump integral is real because every supported measure is radial; with
// that convention Re psi >= 0 and psi(-xi) = conj(psi(xi)).
inline std::complex<double> levy_symbol(const LevyModel& model, const Vec& xi) {
    const int d = model.dimension();
    double quad = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) quad += model.gaussian(i, j) * xi[i] * xi[j];
    std::complex<double> psi(0.5 * quad, -dot(xi, model.drift(), d));
    if (model.has_jumps()) psi += levy_symbol_jump(*model.measure(), norm(xi, d));
    return psi;
}

inline std::complex<double> levy_symbol(const LevyModel& model, double xi) {
    return levy_symbol(model, vec1(xi));
}

}  // namespace levysmooth
