#pragma once

#include "levysmooth/common.hpp"
#include "levysmooth/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace levysmooth {

// Branch-predictable descriptor of the built-in weight shapes, used by the
// simulation hot loops to avoid a std::function call per jump event.
struct FastRadial {
    enum Kind { Identity, BetaPower, Indicator, Generic } kind = Generic;
    double p1 = 0.0, p2 = 0.0;

    template <class Fallback>
    double eval(double r, const Fallback& fallback) const {
        switch (kind) {
            case Identity: return r <= 1.0 ? r : 0.0;
            case BetaPower: return r <= 1.0 ? std::pow(r, p1) : 0.0;
            case Indicator: return (r >= p1 && r <= p2) ? 1.0 : 0.0;
            default: return fallback(r);
        }
    }
};

// A nu-square-integrable radial weight q with its cached L^2(nu) norm.
// breakpoints() lists radii where q is not smooth; quadratures split there.
class QWeight {
public:
    QWeight(std::function<double(double)> radial, double norm_sq, std::string label,
            std::vector<double> breakpoints = {}, FastRadial fast = {})
        : radial_(std::move(radial)), norm_sq_(norm_sq), label_(std::move(label)),
          breakpoints_(std::move(breakpoints)), fast_(fast) {}

    double radial(double r) const { return radial_(r); }
    double operator()(const Vec& y, int d) const { return radial_(norm(y, d)); }

    // \int q^2 dnu, cached at construction
    double l2nu_norm_sq() const { return norm_sq_; }
    const std::string& label() const { return label_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const FastRadial& fast() const { return fast_; }
    double radial_fast(double r) const {
        return fast_.eval(r, [this](double s) { return radial_(s); });
    }

private:
    std::function<double(double)> radial_;
    double norm_sq_;
    std::string label_;
    std::vector<double> breakpoints_;
    FastRadial fast_;
};

// q(y) = |y|^beta on the unit ball. Outside the ball either zero (the
// truncated case: nu carries no mass there anyway) or a decaying power
// |y|^{-(d+alpha)/2 - decay_margin}; the outside branch is a configuration
// choice constrained only by finiteness of the norm.
struct BetaPowerSpec {
    double beta = 1.0;
    bool zero_outside = true;
    double decay_margin = 0.5;
};

struct IndicatorAnnulusSpec {
    double r_lo = 0.5;
    double r_hi = 1.0;
};

struct CustomSpec {
    std::function<double(double)> radial;
    std::string label = "custom";
    std::vector<double> breakpoints = {};
};

using QWeightSpec = std::variant<BetaPowerSpec, IndicatorAnnulusSpec, CustomSpec>;

// \int_{|y| >= eps} g(|y|) dnu over dyadic panels anchored at eps and split
// at the supplied breakpoints, so kinks and indicator edges never sit inside
// a Gauss-Legendre panel.
inline double nu_integral_above(const LevyMeasureDescriptor& nu,
                                const std::function<double(double)>& g_radial, double eps,
                                const std::vector<double>& breakpoints = {}, int gl_nodes = 24) {
    const double sup = nu.support_radius();
    if (!(eps > 0.0)) throw ConfigError("nu_integral_above: eps must be positive");
    if (eps >= sup) return 0.0;
    double total = 0.0;
    int quiet = 0;
    for (int j = 0; j < 120; ++j) {
        double lo = eps * std::exp2(double(j));
        if (lo >= sup) break;
        double hi = std::min(2.0 * lo, sup);
        // panel [lo, hi], split at interior breakpoints
        std::vector<double> edges{lo};
        for (double b : breakpoints)
            if (b > lo && b < hi) edges.push_back(b);
        std::sort(edges.begin(), edges.end());
        edges.push_back(hi);
        double c = 0.0;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            c += gl_integrate([&](double r) { return g_radial(r) * nu.radial_weight(r); },
                              edges[i], edges[i + 1], gl_nodes);
        total += c;
        if (std::abs(total) > 1e15) throw NumericalError("nu integral above eps overflow", total);
        quiet = (std::abs(c) <= 1e-12 * std::abs(total)) ? quiet + 1 : 0;
        if (quiet >= 3 && j >= 8) break;
    }
    return sphere_surface(nu.dimension()) * total;
}

// Builds a QWeight and verifies \int q^2 dnu < infinity; a diverging norm
// surfaces as the rejection error from the quadrature layer.
inline QWeight make_qweight(const LevyMeasureDescriptor& nu, const QWeightSpec& spec) {
    if (const auto* ia = std::get_if<IndicatorAnnulusSpec>(&spec)) {
        if (!(ia->r_lo >= 0.0 && ia->r_hi > ia->r_lo))
            throw ConfigError("indicator annulus: need 0 <= r_lo < r_hi");
        double lo = ia->r_lo, hi = std::min(ia->r_hi, nu.support_radius());
        if (lo == 0.0 && nu.tail_mass(1e-12) > 1e10)
            throw NumericalError("qweight rejected: annulus touching 0 has infinite mass");
        double norm_sq = lo == 0.0 ? nu.tail_mass(1e-300) - nu.tail_mass(hi)
                                   : nu.tail_mass(lo) - nu.tail_mass(hi);
        double qlo = ia->r_lo, qhi = ia->r_hi;
        FastRadial fast{FastRadial::Indicator, qlo, qhi};
        return QWeight([qlo, qhi](double r) { return (r >= qlo && r <= qhi) ? 1.0 : 0.0; }, norm_sq,
                       "annulus(" + std::to_string(qlo) + "," + std::to_string(qhi) + ")",
                       {qlo, qhi}, fast);
    }

    std::function<double(double)> radial;
    std::string label;
    std::vector<double> breaks;
    FastRadial fast;
    if (const auto* bp = std::get_if<BetaPowerSpec>(&spec)) {
        double beta = bp->beta;
        if (bp->zero_outside) {
            radial = [beta](double r) { return r <= 1.0 ? std::pow(r, beta) : 0.0; };
            fast = beta == 1.0 ? FastRadial{FastRadial::Identity, 0, 0}
                               : FastRadial{FastRadial::BetaPower, beta, 0};
        } else {
            double decay = 0.5 * (nu.dimension() + nu.alpha()) + bp->decay_margin;
            radial = [beta, decay](double r) {
                return r <= 1.0 ? std::pow(r, beta) : std::pow(r, -decay);
            };
        }
        label = "beta_power(" + std::to_string(beta) + ")";
        breaks = {1.0};
    } else {
        const auto& c = std::get<CustomSpec>(spec);
        radial = c.radial;
        label = c.label;
        breaks = c.breakpoints;
    }
    double norm_sq;
    try {
        norm_sq = nu_integrate_radial(nu, [&](double r) {
            double q = radial(r);
            return q * q;
        });
    } catch (const NumericalError& err) {
        throw NumericalError(std::string("qweight rejected, norm diverges: ") + err.what(),
                             err.residual);
    }
    if (!(norm_sq >= 0.0) || !std::isfinite(norm_sq))
        throw NumericalError("qweight rejected, norm not finite", norm_sq);
    return QWeight(std::move(radial), norm_sq, std::move(label), std::move(breaks), fast);
}

// \int_{|y| < eps} g(|y|) dnu over dyadic panels anchored at eps going down.
inline double nu_integral_below(const LevyMeasureDescriptor& nu,
                                const std::function<double(double)>& g_radial, double eps,
                                int gl_nodes = 24) {
    if (!(eps > 0.0)) throw ConfigError("nu_integral_below: eps must be positive");
    double top = std::min(eps, nu.support_radius());
    double total = 0.0;
    double last = 0.0, prev = 0.0;
    const int annuli = 60;
    for (int k = 0; k < annuli; ++k) {
        double hi = top * std::exp2(-double(k));
        double c = gl_integrate([&](double r) { return g_radial(r) * nu.radial_weight(r); },
                                0.5 * hi, hi, gl_nodes);
        if (k == annuli - 4) prev = c;
        if (k == annuli - 1) last = c;
        total += c;
        if (std::abs(total) > 1e15) throw NumericalError("nu integral below eps overflow", total);
    }
    if (last != 0.0 && prev != 0.0) {
        double ratio = std::cbrt(std::abs(last / prev));
        if (ratio >= 0.97) throw NumericalError("nu integral below eps diverges", last);
        total += last * ratio / (1.0 - ratio);
    }
    return sphere_surface(nu.dimension()) * total;
}

// \int_{|y| >= eps} q^2 dnu: the part of the norm the truncated sampler sees.
inline double qweight_norm_sq_above(const LevyMeasureDescriptor& nu, const QWeight& q, double eps) {
    return nu_integral_above(nu, [&](double r) {
        double v = q.radial(r);
        return v * v;
    }, eps, q.breakpoints());
}

// \int_{|y| < eps} q^2 dnu: the truncation bias budget of the weight.
inline double qweight_norm_sq_below(const LevyMeasureDescriptor& nu, const QWeight& q, double eps) {
    return std::max(0.0, q.l2nu_norm_sq() - qweight_norm_sq_above(nu, q, eps));
}

// \int_{|y| >= eps} q1 q2 dnu, for cross-isometry checks.
inline double qweight_cross_above(const LevyMeasureDescriptor& nu, const QWeight& q1,
                                  const QWeight& q2, double eps) {
    std::vector<double> breaks = q1.breakpoints();
    breaks.insert(breaks.end(), q2.breakpoints().begin(), q2.breakpoints().end());
    return nu_integral_above(nu, [&](double r) { return q1.radial(r) * q2.radial(r); }, eps, breaks);
}

}  // namespace levysmooth
