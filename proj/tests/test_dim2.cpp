#include <doctest.h>

#include "levysmooth/levysmooth.hpp"

#include <cmath>
#include <complex>

using namespace levysmooth;

#include "oracles.hpp"

TEST_CASE("stable symbol scale in d = 2: closed anchor and adaptive oracle") {
    // alpha = 1 anchors: c_{1,1} = pi, c_{2,1} = 2 pi
    CHECK(stable_symbol_scale(LevyMeasureDescriptor::stable(1.0, 1)) ==
          doctest::Approx(kPi).epsilon(1e-8));
    CHECK(stable_symbol_scale(LevyMeasureDescriptor::stable(1.0, 2)) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-6));
    // alpha = 1.5: independent oracle 2 pi [ int_0^T (1 - J0(r)) r^{-1-a} dr + T^{-a}/a ]
    const double a = 1.5, T = 4096.0;
    double body = 0.0;
    double lo = 1e-12;
    while (lo < T) {
        double hi = std::min(lo * 8.0, T);
        body += oracles::radial_integral_log(
            [a](double r) { return (1.0 - std::cyl_bessel_j(0, r)) * std::pow(r, -1.0 - a); }, lo,
            hi, 1e-13);
        lo = hi;
    }
    double oracle = 2.0 * kPi * (body + std::pow(T, -a) / a);
    CHECK(stable_symbol_scale(LevyMeasureDescriptor::stable(a, 2)) ==
          doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("2-d gaussian semigroup matches the heat convolution") {
    auto model = LevyModel({0, 0}, {1, 0, 0, 1}, std::nullopt, 2);
    const int n = 128;
    const double R = 8.0, t = 0.5, sigma = 1.0;
    auto f = GridFunction::from_function(2, n, R, [sigma](Vec x) {
        return std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2.0 * sigma * sigma));
    });
    auto g = semigroup_fourier(model, f, t);
    double s2 = sigma * sigma + t;
    double worst = 0.0;
    for (int iy = 0; iy < n; iy += 7) {
        for (int ix = 0; ix < n; ix += 7) {
            double x = f.coord(ix), y = f.coord(iy);
            double exact = (sigma * sigma / s2) * std::exp(-(x * x + y * y) / (2.0 * s2));
            worst = std::max(worst, std::abs(g.at(ix, iy) - exact));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("2-d truncated stable: fourier semigroup contraction and t = 0 identity") {
    auto model = LevyModel::pure_jump(LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 2));
    const int n = 64;
    const double R = 8.0;
    auto f = GridFunction::from_function(2, n, R, [R](Vec x) {
        return std::sin(2.0 * kPi * 2.0 * x[0] / (2.0 * R)) *
               std::cos(2.0 * kPi * 3.0 * x[1] / (2.0 * R));
    });
    FourierSemigroup sg(model, f);
    auto id = sg.apply(f, 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values().size(); ++i)
        worst = std::max(worst, std::abs(id.values()[i] - f.values()[i]));
    CHECK(worst < 1e-10);
    auto g = sg.apply(f, 0.4);
    CHECK(g.min_value() >= f.min_value() - 1e-8);
    CHECK(g.max_value() <= f.max_value() + 1e-8);
    CHECK(g.sup_norm() < f.sup_norm());
}

TEST_CASE("2-d endpoint characteristic function matches exp(-t psi)") {
    auto nu = LevyMeasureDescriptor::truncated_stable(1.2, 1.0, 2);
    auto model = LevyModel::pure_jump(nu);
    PathSampler sampler(model, 1e-2);
    const double t = 0.4;
    const int n = 40000;
    std::vector<Vec> xis = {vec2(0.5, 0.0), vec2(0.0, 1.0), vec2(1.0, 1.0), vec2(-0.7, 1.3)};
    std::vector<std::complex<double>> acc(xis.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        Rng rng(424242, i);
        Vec e = sampler.sample_endpoint(t, rng);
        for (std::size_t j = 0; j < xis.size(); ++j) {
            double phase = dot(xis[j], e, 2);
            acc[j] += std::complex<double>(std::cos(phase), std::sin(phase));
        }
    }
    for (std::size_t j = 0; j < xis.size(); ++j) {
        auto emp = acc[j] / double(n);
        auto ref = std::exp(-t * levy_symbol(model, xis[j]));
        CHECK(std::abs(emp - ref) <= 4.0 / std::sqrt(double(n)));
    }
}

TEST_CASE("2-d jump sampler respects the truncation radius") {
    auto nu = LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 2);
    PathSampler sampler(LevyModel::pure_jump(nu), 1e-2);
    Rng rng(5, 5);
    double max_r = 0.0;
    sampler.for_each_jump(2.0, rng, [&](double r, const Vec& y) {
        CHECK(r == doctest::Approx(norm(y, 2)).epsilon(1e-12));
        max_r = std::max(max_r, r);
    });
    CHECK(max_r <= 1.0);
    CHECK(max_r > 0.3);
}

TEST_CASE("constant f has exactly zero modulus via the general path") {
    auto model = LevyModel::pure_jump(LevyMeasureDescriptor::log_stable(2.0, 1));
    ModulusOptions opts;
    opts.n_pairs = 5000;
    opts.eps_cut = 1.0 / 16.0;
    opts.k_max = 6;
    auto rep = semigroup_modulus_check_general(model, [](double) { return 3.0; }, 1.0, opts);
    for (double w : rep.omega) CHECK(w == 0.0);
    CHECK_FALSE(rep.inconclusive);
}
