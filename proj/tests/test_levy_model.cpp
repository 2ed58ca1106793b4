#include <doctest.h>

#include "levysmooth/levy_model.hpp"

#include "oracles.hpp"

#include <cmath>
#include <complex>

using namespace levysmooth;

TEST_CASE("pure gaussian symbol is |xi|^2 / 2") {
    auto model = LevyModel({0, 0}, {1, 0, 0, 1}, std::nullopt, 2);
    for (double x : {-2.0, 0.0, 0.5, 3.0}) {
        auto psi = levy_symbol(model, vec2(x, 0.7));
        CHECK(psi.real() == doctest::Approx((x * x + 0.49) / 2).epsilon(1e-14));
        CHECK(psi.imag() == doctest::Approx(0.0));
    }
}

TEST_CASE("drift enters as -i<xi, m>") {
    auto model = LevyModel(vec1(0.8), {0, 0, 0, 0}, std::nullopt, 1);
    auto psi = levy_symbol(model, 2.0);
    CHECK(psi.real() == doctest::Approx(0.0));
    CHECK(psi.imag() == doctest::Approx(-1.6).epsilon(1e-14));
    // exp(-t psi) then carries the factor exp(+ i t xi m) of a drifting point
}

TEST_CASE("stable symbol scale matches the cosine-integral closed form") {
    // int_0^infty (1 - cos u) u^{-1-a} du = pi / (2 Gamma(1+a) sin(pi a / 2))
    for (double a : {0.5, 1.0, 1.5, 1.9}) {
        double closed = kPi / (std::tgamma(1.0 + a) * std::sin(kPi * a / 2.0));
        double c = stable_symbol_scale(LevyMeasureDescriptor::stable(a, 1));
        CHECK(c == doctest::Approx(closed).epsilon(1e-8));
    }
}

TEST_CASE("cauchy-type model: psi(xi) = pi |xi|") {
    auto model = LevyModel::cauchy1d();
    for (double x : {0.25, 1.0, 7.0}) {
        auto psi = levy_symbol(model, x);
        CHECK(psi.real() == doctest::Approx(kPi * x).epsilon(1e-8));
        CHECK(std::abs(psi.imag()) < 1e-12);
    }
}

TEST_CASE("tabulated cauchy density gives psi(1) = 1") {
    std::vector<double> r, rho;
    for (int i = 0; i <= 400; ++i) {
        double x = std::pow(10.0, -8.0 + 14.0 * i / 400.0);
        r.push_back(x);
        rho.push_back(1.0 / (kPi * x * x));
    }
    auto model = LevyModel::pure_jump(LevyMeasureDescriptor::tabulated(r, rho, 1));
    auto psi = levy_symbol(model, 1.0);
    CHECK(psi.real() == doctest::Approx(1.0).epsilon(2e-5));
    CHECK(std::abs(psi.imag()) < 1e-12);
}

TEST_CASE("truncated stable symbol vanishes at the origin") {
    auto model = LevyModel::pure_jump(LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 1));
    auto psi = levy_symbol(model, 0.0);
    CHECK(psi.real() == 0.0);
    CHECK(psi.imag() == 0.0);
}

TEST_CASE("symbol invariants: hermitian symmetry, nonnegative real part, real for symmetric") {
    auto models = {LevyModel::pure_jump(LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 1)),
                   LevyModel::pure_jump(LevyMeasureDescriptor::log_stable(2.0, 1)),
                   LevyModel::stable(0.8, 1)};
    for (const auto& model : models) {
        for (double x : {0.1, 1.0, 5.0, 40.0}) {
            auto p = levy_symbol(model, x);
            auto m = levy_symbol(model, -x);
            CHECK(p.real() >= 0.0);
            CHECK(m.real() == doctest::Approx(p.real()).epsilon(1e-12));
            CHECK(m.imag() == doctest::Approx(-p.imag()).epsilon(1e-12));
            CHECK(std::abs(p.imag()) < 1e-9 * (1.0 + std::abs(p.real())));
        }
    }
}

TEST_CASE("stable scaling: psi(c xi) = c^alpha psi(xi)") {
    auto model = LevyModel::stable(1.5, 1);
    double base = levy_symbol(model, 0.7).real();
    for (double c : {2.0, 5.0, 11.0}) {
        double scaled = levy_symbol(model, c * 0.7).real();
        CHECK(scaled == doctest::Approx(std::pow(c, 1.5) * base).epsilon(1e-4));
    }
}

TEST_CASE("truncated stable symbol against an adaptive oracle at awkward frequencies") {
    auto nu = LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 1);
    for (double s : {0.3, 3.0, 40.0, 402.0}) {
        double v = levy_symbol_jump(nu, s);
        double expected = oracles::nu_radial_oracle_1d(
            [&](double r) { double h = std::sin(0.5 * s * r); return 2.0 * h * h; },
            [](double r) { return std::pow(r, -2.5); }, 1e-18, 1.0, 1e-11);
        CHECK(v == doctest::Approx(expected).epsilon(2e-7));
    }
}

TEST_CASE("log-stable symbol against the adaptive oracle") {
    auto nu = LevyMeasureDescriptor::log_stable(2.0, 1);
    for (double s : {0.5, 8.0, 100.0}) {
        double v = levy_symbol_jump(nu, s);
        double expected = oracles::nu_radial_oracle_1d(
            [&](double r) { double h = std::sin(0.5 * s * r); return 2.0 * h * h; },
            [](double r) { return std::pow(std::abs(std::log2(r)), 4.0) / r; }, 1e-12, 1.0, 1e-11);
        CHECK(v == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("gaussian matrix validation") {
    CHECK_THROWS_AS(LevyModel({0, 0}, {1, 0.5, 0.4999, 1}, std::nullopt, 2), ConfigError);
    CHECK_THROWS_AS(LevyModel({0, 0}, {-1, 0, 0, 0}, std::nullopt, 1), ConfigError);
    // PSD factor reproduces Q
    auto model = LevyModel({0, 0}, {2.0, 0.6, 0.6, 1.0}, std::nullopt, 2);
    auto b = model.gaussian_factor();
    double q00 = b[0] * b[0] + b[1] * b[1];
    double q01 = b[0] * b[2] + b[1] * b[3];
    double q11 = b[2] * b[2] + b[3] * b[3];
    CHECK(q00 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(q01 == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(q11 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dimension consistency is enforced") {
    CHECK_THROWS_AS(LevyModel({0, 0}, {0, 0, 0, 0}, LevyMeasureDescriptor::stable(1.0, 2), 1),
                    ConfigError);
}
