#include <doctest.h>

#include "levysmooth/path_sim.hpp"
#include "levysmooth/parallel.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

using namespace levysmooth;

namespace {
const LevyMeasureDescriptor kTrunc = LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 1);
}

TEST_CASE("pure gaussian model has no events and a normal endpoint") {
    auto model = LevyModel::gaussian1d(0.3, 1.0);
    PathSampler sampler(model, 0.5);
    Rng rng(5, 0);
    const int n = 20000;
    const double t = 2.0;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        auto path = sampler.sample_path(t, rng);
        CHECK(path.events.empty());
        double e = path.endpoint()[0];
        s1 += e;
        s2 += e * e;
    }
    s1 /= n;
    s2 = s2 / n - s1 * s1;
    CHECK(s1 == doctest::Approx(0.3 * t).epsilon(0.05));      // mean m t
    CHECK(s2 == doctest::Approx(t).epsilon(0.05));            // variance t Q
}

TEST_CASE("truncated stable jumps never exceed the truncation radius") {
    PathSampler sampler(LevyModel::pure_jump(kTrunc), 1e-2);
    Rng rng(17, 0);
    double max_jump = 0.0;
    for (int i = 0; i < 2000; ++i) {
        auto path = sampler.sample_path(0.2, rng);
        for (const auto& ev : path.events) {
            max_jump = std::max(max_jump, std::abs(ev.jump[0]));
            CHECK(std::abs(ev.jump[0]) >= sampler.eps_cut());
        }
        for (std::size_t k = 1; k < path.events.size(); ++k)
            CHECK(path.events[k].time > path.events[k - 1].time);
    }
    CHECK(max_jump <= 1.0);
    CHECK(max_jump > 0.5);  // the top of the support is actually reached
}

TEST_CASE("same seed reproduces the path byte for byte") {
    PathSampler sampler(LevyModel::pure_jump(kTrunc), 1e-2);
    Rng a(99, 42), b(99, 42);
    auto p1 = sampler.sample_path(0.7, a);
    auto p2 = sampler.sample_path(0.7, b);
    REQUIRE(p1.events.size() == p2.events.size());
    for (std::size_t i = 0; i < p1.events.size(); ++i) {
        CHECK(p1.events[i].time == p2.events[i].time);
        CHECK(p1.events[i].jump[0] == p2.events[i].jump[0]);
    }
    CHECK(p1.brownian_increment[0] == p2.brownian_increment[0]);
}

TEST_CASE("compensated integral is mean zero and satisfies the isometry") {
    const double t = 0.5, eps = 1e-2;
    auto model = LevyModel::pure_jump(kTrunc);
    PathSampler sampler(model, eps);
    auto q = make_qweight(kTrunc, BetaPowerSpec{1.0});
    CompensatedIntegrator integ(kTrunc, q, eps);

    const int n = 40000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        Rng rng(31, i);
        double qsum = 0.0;
        sampler.for_each_jump(t, rng, [&](double r, const Vec&) { qsum += q.radial(r); });
        double w = integ.from_qsum(qsum, t);
        s1 += w;
        s2 += w * w;
    }
    double mean = s1 / n;
    double var = s2 / n - mean * mean;
    double se_mean = std::sqrt(var / n);
    CHECK(std::abs(mean) <= 3.0 * se_mean);

    double ref = t * qweight_norm_sq_above(kTrunc, q, eps);
    double rel_se = std::sqrt(2.0 / double(n));  // W is near-Gaussian here
    CHECK(std::abs(var - ref) <= 3.0 * rel_se * ref);

    // path-based evaluation equals the definition applied to the event list
    Rng r2(77, 5);
    auto path = sampler.sample_path(t, r2);
    double manual = -t * integ.mean_rate();
    for (const auto& ev : path.events) manual += q.radial(std::abs(ev.jump[0]));
    CHECK(integ(path) == doctest::Approx(manual).epsilon(1e-12));
}

TEST_CASE("cross isometry: Cov(W_q, W_phi) = t * restricted <q, phi>") {
    const double t = 0.5, eps = 1e-2;
    auto model = LevyModel::pure_jump(kTrunc);
    PathSampler sampler(model, eps);
    auto q = make_qweight(kTrunc, BetaPowerSpec{1.0});
    auto phi = make_qweight(kTrunc, IndicatorAnnulusSpec{0.25, 1.0});
    CompensatedIntegrator iq(kTrunc, q, eps), ip(kTrunc, phi, eps);

    const int n = 40000;
    double sq = 0, sp = 0, spq = 0, sqq = 0, spp = 0;
    for (int i = 0; i < n; ++i) {
        Rng rng(41, i);
        double a = 0.0, b = 0.0;
        sampler.for_each_jump(t, rng, [&](double r, const Vec&) {
            a += q.radial(r);
            b += phi.radial(r);
        });
        double wq = iq.from_qsum(a, t), wp = ip.from_qsum(b, t);
        sq += wq;
        sp += wp;
        spq += wq * wp;
        sqq += wq * wq;
        spp += wp * wp;
    }
    double cov = spq / n - (sq / n) * (sp / n);
    double ref = t * qweight_cross_above(kTrunc, q, phi, eps);
    double sd = std::sqrt((sqq / n) * (spp / n)) / std::sqrt(double(n));
    CHECK(std::abs(cov - ref) <= 4.0 * sd);
}

TEST_CASE("endpoint characteristic function matches exp(-t psi)") {
    const double t = 0.5, eps = 1e-3;
    auto model = LevyModel::pure_jump(kTrunc);
    PathSampler sampler(model, eps);
    const int n = 100000;
    std::vector<double> xis = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, -0.5, -1.5};
    std::vector<std::complex<double>> acc(xis.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        Rng rng(2718, i);
        double e = sampler.sample_endpoint(t, rng)[0];
        for (std::size_t j = 0; j < xis.size(); ++j)
            acc[j] += std::complex<double>(std::cos(xis[j] * e), std::sin(xis[j] * e));
    }
    for (std::size_t j = 0; j < xis.size(); ++j) {
        auto emp = acc[j] / double(n);
        auto psi = levy_symbol(model, xis[j]);
        auto ref = std::exp(-t * psi);
        CHECK(std::abs(emp - ref) <= 4.0 / std::sqrt(double(n)));
    }
}

TEST_CASE("cms endpoints reproduce the cauchy law (KS < 0.01)") {
    auto model = LevyModel::cauchy1d();
    PathSampler sampler(model, 1e-3);
    REQUIRE(sampler.cms_available());
    const int n = 100000;
    const double t = 1.0;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) {
        Rng rng(9001, i);
        xs[i] = sampler.sample_endpoint_cms(t, rng)[0];
    }
    std::sort(xs.begin(), xs.end());
    // model's cached scale: psi(xi) = c |xi| => L_t ~ Cauchy(scale = c t)
    double c = stable_symbol_scale(*model.measure());
    CHECK(c == doctest::Approx(kPi).epsilon(1e-8));
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        double F = 0.5 + std::atan(xs[i] / (c * t)) / kPi;
        ks = std::max(ks, std::max(std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n)));
    }
    CHECK(ks < 0.01);
}

TEST_CASE("compound poisson endpoints also reproduce the cauchy law") {
    auto model = LevyModel::cauchy1d();
    PathSampler sampler(model, 1e-3);
    const int n = 50000;
    const double t = 0.7;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) {
        Rng rng(611, i);
        xs[i] = sampler.sample_endpoint(t, rng)[0];
    }
    std::sort(xs.begin(), xs.end());
    double c = kPi;
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        double F = 0.5 + std::atan(xs[i] / (c * t)) / kPi;
        ks = std::max(ks, std::max(std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n)));
    }
    CHECK(ks < 0.012);
}

TEST_CASE("parallel block reduce equals the serial pass bit for bit") {
    auto run = [](int threads) {
        setenv("LEVYSMOOTH_THREADS", std::to_string(threads).c_str(), 1);
        struct Acc {
            double s = 0;
        };
        auto out = parallel_block_reduce<Acc>(
            100000, 1024,
            [](std::uint64_t b, std::uint64_t e) {
                Acc a;
                for (std::uint64_t i = b; i < e; ++i) {
                    Rng rng(3, i);
                    a.s += rng.u01();
                }
                return a;
            },
            [](Acc x, Acc y) { return Acc{x.s + y.s}; });
        unsetenv("LEVYSMOOTH_THREADS");
        return out.s;
    };
    double serial = run(1);
    double parallel = run(4);
    CHECK(serial == parallel);
}

TEST_CASE("path dump round trip") {
    PathSampler sampler(LevyModel::pure_jump(kTrunc), 1e-2);
    Rng rng(123, 7);
    auto path = sampler.sample_path(0.4, rng);
    std::string file = "path_dump_test.bin";
    write_path_dump(path, file);
    auto back = read_path_dump(file);
    std::remove(file.c_str());
    REQUIRE(back.events.size() == path.events.size());
    CHECK(back.horizon == path.horizon);
    CHECK(back.eps_cut == path.eps_cut);
    for (std::size_t i = 0; i < path.events.size(); ++i) {
        CHECK(back.events[i].time == path.events[i].time);
        CHECK(back.events[i].jump[0] == path.events[i].jump[0]);
    }
    CHECK(back.endpoint()[0] == doctest::Approx(path.endpoint()[0]).epsilon(1e-15));
}

TEST_CASE("q identically zero gives W = 0") {
    auto q = make_qweight(kTrunc, CustomSpec{[](double) { return 0.0; }, "zero"});
    CHECK(q.l2nu_norm_sq() == 0.0);
    PathSampler sampler(LevyModel::pure_jump(kTrunc), 1e-2);
    Rng rng(1, 1);
    auto path = sampler.sample_path(0.3, rng);
    CHECK(compensated_integral(path, q, kTrunc) == 0.0);
}

TEST_CASE("eps_cut guard rejects explosive intensities") {
    auto nu = LevyMeasureDescriptor::truncated_stable(1.95, 1.0, 1);
    CHECK_THROWS_AS(PathSampler(LevyModel::pure_jump(nu), 1e-6), ConfigError);
}
