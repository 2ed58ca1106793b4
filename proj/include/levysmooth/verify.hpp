#pragma once

#include "levysmooth/campanato.hpp"
#include "levysmooth/common.hpp"
#include "levysmooth/config.hpp"
#include "levysmooth/estimators.hpp"
#include "levysmooth/nonlocal.hpp"
#include "levysmooth/perturbed.hpp"
#include "levysmooth/report.hpp"
#include "levysmooth/semigroup.hpp"
#include "levysmooth/svg.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace levysmooth {

// Pinned thresholds of the verification campaigns. tol_scale (configuration
// override) multiplies the slack of every inequality check.
struct VerifyOptions {
    RngSeed seed{20260801, 0};
    double tol_scale = 1.0;
    double mc_scale = 1.0;  // multiplies Monte Carlo budgets (reduced-scale runs)
    std::string output_dir;  // when set, suites drop auxiliary CSV/SVG files
    // wall-clock sink for the runtime budgets; kept out of the report rows so
    // identical seeds reproduce report files byte for byte
    std::shared_ptr<std::map<std::string, double>> runtimes;
};

struct TestFunction {
    std::string id;
    std::function<double(Vec)> eval;
    double sup = 1.0;
};

inline TestFunction make_test_function(const std::string& id) {
    if (id == "constant") return {"constant", [](Vec) { return 1.0; }, 1.0};
    if (id == "sin") return {"sin", [](Vec x) { return std::sin(x[0]); }, 1.0};
    if (id == "indicator")
        return {"indicator", [](Vec x) { return (x[0] >= 0.0 && x[0] <= 1.0) ? 1.0 : 0.0; }, 1.0};
    if (id == "log-modulus")
        return {"log-modulus", [](Vec x) { return dyadic_log_ramp(x[0], 2.0); },
                dyadic_log_ramp(0.0, 2.0)};
    throw ConfigError("unknown test function '" + id + "'");
}

namespace detail {

inline double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline double ls_slope(const std::vector<double>& lx, const std::vector<double>& ly) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = int(lx.size());
    for (int i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// --------------------------------------------------------------------------
// Ito isometry of the compensated integral: empirical Var W against
// t \int_{|y| >= eps} q^2 dnu for the truncated stable model. Runs strictly
// single-threaded; the runtime budget is part of the check.
// --------------------------------------------------------------------------
inline std::vector<EstimateReport> run_isometry(const VerifyOptions& opt = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    auto nu = LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 1);
    auto model = LevyModel::pure_jump(nu);
    auto q = make_qweight(nu, BetaPowerSpec{1.0});
    const double t = 0.5;
    const double eps = 1e-3;
    const auto n_paths = std::uint64_t(100000 * opt.mc_scale);
    PathSampler sampler(model, eps);
    CompensatedIntegrator integ(nu, q, eps);

    double s1 = 0, s2 = 0, s4 = 0;
    for (std::uint64_t i = 0; i < n_paths; ++i) {
        Rng rng(opt.seed.seed, opt.seed.stream + i);
        double q_sum = 0.0;
        sampler.for_each_jump(t, rng, [&](double r, const Vec&) { q_sum += q.radial_fast(r); });
        double w = integ.from_qsum(q_sum, t);
        s1 += w;
        double w2 = w * w;
        s2 += w2;
        s4 += w2 * w2;
    }
    double mean = s1 / double(n_paths);
    double var = s2 / double(n_paths) - mean * mean;
    double m2 = s2 / double(n_paths);
    double m4 = s4 / double(n_paths);
    double rel_se = std::sqrt(std::max(0.0, m4 / (m2 * m2) - 1.0) / double(n_paths));
    double ref = t * qweight_norm_sq_above(nu, q, eps);
    double runtime = detail::elapsed_seconds(t_start);

    std::vector<EstimateReport> rows;
    EstimateReport r;
    r.check = "isometry.var";
    r.model_id = "truncated_stable(1.5,1)";
    r.f_id = q.label();
    r.t = t;
    r.lhs = var;
    r.rhs = ref;
    r.std_error = rel_se * ref;
    r.n_samples = n_paths;
    r.seed = opt.seed.seed;
    r.pass = std::abs(var - ref) <= 3.0 * opt.tol_scale * rel_se * ref;
    rows.push_back(r);

    if (opt.runtimes) (*opt.runtimes)["isometry"] = runtime;
    return rows;
}

// --------------------------------------------------------------------------
// Weight-estimator checks of the correlation identity: the squared estimate
// against (1/t) P_t f^2(x) ||q||^2, and the estimate against the
// deterministic Fourier + quadrature route.
// --------------------------------------------------------------------------
inline std::vector<EstimateReport> run_thm31(const VerifyOptions& opt = {}) {
    auto nu = LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 1);
    auto model = LevyModel::pure_jump(nu);
    auto q = make_qweight(nu, BetaPowerSpec{1.0});
    const double eps = 1e-3;
    const auto n_paths = std::uint64_t(100000 * opt.mc_scale);
    const std::vector<double> times = {0.1, 0.5, 1.0};
    const std::vector<double> xs = {-1.5, -0.5, 0.0, 0.5, 1.5};

    const double psi1 = levy_symbol_jump(nu, 1.0);
    const double psi2 = levy_symbol_jump(nu, 2.0);
    // A_q sin = sin(x) * J by the angle decomposition
    const double j_factor = -nu_integrate_radial(nu, [&](double r) {
        double h = std::sin(0.5 * r);
        return 2.0 * h * h * q.radial(r);
    });

    const int n_grid = 4096;
    const double r_grid = 16.0;
    FourierSemigroup sg(model, n_grid, r_grid);
    auto f_ind = make_test_function("indicator");
    auto ind_grid = GridFunction::from_function(1, n_grid, r_grid, f_ind.eval);

    std::vector<EstimateReport> rows;
    for (const std::string& fid : {std::string("sin"), std::string("indicator")}) {
        auto tf = make_test_function(fid);
        for (double t : times) {
            GridFunction ptf(1, 2, 1.0);
            double curvature = 1.0;
            if (fid == "indicator") {
                ptf = sg.apply(ind_grid, t);
                double h = ptf.spacing();
                double worst = 0.0;
                for (int i = 1; i + 1 < n_grid; ++i)
                    worst = std::max(worst, std::abs(ptf.values()[i + 1] - 2.0 * ptf.values()[i] +
                                                     ptf.values()[i - 1]));
                curvature = 2.0 * worst / (h * h);  // safety factor on the grid estimate
            }
            for (double x : xs) {
                WeightEstimatorOptions wopts;
                wopts.eps_cut = eps;
                wopts.curvature_bound = curvature;
                auto est = weight_estimate_AqPtf(model, q, tf.eval, tf.sup, vec1(x), t, n_paths,
                                                 opt.seed, wopts);
                double ptf2_x, aq_det;
                if (fid == "sin") {
                    ptf2_x = 0.5 * (1.0 - std::exp(-t * psi2) * std::cos(2.0 * x));
                    aq_det = std::exp(-t * psi1) * std::sin(x) * j_factor;
                } else {
                    // indicator squares to itself
                    ptf2_x = ptf.sample1d(x);
                    aq_det = apply_Aq(q, [&](Vec y) { return ptf.sample(y); }, vec1(x), nu);
                }
                double budget = est.std_error + est.bias_bound;

                EstimateReport ineq;
                ineq.check = "thm31.bound";
                ineq.model_id = "truncated_stable(1.5,1)";
                ineq.f_id = fid;
                ineq.x = x;
                ineq.t = t;
                ineq.lhs = est.estimate * est.estimate;
                ineq.rhs = ptf2_x * q.l2nu_norm_sq() / t;
                ineq.std_error = 2.0 * std::abs(est.estimate) * budget;
                ineq.n_samples = est.n_paths;
                ineq.seed = opt.seed.seed;
                ineq.pass = ineq.lhs <= ineq.rhs + 3.0 * opt.tol_scale * ineq.std_error + 1e-9;
                rows.push_back(ineq);

                EstimateReport match;
                match.check = "thm31.pipeline_match";
                match.model_id = ineq.model_id;
                match.f_id = fid;
                match.x = x;
                match.t = t;
                match.lhs = est.estimate;
                match.rhs = aq_det;
                match.std_error = budget;
                match.n_samples = est.n_paths;
                match.seed = opt.seed.seed;
                match.pass = std::abs(est.estimate - aq_det) <= 3.0 * opt.tol_scale * budget + 1e-6;
                rows.push_back(match);
            }
        }
    }
    return rows;
}

// --------------------------------------------------------------------------
// Smoothing inequality at every grid point:
//   \int |P_t f(x+y) - P_t f(x)|^2 nu(dy) <= (1.05/t) P_t f^2 (x).
// --------------------------------------------------------------------------
inline std::vector<EstimateReport> run_cor32(const VerifyOptions& opt = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    const int n = 4096;
    const double R = 16.0;
    const std::vector<double> times = {0.1, 0.5, 1.0, 5.0};
    std::vector<EstimateReport> rows;

    struct ModelCase {
        std::string id;
        LevyModel model;
    };
    std::vector<ModelCase> models;
    models.push_back({"cauchy", LevyModel::cauchy1d()});
    models.push_back(
        {"truncated_stable(1.5,1)",
         LevyModel::pure_jump(LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 1))});

    for (const auto& mc : models) {
        const auto& nu = *mc.model.measure();
        FourierSemigroup sg(mc.model, n, R);
        SmoothingLhs lhs_op(nu, n, R);
        for (const std::string& fid : {std::string("sin"), std::string("indicator")}) {
            auto tf = make_test_function(fid);
            auto f = GridFunction::from_function(1, n, R, tf.eval);
            FourierSemigroup* sgp = &sg;
            for (double t : times) {
                auto ptf = sgp->apply(f, t);
                auto ptf2 = semigroup_square_fourier(*sgp, f, t);
                auto all = lhs_op.evaluate_all(ptf);
                double floor_abs = 1e-10 * tf.sup * tf.sup / t;
                double worst_margin = -1e300;
                int worst_i = 0;
                bool pass = true;
                for (int i = 0; i < n; ++i) {
                    double rhs = 1.05 * opt.tol_scale * ptf2.values()[i] / t + floor_abs;
                    double margin = all[i] - rhs;
                    if (margin > worst_margin) {
                        worst_margin = margin;
                        worst_i = i;
                    }
                    if (all[i] > rhs) pass = false;
                }
                EstimateReport r;
                r.check = "cor32.smoothing";
                r.model_id = mc.id;
                r.f_id = fid;
                r.x = ptf.coord(worst_i);
                r.t = t;
                r.lhs = all[worst_i];
                r.rhs = 1.05 * opt.tol_scale * ptf2.values()[worst_i] / t + floor_abs;
                r.n_samples = std::uint64_t(n);
                r.seed = 0;
                r.pass = pass;
                rows.push_back(r);
            }
        }
    }
    if (opt.runtimes) (*opt.runtimes)["cor32"] = detail::elapsed_seconds(t_start);
    return rows;
}

// --------------------------------------------------------------------------
// Iterated (n = 2) smoothing bound: tensor quadrature <= (2/t)^2 ||f||^2.
// --------------------------------------------------------------------------
inline std::vector<EstimateReport> run_cor33(const VerifyOptions& opt = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    const int n = 4096;
    const double R = 16.0;
    auto nu = LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 1);
    auto model = LevyModel::pure_jump(nu);
    auto tf = make_test_function("sin");
    auto f = GridFunction::from_function(1, n, R, tf.eval);
    FourierSemigroup sg(model, f);
    std::vector<EstimateReport> rows;
    for (double t : {0.5, 1.0}) {
        auto ptf = sg.apply(f, t);
        double worst = 0.0, worst_x = 0.0;
        for (int i = 0; i <= 32; ++i) {
            double x = -3.0 + 6.0 * i / 32.0;
            double v = smoothing_lhs_iterated2(nu, ptf, x);
            if (v > worst) {
                worst = v;
                worst_x = x;
            }
        }
        EstimateReport r;
        r.check = "cor33.iterated2";
        r.model_id = "truncated_stable(1.5,1)";
        r.f_id = "sin";
        r.x = worst_x;
        r.t = t;
        r.lhs = worst;
        r.rhs = (2.0 / t) * (2.0 / t) * tf.sup * tf.sup * 1.05 * opt.tol_scale;
        r.pass = r.lhs <= r.rhs;
        rows.push_back(r);
    }
    if (opt.runtimes) (*opt.runtimes)["cor33"] = detail::elapsed_seconds(t_start);
    return rows;
}

// --------------------------------------------------------------------------
// Short-time fractional gradient of the free truncated-stable semigroup:
// log-log slope of ||(-Delta)^{(a-b)/2} P_t f||_inf no steeper than -0.55 and
// the fitted constant of C (1 + t^{-1/2}) stable across grid resolutions.
// --------------------------------------------------------------------------
inline std::vector<EstimateReport> run_frac_gradient(const VerifyOptions& opt = {}) {
    auto nu = LevyMeasureDescriptor::truncated_stable(1.5, 1.0, 1);
    auto model = LevyModel::pure_jump(nu);
    const double sigma = 0.5;  // alpha - beta with beta = 1
    const double R = 16.0;
    auto tf = make_test_function("indicator");

    std::vector<double> times;
    for (int i = 0; i <= 12; ++i) times.push_back(1e-3 * std::pow(100.0, i / 12.0));

    auto profile_for = [&](int n) {
        auto f = GridFunction::from_function(1, n, R, tf.eval);
        FourierSemigroup sg(model, n, R);
        return frac_gradient_profile(sg, f, times, sigma);
    };
    auto prof_hi = profile_for(4096);
    auto prof_lo = profile_for(2048);

    std::vector<double> lx, ly;
    for (const auto& p : prof_hi) {
        lx.push_back(std::log(p.t));
        ly.push_back(std::log(p.sup_norm));
    }
    double slope = detail::ls_slope(lx, ly);
    auto fitted_c = [](const std::vector<ProfilePoint>& prof) {
        double c = 0.0;
        for (const auto& p : prof) c = std::max(c, p.sup_norm / (1.0 + 1.0 / std::sqrt(p.t)));
        return c;
    };
    double c_hi = fitted_c(prof_hi), c_lo = fitted_c(prof_lo);

    std::vector<EstimateReport> rows;
    EstimateReport rs;
    rs.check = "frac_gradient.slope";
    rs.model_id = "truncated_stable(1.5,1)";
    rs.f_id = "indicator";
    rs.lhs = slope;
    rs.rhs = -0.55;
    rs.pass = slope >= -0.55 * opt.tol_scale;
    rows.push_back(rs);

    EstimateReport rc;
    rc.check = "frac_gradient.constant_stability";
    rc.model_id = rs.model_id;
    rc.f_id = rs.f_id;
    rc.lhs = std::abs(c_lo / c_hi - 1.0);
    rc.rhs = 0.2;
    rc.pass = rc.lhs <= 0.2 * opt.tol_scale;
    rows.push_back(rc);

    if (!opt.output_dir.empty()) {
        std::ofstream csv(opt.output_dir + "/frac_gradient_profile.csv");
        csv << "# levysmooth-profile v1 sigma=" << format_double(sigma)
            << " fitted_slope=" << format_double(slope) << "\n";
        csv << "t,sup_norm,window_slope\n";
        for (std::size_t i = 0; i < prof_hi.size(); ++i) {
            double wslope = 0.0;
            if (i > 0)
                wslope = (std::log(prof_hi[i].sup_norm) - std::log(prof_hi[i - 1].sup_norm)) /
                         (std::log(prof_hi[i].t) - std::log(prof_hi[i - 1].t));
            csv << format_double(prof_hi[i].t) << ',' << format_double(prof_hi[i].sup_norm) << ','
                << format_double(wslope) << "\n";
        }
    }
    return rows;
}

// --------------------------------------------------------------------------
// Perturbed dynamics: Picard contraction below the t0 proxy, the two-regime
// gradient bounds, and the Euler-scheme cross-check.
// --------------------------------------------------------------------------
inline std::vector<EstimateReport> run_duhamel(const VerifyOptions& opt = {}) {
    PerturbedSystem sys(1.5, 0.5, [](double x) { return 0.3 * (1.0 + std::cos(x)) / 2.0; }, 0.3);
    PerturbedSystem free_sys(1.5, 0.5, [](double) { return 0.0; }, 0.0);
    const int n = 2048;
    const double R = 16.0;
    const double mode = 4.0;
    auto f_eval = [R, mode](double u) { return std::sin(2.0 * kPi * mode * u / (2.0 * R)); };
    auto f = GridFunction::from_function(1, n, R, [&](Vec p) { return f_eval(p[0]); });

    std::vector<EstimateReport> rows;
    const double t0 = picard_t0_proxy(sys, n, R);

    // (a) geometric Picard contraction on [0, ~t0]
    DuhamelSolver solver(sys, n, R);
    TimeGrid grid_a(std::min(t0, 1.0) * 0.98, 64);
    auto sol_a = solver.solve(f, grid_a);
    double worst_ratio = 0.0;
    for (std::size_t i = 1; i + 1 < sol_a.iteration_deltas.size(); ++i)
        worst_ratio = std::max(worst_ratio,
                               sol_a.iteration_deltas[i + 1] / sol_a.iteration_deltas[i]);
    EstimateReport ra;
    ra.check = "duhamel.picard_contraction";
    ra.model_id = "perturbed(1.5,0.5)";
    ra.f_id = "sin_mode4";
    ra.t = grid_a.t_max;
    ra.lhs = worst_ratio;
    ra.rhs = 0.9;
    ra.n_samples = std::uint64_t(sol_a.picard_iterations);
    ra.pass = sol_a.segments == 1 && worst_ratio <= 0.9 &&
              sol_a.iteration_deltas.back() < 1e-7;
    rows.push_back(ra);

    // (b) sqrt(t)-scaled gradient bounded by the free-profile constant
    auto prof_pert = frac_gradient_profile(sol_a.nodes, sol_a.slices, sys.beta);
    DuhamelSolver free_solver(free_sys, n, R);
    auto sol_free = free_solver.solve(f, grid_a);
    auto prof_free = frac_gradient_profile(sol_free.nodes, sol_free.slices, sys.beta);
    double c_pert = 0.0, c_free = 0.0;
    for (std::size_t i = 1; i < prof_pert.size(); ++i) {
        c_pert = std::max(c_pert, std::sqrt(prof_pert[i].t) * prof_pert[i].sup_norm);
        c_free = std::max(c_free, std::sqrt(prof_free[i].t) * prof_free[i].sup_norm);
    }
    EstimateReport rb;
    rb.check = "duhamel.small_time_bound";
    rb.model_id = ra.model_id;
    rb.f_id = ra.f_id;
    rb.t = t0;
    rb.lhs = c_pert;
    rb.rhs = 4.0 * c_free * opt.tol_scale;
    rb.pass = rb.lhs <= rb.rhs;
    rows.push_back(rb);

    // (c) uniform bound on [t0, 1] via the bootstrap constant
    TimeGrid grid_c(1.0, 64);
    auto sol_c = solver.solve(f, grid_c);
    auto prof_c = frac_gradient_profile(sol_c.nodes, sol_c.slices, sys.beta);
    double tail_max = 0.0;
    for (const auto& p : prof_c)
        if (p.t >= t0) tail_max = std::max(tail_max, p.sup_norm);
    EstimateReport rc;
    rc.check = "duhamel.tail_bound";
    rc.model_id = ra.model_id;
    rc.f_id = ra.f_id;
    rc.t = 1.0;
    rc.lhs = tail_max;
    rc.rhs = 1.05 * opt.tol_scale * c_pert / std::sqrt(t0 / 2.0);
    rc.pass = rc.lhs <= rc.rhs;
    rows.push_back(rc);

    // (d) Euler-Maruyama cross-check at probe points
    const double t_probe = 0.5;
    TimeGrid grid_d(t_probe, 64);
    auto sol_d = solver.solve(f, grid_d);
    const auto& last = sol_d.slices.back();
    const auto n_paths = std::uint64_t(100000 * opt.mc_scale);
    for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        auto est = euler_mc_semigroup(sys, f_eval, x, t_probe, n_paths, 128, opt.seed);
        EstimateReport rd;
        rd.check = "duhamel.euler_match";
        rd.model_id = ra.model_id;
        rd.f_id = ra.f_id;
        rd.x = x;
        rd.t = t_probe;
        rd.lhs = est.estimate;
        rd.rhs = last.sample1d(x);
        rd.std_error = est.std_error;
        rd.n_samples = n_paths;
        rd.seed = opt.seed.seed;
        rd.pass = std::abs(est.estimate - rd.rhs) <=
                  3.0 * opt.tol_scale * est.std_error + 5e-4;
        rows.push_back(rd);
    }
    return rows;
}

// --------------------------------------------------------------------------
// Campanato machinery: chaining on the coherent synthetic, and the log-stable
// modulus fit with its proof-step verification.
// --------------------------------------------------------------------------
inline std::vector<EstimateReport> run_campanato(const VerifyOptions& opt = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    std::vector<EstimateReport> rows;

    // chaining on the synthetic log-modulus function
    {
        const double alpha = 2.0;
        const int n = 1 << 15;
        auto f = GridFunction::from_function(1, n, 1.0, [alpha](Vec p) {
            return dyadic_log_ramp(p[0], alpha);
        });
        auto chain = chaining_bound_check(f, alpha, 3, 12, 1);
        if (!opt.output_dir.empty()) {
            // seminorm per radius: the normalized deviation sup at each scale
            std::ofstream csv(opt.output_dir + "/seminorm.csv");
            csv << "# levysmooth-seminorm v1 alpha=" << format_double(alpha) << "\n";
            csv << "r,constant\n";
            for (int k = 3; k <= 12; ++k) {
                auto one = campanato_seminorm(f, alpha, k, k, 1);
                csv << format_double(std::exp2(-double(k))) << ','
                    << format_double(one.constant) << "\n";
            }
        }
        EstimateReport r;
        r.check = "campanato.chaining_factor4";
        r.model_id = "synthetic";
        r.f_id = "dyadic_log_ramp(2)";
        r.lhs = chain.empirical_sup;
        r.rhs = chain.telescoped_bound;
        r.n_samples = std::uint64_t(n);
        r.pass = chain.empirical_sup <= chain.telescoped_bound * (1.0 + 1e-6) &&
                 chain.empirical_sup >= chain.telescoped_bound / (4.0 * opt.tol_scale);
        rows.push_back(r);

        EstimateReport rap;
        rap.check = "campanato.chaining_apriori";
        rap.model_id = "synthetic";
        rap.f_id = r.f_id;
        rap.lhs = chain.empirical_sup;
        rap.rhs = chain.apriori_bound;
        rap.pass = chain.empirical_sup <= chain.apriori_bound * (1.0 + 1e-6);
        rows.push_back(rap);
    }

    // log-stable modulus of continuity, two truncation levels
    auto model = LevyModel::pure_jump(LevyMeasureDescriptor::log_stable(2.0, 1));
    double main_exponent = 0.0;
    for (double eps : {1.0 / 64.0, 1.0 / 32.0}) {
        ModulusOptions mopts;
        mopts.eps_cut = eps;
        mopts.n_pairs = std::uint64_t(1000000 * opt.mc_scale);
        mopts.seed = opt.seed;
        auto rep = semigroup_modulus_check(model, 0.0, 1.0, 1.0, mopts);
        bool primary = eps == 1.0 / 64.0;
        if (primary) main_exponent = rep.fitted_exponent;

        EstimateReport re;
        re.check = primary ? "campanato.modulus_exponent" : "campanato.modulus_exponent_eps_sens";
        re.model_id = "log_stable(2)";
        re.f_id = "indicator";
        re.t = 1.0;
        re.lhs = rep.fitted_exponent;
        re.rhs = 0.75;
        re.n_samples = mopts.n_pairs;
        re.seed = opt.seed.seed;
        re.pass = rep.fitted_exponent >= 0.75 / opt.tol_scale && !rep.inconclusive;
        rows.push_back(re);

        if (primary) {
            EstimateReport ri;
            ri.check = "campanato.modulus_seminorm_step";
            ri.model_id = re.model_id;
            ri.f_id = re.f_id;
            ri.t = 1.0;
            ri.lhs = rep.seminorm_worst_ratio;
            ri.rhs = 1.25;
            ri.n_samples = mopts.n_pairs;
            ri.seed = opt.seed.seed;
            ri.pass = rep.seminorm_pass;
            rows.push_back(ri);
            if (!opt.output_dir.empty())
                write_modulus_csv(rep, opt.output_dir + "/modulus.csv");
        }
    }

    if (opt.runtimes) (*opt.runtimes)["campanato"] = detail::elapsed_seconds(t_start);
    return rows;
}

// --------------------------------------------------------------------------
// Suite dispatch shared by the CLI and the acceptance binary.
// --------------------------------------------------------------------------
inline std::vector<EstimateReport> run_suite(const std::string& name, const VerifyOptions& opt) {
    if (name == "isometry") return run_isometry(opt);
    if (name == "thm31") return run_thm31(opt);
    if (name == "cor32") return run_cor32(opt);
    if (name == "cor33") return run_cor33(opt);
    if (name == "frac-gradient") return run_frac_gradient(opt);
    if (name == "duhamel") return run_duhamel(opt);
    if (name == "campanato") return run_campanato(opt);
    if (name == "all") {
        std::vector<EstimateReport> all;
        for (const char* s :
             {"isometry", "thm31", "cor32", "cor33", "frac-gradient", "duhamel", "campanato"}) {
            auto part = run_suite(s, opt);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw ConfigError("unknown suite '" + name + "'");
}

}  // namespace levysmooth
