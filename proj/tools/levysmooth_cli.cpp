// Experiment runner: verification campaigns, report plots, path sampling and
// symbol evaluation over the documented model/config schemas.
#include "levysmooth/levysmooth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace levysmooth;

namespace {

int cmd_verify(const std::string& suite_arg, const std::string& config_path,
               const std::string& out_dir_arg) {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_experiment(config_path);
    std::string suite = suite_arg.empty() ? cfg.suite : suite_arg;
    std::string out_dir = out_dir_arg.empty() ? cfg.output_dir : out_dir_arg;
    if (config_path.empty() && suite.empty()) throw ConfigError("verify: need --suite or --config");

    std::filesystem::create_directories(out_dir);
    VerifyOptions opt;
    if (cfg.seeds_given) opt.seed = cfg.seeds;
    opt.tol_scale = cfg.tol_scale;
    opt.output_dir = out_dir;

    auto rows = run_suite(suite, opt);
    write_report_csv(rows, out_dir + "/report.csv");

    std::ofstream summary(out_dir + "/summary.txt");
    int failures = 0;
    for (const auto& r : rows) {
        bool ok = r.pass;
        failures += ok ? 0 : 1;
        std::ostringstream line;
        line << (ok ? "[PASS] " : "[FAIL] ") << r.check << " model=" << r.model_id
             << " f=" << r.f_id << " x=" << format_double(r.x) << " t=" << format_double(r.t)
             << " lhs=" << format_double(r.lhs) << " rhs=" << format_double(r.rhs);
        summary << line.str() << "\n";
        std::cout << line.str() << "\n";
    }
    std::cout << (failures == 0 ? "all checks passed" : "FAILURES: " + std::to_string(failures))
              << "\n";
    return failures == 0 ? 0 : 1;
}

int cmd_plot(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw ConfigError("cannot open " + in_path);
    std::string header;
    std::getline(in, header);
    in.close();

    SvgPlotOptions opt;
    std::vector<SvgSeries> series;

    if (header.rfind("# levysmooth-profile", 0) == 0) {
        // t, sup_norm, window_slope
        std::ifstream f(in_path);
        std::string line;
        std::getline(f, line);
        std::getline(f, line);
        SvgSeries s{"sup-norm", "#1f6fb2", {}, {}};
        std::vector<double> lt, ln;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string a, b, c;
            std::getline(ss, a, ',');
            std::getline(ss, b, ',');
            std::getline(ss, c, ',');
            s.x.push_back(std::stod(a));
            s.y.push_back(std::stod(b));
            lt.push_back(std::log(std::stod(a)));
            ln.push_back(std::log(std::stod(b)));
        }
        double slope = 0.0;
        if (lt.size() >= 2) slope = detail::ls_slope(lt, ln);
        char ann[64];
        std::snprintf(ann, sizeof(ann), "fitted slope %.3f", slope);
        opt.annotation = ann;
        opt.title = "fractional gradient profile";
        opt.log_x = opt.log_y = true;
        series.push_back(std::move(s));
    } else if (header.rfind("# levysmooth-modulus", 0) == 0) {
        std::ifstream f(in_path);
        std::string line;
        std::getline(f, line);
        std::getline(f, line);
        SvgSeries emp{"empirical modulus", "#1f6fb2", {}, {}};
        SvgSeries fit{"fitted c/L^p", "#c44e52", {}, {}};
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string r, omega, fitv;
            std::getline(ss, r, ',');
            std::getline(ss, omega, ',');
            std::getline(ss, fitv, ',');
            emp.x.push_back(std::stod(r));
            emp.y.push_back(std::stod(omega));
            fit.x.push_back(std::stod(r));
            fit.y.push_back(std::stod(fitv));
        }
        opt.title = "modulus of continuity";
        opt.log_x = opt.log_y = true;
        // annotation from the stored fit parameters
        auto pos = header.find("exponent=");
        if (pos != std::string::npos) opt.annotation = "fit " + header.substr(pos);
        series.push_back(std::move(emp));
        series.push_back(std::move(fit));
    } else if (header.rfind("# levysmooth-report", 0) == 0) {
        auto rows = read_report_csv(in_path);
        SvgSeries lhs{"lhs", "#1f6fb2", {}, {}}, rhs{"rhs", "#c44e52", {}, {}};
        for (std::size_t i = 0; i < rows.size(); ++i) {
            lhs.x.push_back(double(i));
            lhs.y.push_back(rows[i].lhs);
            rhs.x.push_back(double(i));
            rhs.y.push_back(rows[i].rhs);
        }
        opt.title = "report rows";
        series.push_back(std::move(lhs));
        series.push_back(std::move(rhs));
    } else {
        throw ConfigError("unrecognized csv header: " + header);
    }
    write_svg_plot(series, opt, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_sample(const std::string& model_path, std::uint64_t n, std::uint64_t seed, double t,
               double eps, const std::string& backend, const std::string& out_csv,
               const std::string& dump_path) {
    auto model = load_model(model_path);
    if (eps == 0.0) eps = model.has_jumps() ? default_eps_cut(*model.measure()) : 1e-3;
    const bool cms = backend == "cms";
    if (!cms && backend != "poisson")
        throw ConfigError("sample: backend must be 'poisson' or 'cms'");
    PathSampler sampler(model, eps);
    if (cms && !sampler.cms_available())
        throw ConfigError("sample: the cms backend needs the un-truncated stable model in d = 1");
    std::vector<double> xs(n);
    double s1 = 0, s2 = 0, min_v = 1e300, max_v = -1e300;
    std::uint64_t total_events = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        Rng rng(seed, i);
        double e;
        if (cms) {
            e = sampler.sample_endpoint_cms(t, rng)[0];
        } else {
            auto path = sampler.sample_path(t, rng);
            total_events += path.events.size();
            e = path.endpoint()[0];
            if (i == 0 && !dump_path.empty()) write_path_dump(path, dump_path);
        }
        xs[i] = e;
        s1 += e;
        s2 += e * e;
        min_v = std::min(min_v, e);
        max_v = std::max(max_v, e);
    }
    std::sort(xs.begin(), xs.end());
    auto quantile = [&](double p) { return xs[std::size_t(p * (n - 1))]; };
    double mean = s1 / double(n);
    double var = s2 / double(n) - mean * mean;
    std::ofstream out(out_csv);
    if (!out) throw ConfigError("cannot open " + out_csv);
    out << "# levysmooth-endpoints v1 t=" << format_double(t) << " eps=" << format_double(eps)
        << " seed=" << seed << " backend=" << backend << "\n";
    out << "stat,value\n";
    out << "n," << n << "\n";
    out << "events_total," << total_events << "\n";
    out << "mean," << format_double(mean) << "\n";
    out << "variance," << format_double(var) << "\n";
    out << "min," << format_double(min_v) << "\n";
    out << "q05," << format_double(quantile(0.05)) << "\n";
    out << "median," << format_double(quantile(0.5)) << "\n";
    out << "q95," << format_double(quantile(0.95)) << "\n";
    out << "max," << format_double(max_v) << "\n";
    std::cout << "wrote " << out_csv << " (" << n << " endpoints, " << total_events
              << " jump events)\n";
    return 0;
}

int cmd_symbol(const std::string& model_path, const std::string& xi_str) {
    auto model = load_model(model_path);
    Vec xi{0, 0};
    std::stringstream ss(xi_str);
    std::string tok;
    int d = 0;
    while (std::getline(ss, tok, ',') && d < 2) xi[d++] = std::stod(tok);
    if (d != model.dimension())
        throw ConfigError("xi has " + std::to_string(d) + " components, model dimension is " +
                          std::to_string(model.dimension()));
    auto psi = levy_symbol(model, xi);
    std::cout << "psi(" << xi_str << ") = " << format_double(psi.real()) << " + "
              << format_double(psi.imag()) << "i\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"levysmooth: Levy semigroup smoothing experiments"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite, config_path, out_dir;
    verify->add_option("--suite", suite, "thm31|cor32|cor33|frac-gradient|duhamel|campanato|isometry|all");
    verify->add_option("--config", config_path, "experiment config json");
    verify->add_option("--out", out_dir, "output directory");

    auto* plot = app.add_subcommand("plot", "render a report csv as svg");
    std::string in_path, out_path;
    plot->add_option("--in", in_path, "input csv")->required();
    plot->add_option("--out", out_path, "output svg")->required();

    auto* sample = app.add_subcommand("sample", "sample paths and summarize endpoints");
    std::string model_path, dump_path, sample_out = "endpoints.csv", backend = "poisson";
    std::uint64_t n_paths = 1000, seed = 0;
    double t_horizon = 1.0, eps_cut = 0.0;
    sample->add_option("--model", model_path, "model json")->required();
    sample->add_option("--backend", backend, "poisson (compound) or cms (exact stable)");
    sample->add_option("--n", n_paths, "number of paths");
    sample->add_option("--seed", seed, "rng seed")->required();
    sample->add_option("--t", t_horizon, "time horizon");
    sample->add_option("--eps", eps_cut, "small-jump truncation radius");
    sample->add_option("--out", sample_out, "summary csv path");
    sample->add_option("--dump", dump_path, "binary dump of the first path");

    auto* symbol = app.add_subcommand("symbol", "evaluate the Levy symbol");
    std::string sym_model, xi_str;
    symbol->add_option("--model", sym_model, "model json")->required();
    symbol->add_option("--xi", xi_str, "frequency components, comma separated")->required();

    try {
        app.parse(argc, argv);
        if (verify->parsed()) return cmd_verify(suite, config_path, out_dir);
        if (plot->parsed()) return cmd_plot(in_path, out_path);
        if (sample->parsed()) return cmd_sample(model_path, n_paths, seed, t_horizon, eps_cut,
                                                backend, sample_out, dump_path);
        if (symbol->parsed()) return cmd_symbol(sym_model, xi_str);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << " (residual " << e.residual << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
