#pragma once

#include "levysmooth/common.hpp"
#include "levysmooth/levy_model.hpp"
#include "levysmooth/rng.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace levysmooth {

using json = nlohmann::json;

namespace detail {
inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
}
}  // namespace detail

// Model descriptors in the documented schema:
//   kind: none | stable | truncated_stable | log_stable | tabulated
//   alpha, K, dimension, drift (array), gaussian (row-major d x d array),
//   radii/densities for tabulated.
inline LevyModel model_from_json(const json& j) {
    detail::reject_unknown_keys(
        j, {"kind", "alpha", "K", "dimension", "drift", "gaussian", "radii", "densities"}, "model");
    std::string kind = j.value("kind", "stable");
    int d = j.value("dimension", 1);
    std::optional<LevyMeasureDescriptor> measure;
    if (kind == "none") {
        // pure gaussian / drift model
    } else if (kind == "stable") {
        double alpha = j.at("alpha").get<double>();
        double K = j.value("K", kInfiniteRadius);
        measure = LevyMeasureDescriptor::stable(alpha, d, K);
    } else if (kind == "truncated_stable") {
        measure = LevyMeasureDescriptor::truncated_stable(j.at("alpha").get<double>(),
                                                          j.at("K").get<double>(), d);
    } else if (kind == "log_stable") {
        measure = LevyMeasureDescriptor::log_stable(j.at("alpha").get<double>(), d);
    } else if (kind == "tabulated") {
        measure = LevyMeasureDescriptor::tabulated(j.at("radii").get<std::vector<double>>(),
                                                   j.at("densities").get<std::vector<double>>(), d);
    } else {
        throw ConfigError("model: unknown kind '" + kind + "'");
    }
    Vec drift{0, 0};
    if (j.contains("drift")) {
        auto v = j.at("drift").get<std::vector<double>>();
        if (int(v.size()) != d) throw ConfigError("model: drift size must match dimension");
        for (int i = 0; i < d; ++i) drift[i] = v[i];
    }
    std::array<double, 4> q{0, 0, 0, 0};
    if (j.contains("gaussian")) {
        auto v = j.at("gaussian").get<std::vector<double>>();
        if (int(v.size()) != d * d) throw ConfigError("model: gaussian must be d*d row-major");
        if (d == 1) {
            q[0] = v[0];
        } else {
            q = {v[0], v[1], v[2], v[3]};
        }
    }
    return LevyModel(drift, q, std::move(measure), d);
}

inline json model_to_json(const LevyModel& model) {
    json j;
    int d = model.dimension();
    j["dimension"] = d;
    if (!model.has_jumps()) {
        j["kind"] = "none";
    } else {
        const auto& nu = *model.measure();
        j["kind"] = to_string(nu.kind());
        if (nu.kind() != MeasureKind::Tabulated) j["alpha"] = nu.alpha();
        if (nu.kind() == MeasureKind::TruncatedStable) j["K"] = nu.truncation();
    }
    std::vector<double> drift(d);
    for (int i = 0; i < d; ++i) drift[i] = model.drift()[i];
    j["drift"] = drift;
    std::vector<double> q(d * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) q[r * d + c] = model.gaussian(r, c);
    j["gaussian"] = q;
    return j;
}

inline LevyModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("model file " + path + ": " + e.what());
    }
    return model_from_json(j);
}

// Experiment configuration for the verify subcommand.
struct ExperimentConfig {
    std::string suite = "all";  // thm31 | cor32 | cor33 | frac-gradient | duhamel | campanato | all
    std::optional<json> model;  // defaults per suite when absent
    std::string test_function = "default";  // constant | sin | indicator | log-modulus | custom
    std::string custom_grid_file;
    std::vector<double> times;
    int grid_n = 0;        // 0: suite default
    double grid_R = 0.0;
    std::uint64_t mc_paths = 0;
    RngSeed seeds{0, 0};
    bool seeds_given = false;
    double tol_scale = 1.0;  // multiplies the slack of every inequality
    std::string output_dir = ".";
};

inline ExperimentConfig experiment_from_json(const json& j) {
    detail::reject_unknown_keys(j,
                                {"suite", "model", "test_function", "custom_grid_file", "times",
                                 "grid", "mc", "seeds", "tolerances", "output_dir"},
                                "config");
    ExperimentConfig cfg;
    cfg.suite = j.value("suite", std::string("all"));
    const std::set<std::string> suites = {"thm31",   "cor32",     "cor33", "frac-gradient",
                                          "duhamel", "campanato", "isometry", "all"};
    if (!suites.count(cfg.suite)) throw ConfigError("config: unknown suite '" + cfg.suite + "'");
    if (j.contains("model")) cfg.model = j.at("model");
    cfg.test_function = j.value("test_function", std::string("default"));
    const std::set<std::string> fs = {"default", "constant", "sin", "indicator", "log-modulus",
                                      "custom"};
    if (!fs.count(cfg.test_function))
        throw ConfigError("config: unknown test_function '" + cfg.test_function + "'");
    if (cfg.test_function == "custom") {
        if (!j.contains("custom_grid_file"))
            throw ConfigError("config: custom test function needs custom_grid_file");
        cfg.custom_grid_file = j.at("custom_grid_file").get<std::string>();
    }
    if (j.contains("times")) cfg.times = j.at("times").get<std::vector<double>>();
    if (j.contains("grid")) {
        detail::reject_unknown_keys(j.at("grid"), {"n", "R"}, "config.grid");
        cfg.grid_n = j.at("grid").value("n", 0);
        cfg.grid_R = j.at("grid").value("R", 0.0);
    }
    if (j.contains("mc")) {
        detail::reject_unknown_keys(j.at("mc"), {"paths"}, "config.mc");
        cfg.mc_paths = j.at("mc").value("paths", std::uint64_t(0));
    }
    if (j.contains("seeds")) {
        detail::reject_unknown_keys(j.at("seeds"), {"seed", "stream"}, "config.seeds");
        cfg.seeds.seed = j.at("seeds").value("seed", std::uint64_t(0));
        cfg.seeds.stream = j.at("seeds").value("stream", std::uint64_t(0));
        cfg.seeds_given = true;
    }
    if (j.contains("tolerances")) {
        detail::reject_unknown_keys(j.at("tolerances"), {"scale"}, "config.tolerances");
        cfg.tol_scale = j.at("tolerances").value("scale", 1.0);
    }
    cfg.output_dir = j.value("output_dir", std::string("."));
    // MC-backed suites must pin their randomness
    const std::set<std::string> mc_suites = {"thm31", "duhamel", "campanato", "isometry", "all"};
    if (mc_suites.count(cfg.suite) && !cfg.seeds_given)
        throw ConfigError("config: seeds are mandatory for Monte Carlo suites");
    return cfg;
}

inline ExperimentConfig load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    try {
        return experiment_from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

}  // namespace levysmooth
