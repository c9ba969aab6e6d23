#ifndef WESTERVELT_CONFIG_HPP
#define WESTERVELT_CONFIG_HPP

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "westervelt/grid.hpp"
#include "westervelt/profiles.hpp"
#include "westervelt/time_oracle.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

struct ConfigError : Error {
    using Error::Error;
};

/// One reproducible run description parsed from a single JSON file.
struct ScenarioConfig {
    // domain
    double width = 1.0, height = 1.0;
    int nx = 65, ny = 65;
    // medium
    MediumSpec medium;
    // excitation
    double omega = 40.0;
    SourceProfile source;
    // cascade
    int k_max = 12;
    double tol = 1e-10;
    // oracle
    TimeStepperConfig oracle;
    // inverse
    int basis_px = 8, basis_py = 8;
    double reg_weight = -1.0;  // negative: automatic
    int probe_order = 6;
    double noise_level = 0.0;
    bool known_mu = false;  // treat config (beta, gamma) as already recovered
    int inverse_sources = 12;
    // output
    std::string out_dir = "out";

    Grid make_grid() const { return build_grid(width, height, nx, ny); }
};

inline FieldProfile parse_profile(const nlohmann::json& j, const char* name) {
    if (j.is_number()) return FieldProfile::constant(j.get<double>());
    if (!j.is_object()) throw ConfigError(std::string("medium profile ") + name + " must be a number or object");
    const std::string kind = j.value("profile", "constant");
    if (kind == "constant") {
        if (!j.contains("value")) throw ConfigError(std::string("constant profile ") + name + " needs a value");
        return FieldProfile::constant(j.at("value").get<double>());
    }
    const double base = j.value("base", 0.0);
    const double amp = j.value("amplitude", 0.0);
    double cx = 0.5, cy = 0.5;
    if (j.contains("center")) {
        cx = j.at("center").at(0).get<double>();
        cy = j.at("center").at(1).get<double>();
    }
    if (kind == "gaussian_bump") return FieldProfile::gaussian(base, amp, cx, cy, j.value("width", 0.1));
    if (kind == "smooth_inclusion") return FieldProfile::inclusion(base, amp, cx, cy, j.value("radius", 0.2));
    throw ConfigError(std::string("unknown profile kind '") + kind + "' for " + name);
}

inline ScenarioConfig parse_config(const nlohmann::json& j) {
    ScenarioConfig c;
    try {
        if (j.contains("domain")) {
            const auto& d = j.at("domain");
            c.width = d.value("width", c.width);
            c.height = d.value("height", c.height);
            c.nx = d.value("nx", c.nx);
            c.ny = d.value("ny", c.ny);
        }
        if (j.contains("medium")) {
            const auto& m = j.at("medium");
            if (m.contains("alpha")) c.medium.alpha = parse_profile(m.at("alpha"), "alpha");
            if (m.contains("beta")) c.medium.beta = parse_profile(m.at("beta"), "beta");
            if (m.contains("gamma")) c.medium.gamma = parse_profile(m.at("gamma"), "gamma");
            c.medium.lambda = m.value("lambda", c.medium.lambda);
            c.medium.eta = m.value("eta", c.medium.eta);
        }
        if (j.contains("excitation")) {
            const auto& e = j.at("excitation");
            c.omega = e.value("omega", c.omega);
            c.source.order = e.value("order", c.source.order);
            c.source.amplitude = e.value("amplitude", c.source.amplitude);
            const std::string kind = e.value("kind", "cos");
            if (kind == "cos")
                c.source.kind = BoundaryModeKind::cosine;
            else if (kind == "sin")
                c.source.kind = BoundaryModeKind::sine;
            else
                throw ConfigError("excitation kind must be 'cos' or 'sin'");
        }
        if (j.contains("cascade")) {
            const auto& k = j.at("cascade");
            c.k_max = k.value("k_max", c.k_max);
            c.tol = k.value("tol", c.tol);
        }
        if (j.contains("oracle")) {
            const auto& o = j.at("oracle");
            c.oracle.steps_per_period = o.value("steps_per_period", c.oracle.steps_per_period);
            c.oracle.n_periods_max = o.value("n_periods_max", c.oracle.n_periods_max);
            c.oracle.periodicity_tol = o.value("periodicity_tol", c.oracle.periodicity_tol);
            c.oracle.picard_tol = o.value("picard_tol", c.oracle.picard_tol);
            c.oracle.picard_max_iters = o.value("picard_max_iters", c.oracle.picard_max_iters);
            c.oracle.ramp_periods = o.value("ramp_periods", c.oracle.ramp_periods);
        }
        if (j.contains("inverse")) {
            const auto& i = j.at("inverse");
            c.basis_px = i.value("px", c.basis_px);
            c.basis_py = i.value("py", c.basis_py);
            c.reg_weight = i.value("reg_weight", c.reg_weight);
            c.probe_order = i.value("probe_order", c.probe_order);
            c.noise_level = i.value("noise_level", c.noise_level);
            c.known_mu = i.value("known_mu", c.known_mu);
            c.inverse_sources = i.value("sources", c.inverse_sources);
        }
        if (j.contains("output")) {
            c.out_dir = j.at("output").value("directory", c.out_dir);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }

    if (!(c.width > 0.0) || !(c.height > 0.0)) throw ConfigError("domain extents must be positive");
    if (c.nx < 3 || c.ny < 3) throw ConfigError("domain needs nx >= 3 and ny >= 3");
    if (!(c.omega > 0.0)) throw ConfigError("excitation omega must be positive");
    if (c.k_max < 2) throw ConfigError("cascade k_max must be >= 2");
    if (!(c.tol > 0.0)) throw ConfigError("cascade tol must be positive");

    // Media must satisfy the positivity bounds everywhere; reject at load time.
    try {
        (void)c.medium.materialize(c.make_grid());
    } catch (const InvariantViolationError& e) {
        throw ConfigError(std::string("medium rejected: ") + e.what());
    }
    return c;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace westervelt

#endif
