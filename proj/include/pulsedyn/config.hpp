#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pulsedyn/errors.hpp"
#include "pulsedyn/integrate.hpp"
#include "pulsedyn/vector_field.hpp"

namespace pulsedyn {

/// Flat JSON run configuration.
///
/// Required keys: "coeffs" (array, c0..cd of h(x) = sum c_i x^i), "x_max",
/// "omega". Optional: "lambda", "rel_tol" (1e-10), "abs_tol" (1e-12),
/// "max_step", "max_steps" (1000000), "grid_points" (4096), "output_dir".
/// Unknown keys are rejected so typos surface as config errors.
struct RunConfig {
    std::vector<double> coeffs;
    double x_max = 0.0;
    double omega = 0.0;
    std::optional<double> lambda;
    IntegratorConfig integrator;
    int grid_points = 4096;
    std::string output_dir = ".";

    PolynomialVectorField field() const { return PolynomialVectorField(coeffs, x_max); }

    static RunConfig parse(const nlohmann::json& j) {
        static const char* known[] = {"coeffs",   "x_max",     "omega",       "lambda",
                                      "rel_tol",  "abs_tol",   "max_step",    "max_steps",
                                      "grid_points", "output_dir"};
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool ok = false;
            for (const char* k : known) ok = ok || it.key() == k;
            if (!ok) throw ConfigError("unknown config key: " + it.key());
        }
        RunConfig cfg;
        try {
            cfg.coeffs = j.at("coeffs").get<std::vector<double>>();
            cfg.x_max = j.at("x_max").get<double>();
            cfg.omega = j.at("omega").get<double>();
            if (j.contains("lambda")) cfg.lambda = j.at("lambda").get<double>();
            if (j.contains("rel_tol")) cfg.integrator.rel_tol = j.at("rel_tol").get<double>();
            if (j.contains("abs_tol")) cfg.integrator.abs_tol = j.at("abs_tol").get<double>();
            if (j.contains("max_step")) cfg.integrator.max_step = j.at("max_step").get<double>();
            if (j.contains("max_steps")) cfg.integrator.max_steps = j.at("max_steps").get<long>();
            if (j.contains("grid_points")) cfg.grid_points = j.at("grid_points").get<int>();
            if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("malformed config: ") + e.what());
        }
        if (!(cfg.omega > 0.0)) throw ConfigError("omega must be positive");
        if (cfg.grid_points < 16) throw ConfigError("grid_points must be at least 16");
        if (!(cfg.integrator.rel_tol > 0.0) || !(cfg.integrator.abs_tol > 0.0))
            throw ConfigError("tolerances must be positive");
        if (!(cfg.integrator.max_step > 0.0)) throw ConfigError("max_step must be positive");
        if (cfg.integrator.max_steps <= 0) throw ConfigError("max_steps must be positive");
        return cfg;
    }

    static RunConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("cannot parse config: ") + e.what());
        }
        if (!j.is_object()) throw ConfigError("config root must be a JSON object");
        return parse(j);
    }
};

}  // namespace pulsedyn
