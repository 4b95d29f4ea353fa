#pragma once

// JSON run configuration:
//
//   {
//     "spec_version": 1,
//     "spring":    {"m0": 1, "t0": 1, "k0": 4, "x0": 1, "x1": 0},
//     "econ":      {"gamma": 1, "lambda": 1, "ell": 1, "ell0": 0, "p_star": 10, "d_star": 5,
//                   "coefficients": {"family": "log_periodic", "theta": 2}},
//     "fit":       {"theta_min": 0.5, "theta_max": 10, "envelope": "constant",
//                   "fit_shift": false, "grid_points": 400, "column": "x", "t_ref": 1},
//     "integrate": {"kind": "spring-reduced", "t_start": 1, "t_end": 100, "tol": 1e-10,
//                   "points": 200, "spacing": "log", "initial": [0, 2],
//                   "schedule": "linear", "amplitude": 1}
//   }
//
// Every section and key is optional except spec_version. Unknown keys are
// rejected. Coefficient families: {"family": "log_periodic", "theta": T} or
// {"family": "constant", "d_o": D, "q_o": Q}.

#include "logspring/econ.hpp"
#include "logspring/fitter.hpp"
#include "logspring/oscillator.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <string>

namespace logspring {

inline constexpr int kConfigVersion = 1;

enum class Spacing { linear, log };
Spacing parse_spacing(std::string_view name);

struct FitSection {
    double theta_min = 0.5;
    double theta_max = 10.0;
    Envelope envelope = Envelope::constant;
    bool fit_shift = false;
    std::size_t grid_points = kMinThetaGridPoints;
    std::optional<std::string> column;
    std::optional<double> t_ref;
};

struct IntegrateSection {
    std::string kind = "spring-reduced";
    std::optional<double> t_start;
    std::optional<double> t_end;
    double tol = 1e-10;
    std::optional<std::size_t> points;
    Spacing spacing = Spacing::log;
    std::optional<std::array<double, 2>> initial;
    std::string schedule = "linear";
    double amplitude = 1.0;
};

struct RunConfig {
    SpringConfig spring{1.0, 1.0, 4.0, 1.0, 0.0};
    EconConfig econ = EconConfig::log_periodic(1.0, 1.0, 1.0, 2.0, 0.0, 10.0, 5.0);
    FitSection fit;
    IntegrateSection integrate;
};

/// Overlay `doc` onto `base`. Throws InputError on schema violations.
RunConfig parse_run_config(const nlohmann::json& doc, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});

nlohmann::json spring_to_json(const SpringConfig& spring);
SpringConfig spring_from_json(const nlohmann::json& j, const SpringConfig& base);

/// Throws InputError for configurations built from custom callables.
nlohmann::json econ_to_json(const EconConfig& econ);
EconConfig econ_from_json(const nlohmann::json& j, const EconConfig& base);

nlohmann::json fit_to_json(const LogPeriodicFit& fit);

} // namespace logspring
