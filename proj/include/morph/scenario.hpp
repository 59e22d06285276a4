#pragma once

#include <string>

#include "morph/sim.hpp"
#include "morph/toml.hpp"

namespace morph {

/// Planner-facing fields read from the same scenario file.
struct PlanSection {
    bool present = false;
    std::string type = "min_jerk";  // or "waypoint"
    PlannerRequest request;
    double tau = 0.0;              // 0 = choose 1.02 * max(tau_s, tau_d)
    double rho = 0.05;
    double t_exit = 0.0;           // 0 = entrance + tau_d
};

struct ScenarioFile {
    Scenario scenario;
    PlanSection plan;
    std::string output_dir = "out";
};

/// Strict mapping: every key in the document must be consumed, otherwise
/// ConfigInvalid names the first unknown key.
ScenarioFile load_scenario(const toml::Document& doc);
ScenarioFile load_scenario_file(const std::string& path);

}  // namespace morph
