// morphsim: scenario runner, certificate analyzer and trajectory planner
// for the foldable-quadrotor attitude control toolkit.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "morph/errors.hpp"
#include "morph/io.hpp"
#include "morph/scenario.hpp"

namespace fs = std::filesystem;

namespace {

int run_one(const std::string& config_path, const std::string& out_dir_override, double dt_override,
            double horizon_override) {
    morph::ScenarioFile file = morph::load_scenario_file(config_path);
    morph::Scenario& sc = file.scenario;
    if (dt_override > 0.0) sc.dt = dt_override;
    if (horizon_override > 0.0) sc.horizon = horizon_override;

    const fs::path out_dir = out_dir_override.empty() ? fs::path(file.output_dir)
                                                      : fs::path(out_dir_override);
    fs::create_directories(out_dir);

    const morph::SimResult result = morph::run(sc);

    const fs::path csv = out_dir / (sc.name + ".csv");
    const fs::path events = out_dir / (sc.name + "_events.json");
    const fs::path plot = out_dir / (sc.name + "_plot.py");
    morph::write_log_csv(result.log, csv.string());
    morph::write_events_json(result.log, events.string());
    morph::write_text(morph::plot_script(csv.filename().string()), plot.string());

    std::cout << sc.name << ": " << result.log.rows.size() << " rows, "
              << result.log.switches.size() << " switches, " << result.log.violations.size()
              << " violations -> " << csv.string() << "\n";
    if (!result.log.clean()) {
        std::cout << "violation summary:\n";
        for (const auto& v : result.log.violations) {
            std::cout << "  t=" << v.t << " " << v.kind << ": " << v.detail << "\n";
            if (&v - result.log.violations.data() > 8) {
                std::cout << "  ... (" << result.log.violations.size() << " total)\n";
                break;
            }
        }
        return 2;
    }
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, double dt, double horizon,
            bool batch, int workers) {
    if (!batch) return run_one(config_path, out_dir, dt, horizon);

    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(config_path))
        if (entry.path().extension() == ".toml") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "no .toml scenarios in " << config_path << "\n";
        return 1;
    }
    int worst = 0;
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) reduction(max : worst)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(files.size()); ++i) {
        int rc = 0;
        try {
            rc = run_one(files[static_cast<std::size_t>(i)], out_dir, dt, horizon);
        } catch (const std::exception& e) {
#pragma omp critical
            std::cerr << files[static_cast<std::size_t>(i)] << ": " << e.what() << "\n";
            rc = 1;
        }
        worst = std::max(worst, rc);
    }
    return worst;
}

int cmd_analyze(const std::string& config_path, const std::string& json_path) {
    const morph::ScenarioFile file = morph::load_scenario_file(config_path);
    const morph::Scenario& sc = file.scenario;
    const morph::StabilityCertificate cert =
        sc.controller == morph::ControllerSelect::Case1
            ? morph::certify_case1(sc.configs, sc.gains, sc.phi_options)
            : morph::certify_case2(sc.configs, sc.gains, sc.phi_options);
    std::string json = morph::certificate_to_json(cert);

    if (cert.kind != morph::ControllerCase::Known && sc.configs.size() >= 2) {
        // Append the switch-plan jump bound when the config supplies a plan.
        morph::SwitchPlan plan;
        plan.tau_s = file.plan.request.tau_s;
        plan.rho = file.plan.present ? file.plan.rho : sc.monitors.rho;
        for (const auto& cfg : sc.configs)
            plan.z2_bounds.push_back(
                morph::bregman_divergence(cfg.true_inertia, cfg.nominal_inertia));
        nlohmann::json j = nlohmann::json::parse(json);
        j["jump_bounds"] = nlohmann::json::array();
        for (std::size_t a = 0; a < sc.configs.size(); ++a)
            for (std::size_t b = a + 1; b < sc.configs.size(); ++b)
                j["jump_bounds"].push_back({{"i", sc.configs[a].index},
                                            {"j", sc.configs[b].index},
                                            {"bound", morph::jump_bound(cert, plan,
                                                                        sc.configs[a].index,
                                                                        sc.configs[b].index)}});
        json = j.dump(2);
    }

    if (json_path.empty()) {
        std::cout << json << "\n";
    } else {
        morph::write_text(json, json_path);
        std::cout << "wrote " << json_path << "\n";
    }
    return 0;
}

int cmd_plan(const std::string& config_path) {
    const morph::ScenarioFile file = morph::load_scenario_file(config_path);
    if (!file.plan.present) throw morph::ConfigInvalid("config has no [plan] section");
    const morph::PlanSection& plan = file.plan;

    nlohmann::json j;
    j["type"] = plan.type;
    if (plan.type == "waypoint") {
        const morph::WaypointReference ref = morph::waypoint_reference(plan.request.r_des);
        j["r_des"] = {ref.r_des.x, ref.r_des.y, ref.r_des.z};
        j["feedforward"] = "zero velocity and acceleration";
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    const double tau = plan.tau > 0.0 ? plan.tau
                                      : 1.02 * std::max(plan.request.tau_s, plan.request.tau_d);
    const morph::QuinticSegment seg = morph::min_jerk(plan.request, tau);
    j["tau"] = seg.tau;
    j["tau_s"] = plan.request.tau_s;
    j["tau_d"] = plan.request.tau_d;
    j["coefficients"] = nlohmann::json::array();
    for (int axis = 0; axis < 3; ++axis) {
        nlohmann::json c = nlohmann::json::array();
        for (double v : seg.coeff[static_cast<std::size_t>(axis)]) c.push_back(v);
        j["coefficients"].push_back(c);
    }
    j["jerk_integral"] = seg.jerk_integral();

    const fs::path out_dir(file.output_dir);
    fs::create_directories(out_dir);
    const fs::path csv = out_dir / (file.scenario.name + "_trajectory.csv");
    std::string s = "t,x,y,z,vx,vy,vz,ax,ay,az\n";
    const int n = 500;
    for (int k = 0; k <= n; ++k) {
        const double t = seg.tau * k / n;
        const morph::Vec3 p = seg.position(t), v = seg.velocity(t), a = seg.acceleration(t);
        s += morph::format_double(t);
        for (double val : {p.x, p.y, p.z, v.x, v.y, v.z, a.x, a.y, a.z}) {
            s += ',';
            s += morph::format_double(val);
        }
        s += '\n';
    }
    morph::write_text(s, csv.string());
    j["trajectory_csv"] = csv.string();
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"foldable quadrotor attitude control: simulate, certify, plan"};
    app.require_subcommand(1);

    std::string config, out_dir, json_path;
    double dt = 0.0, horizon = 0.0;
    bool batch = false;
    int workers = 4;

    CLI::App* run = app.add_subcommand("run", "run a scenario (or a directory with --batch)");
    run->add_option("config", config, "scenario .toml (or directory with --batch)")->required();
    run->add_option("--out", out_dir, "output directory override");
    run->add_option("--dt", dt, "integration step override, s");
    run->add_option("--horizon", horizon, "horizon override, s");
    run->add_flag("--batch", batch, "treat config as a directory of scenarios");
    run->add_option("--workers", workers, "parallel workers for --batch");

    CLI::App* analyze = app.add_subcommand("analyze", "emit the stability certificate as JSON");
    analyze->add_option("config", config, "scenario .toml")->required();
    analyze->add_option("--json", json_path, "write the certificate to this path");

    CLI::App* plan = app.add_subcommand("plan", "emit the minimum-jerk segment and schedule");
    plan->add_option("config", config, "scenario .toml")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config, out_dir, dt, horizon, batch, workers);
        if (analyze->parsed()) return cmd_analyze(config, json_path);
        if (plan->parsed()) return cmd_plan(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
