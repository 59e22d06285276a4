#include "morph/scenario.hpp"

#include <cstdlib>

#include "morph/errors.hpp"

namespace morph {

namespace {

Vec3 to_vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

Vec6 to_vec6(const std::vector<double>& v) {
    Vec6 h;
    for (std::size_t i = 0; i < 6; ++i) h[i] = v[i];
    return h;
}

InertiaParams inertia_from(const toml::Document& doc, const std::string& key) {
    InertiaParams p;
    p.h = to_vec6(doc.require_array(key, 6));
    return p;
}

Configuration load_config(const toml::Document& doc, int index) {
    const std::string base = "vehicle.config" + std::to_string(index) + ".";
    Configuration cfg;
    cfg.index = index;
    cfg.nominal_inertia = inertia_from(doc, base + "h_nominal");
    if (doc.has(base + "h_true")) {
        cfg.true_inertia = inertia_from(doc, base + "h_true");
    } else if (doc.has(base + "delta_h")) {
        const auto dh = doc.require_array(base + "delta_h", 3);
        cfg.true_inertia = cfg.nominal_inertia;
        cfg.true_inertia.h[0] += dh[0];
        cfg.true_inertia.h[1] += dh[1];
        cfg.true_inertia.h[2] += dh[2];
    } else {
        cfg.true_inertia = cfg.nominal_inertia;
    }
    const auto ev = sym_eigenvalues(assemble_inertia(cfg.true_inertia));
    cfg.lambda_min = doc.get_number(base + "lambda_min", ev[0]);
    cfg.lambda_max = doc.get_number(base + "lambda_max", ev[2]);
    return cfg;
}

}  // namespace

ScenarioFile load_scenario(const toml::Document& doc) {
    ScenarioFile out;
    Scenario& sc = out.scenario;

    sc.name = doc.get_string("scenario.name", "scenario");
    const std::string kind = doc.get_string("scenario.case", "case1");
    if (kind == "none")
        sc.controller = ControllerSelect::None;
    else if (kind == "case1")
        sc.controller = ControllerSelect::Case1;
    else if (kind == "case2")
        sc.controller = ControllerSelect::Case2;
    else if (kind == "case3")
        sc.controller = ControllerSelect::Case3;
    else if (kind == "robust_baseline")
        sc.controller = ControllerSelect::RobustBaseline;
    else
        throw ConfigInvalid("scenario.case must be none/case1/case2/case3/robust_baseline");

    sc.dt = doc.get_number("scenario.dt", 1e-3);
    sc.horizon = doc.get_number("scenario.horizon", 10.0);
    sc.log_stride = static_cast<int>(doc.get_number("scenario.log_stride", 1));
    sc.seed = static_cast<std::uint64_t>(doc.get_number("scenario.seed", 1));
    if (const char* env = std::getenv("MORPHSIM_SEED"))
        sc.seed = static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));

    sc.mass = doc.get_number("vehicle.mass", 1.4);
    sc.gravity = doc.get_number("vehicle.gravity", 9.81);
    const int n_configs = static_cast<int>(doc.get_number("vehicle.configurations", 1));
    for (int i = 1; i <= n_configs; ++i) sc.configs.push_back(load_config(doc, i));

    sc.gains.k_r = doc.get_number("gains.k_r", 0.0424);
    sc.gains.k_omega = doc.get_number("gains.k_omega", 0.0296);
    sc.gains.c = doc.get_number("gains.c", 0.1);
    sc.gains.g = to_vec3(doc.get_array("gains.g", {1.35, 1.5, 1.65}));

    sc.robust.delta_r = doc.get_number("robust.delta_r", 0.0);
    sc.robust.eta = doc.get_number("robust.eta", 3e-4);
    const std::string policy = doc.get_string("robust.eta_policy", "fixed");
    if (policy == "fixed")
        sc.robust.eta_policy = RobustParams::EtaPolicy::Fixed;
    else if (policy == "adaptive")
        sc.robust.eta_policy = RobustParams::EtaPolicy::Adaptive;
    else
        throw ConfigInvalid("robust.eta_policy must be fixed or adaptive");
    sc.robust.gamma = doc.get_number("robust.gamma", 0.5);
    sc.robust.eta_max = doc.get_number("robust.eta_max", 3e-4);
    sc.robust.epsilon_smooth = doc.get_number("robust.epsilon_smooth", 1e-6);
    const std::string law = doc.get_string("robust.law", "smooth");
    if (law == "smooth")
        sc.robust.law = RobustParams::Law::Smooth;
    else if (law == "sign")
        sc.robust.law = RobustParams::Law::Sign;
    else
        throw ConfigInvalid("robust.law must be smooth or sign");
    const std::string ssign = doc.get_string("robust.smooth_sign", "minus");
    if (ssign == "minus")
        sc.robust.smooth_sign = RobustParams::SmoothSign::Minus;
    else if (ssign == "plus")
        sc.robust.smooth_sign = RobustParams::SmoothSign::Plus;
    else
        throw ConfigInvalid("robust.smooth_sign must be minus or plus");
    sc.robust.nu = doc.get_number("robust.nu", 1e-3);

    const std::string dist = doc.get_string("disturbance.kind", "zero");
    if (dist == "zero") {
        sc.disturbance.kind = DisturbanceModel::Kind::Zero;
    } else if (dist == "sinusoidal") {
        sc.disturbance.kind = DisturbanceModel::Kind::Sinusoidal;
        sc.disturbance.amplitude = to_vec3(doc.require_array("disturbance.amplitude", 3));
        sc.disturbance.frequency = to_vec3(doc.get_array("disturbance.frequency", {1, 1, 1}));
        sc.disturbance.phase = to_vec3(doc.get_array("disturbance.phase", {0, 0, 0}));
    } else {
        throw ConfigInvalid("disturbance.kind must be zero or sinusoidal");
    }
    sc.disturbance.bound = doc.get_number("disturbance.bound", 0.0);

    if (doc.has("switching.times")) {
        const auto times = doc.require_array("switching.times", 0);
        const auto seq = doc.require_array("switching.sequence", times.size() + 1);
        std::vector<SwitchingSignal::Breakpoint> pts;
        pts.push_back({0.0, static_cast<int>(seq[0])});
        for (std::size_t i = 0; i < times.size(); ++i)
            pts.push_back({times[i], static_cast<int>(seq[i + 1])});
        sc.switch_points = pts;
    } else {
        sc.switch_points = {{0.0, 1}};
    }

    const std::string mode = doc.get_string("reference.mode", "attitude");
    if (mode == "attitude") {
        sc.reference_mode = ReferenceMode::Attitude;
        sc.attitude_reference.amplitude = to_vec3(doc.get_array("reference.amplitude", {0, 0, 0}));
        sc.attitude_reference.frequency = to_vec3(doc.get_array("reference.frequency", {0, 0, 0}));
        sc.attitude_reference.chirp_rate = to_vec3(doc.get_array("reference.chirp_rate", {0, 0, 0}));
        sc.attitude_reference.phase = to_vec3(doc.get_array("reference.phase", {0, 0, 0}));
        sc.attitude_reference.calm_start = doc.get_number("reference.calm_start", -1.0);
        sc.attitude_reference.calm_end = doc.get_number("reference.calm_end", -1.0);
        sc.attitude_reference.quiet = doc.get_array("reference.quiet", {});
        sc.attitude_reference.quiet_ramp = doc.get_number("reference.quiet_ramp", 3.0);
    } else if (mode == "position") {
        sc.reference_mode = ReferenceMode::Position;
    } else {
        throw ConfigInvalid("reference.mode must be attitude or position");
    }

    sc.position_gains.k_x = doc.get_number("position.k_x", 5.6);
    sc.position_gains.k_v = doc.get_number("position.k_v", 5.6);
    sc.yaw_d = doc.get_number("position.yaw_d", 0.0);

    sc.initial.attitude_axis = to_vec3(doc.get_array("initial.attitude_axis", {0, 0, 1}));
    sc.initial.attitude_angle = doc.get_number("initial.attitude_angle", 0.0);
    sc.initial.sample_attitude = doc.get_bool("initial.sample_attitude", false);
    sc.initial.sample_phi = doc.get_number("initial.sample_phi", 0.5);
    sc.initial.omega = to_vec3(doc.get_array("initial.omega", {0, 0, 0}));
    sc.initial.pos = to_vec3(doc.get_array("initial.pos", {0, 0, 0}));
    sc.initial.vel = to_vec3(doc.get_array("initial.vel", {0, 0, 0}));

    sc.monitors.lyapunov = doc.get_bool("monitors.lyapunov", true);
    sc.monitors.robust_bound = doc.get_bool("monitors.robust_bound", true);
    sc.monitors.lyapunov_tolerance = doc.get_number("monitors.lyapunov_tolerance", 1e-6);
    sc.monitors.rho = doc.get_number("monitors.rho", 0.05);
    if (doc.has("monitors.z2_bounds"))
        sc.monitors.z2_bounds = doc.require_array("monitors.z2_bounds", 0);

    sc.phi_options.samples =
        static_cast<std::uint64_t>(doc.get_number("certification.samples", 1000000));
    sc.phi_options.verify_samples =
        static_cast<std::uint64_t>(doc.get_number("certification.verify_samples", 1000000));
    sc.phi_options.seed = static_cast<std::uint64_t>(
        doc.get_number("certification.seed", static_cast<double>(sc.phi_options.seed)));
    sc.phi_options.verify_seed = static_cast<std::uint64_t>(doc.get_number(
        "certification.verify_seed", static_cast<double>(sc.phi_options.verify_seed)));

    out.output_dir = doc.get_string("output.dir", "out");

    if (doc.has("plan.r_des")) {
        out.plan.present = true;
        out.plan.type = doc.get_string("plan.type", "min_jerk");
        if (out.plan.type != "min_jerk" && out.plan.type != "waypoint")
            throw ConfigInvalid("plan.type must be min_jerk or waypoint");
        out.plan.request.r_des = to_vec3(doc.require_array("plan.r_des", 3));
        out.plan.request.v_des = to_vec3(doc.get_array("plan.v_des", {0, 0, 0}));
        out.plan.request.tau_s = doc.get_number("plan.tau_s", 0.0);
        out.plan.request.tau_d = doc.get_number("plan.tau_d", 0.0);
        out.plan.tau = doc.get_number("plan.tau", 0.0);
        out.plan.rho = doc.get_number("plan.rho", sc.monitors.rho);
        out.plan.t_exit = doc.get_number("plan.t_exit", 0.0);
        if (sc.reference_mode == ReferenceMode::Position) {
            if (out.plan.type == "min_jerk") {
                const double tau = out.plan.tau > 0.0
                                       ? out.plan.tau
                                       : 1.02 * std::max(out.plan.request.tau_s,
                                                         out.plan.request.tau_d);
                sc.translation_reference.kind = TranslationKind::MinJerk;
                sc.translation_reference.segment = min_jerk(out.plan.request, tau);
            } else {
                sc.translation_reference.kind = TranslationKind::Waypoint;
                sc.translation_reference.waypoint = out.plan.request.r_des;
            }
        }
    }

    const auto unknown = doc.unknown_keys();
    if (!unknown.empty()) throw ConfigInvalid("unknown config key '" + unknown.front() + "'");
    return out;
}

ScenarioFile load_scenario_file(const std::string& path) {
    return load_scenario(toml::Document::parse_file(path));
}

}  // namespace morph
