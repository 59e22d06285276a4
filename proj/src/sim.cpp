#include "morph/sim.hpp"

#include <algorithm>
#include <cmath>

#include "morph/errors.hpp"
#include "morph/rng.hpp"

namespace morph {

namespace {

double smooth_decay(double t, double t0, double t1) {
    if (t1 <= t0) return 1.0;
    if (t <= t0) return 1.0;
    if (t >= t1) return 0.0;
    const double u = (t - t0) / (t1 - t0);
    return 1.0 - (10.0 - (15.0 - 6.0 * u) * u) * u * u * u;
}

double smooth_decay_dot(double t, double t0, double t1) {
    if (t1 <= t0 || t <= t0 || t >= t1) return 0.0;
    const double w = t1 - t0;
    const double u = (t - t0) / w;
    return -(30.0 - (60.0 - 30.0 * u) * u) * u * u / w;
}

}  // namespace

double AttitudeReferenceSpec::envelope(double t) const {
    double env = smooth_decay(t, calm_start, calm_end);
    for (std::size_t k = 0; k + 1 < quiet.size(); k += 2) {
        const double a = quiet[k], b = quiet[k + 1];
        env *= smooth_decay(t, a, a + quiet_ramp) + 1.0 - smooth_decay(t, b - quiet_ramp, b);
    }
    return env;
}

double AttitudeReferenceSpec::envelope_dot(double t) const {
    // Product rule over the calm-down factor and each quiet window.
    const std::size_t n = quiet.size() / 2;
    double factor[1 + 16];
    double dfactor[1 + 16];
    factor[0] = smooth_decay(t, calm_start, calm_end);
    dfactor[0] = smooth_decay_dot(t, calm_start, calm_end);
    for (std::size_t k = 0; k < n && k < 16; ++k) {
        const double a = quiet[2 * k], b = quiet[2 * k + 1];
        factor[k + 1] =
            smooth_decay(t, a, a + quiet_ramp) + 1.0 - smooth_decay(t, b - quiet_ramp, b);
        dfactor[k + 1] =
            smooth_decay_dot(t, a, a + quiet_ramp) - smooth_decay_dot(t, b - quiet_ramp, b);
    }
    const std::size_t m = std::min<std::size_t>(n, 16) + 1;
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        double term = dfactor[k];
        for (std::size_t j = 0; j < m; ++j)
            if (j != k) term *= factor[j];
        total += term;
    }
    return total;
}

Vec3 AttitudeReferenceSpec::omega_d(double t) const {
    const double env = envelope(t);
    Vec3 w;
    for (int i = 0; i < 3; ++i) {
        const double theta = 2.0 * M_PI * (frequency[i] * t + 0.5 * chirp_rate[i] * t * t);
        w[i] = env * amplitude[i] * std::sin(theta + phase[i]);
    }
    return w;
}

Vec3 AttitudeReferenceSpec::omega_d_dot(double t) const {
    const double env = envelope(t);
    const double env_dot = envelope_dot(t);
    Vec3 w;
    for (int i = 0; i < 3; ++i) {
        const double theta = 2.0 * M_PI * (frequency[i] * t + 0.5 * chirp_rate[i] * t * t);
        const double theta_dot = 2.0 * M_PI * (frequency[i] + chirp_rate[i] * t);
        w[i] = amplitude[i] *
               (env * std::cos(theta + phase[i]) * theta_dot + env_dot * std::sin(theta + phase[i]));
    }
    return w;
}

Vec3 TranslationReferenceSpec::pos_d(double t) const {
    switch (kind) {
        case TranslationKind::Hover: return waypoint;
        case TranslationKind::Waypoint: return waypoint;
        case TranslationKind::MinJerk:
            if (t <= segment.tau) return segment.position(t);
            return segment.position(segment.tau) + (t - segment.tau) * segment.velocity(segment.tau);
    }
    return {};
}

Vec3 TranslationReferenceSpec::vel_d(double t) const {
    if (kind == TranslationKind::MinJerk)
        return segment.velocity(std::min(t, segment.tau));
    return {};
}

Vec3 TranslationReferenceSpec::acc_d(double t) const {
    if (kind == TranslationKind::MinJerk && t <= segment.tau) return segment.acceleration(t);
    return {};
}

Vec3 TranslationReferenceSpec::jerk_d(double t) const {
    if (kind == TranslationKind::MinJerk && t <= segment.tau) return segment.jerk(t);
    return {};
}

void Scenario::validate() const {
    if (controller != ControllerSelect::None) gains.validate();
    if (configs.empty()) throw ConfigInvalid("scenario needs at least one configuration");
    for (const auto& c : configs) c.validate();
    disturbance.validate();
    if (!(mass > 0.0)) throw ConfigInvalid("mass must be positive");
    if (!(dt > 0.0) || !(horizon > 0.0)) throw ConfigInvalid("dt and horizon must be positive");
    if (log_stride < 1) throw ConfigInvalid("log_stride must be >= 1");
    if (controller == ControllerSelect::Case3 || controller == ControllerSelect::RobustBaseline) {
        if (disturbance.bound > robust.delta_r + 1e-12)
            throw ConfigInvalid("robust delta_r must bound the disturbance");
    } else if (controller == ControllerSelect::Case1 || controller == ControllerSelect::Case2) {
        if (disturbance.kind != DisturbanceModel::Kind::Zero && disturbance.bound > 0.0 &&
            controller == ControllerSelect::Case1)
            throw ConfigInvalid("the known-model case assumes zero disturbance");
    }
    const auto& q = attitude_reference.quiet;
    if (q.size() % 2 != 0) throw ConfigInvalid("reference quiet windows need [start, end] pairs");
    for (std::size_t k = 0; k + 1 < q.size(); k += 2) {
        if (!(q[k + 1] - attitude_reference.quiet_ramp >= q[k] + attitude_reference.quiet_ramp))
            throw ConfigInvalid("reference quiet window shorter than twice the ramp");
        if (k >= 2 && !(q[k] >= q[k - 1])) throw ConfigInvalid("reference quiet windows must be ordered");
    }
    SwitchingSignal signal(switch_points);  // validates ordering
    for (const auto& bp : switch_points) {
        if (bp.time < 0.0) throw ConfigInvalid("switch times must be non-negative");
        const double steps = bp.time / dt;
        if (std::abs(steps - std::llround(steps)) > 1e-6)
            throw ConfigInvalid("switch times must lie on the integration grid");
        bool found = false;
        for (const auto& c : configs) found = found || c.index == bp.index;
        if (!found) throw ConfigInvalid("switch signal references unknown configuration");
    }
}

namespace {

const Configuration& config_of(const Scenario& sc, int index) {
    for (const auto& c : sc.configs)
        if (c.index == index) return c;
    throw ConfigInvalid("unknown configuration index " + std::to_string(index));
}

struct ReferenceSample {
    Mat3 R_d;
    Vec3 omega_d;
    Vec3 omega_d_dot;
    Vec3 pos_d, vel_d, acc_d;
    double thrust = 0.0;
};

/// Central-difference body rates of the feedforward attitude reference.
void position_reference_rates(const TranslationReferenceSpec& ref, double yaw_d, double gravity,
                              double t, Vec3* omega_d, Vec3* omega_d_dot) {
    const double d = 1e-3;
    Mat3 Rm2 = position_reference_attitude(ref.acc_d(t - 2 * d), yaw_d, gravity);
    Mat3 Rm1 = position_reference_attitude(ref.acc_d(t - d), yaw_d, gravity);
    Mat3 R0 = position_reference_attitude(ref.acc_d(t), yaw_d, gravity);
    Mat3 Rp1 = position_reference_attitude(ref.acc_d(t + d), yaw_d, gravity);
    Mat3 Rp2 = position_reference_attitude(ref.acc_d(t + 2 * d), yaw_d, gravity);
    Mat3 Rdot, Rddot;
    for (int i = 0; i < 9; ++i) {
        Rdot.a[i] = (-Rp2.a[i] + 8.0 * Rp1.a[i] - 8.0 * Rm1.a[i] + Rm2.a[i]) / (12.0 * d);
        Rddot.a[i] =
            (-Rp2.a[i] + 16.0 * Rp1.a[i] - 30.0 * R0.a[i] + 16.0 * Rm1.a[i] - Rm2.a[i]) / (12.0 * d * d);
    }
    const Mat3 W = transpose(R0) * Rdot;
    *omega_d = vee_skew_part(W);
    // d/dt (R^T Rdot) = Rdot^T Rdot + R^T Rddot
    const Mat3 Wdot = transpose(Rdot) * Rdot + transpose(R0) * Rddot;
    *omega_d_dot = vee_skew_part(Wdot);
}

ReferenceSample sample_reference(const Scenario& sc, double t, const Mat3& R_d_state,
                                 const Vec3& pos, const Vec3& vel, const Mat3& R) {
    ReferenceSample s;
    if (sc.reference_mode == ReferenceMode::Attitude) {
        s.R_d = R_d_state;
        s.omega_d = sc.attitude_reference.omega_d(t);
        s.omega_d_dot = sc.attitude_reference.omega_d_dot(t);
        s.pos_d = sc.translation_reference.pos_d(0.0);
        s.vel_d = {};
        s.acc_d = {};
        s.thrust = sc.mass * sc.gravity;
        return s;
    }
    s.pos_d = sc.translation_reference.pos_d(t);
    s.vel_d = sc.translation_reference.vel_d(t);
    s.acc_d = sc.translation_reference.acc_d(t);
    const PositionCommand cmd =
        position_controller(pos, vel, s.pos_d, s.vel_d, s.acc_d,
                            sc.translation_reference.jerk_d(t), sc.yaw_d, sc.mass,
                            sc.position_gains, R, sc.gravity);
    s.R_d = cmd.r_d;
    s.thrust = cmd.thrust;
    s.omega_d = cmd.omega_d;
    // Second derivative feedforward comes from the planner reference alone.
    Vec3 omega_ref, omega_ref_dot;
    position_reference_rates(sc.translation_reference, sc.yaw_d, sc.gravity, t, &omega_ref,
                             &omega_ref_dot);
    s.omega_d_dot = omega_ref_dot;
    return s;
}

struct ControlEval {
    ControlOutput out;
    Vec6 h_hat_rate{};
    AttitudeErrors errors;
    double eta = 0.0;  // applied robust eta (case 3 / baseline)
};

/// Case-appropriate decrease quadratic z1' W z1 (W3 for the known-model
/// certificate, W31 for the adaptive ones).
double decrease_quadratic(const Scenario& sc, const SubsystemCertificate& sub, double er,
                          double eo) {
    const Mat2& W = sc.controller == ControllerSelect::Case1 ? sub.W3 : sub.W31;
    return W(0, 0) * er * er + 2.0 * W(0, 1) * er * eo + W(1, 1) * eo * eo;
}

ControlEval evaluate_control(const Scenario& sc, const StabilityCertificate& cert,
                             const ReferenceSample& ref, const Mat3& R, const Vec3& omega,
                             const InertiaParams& h_hat, int sigma) {
    ControlEval ev;
    ev.errors = attitude_errors(R, omega, ref.R_d, ref.omega_d, ref.omega_d_dot, sc.gains);
    const Configuration& cfg = config_of(sc, sigma);
    switch (sc.controller) {
        case ControllerSelect::None:
            break;  // torque-free
        case ControllerSelect::Case1:
            ev.out = control_case1(ev.errors, omega, cfg.true_inertia, sc.gains);
            break;
        case ControllerSelect::Case2: {
            AdaptiveOutput a = control_case2(ev.errors, omega, h_hat, sc.gains);
            ev.out = a.control;
            ev.h_hat_rate = a.update;
            break;
        }
        case ControllerSelect::Case3: {
            const double quad = w31_quadratic(cert.subsystem(sigma), norm(ev.errors.e_r),
                                              norm(ev.errors.e_omega));
            ev.eta = sc.robust.effective_eta(quad);
            AdaptiveOutput a = control_case3(ev.errors, omega, h_hat, sc.gains, sc.robust, quad);
            ev.out = a.control;
            ev.h_hat_rate = a.update;
            break;
        }
        case ControllerSelect::RobustBaseline: {
            const double quad = w31_quadratic(cert.subsystem(sigma), norm(ev.errors.e_r),
                                              norm(ev.errors.e_omega));
            ev.eta = sc.robust.effective_eta(quad);
            ev.out = control_robust_baseline(ev.errors, omega, cfg.nominal_inertia, sc.gains,
                                             sc.robust, quad);
            break;
        }
    }
    return ev;
}

bool adaptive(const Scenario& sc) {
    return sc.controller == ControllerSelect::Case2 || sc.controller == ControllerSelect::Case3;
}

StabilityCertificate make_certificate(const Scenario& sc) {
    if (sc.controller == ControllerSelect::None) {
        StabilityCertificate cert;  // torque-free runs carry no certificate
        for (const auto& cfg : sc.configs) {
            SubsystemCertificate sub;
            sub.index = cfg.index;
            cert.subsystems.push_back(sub);
        }
        return cert;
    }
    return sc.controller == ControllerSelect::Case1
               ? certify_case1(sc.configs, sc.gains, sc.phi_options)
               : certify_case2(sc.configs, sc.gains, sc.phi_options);
}

struct Derivative {
    Vec3 du_body, domega, dpos, dvel, du_ref;
    Vec6 dh;
};

Derivative rhs(const Scenario& sc, const StabilityCertificate& cert, const VehicleState& base,
               double t, const Vec3& u_body, const Vec3& omega, const Vec3& pos, const Vec3& vel,
               const Vec3& u_ref, const InertiaParams& h_hat, const Mat3& J, const Mat3& J_inv) {
    Derivative d;
    const Mat3 R = base.R * exp_so3(u_body);
    const Mat3 R_d_state = base.R_d * exp_so3(u_ref);
    const ReferenceSample ref = sample_reference(sc, t, R_d_state, pos, vel, R);
    const ControlEval ev = evaluate_control(sc, cert, ref, R, omega, h_hat, base.sigma);
    const Vec3 delta = sc.disturbance.at(t);
    d.du_body = dexpinv_so3(u_body, omega);
    d.domega = attitude_dynamics_omega_dot(J, J_inv, omega, ev.out.u, delta);
    d.dpos = vel;
    d.dvel = (ref.thrust / sc.mass) * column(R, 2) - Vec3{0.0, 0.0, sc.gravity};
    d.du_ref = sc.reference_mode == ReferenceMode::Attitude ? dexpinv_so3(u_ref, ref.omega_d) : Vec3{};
    if (adaptive(sc)) d.dh = ev.h_hat_rate;
    return d;
}

VehicleState advance(const Scenario& sc, const StabilityCertificate& cert,
                     const VehicleState& state, double dt, int depth, std::uint64_t* substeps) {
    if (norm(state.omega) > 1e6) throw NumericalBlowup("angular rate exceeds 1e6 rad/s");
    const Configuration& cfg = config_of(sc, state.sigma);
    const Mat3 J = assemble_inertia(cfg.true_inertia);
    const Mat3 J_inv = inverse(J);
    const InertiaParams h0 =
        adaptive(sc) ? state.estimator.estimate(state.sigma) : cfg.true_inertia;

    auto eval = [&](double dt_frac, const Derivative& k) {
        InertiaParams h = h0;
        h.h += dt_frac * k.dh;
        return rhs(sc, cert, state, state.t + dt_frac, dt_frac * k.du_body,
                   state.omega + dt_frac * k.domega, state.pos + dt_frac * k.dpos,
                   state.vel + dt_frac * k.dvel, dt_frac * k.du_ref, h, J, J_inv);
    };

    const Derivative k1 = rhs(sc, cert, state, state.t, {}, state.omega, state.pos, state.vel, {},
                              h0, J, J_inv);
    const Derivative k2 = eval(0.5 * dt, k1);
    const Derivative k3 = eval(0.5 * dt, k2);
    // k4 uses the full step of k3.
    InertiaParams h4 = h0;
    h4.h += dt * k3.dh;
    const Derivative k4 = rhs(sc, cert, state, state.t + dt, dt * k3.du_body,
                              state.omega + dt * k3.domega, state.pos + dt * k3.dpos,
                              state.vel + dt * k3.dvel, dt * k3.du_ref, h4, J, J_inv);

    auto combine = [&](const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d4) {
        return (dt / 6.0) * (a + 2.0 * b + 2.0 * c + d4);
    };

    VehicleState next = state;
    next.t = state.t + dt;
    next.R = state.R * exp_so3(combine(k1.du_body, k2.du_body, k3.du_body, k4.du_body));
    next.omega = state.omega + combine(k1.domega, k2.domega, k3.domega, k4.domega);
    next.pos = state.pos + combine(k1.dpos, k2.dpos, k3.dpos, k4.dpos);
    next.vel = state.vel + combine(k1.dvel, k2.dvel, k3.dvel, k4.dvel);
    next.R_d = state.R_d * exp_so3(combine(k1.du_ref, k2.du_ref, k3.du_ref, k4.du_ref));

    if (adaptive(sc)) {
        InertiaParams h_next = h0;
        h_next.h += (dt / 6.0) * (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh);
        const auto ev = sym_eigenvalues(consistency_matrix(h_next));
        if (ev[0] < 1e-12) {
            // The estimate stepped onto the consistency boundary: stay on the
            // barrier by refining the step instead of projecting.
            if (depth >= 20) throw EstimatorBoundary("estimator sub-stepping exhausted");
            *substeps += 1;
            VehicleState half = advance(sc, cert, state, 0.5 * dt, depth + 1, substeps);
            return advance(sc, cert, half, 0.5 * dt, depth + 1, substeps);
        }
        next.estimator.store(state.sigma, h_next);
    }
    return next;
}

}  // namespace

double lyapunov_value(const Scenario& scenario, const AttitudeErrors& errors, int p,
                      const EstimatorState& est) {
    const Configuration& cfg = config_of(scenario, p);
    const Mat3 H = assemble_inertia(cfg.true_inertia);
    const double c = scenario.gains.c;
    double v = 0.5 * dot(errors.e_omega, H * errors.e_omega) + scenario.gains.k_r * errors.phi +
               c * dot(errors.e_r, H * errors.e_omega);
    if (adaptive(scenario)) v += bregman_divergence(cfg.true_inertia, est.estimate(p));
    return v;
}

VehicleState step(const VehicleState& state, const Scenario& scenario,
                  const StabilityCertificate& cert, double dt) {
    if (!(dt > 0.0)) throw ConfigInvalid("step needs dt > 0");
    std::uint64_t substeps = 0;
    return advance(scenario, cert, state, dt, 0, &substeps);
}

namespace {

Mat3 initial_attitude(const Scenario& sc, const Mat3& R_d0) {
    const InitialStateSpec& in = sc.initial;
    if (!in.sample_attitude) {
        const double n = norm(in.attitude_axis);
        if (n < 1e-12) return R_d0;
        return R_d0 * exp_so3((in.attitude_angle / n) * in.attitude_axis);
    }
    // Deterministic draw inside the sublevel set, rescaled toward the target level.
    SplitMix64 rng(sc.seed);
    const double u = 2.0 * rng.next_uniform() - 1.0;
    const double ph = 2.0 * M_PI * rng.next_uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - u * u));
    const Vec3 axis{r * std::cos(ph), r * std::sin(ph), u};
    double lo = 0.0, hi = M_PI;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double phi = error_function(R_d0 * exp_so3(mid * axis), R_d0, sc.gains);
        if (phi < in.sample_phi)
            lo = mid;
        else
            hi = mid;
        if (phi >= 2.0) hi = mid;
    }
    return R_d0 * exp_so3(lo * axis);
}

}  // namespace

SimResult run(const Scenario& scenario) {
    scenario.validate();
    SimResult result;
    result.certificate = make_certificate(scenario);
    const StabilityCertificate& cert = result.certificate;
    const bool monitors_on = scenario.controller != ControllerSelect::None;

    SwitchingSignal signal(scenario.switch_points);

    VehicleState st;
    st.sigma = signal.at(0.0);
    st.R_d = Mat3::identity();
    st.R = initial_attitude(scenario, st.R_d);
    st.omega = scenario.initial.omega;
    st.pos = scenario.initial.pos;
    st.vel = scenario.initial.vel;
    st.t = 0.0;
    for (const auto& cfg : scenario.configs) st.estimator.seed(cfg.index, cfg.nominal_inertia);

    SimLog& log = result.log;
    log.dt = scenario.dt;
    log.log_dt = scenario.dt * scenario.log_stride;
    log.min_consistency_eig = std::numeric_limits<double>::infinity();
    log.max_dpsi.assign(scenario.configs.size(), 0.0);
    if (adaptive(scenario))
        for (const auto& cfg : scenario.configs)
            log.max_dpsi[static_cast<std::size_t>(cfg.index - 1)] =
                bregman_divergence(cfg.true_inertia, cfg.nominal_inertia);

    // Per-subsystem switch bookkeeping.
    std::vector<double> entry_z1(scenario.configs.size() + 1, -1.0);
    std::vector<double> entry_time(scenario.configs.size() + 1, 0.0);
    SwitchPlan plan;
    plan.tau_s = 0.0;
    plan.rho = scenario.monitors.rho;
    plan.z2_bounds.assign(scenario.configs.size(), 0.0);
    for (const auto& cfg : scenario.configs) {
        const double d0 = bregman_divergence(cfg.true_inertia, cfg.nominal_inertia);
        plan.z2_bounds[static_cast<std::size_t>(cfg.index - 1)] =
            static_cast<std::size_t>(cfg.index - 1) < scenario.monitors.z2_bounds.size()
                ? scenario.monitors.z2_bounds[static_cast<std::size_t>(cfg.index - 1)]
                : d0;
    }

    const std::uint64_t n_steps = static_cast<std::uint64_t>(std::llround(scenario.horizon / scenario.dt));
    double previous_V = 0.0;
    double previous_quad = 0.0;  // z1' W31 z1 (or z' W3 z) at the previous step
    double previous_eta = 0.0;
    bool have_previous = false;

    auto snapshot = [&](const VehicleState& s, std::uint32_t flags) {
        const ReferenceSample ref = sample_reference(scenario, s.t, s.R_d, s.pos, s.vel, s.R);
        const ControlEval ev = evaluate_control(scenario, cert, ref, s.R, s.omega,
                                                adaptive(scenario)
                                                    ? s.estimator.estimate(s.sigma)
                                                    : config_of(scenario, s.sigma).true_inertia,
                                                s.sigma);
        SimRow row;
        row.t = s.t;
        row.R = s.R;
        row.R_d = ref.R_d;
        row.omega = s.omega;
        row.omega_d = ref.omega_d;
        row.e_r = ev.errors.e_r;
        row.e_omega = ev.errors.e_omega;
        row.e_a = ev.errors.e_a;
        row.phi = ev.errors.phi;
        row.u = ev.out.u;
        row.u_fb = ev.out.feedback;
        row.u_ff = ev.out.feedforward;
        row.u_rob = ev.out.robust;
        row.hhat = adaptive(scenario) ? s.estimator.estimate(s.sigma).h
                                      : config_of(scenario, s.sigma).true_inertia.h;
        row.sigma = s.sigma;
        row.V = lyapunov_value(scenario, ev.errors, s.sigma, s.estimator);
        row.pos = s.pos;
        row.vel = s.vel;
        row.pos_d = ref.pos_d;
        row.flags = flags | (ev.errors.phi >= 2.0 ? kFlagOutsideSublevel : 0u);
        return row;
    };

    {
        const SimRow row0 = snapshot(st, 0);
        entry_z1[static_cast<std::size_t>(st.sigma)] = std::hypot(norm(row0.e_r), norm(row0.e_omega));
        entry_time[static_cast<std::size_t>(st.sigma)] = 0.0;
        log.rows.push_back(row0);
        log.max_phi = row0.phi;
        previous_V = row0.V;
        const auto& sub = cert.subsystem(st.sigma);
        previous_quad = monitors_on ? decrease_quadratic(scenario, sub, norm(row0.e_r), norm(row0.e_omega)) : 0.0;
        previous_eta = 0.0;
        have_previous = true;
    }

    for (std::uint64_t k = 0; k < n_steps; ++k) {
        VehicleState next = advance(scenario, cert, st, scenario.dt, 0, &log.estimator_substeps);
        log.total_steps += 1;
        std::uint32_t flags = 0;

        // Keep long runs on the manifold without biasing the dynamics.
        if (frobenius_norm(transpose(next.R) * next.R - Mat3::identity()) > 1e-9) {
            next.R = orthonormalize(next.R);
            log.reprojections += 1;
            flags |= kFlagReprojected;
        }

        // Switch handling: sigma is right-continuous, so a breakpoint at
        // next.t takes effect for the step that starts there.
        const int sigma_next = signal.at(next.t + 0.5 * scenario.dt);
        const bool switching = sigma_next != st.sigma;

        // Monitors evaluated on the completed step (same subsystem at both ends).
        const ReferenceSample refn = sample_reference(scenario, next.t, next.R_d, next.pos,
                                                      next.vel, next.R);
        const AttitudeErrors en = attitude_errors(next.R, next.omega, refn.R_d, refn.omega_d,
                                                  refn.omega_d_dot, scenario.gains);
        const double Vn = lyapunov_value(scenario, en, st.sigma, next.estimator);
        const auto& sub = cert.subsystem(st.sigma);
        const double quad_n =
            monitors_on ? decrease_quadratic(scenario, sub, norm(en.e_r), norm(en.e_omega)) : 0.0;
        double eta_n = 0.0;
        if (scenario.controller == ControllerSelect::Case3 ||
            scenario.controller == ControllerSelect::RobustBaseline)
            eta_n = scenario.robust.effective_eta(quad_n);

        if (monitors_on && scenario.monitors.lyapunov && have_previous) {
            double budget = -0.5 * scenario.dt * (previous_quad + quad_n);
            if (scenario.controller == ControllerSelect::Case1) {
                // same quadratic form (W3 = W31 structurally), no eta term
            } else if (scenario.controller == ControllerSelect::Case3) {
                budget += 0.5 * scenario.dt * (previous_eta + eta_n);
            }
            const double tol = scenario.monitors.lyapunov_tolerance * std::max(1.0, previous_V);
            if (scenario.controller != ControllerSelect::RobustBaseline &&
                Vn - previous_V > budget + tol) {
                flags |= kFlagLyapunovViolation;
                log.violations.push_back(
                    {next.t, "lyapunov_decrease",
                     "dV = " + std::to_string(Vn - previous_V) + " exceeds budget " +
                         std::to_string(budget)});
            }
        }

        if (monitors_on && scenario.monitors.robust_bound &&
            (scenario.controller == ControllerSelect::Case3 ||
             scenario.controller == ControllerSelect::RobustBaseline)) {
            const Vec3 mu = robust_term(en.e_a, scenario.robust, quad_n);
            const double power = dot(en.e_a, scenario.disturbance.at(next.t) + mu);
            if (power > eta_n + 1e-6) {
                flags |= kFlagRobustViolation;
                log.violations.push_back({next.t, "robust_bound",
                                          "e_A.(Delta+mu) = " + std::to_string(power) +
                                              " exceeds eta + 1e-6"});
            }
        }

        if (adaptive(scenario)) {
            const auto evmin =
                sym_eigenvalues(consistency_matrix(next.estimator.estimate(st.sigma)))[0];
            log.min_consistency_eig = std::min(log.min_consistency_eig, evmin);
            const Configuration& active = config_of(scenario, st.sigma);
            auto& peak = log.max_dpsi[static_cast<std::size_t>(st.sigma - 1)];
            peak = std::max(peak,
                            bregman_divergence(active.true_inertia,
                                               next.estimator.estimate(st.sigma)));
            if (evmin <= 0.0) {
                flags |= kFlagInfeasible;
                log.violations.push_back({next.t, "consistency", "P(h_hat) lost definiteness"});
            }
        }

        if (switching) {
            SwitchEvent evn;
            evn.t = next.t;
            evn.from = st.sigma;
            evn.to = sigma_next;
            evn.z1 = std::hypot(norm(en.e_r), norm(en.e_omega));
            evn.settled = evn.z1 <= plan.rho;
            evn.dwell = next.t - entry_time[static_cast<std::size_t>(st.sigma)];
            evn.dwell_ok = true;  // informational; the scheduler enforces dwell
            evn.v_from = Vn;
            evn.v_to = lyapunov_value(scenario, en, sigma_next, next.estimator);
            evn.jump = std::abs(evn.v_from - evn.v_to);
            // Contraction and jump bounds are adaptive-certificate constructs.
            if (monitors_on && cert.kind == ControllerCase::Adaptive) {
                evn.jump_bound = jump_bound(cert, plan, st.sigma, sigma_next);
                evn.jump_within_bound = evn.jump <= evn.jump_bound;
                const double prev_entry = entry_z1[static_cast<std::size_t>(sigma_next)];
                if (prev_entry >= 0.0) {
                    evn.z1_previous_entry = prev_entry;
                    evn.switch_condition_ok =
                        check_switch_condition(prev_entry, evn.z1, cert, sigma_next);
                    if (!*evn.switch_condition_ok) flags |= kFlagSwitchConditionFailed;
                }
                if (!evn.jump_within_bound) {
                    flags |= kFlagJumpBoundExceeded;
                    log.violations.push_back({next.t, "jump_bound", "Lyapunov jump exceeds the bound"});
                }
            }
            if (monitors_on && !evn.settled) {
                flags |= kFlagSettlingViolation;
                log.violations.push_back(
                    {next.t, "settling", "switch with ||z1|| = " + std::to_string(evn.z1) +
                                             " above rho = " + std::to_string(plan.rho)});
            }
            entry_z1[static_cast<std::size_t>(sigma_next)] = evn.z1;
            entry_time[static_cast<std::size_t>(sigma_next)] = next.t;
            flags |= kFlagSwitch;
            log.switches.push_back(evn);
            next.sigma = sigma_next;
        }

        st = next;
        log.max_phi = std::max(log.max_phi, en.phi);
        // Lyapunov bookkeeping restarts across a switch (V jumps there).
        if (switching) {
            const AttitudeErrors e2 = en;
            previous_V = lyapunov_value(scenario, e2, st.sigma, st.estimator);
            const auto& sub2 = cert.subsystem(st.sigma);
            previous_quad =
                monitors_on ? decrease_quadratic(scenario, sub2, norm(e2.e_r), norm(e2.e_omega)) : 0.0;
            previous_eta = scenario.controller == ControllerSelect::Case3 ||
                                   scenario.controller == ControllerSelect::RobustBaseline
                               ? scenario.robust.effective_eta(previous_quad)
                               : 0.0;
        } else {
            previous_V = Vn;
            previous_quad = quad_n;
            previous_eta = eta_n;
        }

        if ((k + 1) % static_cast<std::uint64_t>(scenario.log_stride) == 0 || k + 1 == n_steps)
            log.rows.push_back(snapshot(st, flags));
        else if (flags != 0 && !log.rows.empty())
            log.rows.back().flags |= flags;  // do not lose event flags to the stride
    }

    result.final_state = st;
    if (!std::isfinite(log.min_consistency_eig)) log.min_consistency_eig = 0.0;
    return result;
}

}  // namespace morph
