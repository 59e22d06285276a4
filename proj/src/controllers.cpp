#include "morph/controllers.hpp"

#include <cmath>

#include "morph/errors.hpp"

namespace morph {

namespace {

ControlOutput assemble(const AttitudeErrors& e, const Vec3& omega, const Vec6& h,
                       const GainSet& gains, const Vec3& mu) {
    ControlOutput out;
    out.outside_sublevel = e.phi >= 2.0;
    out.feedback = -gains.k_r * e.e_r - gains.k_omega * e.e_omega;
    const Mat36 Y = regressor_sub(regressor_y1(omega), regressor_y2(e.alpha_d));
    out.feedforward = -1.0 * regressor_apply(Y, h);
    out.robust = mu;
    out.u = out.feedback + out.feedforward + out.robust;
    return out;
}

}  // namespace

ControlOutput control_case1(const AttitudeErrors& errors, const Vec3& omega,
                            const InertiaParams& h_true, const GainSet& gains) {
    return assemble(errors, omega, h_true.h, gains, {});
}

AdaptiveOutput control_case2(const AttitudeErrors& errors, const Vec3& omega,
                             const InertiaParams& h_hat, const GainSet& gains) {
    AdaptiveOutput out;
    out.control = assemble(errors, omega, h_hat.h, gains, {});
    const Mat36 Y = regressor_sub(regressor_y1(omega), regressor_y2(errors.alpha_d));
    out.update = update_rate(h_hat, Y, errors.e_a);
    return out;
}

Vec3 robust_term(const Vec3& e_a, const RobustParams& params, double w31_quadratic) {
    if (params.law == RobustParams::Law::Sign) {
        const double k_mu = params.delta_r + params.nu;
        auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
        return {-k_mu * sgn(e_a.x), -k_mu * sgn(e_a.y), -k_mu * sgn(e_a.z)};
    }
    const double eta = params.effective_eta(w31_quadratic);
    const double s = std::sqrt(norm2(e_a) + params.epsilon_smooth * params.epsilon_smooth);
    const double sign = params.smooth_sign == RobustParams::SmoothSign::Minus ? -1.0 : 1.0;
    const double coeff = -(params.delta_r + sign * eta / s) / s;
    return coeff * e_a;
}

AdaptiveOutput control_case3(const AttitudeErrors& errors, const Vec3& omega,
                             const InertiaParams& h_hat, const GainSet& gains,
                             const RobustParams& robust, double w31_quadratic) {
    AdaptiveOutput out;
    const Vec3 mu = robust_term(errors.e_a, robust, w31_quadratic);
    out.control = assemble(errors, omega, h_hat.h, gains, mu);
    const Mat36 Y = regressor_sub(regressor_y1(omega), regressor_y2(errors.alpha_d));
    out.update = update_rate(h_hat, Y, errors.e_a);
    return out;
}

ControlOutput control_robust_baseline(const AttitudeErrors& errors, const Vec3& omega,
                                      const InertiaParams& h_nominal, const GainSet& gains,
                                      const RobustParams& robust, double w31_quadratic) {
    const Vec3 mu = robust.delta_r == 0.0 && robust.eta == 0.0
                        ? Vec3{}
                        : robust_term(errors.e_a, robust, w31_quadratic);
    return assemble(errors, omega, h_nominal.h, gains, mu);
}

PositionCommand position_controller(const Vec3& pos, const Vec3& vel, const Vec3& pos_d,
                                    const Vec3& vel_d, const Vec3& acc_d, const Vec3& jerk_d,
                                    double yaw_d, double mass, const PositionGains& gains,
                                    const Mat3& R, double gravity) {
    PositionCommand cmd;
    const Vec3 e_x = pos - pos_d;
    const Vec3 e_v = vel - vel_d;
    cmd.f_d = -gains.k_x * e_x - gains.k_v * e_v + Vec3{0.0, 0.0, mass * gravity} + mass * acc_d;
    const double fn = norm(cmd.f_d);
    if (fn < 1e-9) throw DegenerateThrust("commanded force vanishes");
    const Vec3 b3 = cmd.f_d / fn;
    const Vec3 heading{std::cos(yaw_d), std::sin(yaw_d), 0.0};
    Vec3 b2raw = cross(b3, heading);
    const double b2n = norm(b2raw);
    if (b2n < 1e-9) throw DegenerateThrust("thrust axis is parallel to the heading");
    const Vec3 b2 = b2raw / b2n;
    const Vec3 b1 = cross(b2, b3);
    cmd.r_d = from_columns(b1, b2, b3);
    cmd.thrust = dot(cmd.f_d, column(R, 2));

    // Rate of the desired attitude from the analytic derivative of f_d: the
    // error rates follow from the translational model with the applied thrust.
    const Vec3 accel = (cmd.thrust / mass) * column(R, 2) - Vec3{0.0, 0.0, gravity};
    const Vec3 e_v_dot = accel - acc_d;
    const Vec3 f_dot = -gains.k_x * e_v - gains.k_v * e_v_dot + mass * jerk_d;
    const Vec3 b3_dot = (f_dot - dot(b3, f_dot) * b3) / fn;
    const Vec3 b2raw_dot = cross(b3_dot, heading);
    const Vec3 b2_dot = (b2raw_dot - dot(b2, b2raw_dot) * b2) / b2n;
    const Vec3 b1_dot = cross(b2_dot, b3) + cross(b2, b3_dot);
    const Mat3 r_d_dot = from_columns(b1_dot, b2_dot, b3_dot);
    cmd.omega_d = vee_skew_part(transpose(cmd.r_d) * r_d_dot);
    return cmd;
}

Mat3 position_reference_attitude(const Vec3& acc_d, double yaw_d, double gravity) {
    Vec3 f = Vec3{0.0, 0.0, gravity} + acc_d;
    const double fn = norm(f);
    if (fn < 1e-9) throw DegenerateThrust("reference acceleration cancels gravity");
    const Vec3 b3 = f / fn;
    const Vec3 heading{std::cos(yaw_d), std::sin(yaw_d), 0.0};
    Vec3 b2 = cross(b3, heading);
    const double b2n = norm(b2);
    if (b2n < 1e-9) throw DegenerateThrust("reference thrust axis is parallel to the heading");
    b2 = b2 / b2n;
    return from_columns(cross(b2, b3), b2, b3);
}

}  // namespace morph
