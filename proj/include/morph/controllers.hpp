#pragma once

#include "morph/estimator.hpp"
#include "morph/inertia.hpp"
#include "morph/so3.hpp"

namespace morph {

/// Parameters of the robust torque term.
struct RobustParams {
    double delta_r = 0.0;  // disturbance bound, N*m
    double eta = 0.0;      // boundary value, N*m
    enum class EtaPolicy { Fixed, Adaptive } eta_policy = EtaPolicy::Fixed;
    double gamma = 0.5;          // adaptive: eta = min(eta_max, gamma * z1' W31 z1)
    double eta_max = 3e-4;       // adaptive cap
    double epsilon_smooth = 1e-6;  // ||e_A|| regularization near the origin
    enum class Law { Smooth, Sign } law = Law::Smooth;
    enum class SmoothSign { Minus, Plus } smooth_sign = SmoothSign::Minus;
    double nu = 1e-3;  // sign law: k_mu = delta_r + nu

    /// eta actually applied for the given quadratic error level.
    double effective_eta(double w31_quadratic) const {
        if (eta_policy == EtaPolicy::Fixed) return eta;
        return std::min(eta_max, gamma * w31_quadratic);
    }
};

/// Torque command with its decomposition (for logging); u = feedback +
/// feedforward + robust exactly.
struct ControlOutput {
    Vec3 u{};
    Vec3 feedback{};     // -k_R e_R - k_Omega e_Omega
    Vec3 feedforward{};  // -Y h
    Vec3 robust{};       // mu
    bool outside_sublevel = false;  // Phi >= 2 at evaluation time (warning-grade)
};

/// Known-model controller: u = -k_R e_R - k_Omega e_Omega - Y h_p with
/// Y = Y1(Omega) - Y2(alpha_D).
ControlOutput control_case1(const AttitudeErrors& errors, const Vec3& omega,
                            const InertiaParams& h_true, const GainSet& gains);

struct AdaptiveOutput {
    ControlOutput control;
    Vec6 update{};  // d/dt of the active subsystem's parameter estimate
};

/// Adaptive controller: Case-1 structure with the online estimate h_hat and
/// the Bregman-preconditioned update law driven by e_A.
AdaptiveOutput control_case2(const AttitudeErrors& errors, const Vec3& omega,
                             const InertiaParams& h_hat, const GainSet& gains);

/// Robust disturbance-rejection torque. The smooth law divides by
/// sqrt(||e_A||^2 + eps^2); the sign law is -k_mu sign(e_A).
Vec3 robust_term(const Vec3& e_a, const RobustParams& params, double w31_quadratic);

/// Robust-adaptive controller: Case-2 plus the robust term.
AdaptiveOutput control_case3(const AttitudeErrors& errors, const Vec3& omega,
                             const InertiaParams& h_hat, const GainSet& gains,
                             const RobustParams& robust, double w31_quadratic);

/// Fixed-bound robust baseline: nominal-inertia feedforward plus the robust
/// term, no adaptation.
ControlOutput control_robust_baseline(const AttitudeErrors& errors, const Vec3& omega,
                                      const InertiaParams& h_nominal, const GainSet& gains,
                                      const RobustParams& robust, double w31_quadratic);

/// PD position loop closing the translational dynamics.
struct PositionGains {
    double k_x = 5.6;  // N/m
    double k_v = 5.6;  // N*s/m, critical damping at m = 1.4 kg
};

struct PositionCommand {
    double thrust = 0.0;  // N, along the body z axis
    Mat3 r_d = Mat3::identity();
    Vec3 f_d{};      // desired force, world frame
    Vec3 omega_d{};  // body rates of the desired attitude
};

/// Desired force/attitude from position feedback. Third body axis aligns with
/// f_d = -k_x e_x - k_v e_v + m g e3 + m a_d; thrust is its projection on the
/// current body z axis. omega_d comes from the analytic derivative of f_d
/// (the error rates are known from the model). Throws DegenerateThrust when
/// ||f_d|| < 1e-9.
PositionCommand position_controller(const Vec3& pos, const Vec3& vel, const Vec3& pos_d,
                                    const Vec3& vel_d, const Vec3& acc_d, const Vec3& jerk_d,
                                    double yaw_d, double mass, const PositionGains& gains,
                                    const Mat3& R, double gravity = 9.81);

/// Feedforward-only attitude reference of the position loop (zero position and
/// velocity error path); used to differentiate R_d numerically.
Mat3 position_reference_attitude(const Vec3& acc_d, double yaw_d, double gravity = 9.81);

}  // namespace morph
