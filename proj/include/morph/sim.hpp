#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "morph/analysis.hpp"
#include "morph/controllers.hpp"
#include "morph/estimator.hpp"
#include "morph/inertia.hpp"
#include "morph/planner.hpp"
#include "morph/so3.hpp"

namespace morph {

enum class ControllerSelect { None, Case1, Case2, Case3, RobustBaseline };

/// Closed-form attitude reference: per-axis (chirped) sinusoid body rates with
/// an optional smooth calm-down envelope, integrated on SO(3) next to the body
/// attitude so that R_d, Omega_d and the angular acceleration stay consistent.
struct AttitudeReferenceSpec {
    Vec3 amplitude{};     // rad/s
    Vec3 frequency{};     // Hz at t = 0
    Vec3 chirp_rate{};    // Hz/s, linear frequency sweep
    Vec3 phase{};         // rad
    double calm_start = -1.0;  // envelope decays over [calm_start, calm_end]
    double calm_end = -1.0;
    std::vector<double> quiet;  // flattened [a1, b1, a2, b2, ...] rest windows
    double quiet_ramp = 3.0;    // fade time into/out of a quiet window, s

    Vec3 omega_d(double t) const;
    Vec3 omega_d_dot(double t) const;
    double envelope(double t) const;
    double envelope_dot(double t) const;
};

enum class TranslationKind { Hover, MinJerk, Waypoint };

struct TranslationReferenceSpec {
    TranslationKind kind = TranslationKind::Hover;
    QuinticSegment segment;  // MinJerk
    Vec3 waypoint{};         // Waypoint target / hover point

    Vec3 pos_d(double t) const;
    Vec3 vel_d(double t) const;
    Vec3 acc_d(double t) const;
    Vec3 jerk_d(double t) const;
};

enum class ReferenceMode { Attitude, Position };

struct InitialStateSpec {
    Vec3 attitude_axis{0, 0, 1};  // initial attitude error direction
    double attitude_angle = 0.0;  // rad, applied relative to R_d(0)
    bool sample_attitude = false; // draw the error direction from the seed instead
    double sample_phi = 0.5;      // target error-function level when sampling
    Vec3 omega{};                 // rad/s
    Vec3 pos{};
    Vec3 vel{};
};

struct MonitorSpec {
    bool lyapunov = true;
    bool robust_bound = true;
    double lyapunov_tolerance = 1e-6;  // per step, scaled by max(1, V)
    double rho = 0.05;                 // settling ball for switch events
    std::vector<double> z2_bounds;     // defaults to the initial Bregman divergence
};

struct Scenario {
    std::string name = "scenario";
    ControllerSelect controller = ControllerSelect::Case1;
    double mass = 1.4;       // kg
    double gravity = 9.81;   // m/s^2
    std::vector<Configuration> configs;
    GainSet gains;
    RobustParams robust;
    DisturbanceModel disturbance;
    std::vector<SwitchingSignal::Breakpoint> switch_points{{0.0, 1}};
    ReferenceMode reference_mode = ReferenceMode::Attitude;
    AttitudeReferenceSpec attitude_reference;
    TranslationReferenceSpec translation_reference;
    PositionGains position_gains;
    double yaw_d = 0.0;
    InitialStateSpec initial;
    double dt = 1e-3;
    double horizon = 10.0;
    int log_stride = 1;
    std::uint64_t seed = 1;
    MonitorSpec monitors;
    PhiBoundOptions phi_options;

    void validate() const;
};

struct VehicleState {
    Mat3 R = Mat3::identity();
    Vec3 omega{};
    Vec3 pos{};
    Vec3 vel{};
    Mat3 R_d = Mat3::identity();  // reference attitude (attitude mode)
    EstimatorState estimator;
    int sigma = 1;
    double t = 0.0;
};

struct SimRow {
    double t;
    Mat3 R, R_d;
    Vec3 omega, omega_d;
    Vec3 e_r, e_omega, e_a;
    double phi;
    Vec3 u, u_fb, u_ff, u_rob;
    Vec6 hhat;
    int sigma;
    double V;
    Vec3 pos, vel, pos_d;
    std::uint32_t flags;
};

// SimRow flag bits.
enum : std::uint32_t {
    kFlagSwitch = 1u,
    kFlagLyapunovViolation = 2u,
    kFlagRobustViolation = 4u,
    kFlagInfeasible = 8u,
    kFlagOutsideSublevel = 16u,
    kFlagReprojected = 32u,
    kFlagSwitchConditionFailed = 64u,
    kFlagJumpBoundExceeded = 128u,
    kFlagSettlingViolation = 256u,
    kFlagDwellViolation = 512u,
};

struct SwitchEvent {
    double t = 0.0;
    int from = 0, to = 0;
    double z1 = 0.0;                 // ||z1|| at the switch instant
    bool settled = true;             // z1 <= rho
    std::optional<bool> switch_condition_ok;  // re-entry contraction check
    double z1_previous_entry = 0.0;
    double v_from = 0.0, v_to = 0.0;
    double jump = 0.0;
    double jump_bound = 0.0;
    bool jump_within_bound = true;
    double dwell = 0.0;  // residence time completed in `from`
    bool dwell_ok = true;
};

struct Violation {
    double t = 0.0;
    std::string kind;
    std::string detail;
};

struct SimLog {
    double dt = 0.0;
    double log_dt = 0.0;
    std::vector<SimRow> rows;
    std::vector<SwitchEvent> switches;
    std::vector<Violation> violations;
    std::uint64_t total_steps = 0;
    std::uint64_t reprojections = 0;
    std::uint64_t estimator_substeps = 0;
    double min_consistency_eig = 0.0;  // min over the run of min-eig P(h_hat)
    double max_phi = 0.0;
    std::vector<double> max_dpsi;  // per subsystem (index-1), adaptive runs

    bool clean() const { return violations.empty(); }
};

struct SimResult {
    SimLog log;
    StabilityCertificate certificate;
    VehicleState final_state;
};

/// One integration step of the coupled closed loop (fourth-order Munthe-Kaas
/// on the rotations, classical RK4 on the vector part). Pure: same inputs,
/// same outputs bit for bit.
VehicleState step(const VehicleState& state, const Scenario& scenario,
                  const StabilityCertificate& cert, double dt);

/// Full scenario run with logging and inequality monitors.
SimResult run(const Scenario& scenario);

/// Lyapunov value of subsystem p at the given state snapshot (the adaptive
/// candidate includes the Bregman term; the known-model one does not).
double lyapunov_value(const Scenario& scenario, const AttitudeErrors& errors, int p,
                      const EstimatorState& est);

}  // namespace morph
