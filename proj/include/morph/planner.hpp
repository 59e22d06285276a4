#pragma once

#include <array>
#include <vector>

#include "morph/analysis.hpp"
#include "morph/linalg.hpp"

namespace morph {

/// One quintic per axis over [0, tau]; coefficients in ascending powers.
struct QuinticSegment {
    std::array<std::array<double, 6>, 3> coeff{};
    double tau = 0.0;

    Vec3 position(double t) const;
    Vec3 velocity(double t) const;
    Vec3 acceleration(double t) const;
    Vec3 jerk(double t) const;
    /// Integral of squared jerk over [0, tau], all axes.
    double jerk_integral() const;
};

struct PlannerRequest {
    Vec3 r_des{};   // passage entrance, m
    Vec3 v_des{};   // transit velocity, m/s
    double tau_s = 0.0;  // attitude settling time, s
    double tau_d = 0.0;  // required residence before the switch, s
};

/// Rest-to-transit minimum-jerk segment: r(0)=v(0)=a(0)=0,
/// r(tau)=r_des, v(tau)=v_des, a(tau)=0. Throws DurationTooShort when
/// tau < max(tau_s, tau_d).
QuinticSegment min_jerk(const PlannerRequest& req, double tau);

/// Step position reference with zero velocity/acceleration feedforward.
struct WaypointReference {
    Vec3 r_des{};
};
WaypointReference waypoint_reference(const Vec3& r_des);

/// Passage window on the reference timeline.
struct PassageGeometry {
    double t_enter = 0.0;
    double t_exit = 0.0;
    int fold_index = 2;    // configuration required inside the passage
    int cruise_index = 1;  // configuration outside
};

struct ScheduleResult {
    SwitchingSignal signal;
    bool entry_check_ok = true;       // ||z1(t_enter)|| <= rho
    double z1_at_enter = 0.0;
};

/// Builds sigma with a fold at t_enter and an unfold no earlier than t_exit.
/// Raises DwellViolation if geometry forces the fold before max(tau_s, tau_d)
/// has elapsed since the previous switch, SettlingViolation if the attitude
/// errors have not settled into rho at the mandated switch time.
ScheduleResult schedule_switch(const SwitchPlan& plan, const StabilityCertificate& cert,
                               const PassageGeometry& geometry,
                               const std::vector<double>& z1_series, double dt);

}  // namespace morph
