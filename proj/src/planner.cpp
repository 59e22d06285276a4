#include "morph/planner.hpp"

#include <algorithm>
#include <cmath>

#include "morph/errors.hpp"

namespace morph {

namespace {

double poly_eval(const std::array<double, 6>& c, double t, int deriv) {
    double v = 0.0;
    for (int k = 5; k >= deriv; --k) {
        double f = 1.0;
        for (int d = 0; d < deriv; ++d) f *= static_cast<double>(k - d);
        v = v * t + f * c[static_cast<std::size_t>(k)];
    }
    return v;
}

}  // namespace

Vec3 QuinticSegment::position(double t) const {
    return {poly_eval(coeff[0], t, 0), poly_eval(coeff[1], t, 0), poly_eval(coeff[2], t, 0)};
}
Vec3 QuinticSegment::velocity(double t) const {
    return {poly_eval(coeff[0], t, 1), poly_eval(coeff[1], t, 1), poly_eval(coeff[2], t, 1)};
}
Vec3 QuinticSegment::acceleration(double t) const {
    return {poly_eval(coeff[0], t, 2), poly_eval(coeff[1], t, 2), poly_eval(coeff[2], t, 2)};
}
Vec3 QuinticSegment::jerk(double t) const {
    return {poly_eval(coeff[0], t, 3), poly_eval(coeff[1], t, 3), poly_eval(coeff[2], t, 3)};
}

double QuinticSegment::jerk_integral() const {
    // jerk is quadratic: j(t) = 6 c3 + 24 c4 t + 60 c5 t^2; integrate j^2 exactly.
    double total = 0.0;
    for (const auto& c : coeff) {
        const double a0 = 6.0 * c[3], a1 = 24.0 * c[4], a2 = 60.0 * c[5];
        const double T = tau;
        total += a0 * a0 * T + a0 * a1 * T * T + (a1 * a1 + 2.0 * a0 * a2) * T * T * T / 3.0 +
                 a1 * a2 * T * T * T * T / 2.0 + a2 * a2 * T * T * T * T * T / 5.0;
    }
    return total;
}

QuinticSegment min_jerk(const PlannerRequest& req, double tau) {
    if (!(tau > 0.0)) throw DurationTooShort("segment duration must be positive");
    const double floor_tau = std::max(req.tau_s, req.tau_d);
    if (tau < floor_tau)
        throw DurationTooShort("requested duration " + std::to_string(tau) +
                               " s is below max(tau_s, tau_d) = " + std::to_string(floor_tau) + " s");
    QuinticSegment seg;
    seg.tau = tau;
    const double T = tau, T2 = T * T, T3 = T2 * T, T4 = T3 * T, T5 = T4 * T;
    for (int axis = 0; axis < 3; ++axis) {
        const double p = req.r_des[axis];
        const double v = req.v_des[axis];
        // Rest start leaves c0..c2 = 0; solve the 3x3 endpoint system for c3..c5:
        //   [T3 T4 T5; 3T2 4T3 5T4; 6T 12T2 20T3] [c3 c4 c5]' = [p v 0]'
        const double c3 = (10.0 * p - 4.0 * v * T) / T3;
        const double c4 = (-15.0 * p + 7.0 * v * T) / T4;
        const double c5 = (6.0 * p - 3.0 * v * T) / T5;
        seg.coeff[static_cast<std::size_t>(axis)] = {0.0, 0.0, 0.0, c3, c4, c5};
    }
    return seg;
}

WaypointReference waypoint_reference(const Vec3& r_des) { return {r_des}; }

ScheduleResult schedule_switch(const SwitchPlan& plan, const StabilityCertificate& cert,
                               const PassageGeometry& geometry,
                               const std::vector<double>& z1_series, double dt) {
    plan.validate();
    if (!(geometry.t_exit > geometry.t_enter))
        throw ConfigInvalid("passage exit must come after the entrance");
    cert.subsystem(geometry.fold_index);
    cert.subsystem(geometry.cruise_index);

    const double required = std::max(plan.tau_s, cert.tau_d);
    if (geometry.t_enter < required)
        throw DwellViolation("geometry forces a switch at " + std::to_string(geometry.t_enter) +
                             " s, before max(tau_s, tau_d) = " + std::to_string(required) + " s");

    ScheduleResult out;
    const auto sample = [&](double t) {
        const std::size_t k =
            std::min(z1_series.size() - 1, static_cast<std::size_t>(std::llround(t / dt)));
        return z1_series[k];
    };
    if (z1_series.empty()) throw ConfigInvalid("schedule_switch needs a z1 series");
    out.z1_at_enter = sample(geometry.t_enter);
    out.entry_check_ok = out.z1_at_enter <= plan.rho;
    if (!out.entry_check_ok)
        throw SettlingViolation("attitude errors ||z1|| = " + std::to_string(out.z1_at_enter) +
                                " exceed rho = " + std::to_string(plan.rho) +
                                " at the mandated switch time");

    const double unfold = std::max(geometry.t_exit, geometry.t_enter + cert.tau_d);
    out.signal = SwitchingSignal({{0.0, geometry.cruise_index},
                                  {geometry.t_enter, geometry.fold_index},
                                  {unfold, geometry.cruise_index}});
    return out;
}

}  // namespace morph
