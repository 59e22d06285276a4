#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "morph/errors.hpp"
#include "morph/planner.hpp"
#include "morph/rng.hpp"

using namespace morph;

namespace {

/// Exact polynomial helpers for the optimality oracle (degree <= 16).
using Poly = std::vector<double>;  // ascending coefficients

Poly derivative(const Poly& p) {
    Poly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(static_cast<double>(k) * p[k]);
    return d;
}

Poly multiply(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

double integrate(const Poly& p, double T) {
    double s = 0.0;
    double tk = T;
    for (std::size_t k = 0; k < p.size(); ++k) {
        s += p[k] * tk / static_cast<double>(k + 1);
        tk *= T;
    }
    return s;
}

double eval(const Poly& p, double t) {
    double v = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) v = v * t + p[k];
    return v;
}

/// Perturbation vanishing with two derivatives at both endpoints:
/// q(t) = t^3 (tau - t)^3 (a + b t + c t^2 + d t^3), degree <= 9.
Poly admissible_perturbation(double tau, const std::array<double, 4>& coef) {
    Poly t3{0, 0, 0, 1};
    // (tau - t)^3 = tau^3 - 3 tau^2 t + 3 tau t^2 - t^3
    Poly tau_minus_t3{tau * tau * tau, -3.0 * tau * tau, 3.0 * tau, -1.0};
    Poly q{coef[0], coef[1], coef[2], coef[3]};
    return multiply(multiply(t3, tau_minus_t3), q);
}

PlannerRequest mjt_request() {
    PlannerRequest r;
    r.r_des = {0.5, 0.0, -2.0};
    r.v_des = {0.3, 0.0, 0.0};
    r.tau_s = 8.87;
    r.tau_d = 3.0;
    return r;
}

StabilityCertificate stub_certificate(double tau_d) {
    StabilityCertificate cert;
    cert.kind = ControllerCase::Adaptive;
    cert.tau_d = tau_d;
    SubsystemCertificate s1, s2;
    s1.index = 1;
    s2.index = 2;
    s1.lam_max_W21 = s2.lam_max_W21 = 1.0;
    s1.switch_ratio = s2.switch_ratio = 0.2;
    cert.subsystems = {s1, s2};
    return cert;
}

}  // namespace

TEST_CASE("unit displacement quintic is 10 t^3 - 15 t^4 + 6 t^5") {
    PlannerRequest req;
    req.r_des = {1.0, 0.0, 0.0};
    const QuinticSegment seg = min_jerk(req, 1.0);
    const double expect[6] = {0, 0, 0, 10.0, -15.0, 6.0};
    for (std::size_t k = 0; k < 6; ++k)
        CHECK(seg.coeff[0][k] == doctest::Approx(expect[k]).epsilon(1e-12));
    for (std::size_t k = 0; k < 6; ++k) CHECK(seg.coeff[1][k] == 0.0);
}

TEST_CASE("zero request produces the zero trajectory") {
    PlannerRequest req;
    const QuinticSegment seg = min_jerk(req, 2.0);
    for (const auto& axis : seg.coeff)
        for (double c : axis) CHECK(c == 0.0);
    CHECK(seg.jerk_integral() == 0.0);
}

TEST_CASE("boundary conditions are met to 1e-9") {
    for (std::uint64_t i = 0; i < 200; ++i) {
        PlannerRequest req;
        req.r_des = {4.0 * counter_uniform(110, i, 1) - 2.0, 4.0 * counter_uniform(110, i, 2) - 2.0,
                     4.0 * counter_uniform(110, i, 3) - 2.0};
        req.v_des = {2.0 * counter_uniform(110, i, 4) - 1.0, 2.0 * counter_uniform(110, i, 5) - 1.0,
                     2.0 * counter_uniform(110, i, 6) - 1.0};
        const double tau = 0.5 + 9.5 * counter_uniform(110, i, 7);
        const QuinticSegment seg = min_jerk(req, tau);
        CHECK(norm(seg.position(0.0)) <= 1e-9);
        CHECK(norm(seg.velocity(0.0)) <= 1e-9);
        CHECK(norm(seg.acceleration(0.0)) <= 1e-9);
        CHECK(norm(seg.position(tau) - req.r_des) <= 1e-9);
        CHECK(norm(seg.velocity(tau) - req.v_des) <= 1e-9);
        CHECK(norm(seg.acceleration(tau)) <= 1e-9);
    }
}

TEST_CASE("no admissible perturbation lowers the jerk integral") {
    const PlannerRequest req = mjt_request();
    const double tau = 1.02 * std::max(req.tau_s, req.tau_d);
    const QuinticSegment seg = min_jerk(req, tau);

    for (std::uint64_t i = 0; i < 100; ++i) {
        double perturbed_total = 0.0;
        bool nonzero = false;
        for (std::size_t axis = 0; axis < 3; ++axis) {
            Poly base(seg.coeff[axis].begin(), seg.coeff[axis].end());
            std::array<double, 4> coef{};
            for (std::size_t k = 0; k < 4; ++k)
                coef[k] = 2e-4 * (2.0 * counter_uniform(111, 16 * i + 4 * axis + k, 1) - 1.0);
            const Poly q = admissible_perturbation(tau, coef);
            // Perturbation must not break the boundary conditions.
            CHECK(std::abs(eval(q, 0.0)) <= 1e-12);
            CHECK(std::abs(eval(q, tau)) <= 1e-6);
            Poly sum(std::max(base.size(), q.size()), 0.0);
            for (std::size_t k = 0; k < base.size(); ++k) sum[k] += base[k];
            for (std::size_t k = 0; k < q.size(); ++k) {
                sum[k] += q[k];
                if (q[k] != 0.0) nonzero = true;
            }
            const Poly jerk = derivative(derivative(derivative(sum)));
            perturbed_total += integrate(multiply(jerk, jerk), tau);
        }
        if (nonzero)
            CHECK(perturbed_total > seg.jerk_integral());
        else
            CHECK(perturbed_total == doctest::Approx(seg.jerk_integral()));
    }
}

TEST_CASE("jerk integral matches the polynomial oracle") {
    const PlannerRequest req = mjt_request();
    const QuinticSegment seg = min_jerk(req, 10.0);
    double total = 0.0;
    for (std::size_t axis = 0; axis < 3; ++axis) {
        Poly p(seg.coeff[axis].begin(), seg.coeff[axis].end());
        const Poly jerk = derivative(derivative(derivative(p)));
        total += integrate(multiply(jerk, jerk), seg.tau);
    }
    CHECK(seg.jerk_integral() == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("durations below max(tau_s, tau_d) are rejected") {
    const PlannerRequest req = mjt_request();
    CHECK_THROWS_AS(min_jerk(req, 5.24), DurationTooShort);  // waypoint-arrival timing
    CHECK_THROWS_AS(min_jerk(req, 0.0), DurationTooShort);
    CHECK_NOTHROW(min_jerk(req, 8.87));
}

TEST_CASE("waypoint reference carries no feedforward") {
    const WaypointReference ref = waypoint_reference({0.5, 0.0, -2.0});
    CHECK(ref.r_des.x == 0.5);
    CHECK(ref.r_des.z == -2.0);
}

TEST_CASE("schedule_switch: nominal pass, dwell violation, settling violation") {
    SwitchPlan plan;
    plan.tau_s = 2.0;
    plan.rho = 0.05;
    plan.z2_bounds = {0.1, 0.1};
    const StabilityCertificate cert = stub_certificate(1.5);

    std::vector<double> settled;
    const double dt = 0.01;
    for (int k = 0; k <= 2000; ++k) settled.push_back(0.5 * std::exp(-0.8 * dt * k));

    PassageGeometry geom;
    geom.t_enter = 10.0;
    geom.t_exit = 12.0;
    const ScheduleResult res = schedule_switch(plan, cert, geom, settled, dt);
    CHECK(res.entry_check_ok);
    CHECK(res.signal.at(0.0) == 1);
    CHECK(res.signal.at(10.0) == 2);
    CHECK(res.signal.at(12.0) == 1);
    // Residence inside the fold respects the dwell time.
    double fold_start = 0.0, fold_end = 0.0;
    for (const auto& bp : res.signal.breakpoints()) {
        if (bp.index == 2) fold_start = bp.time;
        if (bp.index == 1 && bp.time > 0.0) fold_end = bp.time;
    }
    CHECK(fold_end - fold_start >= cert.tau_d);

    PassageGeometry early = geom;
    early.t_enter = 1.0;  // below max(tau_s, tau_d)
    early.t_exit = 3.0;
    CHECK_THROWS_AS(schedule_switch(plan, cert, early, settled, dt), DwellViolation);

    std::vector<double> loud(settled.size(), 0.4);  // never settles
    CHECK_THROWS_AS(schedule_switch(plan, cert, geom, loud, dt), SettlingViolation);
}

TEST_CASE("emitted schedules never fold shorter than the dwell time") {
    SwitchPlan plan;
    plan.tau_s = 2.0;
    plan.rho = 0.05;
    plan.z2_bounds = {0.1, 0.1};
    const StabilityCertificate cert = stub_certificate(1.5);
    std::vector<double> settled;
    const double dt = 0.01;
    for (int k = 0; k <= 4000; ++k) settled.push_back(0.5 * std::exp(-0.8 * dt * k));

    for (std::uint64_t i = 0; i < 200; ++i) {
        PassageGeometry geom;
        geom.t_enter = 0.5 + 20.0 * counter_uniform(112, i, 1);
        geom.t_exit = geom.t_enter + 0.05 + 5.0 * counter_uniform(112, i, 2);
        try {
            const ScheduleResult res = schedule_switch(plan, cert, geom, settled, dt);
            double fold_start = -1.0, fold_end = -1.0;
            for (const auto& bp : res.signal.breakpoints()) {
                if (bp.index == 2) fold_start = bp.time;
                if (bp.index == 1 && bp.time > 0.0) fold_end = bp.time;
            }
            CHECK(fold_start >= std::max(plan.tau_s, cert.tau_d));
            CHECK(fold_end - fold_start >= cert.tau_d);
        } catch (const DwellViolation&) {
            CHECK(geom.t_enter < std::max(plan.tau_s, cert.tau_d));
        } catch (const SettlingViolation&) {
            CHECK(settled[static_cast<std::size_t>(std::llround(geom.t_enter / dt))] > plan.rho);
        }
    }
}
