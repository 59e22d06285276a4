#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "morph/errors.hpp"
#include "morph/inertia.hpp"
#include "morph/so3.hpp"
#include "morph/rng.hpp"

using namespace morph;

namespace {

Vec3 sample_vec3(std::uint64_t seed, std::uint64_t i, double scale) {
    return {scale * (2.0 * counter_uniform(seed, i, 31) - 1.0),
            scale * (2.0 * counter_uniform(seed, i, 32) - 1.0),
            scale * (2.0 * counter_uniform(seed, i, 33) - 1.0)};
}

/// Random physically consistent parameters: J = Q diag(d) Q^T with d
/// satisfying the triangle inequality strictly.
InertiaParams sample_feasible(std::uint64_t seed, std::uint64_t i) {
    const double a = 0.5 + counter_uniform(seed, i, 34);
    const double b = 0.5 + counter_uniform(seed, i, 35);
    double c = std::abs(a - b) + (a + b - std::abs(a - b)) * (0.05 + 0.9 * counter_uniform(seed, i, 36));
    const double scale = 0.005 + 0.05 * counter_uniform(seed, i, 37);
    const Vec3 axis_raw = sample_vec3(seed + 1, i, 1.0);
    const Vec3 axis = norm(axis_raw) > 1e-9 ? axis_raw / norm(axis_raw) : Vec3{0, 0, 1};
    const Mat3 Q = exp_so3((M_PI * counter_uniform(seed, i, 38)) * axis);
    const Mat3 J = Q * Mat3::diag(scale * a, scale * b, scale * c) * transpose(Q);
    return extract_params(J);
}

InertiaParams params6(double xx, double yy, double zz, double xy, double xz, double yz) {
    InertiaParams p;
    p.h = {xx, yy, zz, xy, xz, yz};
    return p;
}

}  // namespace

TEST_CASE("assemble/extract roundtrip and identity") {
    CHECK(frobenius_norm(assemble_inertia(params6(1, 1, 1, 0, 0, 0)) - Mat3::identity()) == 0.0);

    for (std::uint64_t i = 0; i < 500; ++i) {
        InertiaParams p;
        for (std::size_t k = 0; k < 6; ++k) p.h[k] = 2.0 * counter_uniform(40, i, k + 1) - 1.0;
        const InertiaParams q = extract_params(assemble_inertia(p));
        for (std::size_t k = 0; k < 6; ++k) CHECK(q.h[k] == p.h[k]);
    }

    Mat3 bad = Mat3::identity();
    bad(0, 1) = 1e-3;
    CHECK_THROWS_AS(extract_params(bad), NonSymmetric);
}

TEST_CASE("extract_params on the published initial guess") {
    Mat3 H1;
    H1.a = {0.0023, -0.0006, 0.0010, -0.0006, 0.0172, 0.0, 0.0010, 0.0, 0.0181};
    const InertiaParams p = extract_params(H1);
    const double expected[6] = {0.0023, 0.0172, 0.0181, -0.0006, 0.0010, 0.0};
    for (std::size_t k = 0; k < 6; ++k) CHECK(p.h[k] == doctest::Approx(expected[k]).epsilon(1e-15));
}

TEST_CASE("Y1 identity: Y1(w) h = (J h w) x w") {
    const Mat36 z = regressor_y1({0, 0, 0});
    for (const auto& row : z)
        for (double v : row) CHECK(v == 0.0);

    // Principal-axis spin: diagonal J, w along e1 -> zero gyroscopic torque.
    const InertiaParams diag = params6(0.3, 0.5, 0.7, 0, 0, 0);
    const Vec3 g1 = regressor_apply(regressor_y1({1, 0, 0}), diag.h);
    CHECK(norm(g1) == 0.0);

    for (std::uint64_t i = 0; i < 10000; ++i) {
        const Vec3 w = sample_vec3(41, i, 4.0);
        InertiaParams p;
        for (std::size_t k = 0; k < 6; ++k) p.h[k] = 2.0 * counter_uniform(42, i, k + 1) - 1.0;
        const Vec3 lhs = regressor_apply(regressor_y1(w), p.h);
        const Vec3 rhs = cross(assemble_inertia(p) * w, w);
        CHECK(norm(lhs - rhs) <= 1e-12 * (1.0 + norm(p.h) * norm2(w)));
    }
}

TEST_CASE("Y2 identity: Y2(a) h = J(h) a") {
    const Mat36 z = regressor_y2({0, 0, 0});
    for (const auto& row : z)
        for (double v : row) CHECK(v == 0.0);

    const InertiaParams p = params6(1, 2, 3, 4, 5, 6);
    const Vec3 col = regressor_apply(regressor_y2({1, 0, 0}), p.h);
    CHECK(col.x == 1.0);  // first column of J: [xx, xy, xz]
    CHECK(col.y == 4.0);
    CHECK(col.z == 5.0);

    for (std::uint64_t i = 0; i < 10000; ++i) {
        const Vec3 a = sample_vec3(43, i, 4.0);
        InertiaParams q;
        for (std::size_t k = 0; k < 6; ++k) q.h[k] = 2.0 * counter_uniform(44, i, k + 1) - 1.0;
        const Vec3 lhs = regressor_apply(regressor_y2(a), q.h);
        const Vec3 rhs = assemble_inertia(q) * a;
        CHECK(norm(lhs - rhs) <= 1e-12 * (1.0 + norm(q.h) * norm(a)));
    }
}

TEST_CASE("attitude dynamics residual") {
    // Equilibrium: omega = 0, u = 0, delta = 0.
    const InertiaParams p = params6(0.012, 0.017, 0.022, 0.001, 0, 0);
    const Mat3 J = assemble_inertia(p);
    const Mat3 Ji = inverse(J);
    CHECK(norm(attitude_dynamics_omega_dot(J, Ji, {}, {}, {})) == 0.0);

    // Torque-free principal spin.
    const InertiaParams d = params6(0.01, 0.02, 0.03, 0, 0, 0);
    const Vec3 wz{0, 0, 2.0};
    CHECK(norm(attitude_dynamics_omega_dot(assemble_inertia(d), inverse(assemble_inertia(d)), wz,
                                           {}, {})) < 1e-15);

    for (std::uint64_t i = 0; i < 2000; ++i) {
        const InertiaParams q = sample_feasible(45, i);
        const Mat3 Jq = assemble_inertia(q);
        const Mat3 Jqi = inverse(Jq);
        const Vec3 w = sample_vec3(46, i, 3.0);
        const Vec3 u = sample_vec3(47, i, 0.5);
        const Vec3 delta = sample_vec3(48, i, 0.1);
        const Vec3 wdot = attitude_dynamics_omega_dot(Jq, Jqi, w, u, delta);
        const Vec3 residual = Jq * wdot - cross(Jq * w, w) - u - delta;
        CHECK(norm(residual) <= 1e-12 * (1.0 + norm(u) + norm2(w)));
    }
}

TEST_CASE("physical consistency checks") {
    CHECK(params6(1, 1, 1, 0, 0, 0).physically_consistent());
    // Boundary of the triangle inequality: xx = yy + zz.
    CHECK(!params6(2, 1, 1, 0, 0, 0).physically_consistent());
    CHECK(!params6(-1, 1, 1, 0, 0, 0).physically_consistent());
    for (std::uint64_t i = 0; i < 500; ++i) CHECK(sample_feasible(49, i).physically_consistent());
}

TEST_CASE("switching signal evaluation") {
    const SwitchingSignal s({{0.0, 1}, {30.0, 2}, {60.0, 1}});
    CHECK(s.at(0.0) == 1);
    CHECK(s.at(29.999) == 1);
    CHECK(s.at(30.0) == 2);  // right-continuous
    CHECK(s.at(45.0) == 2);
    CHECK(s.at(60.0) == 1);
    CHECK(s.at(1e9) == 1);
    CHECK_THROWS_AS(SwitchingSignal({{0.0, 1}, {5.0, 2}, {5.0, 1}}), ConfigInvalid);
}

TEST_CASE("disturbance model bound check") {
    DisturbanceModel d;
    d.kind = DisturbanceModel::Kind::Sinusoidal;
    d.amplitude = {0.0, 0.1, 0.1};
    d.frequency = {1.0, 1.0, 1.0};
    d.phase = {0.0, 0.0, M_PI / 2.0};
    d.bound = 0.1;
    d.validate();  // ||0.1 [0, sin t, cos t]|| = 0.1 exactly
    const Vec3 at0 = d.at(0.0);
    CHECK(at0.y == 0.0);
    CHECK(at0.z == doctest::Approx(0.1).epsilon(1e-12));

    d.bound = 0.09;
    CHECK_THROWS_AS(d.validate(), ConfigInvalid);
}

TEST_CASE("configuration eigen bounds validated") {
    Configuration cfg;
    cfg.index = 1;
    cfg.true_inertia = params6(0.012, 0.017, 0.022, 0, 0, 0);
    cfg.nominal_inertia = cfg.true_inertia;
    cfg.lambda_min = 0.012;
    cfg.lambda_max = 0.022;
    cfg.validate();
    cfg.lambda_max = 0.02;  // no longer brackets the spectrum
    CHECK_THROWS_AS(cfg.validate(), ConfigInvalid);
}
