#include "morph/inertia.hpp"

#include <algorithm>
#include <cmath>

#include "morph/errors.hpp"

namespace morph {

Mat3 assemble_inertia(const InertiaParams& p) {
    Mat3 J;
    J(0, 0) = p.h[0];
    J(1, 1) = p.h[1];
    J(2, 2) = p.h[2];
    J(0, 1) = J(1, 0) = p.h[3];
    J(0, 2) = J(2, 0) = p.h[4];
    J(1, 2) = J(2, 1) = p.h[5];
    return J;
}

InertiaParams extract_params(const Mat3& J) {
    double asym = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double d = J(i, j) - J(j, i);
            asym += d * d;
        }
    if (std::sqrt(asym) > 1e-9) throw NonSymmetric("extract_params: matrix is not symmetric");
    InertiaParams p;
    p.h = {J(0, 0), J(1, 1), J(2, 2), 0.5 * (J(0, 1) + J(1, 0)), 0.5 * (J(0, 2) + J(2, 0)),
           0.5 * (J(1, 2) + J(2, 1))};
    return p;
}

Mat3 consistency_matrix(const InertiaParams& p) {
    const Mat3 J = assemble_inertia(p);
    return 0.5 * trace(J) * Mat3::identity() - J;
}

bool InertiaParams::physically_consistent() const {
    const Mat3 J = assemble_inertia(*this);
    const auto ej = sym_eigenvalues(J);
    if (!(ej[0] > 0.0)) return false;
    const auto ep = sym_eigenvalues(consistency_matrix(*this));
    return ep[0] > 0.0;
}

void InertiaParams::validate() const {
    if (!physically_consistent())
        throw InfeasibleParams("inertia parameters are not physically consistent");
}

Mat36 regressor_y1(const Vec3& w) {
    // Rows assembled from the identity Y1(w) h = (J(h) w) x w.
    const double w1 = w.x, w2 = w.y, w3 = w.z;
    Mat36 Y{};
    // (J w) x w row 1 = h_yy w2 w3 - h_zz w2 w3 + h_xy w1 w3 - h_xz w1 w2 + h_yz (w3^2 - w2^2)
    Y[0] = {0.0, w2 * w3, -w2 * w3, w1 * w3, -w1 * w2, w3 * w3 - w2 * w2};
    Y[1] = {-w1 * w3, 0.0, w1 * w3, -w2 * w3, w1 * w1 - w3 * w3, w1 * w2};
    Y[2] = {w1 * w2, -w1 * w2, 0.0, w2 * w2 - w1 * w1, w2 * w3, -w1 * w3};
    return Y;
}

Mat36 regressor_y2(const Vec3& a) {
    Mat36 Y{};
    Y[0] = {a.x, 0.0, 0.0, a.y, a.z, 0.0};
    Y[1] = {0.0, a.y, 0.0, a.x, 0.0, a.z};
    Y[2] = {0.0, 0.0, a.z, 0.0, a.x, a.y};
    return Y;
}

void Configuration::validate() const {
    true_inertia.validate();
    nominal_inertia.validate();
    if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min))
        throw ConfigInvalid("configuration eigenvalue bounds must satisfy 0 < lambda_min <= lambda_max");
    const auto ev = sym_eigenvalues(assemble_inertia(true_inertia));
    const double tol = 1e-12;
    if (ev[0] < lambda_min - tol || ev[2] > lambda_max + tol)
        throw ConfigInvalid("configuration eigenvalue bounds do not bracket the true inertia spectrum");
}

SwitchingSignal::SwitchingSignal(std::vector<Breakpoint> breakpoints) : points_(std::move(breakpoints)) {
    if (points_.empty()) throw ConfigInvalid("switching signal needs at least one breakpoint");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (!(points_[i].time > points_[i - 1].time))
            throw ConfigInvalid("switching signal breakpoints must be strictly increasing in time");
    for (const auto& bp : points_)
        if (bp.index < 1) throw ConfigInvalid("switching signal indices must be >= 1");
}

int SwitchingSignal::at(double t) const {
    int idx = points_.front().index;
    for (const auto& bp : points_) {
        if (bp.time <= t)
            idx = bp.index;
        else
            break;
    }
    return idx;
}

Vec3 DisturbanceModel::at(double t) const {
    if (kind == Kind::Zero) return {};
    return {amplitude.x * std::sin(frequency.x * t + phase.x),
            amplitude.y * std::sin(frequency.y * t + phase.y),
            amplitude.z * std::sin(frequency.z * t + phase.z)};
}

void DisturbanceModel::validate() const {
    if (bound < 0.0) throw ConfigInvalid("disturbance bound must be >= 0");
    if (kind == Kind::Zero) return;
    // The bound is declared by the scenario; refute it by dense sampling.
    for (int i = 0; i < 200000; ++i) {
        const double t = 5e-3 * i;
        if (norm(at(t)) > bound * (1.0 + 1e-9) + 1e-15)
            throw ConfigInvalid("disturbance exceeds the declared bound delta_R");
    }
}

Vec3 attitude_dynamics_omega_dot(const Mat3& J, const Mat3& J_inv, const Vec3& omega,
                                 const Vec3& u, const Vec3& delta) {
    const Vec3 gyro = cross(J * omega, omega);
    return J_inv * (gyro + u + delta);
}

}  // namespace morph
