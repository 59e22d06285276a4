#pragma once

#include <cstddef>
#include <vector>

#include "morph/linalg.hpp"

namespace morph {

using Mat36 = std::array<std::array<double, 6>, 3>;  // 3x6 regressor

/// Unique entries of the inertia tensor, ordered [xx, yy, zz, xy, xz, yz], kg*m^2.
struct InertiaParams {
    Vec6 h{};

    /// Physically consistent: J(h) > 0 and P(h) = 0.5*tr(J)*I - J > 0
    /// (triangle inequality on the principal moments).
    bool physically_consistent() const;
    void validate() const;  // throws InfeasibleParams
};

Mat3 assemble_inertia(const InertiaParams& p);

/// Inverse of assemble_inertia. Throws NonSymmetric if ||J - J^T|| > 1e-9.
InertiaParams extract_params(const Mat3& J);

/// Rotational second-moment matrix P(h) = 0.5*tr(J(h))*I - J(h).
Mat3 consistency_matrix(const InertiaParams& p);

/// Y1(omega) with Y1(omega) h = (J(h) omega) x omega.
Mat36 regressor_y1(const Vec3& omega);

/// Y2(alpha) with Y2(alpha) h = J(h) alpha.
Mat36 regressor_y2(const Vec3& alpha);

inline Vec3 regressor_apply(const Mat36& Y, const Vec6& h) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int j = 0; j < 6; ++j) s += Y[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(j)];
        r[i] = s;
    }
    return r;
}

inline Mat36 regressor_sub(const Mat36& a, const Mat36& b) {
    Mat36 r;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 6; ++j) r[i][j] = a[i][j] - b[i][j];
    return r;
}

/// Y^T v for a 3x6 regressor.
inline Vec6 regressor_apply_transpose(const Mat36& Y, const Vec3& v) {
    Vec6 r{};
    for (std::size_t j = 0; j < 6; ++j)
        r[j] = Y[0][j] * v.x + Y[1][j] * v.y + Y[2][j] * v.z;
    return r;
}

/// One vehicle configuration (subsystem) of the switched family.
struct Configuration {
    int index = 1;                  // p in {1..m}
    InertiaParams true_inertia;     // H_p
    InertiaParams nominal_inertia;  // H_p^0, estimator seed
    double lambda_min = 0.0;        // known eigenvalue bounds of H_p
    double lambda_max = 0.0;

    void validate() const;  // bounds must bracket the true spectrum
};

/// Piecewise-constant, right-continuous subsystem selector.
class SwitchingSignal {
public:
    struct Breakpoint {
        double time;
        int index;
    };

    SwitchingSignal() = default;
    explicit SwitchingSignal(std::vector<Breakpoint> breakpoints);

    /// Index of the most recent breakpoint at or before t (first index before it).
    int at(double t) const;
    const std::vector<Breakpoint>& breakpoints() const { return points_; }

private:
    std::vector<Breakpoint> points_{{0.0, 1}};
};

/// Bounded torque disturbance on the body axes.
struct DisturbanceModel {
    enum class Kind { Zero, Sinusoidal };
    Kind kind = Kind::Zero;
    Vec3 amplitude{};  // per-axis amplitude, N*m
    Vec3 frequency{};  // rad/s
    Vec3 phase{};      // rad
    double bound = 0.0;  // delta_R with ||Delta(t)|| <= bound for all t

    Vec3 at(double t) const;
    void validate() const;
};

/// Right-hand side of the attitude dynamics:
/// dR/dt = R hat(Omega), J dOmega/dt = (J Omega) x Omega + u + Delta.
Vec3 attitude_dynamics_omega_dot(const Mat3& J, const Mat3& J_inv, const Vec3& omega,
                                 const Vec3& u, const Vec3& delta);

}  // namespace morph
