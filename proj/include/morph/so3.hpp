#pragma once

#include <cstdint>

#include "morph/linalg.hpp"

namespace morph {

/// Gains of the attitude loop. G = diag(g1,g2,g3) weights the error function;
/// c is the Lyapunov cross-term constant whose admissible range depends on the
/// controller case (validated by the analysis module).
struct GainSet {
    double k_r = 0.0;      // N*m per unit attitude error
    double k_omega = 0.0;  // N*m*s/rad
    double c = 0.0;
    Vec3 g{1.0, 1.1, 1.2};  // diagonal of G, distinct positive

    Mat3 G() const { return Mat3::diag(g); }
    double tr_G() const { return g.x + g.y + g.z; }
    void validate() const;
};

/// Attitude error state at one instant.
struct AttitudeErrors {
    double phi = 0.0;  // configuration error function
    Vec3 e_r{};        // attitude error vector
    Vec3 e_omega{};    // angular velocity error, rad/s
    Vec3 e_a{};        // augmented error e_omega + c*e_r
    Vec3 alpha_d{};    // desired angular acceleration seen in the body frame, rad/s^2
};

Mat3 hat(const Vec3& v);

/// Inverse of the hat map. Throws NonSkewInput if ||m + m^T|| > 1e-9.
Vec3 vee(const Mat3& m);

/// Skew part extraction: vee(0.5*(m - m^T)). No skewness precondition.
Vec3 vee_skew_part(const Mat3& m);

/// Rodrigues exponential; always orthonormal to machine precision.
Mat3 exp_so3(const Vec3& v);

/// Logarithm on SO(3); returns the rotation vector with angle in [0, pi].
Vec3 log_so3(const Mat3& R);

/// dexp^{-1}_u(omega) truncated after the ad^2 term; exact enough for a
/// fourth-order Munthe-Kaas step (local truncation O(|u|^4)).
Vec3 dexpinv_so3(const Vec3& u, const Vec3& omega);

bool is_rotation(const Mat3& R, double tol = 1e-9);

/// Re-project a drifted matrix onto SO(3) (polar factor, Newton iteration).
Mat3 orthonormalize(const Mat3& R);

/// Phi(R, R_d) = 0.5 * tr[G (I - R_d^T R)].
double error_function(const Mat3& R, const Mat3& R_d, const GainSet& gains);

/// All attitude errors for one instant.
AttitudeErrors attitude_errors(const Mat3& R, const Vec3& omega, const Mat3& R_d,
                               const Vec3& omega_d, const Vec3& omega_d_dot, const GainSet& gains);

/// Matrix C with d/dt e_R = C e_Omega; spectral norm bounded by tr[G]/sqrt(2).
Mat3 c_matrix(const Mat3& R_d, const Mat3& R, const GainSet& gains);

/// Deterministic random rotation: axis uniform on the sphere, angle uniform
/// in [0, pi). Draw i of stream (seed) is schedule-independent.
Mat3 sample_rotation(std::uint64_t seed, std::uint64_t index);

/// Random rotation R = R_ref * exp(theta * axis) restricted to Phi(R, R_ref) < 2
/// by rejection over the angle.
Mat3 sample_rotation_in_sublevel(const Mat3& r_ref, const GainSet& gains, std::uint64_t seed,
                                 std::uint64_t index);

}  // namespace morph
