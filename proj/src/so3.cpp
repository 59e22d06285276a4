#include "morph/so3.hpp"

#include <algorithm>
#include <cmath>

#include "morph/errors.hpp"
#include "morph/rng.hpp"

namespace morph {

void GainSet::validate() const {
    if (!(k_r > 0.0) || !(k_omega > 0.0) || !(c > 0.0))
        throw ConfigInvalid("gains k_r, k_omega, c must be positive");
    if (!(g.x > 0.0) || !(g.y > 0.0) || !(g.z > 0.0))
        throw ConfigInvalid("gains g1, g2, g3 must be positive");
    if (g.x == g.y || g.y == g.z || g.x == g.z)
        throw ConfigInvalid("gains g1, g2, g3 must be distinct");
}

Mat3 hat(const Vec3& v) {
    Mat3 m;
    m.a = {0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0};
    return m;
}

Vec3 vee(const Mat3& m) {
    double asym = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double d = m(i, j) + m(j, i);
            asym += d * d;
        }
    if (std::sqrt(asym) > 1e-9) throw NonSkewInput("vee: input is not skew-symmetric");
    return {m(2, 1), m(0, 2), m(1, 0)};
}

Vec3 vee_skew_part(const Mat3& m) {
    return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1))};
}

Mat3 exp_so3(const Vec3& v) {
    const double th2 = norm2(v);
    const double th = std::sqrt(th2);
    double s, c1;  // sin(th)/th and (1-cos(th))/th^2
    if (th < 1e-4) {
        s = 1.0 - th2 / 6.0 * (1.0 - th2 / 20.0);
        c1 = 0.5 - th2 / 24.0 * (1.0 - th2 / 30.0);
    } else {
        s = std::sin(th) / th;
        c1 = (1.0 - std::cos(th)) / th2;
    }
    const Mat3 vh = hat(v);
    return Mat3::identity() + s * vh + c1 * (vh * vh);
}

Vec3 log_so3(const Mat3& R) {
    const double tr = std::clamp(trace(R), -1.0, 3.0);
    const double cos_th = 0.5 * (tr - 1.0);
    const double th = std::acos(std::clamp(cos_th, -1.0, 1.0));
    const Vec3 w = vee_skew_part(R);  // = sin(th) * axis
    if (th < 1e-6) return w;          // sin(th)/th ~ 1
    if (th > M_PI - 1e-6) {
        // Near pi the skew part degenerates; recover the axis from R + I.
        const Mat3 B = R + Mat3::identity();
        int c = 0;
        double best = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double n2 = B(0, j) * B(0, j) + B(1, j) * B(1, j) + B(2, j) * B(2, j);
            if (n2 > best) {
                best = n2;
                c = j;
            }
        }
        Vec3 axis = column(B, c);
        axis = axis / norm(axis);
        if (dot(axis, w) < 0.0) axis = -axis;
        return th * axis;
    }
    return (th / std::sin(th)) * w;
}

Vec3 dexpinv_so3(const Vec3& u, const Vec3& omega) {
    // Body-frame convention: R = exp(u), R^T dR/dt = hat(omega).
    const Vec3 c1 = cross(u, omega);
    return omega + 0.5 * c1 + (1.0 / 12.0) * cross(u, c1);
}

bool is_rotation(const Mat3& R, double tol) {
    const Mat3 d = transpose(R) * R - Mat3::identity();
    return frobenius_norm(d) <= tol && std::abs(det(R) - 1.0) <= tol;
}

Mat3 orthonormalize(const Mat3& R) {
    Mat3 X = R;
    for (int it = 0; it < 8; ++it) {
        const Mat3 Xit = transpose(inverse(X));
        Mat3 next;
        for (int i = 0; i < 9; ++i) next.a[i] = 0.5 * (X.a[i] + Xit.a[i]);
        const Mat3 d = next - X;
        X = next;
        if (frobenius_norm(d) < 1e-15) break;
    }
    return X;
}

double error_function(const Mat3& R, const Mat3& R_d, const GainSet& gains) {
    const Mat3 Q = transpose(R_d) * R;
    // 0.5 * tr[G (I - Q)] with diagonal G
    return 0.5 * (gains.g.x * (1.0 - Q(0, 0)) + gains.g.y * (1.0 - Q(1, 1)) +
                  gains.g.z * (1.0 - Q(2, 2)));
}

AttitudeErrors attitude_errors(const Mat3& R, const Vec3& omega, const Mat3& R_d,
                               const Vec3& omega_d, const Vec3& omega_d_dot,
                               const GainSet& gains) {
    AttitudeErrors e;
    const Mat3 Q = transpose(R_d) * R;       // R_d^T R
    const Mat3 Qt = transpose(Q);            // R^T R_d
    const Mat3 G = gains.G();
    e.phi = 0.5 * (gains.g.x * (1.0 - Q(0, 0)) + gains.g.y * (1.0 - Q(1, 1)) +
                   gains.g.z * (1.0 - Q(2, 2)));
    e.e_r = 0.5 * vee_skew_part(G * Q - Qt * G);
    const Vec3 omega_d_body = Qt * omega_d;
    e.e_omega = omega - omega_d_body;
    e.alpha_d = Qt * omega_d_dot - hat(omega) * omega_d_body;
    e.e_a = e.e_omega + gains.c * e.e_r;
    return e;
}

Mat3 c_matrix(const Mat3& R_d, const Mat3& R, const GainSet& gains) {
    // d/dt e_R = 0.5 * (tr[R^T R_d G] I - R^T R_d G) e_Omega.
    const Mat3 QtG = transpose(R) * R_d * gains.G();
    return 0.5 * (trace(QtG) * Mat3::identity() - QtG);
}

Mat3 sample_rotation(std::uint64_t seed, std::uint64_t index) {
    const double u = counter_uniform(seed, index, 1);
    const double v = counter_uniform(seed, index, 2);
    const double w = counter_uniform(seed, index, 3);
    const double z = 2.0 * u - 1.0;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double ph = 2.0 * M_PI * v;
    const Vec3 axis{r * std::cos(ph), r * std::sin(ph), z};
    return exp_so3((M_PI * w) * axis);
}

Mat3 sample_rotation_in_sublevel(const Mat3& r_ref, const GainSet& gains, std::uint64_t seed,
                                 std::uint64_t index) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        const std::uint64_t k = index + 0x51ed2701ull * attempt;
        const double u = counter_uniform(seed, k, 4);
        const double v = counter_uniform(seed, k, 5);
        const double w = counter_uniform(seed, k, 6);
        const double z = 2.0 * u - 1.0;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double ph = 2.0 * M_PI * v;
        const Vec3 axis{r * std::cos(ph), r * std::sin(ph), z};
        const Mat3 R = r_ref * exp_so3((M_PI * w) * axis);
        if (error_function(R, r_ref, gains) < 2.0) return R;
    }
}

}  // namespace morph
