#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "morph/errors.hpp"

namespace morph {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    Vec3& operator-=(const Vec3& o) {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    Vec3& operator*=(double s) {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }
};

inline constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline constexpr Vec3 operator*(const Vec3& a, double s) { return s * a; }
inline constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

inline constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline bool finite(const Vec3& a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); }

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> a{};

    double& operator()(int r, int c) { return a[3 * r + c]; }
    constexpr double operator()(int r, int c) const { return a[3 * r + c]; }

    static constexpr Mat3 zero() { return {}; }
    static constexpr Mat3 identity() {
        Mat3 m;
        m.a = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        return m;
    }
    static constexpr Mat3 diag(double d0, double d1, double d2) {
        Mat3 m;
        m.a = {d0, 0, 0, 0, d1, 0, 0, 0, d2};
        return m;
    }
    static constexpr Mat3 diag(const Vec3& d) { return diag(d.x, d.y, d.z); }

    Mat3& operator+=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) a[i] += o.a[i];
        return *this;
    }
    Mat3& operator-=(const Mat3& o) {
        for (int i = 0; i < 9; ++i) a[i] -= o.a[i];
        return *this;
    }
    Mat3& operator*=(double s) {
        for (double& v : a) v *= s;
        return *this;
    }
};

inline Mat3 operator+(Mat3 m, const Mat3& o) { return m += o; }
inline Mat3 operator-(Mat3 m, const Mat3& o) { return m -= o; }
inline Mat3 operator*(double s, Mat3 m) { return m *= s; }
inline Mat3 operator*(Mat3 m, double s) { return m *= s; }

inline Mat3 operator*(const Mat3& m, const Mat3& n) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += m(i, k) * n(k, j);
            r(i, j) = s;
        }
    return r;
}

inline Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

inline Mat3 transpose(const Mat3& m) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = m(j, i);
    return r;
}

inline double trace(const Mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

inline double det(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

inline Mat3 inverse(const Mat3& m) {
    const double d = det(m);
    if (std::abs(d) < 1e-300) throw SingularInertia("3x3 matrix is numerically singular");
    Mat3 r;
    r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
    r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
    r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
    r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
    r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
    r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
    r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
    r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
    r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
    return r;
}

inline double frobenius_norm(const Mat3& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

inline Vec3 column(const Mat3& m, int c) { return {m(0, c), m(1, c), m(2, c)}; }

inline Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
        m(i, 0) = c0[i];
        m(i, 1) = c1[i];
        m(i, 2) = c2[i];
    }
    return m;
}

inline Mat3 outer(const Vec3& a, const Vec3& b) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = a[i] * b[j];
    return m;
}

/// Fixed-size vector, used for the 6 inertia parameters.
template <std::size_t N>
struct VecN {
    std::array<double, N> a{};
    double& operator[](std::size_t i) { return a[i]; }
    constexpr double operator[](std::size_t i) const { return a[i]; }

    VecN& operator+=(const VecN& o) {
        for (std::size_t i = 0; i < N; ++i) a[i] += o.a[i];
        return *this;
    }
    VecN& operator-=(const VecN& o) {
        for (std::size_t i = 0; i < N; ++i) a[i] -= o.a[i];
        return *this;
    }
    VecN& operator*=(double s) {
        for (double& v : a) v *= s;
        return *this;
    }
};

template <std::size_t N>
inline VecN<N> operator+(VecN<N> x, const VecN<N>& y) {
    return x += y;
}
template <std::size_t N>
inline VecN<N> operator-(VecN<N> x, const VecN<N>& y) {
    return x -= y;
}
template <std::size_t N>
inline VecN<N> operator*(double s, VecN<N> x) {
    return x *= s;
}
template <std::size_t N>
inline double dot(const VecN<N>& x, const VecN<N>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += x[i] * y[i];
    return s;
}
template <std::size_t N>
inline double norm(const VecN<N>& x) {
    return std::sqrt(dot(x, x));
}

using Vec6 = VecN<6>;

/// Row-major NxN matrix, used for small symmetric problems (N <= 6).
template <std::size_t N>
struct MatN {
    std::array<double, N * N> a{};
    double& operator()(std::size_t r, std::size_t c) { return a[N * r + c]; }
    constexpr double operator()(std::size_t r, std::size_t c) const { return a[N * r + c]; }

    static MatN identity() {
        MatN m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }
};

using Mat2 = MatN<2>;
using Mat6 = MatN<6>;

template <std::size_t N>
inline VecN<N> operator*(const MatN<N>& m, const VecN<N>& v) {
    VecN<N> r;
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < N; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

/// Eigenvalues of a symmetric 2x2 matrix, ascending.
inline std::array<double, 2> sym_eigenvalues(const Mat2& m) {
    const double a = m(0, 0), b = m(0, 1), c = m(1, 1);
    const double mid = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), b);
    return {mid - rad, mid + rad};
}

/// Eigenvalues of a symmetric NxN matrix by cyclic Jacobi sweeps, ascending.
template <std::size_t N>
std::array<double, N> sym_eigenvalues(MatN<N> m) {
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += m(p, q) * m(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p + 1 < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double apq = m(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = 0.5 * (m(q, q) - m(p, p)) / apq;
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                for (std::size_t k = 0; k < N; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = cs * mkp - sn * mkq;
                    m(k, q) = sn * mkp + cs * mkq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = cs * mpk - sn * mqk;
                    m(q, k) = sn * mpk + cs * mqk;
                }
            }
        }
    }
    std::array<double, N> ev;
    for (std::size_t i = 0; i < N; ++i) ev[i] = m(i, i);
    for (std::size_t i = 1; i < N; ++i) {  // insertion sort, ascending
        double v = ev[i];
        std::size_t j = i;
        while (j > 0 && ev[j - 1] > v) {
            ev[j] = ev[j - 1];
            --j;
        }
        ev[j] = v;
    }
    return ev;
}

inline std::array<double, 3> sym_eigenvalues(const Mat3& m) {
    MatN<3> n;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) n(i, j) = m(i, j);
    return sym_eigenvalues(n);
}

/// Solve A x = b for symmetric positive definite A via Cholesky.
/// Throws SingularHessian when a pivot collapses.
template <std::size_t N>
VecN<N> solve_spd(const MatN<N>& A, const VecN<N>& b) {
    MatN<N> L;
    for (std::size_t j = 0; j < N; ++j) {
        double d = A(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (!(d > 0.0)) throw SingularHessian("Cholesky pivot not positive");
        L(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < N; ++i) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / L(j, j);
        }
    }
    VecN<N> y;
    for (std::size_t i = 0; i < N; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * y[k];
        y[i] = s / L(i, i);
    }
    VecN<N> x;
    for (std::size_t ii = N; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < N; ++k) s -= L(k, ii) * x[k];
        x[ii] = s / L(ii, ii);
    }
    return x;
}

/// Spectral norm of a (not necessarily symmetric) 3x3 matrix.
inline double spectral_norm(const Mat3& m) {
    const Mat3 mtm = transpose(m) * m;
    const auto ev = sym_eigenvalues(mtm);
    return std::sqrt(std::max(0.0, ev[2]));
}

}  // namespace morph
