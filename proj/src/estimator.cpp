#include "morph/estimator.hpp"

#include <cmath>

#include "morph/errors.hpp"

namespace morph {

namespace {

// dJ/dh_i basis, shared by P-derivatives: dP_i = 0.5*tr(E_i)*I - E_i.
Mat3 basis(int i) {
    Mat3 E;
    switch (i) {
        case 0: E(0, 0) = 1.0; break;
        case 1: E(1, 1) = 1.0; break;
        case 2: E(2, 2) = 1.0; break;
        case 3: E(0, 1) = E(1, 0) = 1.0; break;
        case 4: E(0, 2) = E(2, 0) = 1.0; break;
        default: E(1, 2) = E(2, 1) = 1.0; break;
    }
    return E;
}

Mat3 dP(int i) {
    const Mat3 E = basis(i);
    return 0.5 * trace(E) * Mat3::identity() - E;
}

Mat3 feasible_P(const InertiaParams& h) {
    const Mat3 P = consistency_matrix(h);
    const auto ev = sym_eigenvalues(P);
    if (!(ev[0] > 0.0)) throw InfeasibleParams("inertia parameters outside the consistent set");
    return P;
}

}  // namespace

double psi(const InertiaParams& h) {
    const Mat3 P = feasible_P(h);
    const double d = det(P);
    if (!(d > 0.0)) throw InfeasibleParams("consistency matrix has non-positive determinant");
    return -std::log(d);
}

Vec6 psi_gradient(const InertiaParams& h) {
    const Mat3 P = feasible_P(h);
    const Mat3 Pinv = inverse(P);
    Vec6 g;
    for (int i = 0; i < 6; ++i) {
        const Mat3 D = dP(i);
        double tr = 0.0;  // tr(P^-1 dP_i)
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) tr += Pinv(r, c) * D(c, r);
        g[static_cast<std::size_t>(i)] = -tr;
    }
    return g;
}

Mat6 psi_hessian(const InertiaParams& h) {
    const Mat3 P = feasible_P(h);
    const Mat3 Pinv = inverse(P);
    Mat3 M[6];
    for (int i = 0; i < 6; ++i) M[i] = Pinv * dP(i) * Pinv;
    Mat6 H;
    for (int i = 0; i < 6; ++i) {
        const Mat3 Di = dP(i);
        for (int j = i; j < 6; ++j) {
            double tr = 0.0;  // tr(P^-1 dP_j P^-1 dP_i)
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) tr += M[j](r, c) * Di(c, r);
            H(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = tr;
            H(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = tr;
        }
    }
    return H;
}

double bregman_divergence(const InertiaParams& h_true, const InertiaParams& h_hat) {
    const Vec6 g = psi_gradient(h_hat);
    return psi(h_true) - psi(h_hat) - dot(h_true.h - h_hat.h, g);
}

Vec6 update_rate(const InertiaParams& h_hat, const Mat36& Y, const Vec3& e_a) {
    const Mat6 H = psi_hessian(h_hat);
    const auto ev = sym_eigenvalues(H);
    if (!(ev[0] > 0.0) || ev[5] / ev[0] > 1e12)
        throw SingularHessian("estimator Hessian is numerically singular");
    return solve_spd(H, regressor_apply_transpose(Y, e_a));
}

void EstimatorState::seed(int subsystem, const InertiaParams& initial) {
    initial.validate();
    bank_[subsystem] = initial;
}

const InertiaParams& EstimatorState::estimate(int subsystem) const {
    auto it = bank_.find(subsystem);
    if (it == bank_.end()) throw Error("estimator has no seed for subsystem " + std::to_string(subsystem));
    return it->second;
}

void EstimatorState::store(int subsystem, const InertiaParams& value) { bank_[subsystem] = value; }

}  // namespace morph
