#pragma once

#include <map>

#include "morph/inertia.hpp"

namespace morph {

/// Log-det barrier over the physically consistent set:
/// psi(h) = -log det P(h) with P(h) = 0.5*tr(J(h))*I - J(h).
/// Strictly convex; its Hessian preconditions the parameter update so that
/// estimates stay consistent for any consistent initial guess.
double psi(const InertiaParams& h);

Vec6 psi_gradient(const InertiaParams& h);

Mat6 psi_hessian(const InertiaParams& h);

/// Bregman divergence d_psi(h_true || h_hat) >= 0, zero iff equal.
double bregman_divergence(const InertiaParams& h_true, const InertiaParams& h_hat);

/// Right-hand side of the parameter estimate ODE. The returned rate solves
/// grad^2 psi(h_hat) * rate = Y^T e_A, which makes the Bregman-divergence
/// derivative cancel the regressor mismatch term in the Lyapunov derivative.
Vec6 update_rate(const InertiaParams& h_hat, const Mat36& Y, const Vec3& e_a);

/// Per-subsystem estimate bank. The active estimate integrates with the
/// simulation; inactive subsystems keep their last value bit-exactly.
class EstimatorState {
public:
    void seed(int subsystem, const InertiaParams& initial);
    bool has(int subsystem) const { return bank_.count(subsystem) != 0; }
    const InertiaParams& estimate(int subsystem) const;
    void store(int subsystem, const InertiaParams& value);

private:
    std::map<int, InertiaParams> bank_;
};

}  // namespace morph
