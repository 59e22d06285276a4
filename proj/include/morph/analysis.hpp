#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morph/inertia.hpp"
#include "morph/so3.hpp"

namespace morph {

/// Certified constants of b1 ||e_R||^2 <= Phi <= b2 ||e_R||^2 on the sampled
/// sublevel set Phi < 2.
struct PhiBounds {
    double b1 = 0.0;
    double b2 = 0.0;
};

struct PhiBoundOptions {
    std::uint64_t samples = 1000000;
    std::uint64_t verify_samples = 1000000;
    std::uint64_t seed = 0x5eed0001;
    std::uint64_t verify_seed = 0x5eed0002;
    double margin = 0.01;  // b1 shrunk, b2 grown by this fraction
    bool parallel = true;
};

/// Sampled certification of the error-function bounds with a safety margin,
/// re-verified on an independent draw (throws on a verification violation).
PhiBounds certify_phi_bounds(const GainSet& gains, const PhiBoundOptions& opts = {});

/// Phi / ||e_R||^2 for sample i of the given stream; NaN when the draw is
/// rejected (angle below 1e-4, outside the sublevel set after retries).
double phi_ratio_sample(const GainSet& gains, std::uint64_t seed, std::uint64_t index);

/// Per-subsystem certificate matrices. z1 = [||e_R||, ||e_Omega||].
struct SubsystemCertificate {
    int index = 1;
    double lambda_min = 0.0;  // inertia eigenvalue bounds used
    double lambda_max = 0.0;
    double c_max = 0.0;  // admissible upper bound for the cross-term constant

    Mat2 W1{}, W2{}, W3{};            // known-model case
    MatN<3> W11{}, W21{};             // adaptive case, z = [z1, d_psi]
    Mat2 W13{}, W23{}, W31{};         // adaptive case
    double beta = 0.0;                // decay rate: lam_min(W3)/(2 lam_max(W2))
    double switch_ratio = 0.0;        // lam_min(W13)/lam_max(W23), adaptive case

    double lam_min_W1 = 0.0, lam_max_W2 = 0.0;
    double lam_min_W13 = 0.0, lam_max_W23 = 0.0, lam_max_W21 = 0.0;
    double lam_min_W31 = 0.0;
};

enum class ControllerCase { Known = 1, Adaptive = 2, RobustAdaptive = 3 };

/// Stability certificate for a switched family of configurations.
struct StabilityCertificate {
    ControllerCase kind = ControllerCase::Known;
    GainSet gains;
    PhiBounds phi_bounds;
    std::vector<SubsystemCertificate> subsystems;
    double tau_d = 0.0;  // minimum dwell time of the whole family

    const SubsystemCertificate& subsystem(int index) const;
    /// Dwell time of the pair (i, j) alone.
    double tau_d_pair(int i, int j) const;
};

/// Eq-style admissibility + W matrices for the known-model controller.
/// Throws InadmissibleC (naming the violated branch) or NonPositiveW.
StabilityCertificate certify_case1(const std::vector<Configuration>& cfgs, const GainSet& gains,
                                   const PhiBoundOptions& phi_opts = {});

/// Same for the adaptive controller (shared by the robust-adaptive case).
StabilityCertificate certify_case2(const std::vector<Configuration>& cfgs, const GainSet& gains,
                                   const PhiBoundOptions& phi_opts = {});

/// Re-entry contraction test: ||z1(t_j)||^2 <= ratio_p * ||z1(t_i)||^2.
bool check_switch_condition(double z1_at_entry, double z1_at_reentry,
                            const StabilityCertificate& cert, int p);

/// Switching-time data for the planner: settling time, settling ball radius,
/// and per-subsystem estimation-error caps.
struct SwitchPlan {
    double tau_s = 0.0;
    double rho = 0.0;
    std::vector<double> z2_bounds;  // indexed by subsystem - 1

    double z2_bound(int subsystem) const;
    void validate() const;
};

/// Bound on |V_i - V_j| at a switch performed inside ||z1|| <= rho.
double jump_bound(const StabilityCertificate& cert, const SwitchPlan& plan, int i, int j);

/// First time t* with series(t) <= rho for all t >= t*. Throws NotSettled.
double settle_time(const std::vector<double>& z1_series, double dt, double rho);

/// z1' W31 z1 for the scalar pair (||e_R||, ||e_Omega||).
double w31_quadratic(const SubsystemCertificate& sub, double e_r_norm, double e_omega_norm);

}  // namespace morph
