#include "morph/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "morph/errors.hpp"
#include "morph/rng.hpp"
#include "morph/scan.hpp"

namespace morph {

double phi_ratio_sample(const GainSet& gains, std::uint64_t seed, std::uint64_t index) {
    for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
        const std::uint64_t k = index + 0x9e3779b9ull * attempt;
        const double u = counter_uniform(seed, k, 11);
        const double v = counter_uniform(seed, k, 12);
        const double w = counter_uniform(seed, k, 13);
        const double z = 2.0 * u - 1.0;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double ph = 2.0 * M_PI * v;
        const double theta = M_PI * w;
        if (theta < 1e-4) continue;
        const Mat3 R = exp_so3(theta * Vec3{r * std::cos(ph), r * std::sin(ph), z});
        const double phi = error_function(R, Mat3::identity(), gains);
        if (phi >= 2.0) continue;
        AttitudeErrors e = attitude_errors(R, {}, Mat3::identity(), {}, {}, gains);
        const double er2 = norm2(e.e_r);
        if (er2 <= 0.0) continue;
        return phi / er2;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

PhiBounds certify_phi_bounds(const GainSet& gains, const PhiBoundOptions& opts) {
    auto sample = [&](std::uint64_t i) { return phi_ratio_sample(gains, opts.seed, i); };
    const scan::MinMax mm = opts.parallel ? scan::minmax_parallel(opts.samples, sample)
                                          : scan::minmax_serial(opts.samples, sample);
    if (!std::isfinite(mm.min) || !std::isfinite(mm.max))
        throw Error("phi-bound certification produced no valid samples");
    PhiBounds b;
    b.b1 = mm.min / (1.0 + opts.margin);
    b.b2 = mm.max * (1.0 + opts.margin);

    auto violates = [&](std::uint64_t i) {
        const double ratio = phi_ratio_sample(gains, opts.verify_seed, i);
        if (std::isnan(ratio)) return false;
        return ratio < b.b1 || ratio > b.b2;
    };
    const std::uint64_t bad = opts.parallel ? scan::count_parallel(opts.verify_samples, violates)
                                            : scan::count_serial(opts.verify_samples, violates);
    if (bad != 0)
        throw Error("phi-bound verification found " + std::to_string(bad) + " violations");
    return b;
}

namespace {

Mat2 sym2(double a00, double a01, double a11) {
    Mat2 m;
    m(0, 0) = a00;
    m(0, 1) = m(1, 0) = a01;
    m(1, 1) = a11;
    return m;
}

void require_pd(const Mat2& m, const std::string& name) {
    const auto ev = sym_eigenvalues(m);
    if (!(ev[0] > 0.0)) throw NonPositiveW(name + " is not positive definite");
}

struct CaseMax {
    double value;
    const char* branch;
};

CaseMax c1_max(const GainSet& g, double lam_min, double lam_max, const PhiBounds& b) {
    const double tr_g = g.tr_G();
    const double s2 = std::sqrt(2.0);
    const CaseMax branches[4] = {
        {s2 * g.k_omega / tr_g, "sqrt(2) k_omega / tr G"},
        {4.0 * s2 * g.k_r * g.k_omega * lam_min * lam_min /
             (s2 * g.k_omega * g.k_omega * lam_max + 4.0 * g.k_r * lam_min * lam_min * tr_g),
         "gyroscopic coupling branch"},
        {std::sqrt(b.b1 * g.k_r * lam_min), "sqrt(b1 k_R lambda_min)"},
        {std::sqrt(b.b2 * g.k_r * lam_max), "sqrt(b2 k_R lambda_max)"},
    };
    CaseMax best = branches[0];
    for (const auto& br : branches)
        if (br.value < best.value) best = br;
    return best;
}

CaseMax c2_max(const GainSet& g, double lam_min, double lam_max, const PhiBounds& b) {
    const double tr_g = g.tr_G();
    const double s2 = std::sqrt(2.0);
    const CaseMax branches[3] = {
        {std::sqrt(2.0 * b.b1 * g.k_r * lam_min / (lam_max * lam_max)),
         "sqrt(2 b1 k_R lambda_min / lambda_max^2)"},
        {s2 * g.k_omega / (lam_max * tr_g), "sqrt(2) k_omega / (lambda_max tr G)"},
        {4.0 * g.k_r * g.k_omega /
             (g.k_omega * g.k_omega + (4.0 / s2) * g.k_r * lam_max * tr_g),
         "W31 definiteness branch"},
    };
    CaseMax best = branches[0];
    for (const auto& br : branches)
        if (br.value < best.value) best = br;
    return best;
}

Mat2 w31_matrix(const GainSet& g, double lam_max) {
    return sym2(g.c * g.k_r, -0.5 * g.c * g.k_omega,
                g.k_omega - (g.c / std::sqrt(2.0)) * lam_max * g.tr_G());
}

MatN<3> augment(const Mat2& m) {
    MatN<3> r;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) r(i, j) = m(i, j);
    r(2, 2) = 1.0;
    return r;
}

StabilityCertificate certify(const std::vector<Configuration>& cfgs, const GainSet& gains,
                             const PhiBoundOptions& phi_opts, ControllerCase kind) {
    if (cfgs.empty()) throw ConfigInvalid("certificate needs at least one configuration");
    gains.validate();
    for (const auto& c : cfgs) c.validate();

    StabilityCertificate cert;
    cert.kind = kind;
    cert.gains = gains;
    cert.phi_bounds = certify_phi_bounds(gains, phi_opts);
    const PhiBounds& b = cert.phi_bounds;

    double sum_beta = 0.0;
    double log_ratio = 0.0;
    for (const auto& cfg : cfgs) {
        SubsystemCertificate s;
        s.index = cfg.index;
        s.lambda_min = cfg.lambda_min;
        s.lambda_max = cfg.lambda_max;
        const double lm = cfg.lambda_min, lM = cfg.lambda_max;
        const double kr = gains.k_r, c = gains.c;

        if (kind == ControllerCase::Known) {
            const CaseMax cm = c1_max(gains, lm, lM, b);
            s.c_max = cm.value;
            if (!(c < cm.value))
                throw InadmissibleC("c = " + std::to_string(c) + " is not below the subsystem " +
                                    std::to_string(cfg.index) + " admissible bound " +
                                    std::to_string(cm.value) + " (" + cm.branch + ")");
            s.W1 = sym2(b.b1 * kr, -0.5 * c * lM, 0.5 * lm);
            s.W2 = sym2(b.b2 * kr, 0.5 * c * lM, 0.5 * lM);
            s.W3 = w31_matrix(gains, lM);
            require_pd(s.W1, "W1");
            require_pd(s.W2, "W2");
            require_pd(s.W3, "W3");
            s.lam_min_W1 = sym_eigenvalues(s.W1)[0];
            s.lam_max_W2 = sym_eigenvalues(s.W2)[1];
            s.beta = sym_eigenvalues(s.W3)[0] / (2.0 * s.lam_max_W2);
            sum_beta += s.beta;
            log_ratio += std::log(s.lam_max_W2 / s.lam_min_W1);
        } else {
            const CaseMax cm = c2_max(gains, lm, lM, b);
            s.c_max = cm.value;
            if (!(c < cm.value))
                throw InadmissibleC("c = " + std::to_string(c) + " is not below the subsystem " +
                                    std::to_string(cfg.index) + " admissible bound " +
                                    std::to_string(cm.value) + " (" + cm.branch + ")");
            s.W13 = sym2(b.b1 * kr, 0.5 * c * lM, 0.5 * lm);
            s.W23 = sym2(0.5 * b.b2 * kr, 0.25 * c * lm, 0.25 * lM);
            s.W31 = w31_matrix(gains, lM);
            s.W11 = augment(s.W13);
            s.W21 = augment(sym2(b.b2 * kr, 0.5 * c * lm, 0.5 * lM));
            require_pd(s.W13, "W13");
            require_pd(s.W23, "W23");
            require_pd(s.W31, "W31");
            s.lam_min_W13 = sym_eigenvalues(s.W13)[0];
            s.lam_max_W23 = sym_eigenvalues(s.W23)[1];
            s.lam_min_W31 = sym_eigenvalues(s.W31)[0];
            s.lam_max_W21 = sym_eigenvalues(s.W21)[2];
            s.switch_ratio = s.lam_min_W13 / s.lam_max_W23;
            if (s.switch_ratio > 1.0)
                throw NonPositiveW("switch ratio above one for subsystem " + std::to_string(cfg.index));
            s.beta = s.lam_min_W31 / (2.0 * s.lam_max_W23);
            sum_beta += s.beta;
            log_ratio += std::log(s.lam_max_W23 / s.lam_min_W13);
        }
        cert.subsystems.push_back(s);
    }
    cert.tau_d = log_ratio / (2.0 * sum_beta);
    return cert;
}

}  // namespace

StabilityCertificate certify_case1(const std::vector<Configuration>& cfgs, const GainSet& gains,
                                   const PhiBoundOptions& phi_opts) {
    return certify(cfgs, gains, phi_opts, ControllerCase::Known);
}

StabilityCertificate certify_case2(const std::vector<Configuration>& cfgs, const GainSet& gains,
                                   const PhiBoundOptions& phi_opts) {
    return certify(cfgs, gains, phi_opts, ControllerCase::Adaptive);
}

const SubsystemCertificate& StabilityCertificate::subsystem(int index) const {
    for (const auto& s : subsystems)
        if (s.index == index) return s;
    throw Error("certificate has no subsystem " + std::to_string(index));
}

double StabilityCertificate::tau_d_pair(int i, int j) const {
    const SubsystemCertificate& a = subsystem(i);
    const SubsystemCertificate& b = subsystem(j);
    const bool known = kind == ControllerCase::Known;
    const double la = known ? a.lam_max_W2 : a.lam_max_W23;
    const double lb = known ? b.lam_max_W2 : b.lam_max_W23;
    const double ma = known ? a.lam_min_W1 : a.lam_min_W13;
    const double mb = known ? b.lam_min_W1 : b.lam_min_W13;
    return std::log((la * lb) / (ma * mb)) / (2.0 * (a.beta + b.beta));
}

bool check_switch_condition(double z1_at_entry, double z1_at_reentry,
                            const StabilityCertificate& cert, int p) {
    const SubsystemCertificate& s = cert.subsystem(p);
    return z1_at_reentry * z1_at_reentry <= s.switch_ratio * z1_at_entry * z1_at_entry;
}

double SwitchPlan::z2_bound(int subsystem) const {
    if (subsystem < 1 || static_cast<std::size_t>(subsystem) > z2_bounds.size())
        throw Error("switch plan has no z2 bound for subsystem " + std::to_string(subsystem));
    return z2_bounds[static_cast<std::size_t>(subsystem - 1)];
}

void SwitchPlan::validate() const {
    if (!(tau_s >= 0.0) || !(rho > 0.0)) throw ConfigInvalid("switch plan needs tau_s >= 0 and rho > 0");
    for (double z : z2_bounds)
        if (z < 0.0) throw ConfigInvalid("z2 bounds must be non-negative");
}

double jump_bound(const StabilityCertificate& cert, const SwitchPlan& plan, int i, int j) {
    const SubsystemCertificate& a = cert.subsystem(i);
    const SubsystemCertificate& b = cert.subsystem(j);
    return (a.lam_max_W21 + b.lam_max_W21) * plan.rho + a.lam_max_W21 * plan.z2_bound(i) +
           b.lam_max_W21 * plan.z2_bound(j);
}

double settle_time(const std::vector<double>& z1_series, double dt, double rho) {
    if (z1_series.empty()) throw NotSettled("empty series");
    std::size_t first_settled = z1_series.size();
    for (std::size_t k = z1_series.size(); k-- > 0;) {
        if (z1_series[k] > rho) break;
        first_settled = k;
    }
    if (first_settled == z1_series.size())
        throw NotSettled("z1 never stays within rho before the horizon ends");
    return static_cast<double>(first_settled) * dt;
}

double w31_quadratic(const SubsystemCertificate& sub, double e_r_norm, double e_omega_norm) {
    const Mat2& W = sub.W31;
    return W(0, 0) * e_r_norm * e_r_norm + 2.0 * W(0, 1) * e_r_norm * e_omega_norm +
           W(1, 1) * e_omega_norm * e_omega_norm;
}

}  // namespace morph
