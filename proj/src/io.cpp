#include "morph/io.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "morph/errors.hpp"

namespace morph {

std::string format_double(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

namespace {

const char* kHeader =
    "t,"
    "R00,R01,R02,R10,R11,R12,R20,R21,R22,"
    "omega_x,omega_y,omega_z,"
    "Rd00,Rd01,Rd02,Rd10,Rd11,Rd12,Rd20,Rd21,Rd22,"
    "omegad_x,omegad_y,omegad_z,"
    "er_x,er_y,er_z,"
    "eomega_x,eomega_y,eomega_z,"
    "ea_x,ea_y,ea_z,"
    "phi,"
    "u_x,u_y,u_z,"
    "ufb_x,ufb_y,ufb_z,"
    "uff_x,uff_y,uff_z,"
    "urob_x,urob_y,urob_z,"
    "hhat_xx,hhat_yy,hhat_zz,hhat_xy,hhat_xz,hhat_yz,"
    "sigma,"
    "V,"
    "pos_x,pos_y,pos_z,"
    "vel_x,vel_y,vel_z,"
    "posd_x,posd_y,posd_z,"
    "flags\n";

void append_vec3(std::string& s, const Vec3& v) {
    s += format_double(v.x);
    s += ',';
    s += format_double(v.y);
    s += ',';
    s += format_double(v.z);
    s += ',';
}

void append_mat3(std::string& s, const Mat3& m) {
    for (double v : m.a) {
        s += format_double(v);
        s += ',';
    }
}

}  // namespace

std::string log_to_csv(const SimLog& log) {
    std::string s = kHeader;
    for (const SimRow& r : log.rows) {
        s += format_double(r.t);
        s += ',';
        append_mat3(s, r.R);
        append_vec3(s, r.omega);
        append_mat3(s, r.R_d);
        append_vec3(s, r.omega_d);
        append_vec3(s, r.e_r);
        append_vec3(s, r.e_omega);
        append_vec3(s, r.e_a);
        s += format_double(r.phi);
        s += ',';
        append_vec3(s, r.u);
        append_vec3(s, r.u_fb);
        append_vec3(s, r.u_ff);
        append_vec3(s, r.u_rob);
        for (std::size_t i = 0; i < 6; ++i) {
            s += format_double(r.hhat[i]);
            s += ',';
        }
        s += std::to_string(r.sigma);
        s += ',';
        s += format_double(r.V);
        s += ',';
        append_vec3(s, r.pos);
        append_vec3(s, r.vel);
        append_vec3(s, r.pos_d);
        s += std::to_string(r.flags);
        s += '\n';
    }
    return s;
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

void write_log_csv(const SimLog& log, const std::string& path) { write_text(log_to_csv(log), path); }

std::string events_to_json(const SimLog& log) {
    nlohmann::json j;
    j["dt"] = log.dt;
    j["total_steps"] = log.total_steps;
    j["reprojections"] = log.reprojections;
    j["estimator_substeps"] = log.estimator_substeps;
    j["min_consistency_eig"] = log.min_consistency_eig;
    j["max_phi"] = log.max_phi;
    j["switches"] = nlohmann::json::array();
    for (const SwitchEvent& e : log.switches) {
        nlohmann::json s;
        s["t"] = e.t;
        s["from"] = e.from;
        s["to"] = e.to;
        s["z1"] = e.z1;
        s["settled"] = e.settled;
        s["dwell"] = e.dwell;
        if (e.switch_condition_ok.has_value()) {
            s["switch_condition_ok"] = *e.switch_condition_ok;
            s["z1_previous_entry"] = e.z1_previous_entry;
        }
        s["v_from"] = e.v_from;
        s["v_to"] = e.v_to;
        s["jump"] = e.jump;
        s["jump_bound"] = e.jump_bound;
        s["jump_within_bound"] = e.jump_within_bound;
        j["switches"].push_back(s);
    }
    j["violations"] = nlohmann::json::array();
    for (const Violation& v : log.violations)
        j["violations"].push_back({{"t", v.t}, {"kind", v.kind}, {"detail", v.detail}});
    return j.dump(2);
}

void write_events_json(const SimLog& log, const std::string& path) {
    write_text(events_to_json(log), path);
}

namespace {

nlohmann::json mat_json(const double* data, std::size_t n) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) a.push_back(data[i]);
    return a;
}

}  // namespace

std::string certificate_to_json(const StabilityCertificate& cert) {
    nlohmann::json j;
    j["case"] = cert.kind == ControllerCase::Known ? 1 : 2;
    j["b1"] = cert.phi_bounds.b1;
    j["b2"] = cert.phi_bounds.b2;
    j["tau_d"] = cert.tau_d;
    j["gains"] = {{"k_r", cert.gains.k_r},
                  {"k_omega", cert.gains.k_omega},
                  {"c", cert.gains.c},
                  {"g", {cert.gains.g.x, cert.gains.g.y, cert.gains.g.z}}};
    j["subsystems"] = nlohmann::json::array();
    for (const auto& s : cert.subsystems) {
        nlohmann::json o;
        o["index"] = s.index;
        o["lambda_min"] = s.lambda_min;
        o["lambda_max"] = s.lambda_max;
        o["c_max"] = s.c_max;
        o["beta"] = s.beta;
        if (cert.kind == ControllerCase::Known) {
            o["W1"] = mat_json(s.W1.a.data(), 4);
            o["W2"] = mat_json(s.W2.a.data(), 4);
            o["W3"] = mat_json(s.W3.a.data(), 4);
            o["lam_min_W1"] = s.lam_min_W1;
            o["lam_max_W2"] = s.lam_max_W2;
        } else {
            o["W11"] = mat_json(s.W11.a.data(), 9);
            o["W13"] = mat_json(s.W13.a.data(), 4);
            o["W23"] = mat_json(s.W23.a.data(), 4);
            o["W31"] = mat_json(s.W31.a.data(), 4);
            o["W21"] = mat_json(s.W21.a.data(), 9);
            o["switch_ratio"] = s.switch_ratio;
            o["lam_min_W13"] = s.lam_min_W13;
            o["lam_max_W23"] = s.lam_max_W23;
            o["lam_max_W21"] = s.lam_max_W21;
            o["lam_min_W31"] = s.lam_min_W31;
        }
        j["subsystems"].push_back(o);
    }
    if (cert.subsystems.size() >= 2) {
        j["tau_d_pairs"] = nlohmann::json::array();
        for (std::size_t a = 0; a < cert.subsystems.size(); ++a)
            for (std::size_t b = a + 1; b < cert.subsystems.size(); ++b) {
                const int ia = cert.subsystems[a].index, ib = cert.subsystems[b].index;
                j["tau_d_pairs"].push_back(
                    {{"i", ia}, {"j", ib}, {"tau_d", cert.tau_d_pair(ia, ib)}});
            }
    }
    return j.dump(2);
}

std::string plot_script(const std::string& csv_name) {
    std::string s;
    s += "#!/usr/bin/env python3\n";
    s += "import csv, sys\n";
    s += "import matplotlib\n";
    s += "matplotlib.use('Agg')\n";
    s += "import matplotlib.pyplot as plt\n\n";
    s += "path = sys.argv[1] if len(sys.argv) > 1 else '" + csv_name + "'\n";
    s += "rows = list(csv.DictReader(open(path)))\n";
    s += "t = [float(r['t']) for r in rows]\n";
    s += "fig, ax = plt.subplots(2, 2, figsize=(12, 8))\n";
    s += "for k, c in zip(('x', 'y', 'z'), ('r', 'g', 'b')):\n";
    s += "    ax[0][0].plot(t, [float(r['omega_' + k]) for r in rows], c + '-', lw=0.8)\n";
    s += "    ax[0][0].plot(t, [float(r['omegad_' + k]) for r in rows], c + '--', lw=0.8)\n";
    s += "    ax[0][1].plot(t, [float(r['er_' + k]) for r in rows], c + '-', lw=0.8)\n";
    s += "ax[0][0].set_title('angular velocity tracking (solid) vs reference (dashed)')\n";
    s += "ax[0][1].set_title('attitude error e_R')\n";
    s += "for k in ('xx', 'yy', 'zz', 'xy', 'xz', 'yz'):\n";
    s += "    ax[1][0].plot(t, [float(r['hhat_' + k]) for r in rows], lw=0.8, label=k)\n";
    s += "ax[1][0].legend(fontsize=7)\n";
    s += "ax[1][0].set_title('inertia estimates (kg m^2)')\n";
    s += "u = [(float(r['u_x'])**2 + float(r['u_y'])**2 + float(r['u_z'])**2) ** 0.5 for r in rows]\n";
    s += "ax[1][1].plot(t, u, 'k-', lw=0.8)\n";
    s += "ax[1][1].set_title('control effort |u| (N m)')\n";
    s += "for a in ax.flat:\n";
    s += "    a.set_xlabel('t (s)')\n";
    s += "    a.grid(alpha=0.3)\n";
    s += "sw = [float(r['t']) for r in rows if int(r['flags']) & 1]\n";
    s += "for a in ax.flat:\n";
    s += "    for x in sw:\n";
    s += "        a.axvline(x, color='m', ls=':', lw=0.8)\n";
    s += "fig.tight_layout()\n";
    s += "out = path.rsplit('.', 1)[0] + '.png'\n";
    s += "fig.savefig(out, dpi=150)\n";
    s += "print('wrote', out)\n";
    return s;
}

}  // namespace morph
