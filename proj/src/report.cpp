#include "riccert/report.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace riccert {
namespace {

std::string fmt(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

const char* to_string(ICOutcomeKind k) {
    switch (k) {
        case ICOutcomeKind::bounds_held: return "bounds_held";
        case ICOutcomeKind::bounds_violated: return "bounds_violated";
        case ICOutcomeKind::escaped: return "escaped";
        case ICOutcomeKind::stalled: return "stalled";
    }
    return "unknown";
}

}  // namespace

json to_json(const GridEvidence& ev) {
    json j;
    j["condition"] = ev.condition;
    j["min_margin"] = ev.min_margin;
    j["argmin_t"] = ev.argmin_t;
    j["tolerance"] = ev.tolerance;
    j["strict"] = ev.strict;
    j["pass"] = ev.pass;
    j["advisory"] = ev.advisory;
    j["grid_n"] = ev.grid_n;
    return j;
}

json to_json(const Certificate& cert) {
    json j;
    j["theorem"] = cert.theorem;
    j["verdict"] = to_string(cert.verdict);
    j["span"] = {cert.t_a, cert.t_b};
    j["evidence"] = json::array();
    for (const auto& ev : cert.evidence) j["evidence"].push_back(to_json(ev));
    j["constants"] = json::object();
    for (const auto& [k, v] : cert.constants) j["constants"][k] = v;
    if (!cert.m_sequence.empty()) j["m_sequence"] = cert.m_sequence;
    if (cert.admissible) {
        const auto& r = *cert.admissible;
        json a;
        a["t0"] = r.t0;
        a["y_range"] = {r.y_lo, r.y_hi};
        a["lower_fence"] = {{"value", r.lo_val}, {"derivative", r.lo_deriv}};
        a["upper_fence"] = {{"value", r.hi_val}, {"derivative", r.hi_deriv}};
        j["admissible"] = a;
    }
    if (!cert.via_theorem.empty()) j["via_theorem"] = cert.via_theorem;
    if (!cert.notes.empty()) j["notes"] = cert.notes;
    return j;
}

json to_json(const VerificationReport& rep) {
    json j;
    j["theorem"] = rep.theorem;
    j["pass"] = rep.pass;
    j["stalled_count"] = rep.stalled_count;
    if (rep.theorem == "T5.1") {
        j["phi_min"] = rep.phi_min;
        j["lift_max_diff"] = rep.lift_max_diff;
    }
    j["outcomes"] = json::array();
    for (const auto& o : rep.outcomes) {
        json oj;
        oj["ic"] = {o.ic.y0, o.ic.dy0};
        oj["kind"] = to_string(o.kind);
        oj["bound_margin"] = o.bound_margin;
        oj["nu_margin"] = o.nu_margin;
        oj["t_worst"] = o.t_worst;
        oj["admissible"] = o.admissible;
        oj["pass"] = o.pass;
        j["outcomes"].push_back(oj);
    }
    return j;
}

json to_json(const EscapeReport& rep) {
    json j;
    j["classification"] = rep.classification == EscapeReport::Kind::finite_escape
                              ? "finite_escape"
                              : "horizon_reached";
    j["t_est"] = rep.t_est;
    j["norm_at_last_step"] = rep.norm_at_last_step;
    return j;
}

void write_text_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << text;
        if (!out.flush()) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, target);
}

void write_json_atomic(const std::string& path, const json& doc) {
    write_text_atomic(path, doc.dump(2) + "\n");
}

namespace {

void write_csv(const std::string& path, const Trajectory& traj, const char* header,
               std::size_t n) {
    if (n < 2) throw std::invalid_argument("csv sample count must be >= 2");
    std::ostringstream out;
    out << header << '\n';
    double t0 = traj.t_begin(), t1 = traj.t_end();
    State s(traj.dimension());
    for (std::size_t i = 0; i < n; ++i) {
        double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
        traj.sample(t, s);
        out << fmt(t);
        for (double v : s) out << ',' << fmt(v);
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

}  // namespace

void write_riccati_csv(const std::string& path, const Trajectory& traj, std::size_t n) {
    if (traj.dimension() != 2)
        throw std::invalid_argument("expected a 2-component (y, dy) trajectory");
    write_csv(path, traj, "t,y,dy", n);
}

void write_system_csv(const std::string& path, const Trajectory& traj, std::size_t n) {
    if (traj.dimension() != 3)
        throw std::invalid_argument("expected a 3-component (phi, psi, chi) trajectory");
    write_csv(path, traj, "t,phi,psi,chi", n);
}

}  // namespace riccert
