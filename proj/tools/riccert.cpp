#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riccert/criteria.hpp"
#include "riccert/harness.hpp"
#include "riccert/problem.hpp"
#include "riccert/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInput = 3;
constexpr int kExitStalled = 4;

constexpr double kVerifyTol = 1e-6;

using riccert::json;

struct Cli {
    std::string command;
    std::string problem_path;
    std::string out_dir;
    std::vector<std::string> theorems;
    std::optional<std::size_t> grid_n;
    std::optional<double> rtol, atol, horizon;
    std::optional<std::string> d_mode;
};

riccert::ProblemConfig load_config(const Cli& cli) {
    auto cfg = riccert::load_problem(cli.problem_path);
    if (!cli.theorems.empty()) cfg.theorems = cli.theorems;
    if (cli.grid_n) cfg.grid_n = *cli.grid_n;
    if (cli.rtol) cfg.rtol = *cli.rtol;
    if (cli.atol) cfg.atol = *cli.atol;
    if (cli.horizon) cfg.horizon = *cli.horizon;
    if (cli.d_mode) cfg.d_mode = *cli.d_mode;
    if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
    if (cfg.theorems.empty()) {
        if (cfg.kind == "riccati")
            cfg.theorems = {"T4.1"};
        else
            cfg.theorems = {"T4.1", "T4.2", "T4.5"};
    }
    return cfg;
}

std::filesystem::path out_path(const riccert::ProblemConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out_dir);
    return std::filesystem::path(cfg.out_dir) / name;
}

std::string file_tag(const std::string& theorem_id) {
    std::string tag = theorem_id;
    for (char& c : tag) {
        if (c == '.') c = '_';
    }
    return tag;
}

void write_sidecar(const riccert::ProblemConfig& cfg, const Cli& cli) {
    json meta;
    meta["command"] = cli.command;
    meta["problem_file"] = cli.problem_path;
    auto now = std::chrono::system_clock::now().time_since_epoch();
    meta["unix_time"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    riccert::write_json_atomic(out_path(cfg, "run_meta.json").string(), meta);
}

int verdict_exit(const std::vector<riccert::Certificate>& certs) {
    bool any_inconclusive = false;
    for (const auto& c : certs) {
        if (c.verdict == riccert::Verdict::refuted) return kExitRefuted;
        if (c.verdict != riccert::Verdict::certified) any_inconclusive = true;
    }
    return any_inconclusive ? kExitInconclusive : kExitOk;
}

std::vector<riccert::Certificate> run_certifications(const riccert::ProblemConfig& cfg) {
    auto opts = riccert::criteria_options(cfg);
    std::vector<riccert::Certificate> certs;
    if (cfg.kind == "riccati") {
        auto problem = riccert::build_riccati_problem(cfg);
        for (const auto& id : cfg.theorems) certs.push_back(riccert::certify(problem, id, opts));
    } else {
        auto sys = riccert::build_system3(cfg);
        certs.push_back(
            riccert::certify_nonoscillation(sys, cfg.t_a, cfg.t_b, cfg.theorems, opts));
    }
    return certs;
}

void print_certificates(const std::vector<riccert::Certificate>& certs) {
    for (const auto& c : certs) {
        std::cout << c.theorem;
        if (!c.via_theorem.empty()) std::cout << " (via " << c.via_theorem << ")";
        std::cout << ": " << riccert::to_string(c.verdict) << "\n";
        for (const auto& ev : c.evidence) {
            std::cout << "  " << (ev.pass ? "pass" : "FAIL") << (ev.advisory ? " (advisory)" : "")
                      << "  " << ev.condition << "  min margin " << ev.min_margin << " at t = "
                      << ev.argmin_t << "\n";
        }
    }
}

int cmd_check(const riccert::ProblemConfig& cfg) {
    auto certs = run_certifications(cfg);
    print_certificates(certs);
    json doc = json::array();
    for (const auto& c : certs) {
        json entry;
        entry["theorem"] = c.theorem;
        entry["evidence"] = json::array();
        for (const auto& ev : c.evidence) entry["evidence"].push_back(riccert::to_json(ev));
        doc.push_back(entry);
    }
    riccert::write_json_atomic(out_path(cfg, "check.json").string(), doc);
    return verdict_exit(certs);
}

int cmd_certify(const riccert::ProblemConfig& cfg) {
    auto certs = run_certifications(cfg);
    print_certificates(certs);
    for (const auto& c : certs)
        riccert::write_json_atomic(
            out_path(cfg, "certificate_" + file_tag(c.theorem) + ".json").string(),
            riccert::to_json(c));
    return verdict_exit(certs);
}

int cmd_integrate(const riccert::ProblemConfig& cfg) {
    auto iopts = riccert::integrate_options(cfg);
    json summary = json::array();
    bool stalled = false;
    if (cfg.kind == "riccati") {
        if (cfg.explicit_ics.empty())
            throw riccert::ProblemError("integrate needs explicit [initial] ics");
        auto problem = riccert::build_riccati_problem(cfg);
        auto field = riccert::assemble_field(problem.co);
        for (std::size_t i = 0; i < cfg.explicit_ics.size(); ++i) {
            const auto& ic = cfg.explicit_ics[i];
            auto traj =
                riccert::integrate(field, {ic.y0, ic.dy0}, cfg.t_a, cfg.horizon, iopts);
            auto csv = out_path(cfg, "trajectory_" + std::to_string(i) + ".csv").string();
            riccert::write_riccati_csv(csv, traj);
            auto esc = riccert::detect_escape(traj, cfg.horizon);
            json entry = riccert::to_json(esc);
            entry["ic"] = {ic.y0, ic.dy0};
            entry["file"] = csv;
            stalled = stalled || traj.status() == riccert::TrajectoryStatus::stalled;
            entry["stalled"] = traj.status() == riccert::TrajectoryStatus::stalled;
            summary.push_back(entry);
            std::cout << "ic (" << ic.y0 << ", " << ic.dy0 << "): reached t = " << traj.t_end()
                      << " -> " << csv << "\n";
        }
    } else {
        if (cfg.system_states.empty())
            throw riccert::ProblemError("integrate needs explicit [initial] states");
        auto sys = riccert::build_system3(cfg);
        auto field = sys.field();
        for (std::size_t i = 0; i < cfg.system_states.size(); ++i) {
            const auto& s0 = cfg.system_states[i];
            auto traj = riccert::integrate(field, {s0[0], s0[1], s0[2]}, cfg.t_a, cfg.horizon,
                                           iopts);
            auto csv = out_path(cfg, "trajectory_" + std::to_string(i) + ".csv").string();
            riccert::write_system_csv(csv, traj);
            json entry = riccert::to_json(riccert::detect_escape(traj, cfg.horizon));
            entry["state"] = s0;
            entry["file"] = csv;
            stalled = stalled || traj.status() == riccert::TrajectoryStatus::stalled;
            entry["stalled"] = traj.status() == riccert::TrajectoryStatus::stalled;
            summary.push_back(entry);
            std::cout << "state " << i << ": reached t = " << traj.t_end() << " -> " << csv
                      << "\n";
        }
    }
    riccert::write_json_atomic(out_path(cfg, "integrate.json").string(), summary);
    return stalled ? kExitStalled : kExitOk;
}

struct VerifyRun {
    std::vector<riccert::Certificate> certs;
    std::vector<riccert::VerificationReport> reports;
    int exit_code = kExitOk;
};

VerifyRun run_verification(const riccert::ProblemConfig& cfg) {
    VerifyRun out;
    out.certs = run_certifications(cfg);
    int verdict = verdict_exit(out.certs);
    if (verdict != kExitOk) {
        out.exit_code = verdict;
        return out;
    }
    auto iopts = riccert::integrate_options(cfg);
    bool all_pass = true;
    if (cfg.kind == "riccati") {
        auto problem = riccert::build_riccati_problem(cfg);
        for (const auto& cert : out.certs) {
            auto ics = cfg.explicit_ics.empty()
                           ? riccert::sample_admissible_ics(cert, cfg.ic_count)
                           : cfg.explicit_ics;
            auto rep =
                riccert::verify_conclusion(problem, cert, ics, cfg.horizon, kVerifyTol, iopts);
            all_pass = all_pass && rep.pass;
            out.reports.push_back(std::move(rep));
        }
    } else {
        auto sys = riccert::build_system3(cfg);
        for (const auto& cert : out.certs) {
            auto ics = cfg.explicit_ics.empty()
                           ? riccert::sample_admissible_ics(cert, cfg.ic_count)
                           : cfg.explicit_ics;
            auto rep = riccert::verify_nonoscillation_conclusion(sys, cert, ics, cfg.horizon,
                                                                 kVerifyTol, iopts);
            all_pass = all_pass && rep.pass;
            out.reports.push_back(std::move(rep));
        }
    }
    out.exit_code = all_pass ? kExitOk : kExitRefuted;
    return out;
}

void print_reports(const VerifyRun& run) {
    for (const auto& rep : run.reports) {
        std::cout << rep.theorem << " verification: " << (rep.pass ? "pass" : "FAIL") << " ("
                  << rep.outcomes.size() << " initial conditions";
        if (rep.stalled_count > 0) std::cout << ", " << rep.stalled_count << " stalled";
        std::cout << ")\n";
    }
}

int cmd_verify(const riccert::ProblemConfig& cfg) {
    auto run = run_verification(cfg);
    print_certificates(run.certs);
    print_reports(run);
    for (const auto& c : run.certs)
        riccert::write_json_atomic(
            out_path(cfg, "certificate_" + file_tag(c.theorem) + ".json").string(),
            riccert::to_json(c));
    for (const auto& rep : run.reports)
        riccert::write_json_atomic(
            out_path(cfg, "verification_" + file_tag(rep.theorem) + ".json").string(),
            riccert::to_json(rep));
    return run.exit_code;
}

int cmd_report(const riccert::ProblemConfig& cfg) {
    auto run = run_verification(cfg);
    json doc;
    doc["kind"] = cfg.kind;
    doc["span"] = {cfg.t_a, cfg.t_b};
    doc["certificates"] = json::array();
    for (const auto& c : run.certs) doc["certificates"].push_back(riccert::to_json(c));
    doc["verifications"] = json::array();
    for (const auto& rep : run.reports) doc["verifications"].push_back(riccert::to_json(rep));
    doc["exit_status"] = run.exit_code;
    riccert::write_json_atomic(out_path(cfg, "report.json").string(), doc);

    std::cout << "Problem: " << cfg.kind << " on [" << cfg.t_a << ", " << cfg.t_b << "]\n";
    print_certificates(run.certs);
    print_reports(run);
    std::cout << "Overall: "
              << (run.exit_code == kExitOk          ? "certified and verified"
                  : run.exit_code == kExitRefuted   ? "refuted or verification failed"
                                                    : "inconclusive")
              << "\n";
    return run.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certification toolkit for second-order Riccati equations and 3-D linear "
                 "systems"};
    app.require_subcommand(1);

    Cli cli;
    for (const char* name : {"check", "certify", "integrate", "verify", "report"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("problem", cli.problem_path, "Problem file (TOML)")->required();
        sub->add_option("--grid", cli.grid_n, "Condition-check grid size");
        sub->add_option("--rtol", cli.rtol, "Integrator relative tolerance");
        sub->add_option("--atol", cli.atol, "Integrator absolute tolerance");
        sub->add_option("--horizon", cli.horizon, "Integration/verification horizon");
        sub->add_option("--out", cli.out_dir, "Output directory");
        sub->add_option("--theorem", cli.theorems, "Theorem id (repeatable)");
        sub->add_option("--d-mode", cli.d_mode, "Discriminant mode")
            ->check(CLI::IsMember({"paper", "corrected"}));
        sub->callback([&cli, name] { cli.command = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = load_config(cli);
        write_sidecar(cfg, cli);
        if (cli.command == "check") return cmd_check(cfg);
        if (cli.command == "certify") return cmd_certify(cfg);
        if (cli.command == "integrate") return cmd_integrate(cfg);
        if (cli.command == "verify") return cmd_verify(cfg);
        return cmd_report(cfg);
    } catch (const riccert::ProblemError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const riccert::ParseError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const riccert::PreconditionError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const riccert::OdeError& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return kExitStalled;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInput;
    }
}
