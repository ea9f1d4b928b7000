#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riccert/criteria.hpp"
#include "riccert/harness.hpp"

namespace riccert {

/// Input errors (missing keys, malformed formulas, bad TOML); mapped to exit
/// code 3 by the CLI.
class ProblemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Minimal TOML reader covering the problem-file subset: [section] headers,
/// key = string | number | boolean | homogeneous array, and # comments.
struct TomlValue {
    enum class Kind { string, number, boolean, array };
    Kind kind = Kind::number;
    std::string str;
    double num = 0.0;
    bool boolean = false;
    std::vector<TomlValue> array;
};

using TomlTable = std::map<std::string, TomlValue>;
std::map<std::string, TomlTable> parse_toml(const std::string& text);

struct ProblemConfig {
    std::string kind;  // "riccati" | "system3"
    std::map<std::string, std::string> formulas;
    double t_a = 0.0, t_b = 0.0;
    std::vector<double> partition;
    std::vector<std::string> theorems;

    std::size_t grid_n = 2001;
    double rtol = 1e-8;
    double atol = 1e-10;
    double condition_tol = 1e-9;
    double horizon = 0.0;  // defaults to t_b
    std::string d_mode = "corrected";

    double gamma = 0.0;
    double lambda = 0.0;

    int ic_count = 20;
    std::vector<InitialCondition> explicit_ics;
    std::vector<std::vector<double>> system_states;  // explicit (phi,psi,chi) states

    // comparison data for the section-3 theorems
    std::optional<std::string> y1_formula, y2_formula;
    std::map<std::string, std::string> co1_formulas, co2_formulas;

    std::string out_dir = ".";
};

ProblemConfig load_problem(const std::string& path);
ProblemConfig parse_problem(const std::string& text);

/// Build the typed problem; parses all formulas (raising ProblemError with
/// the offending key on failure).
RiccatiProblem build_riccati_problem(const ProblemConfig& cfg);
LinearSystem3 build_system3(const ProblemConfig& cfg);

CriteriaOptions criteria_options(const ProblemConfig& cfg);
IntegrateOptions integrate_options(const ProblemConfig& cfg);

}  // namespace riccert
