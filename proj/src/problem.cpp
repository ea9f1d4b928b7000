#include "riccert/problem.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace riccert {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// strip an unquoted trailing comment
std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

TomlValue parse_value(const std::string& raw, int lineno);

TomlValue parse_array(const std::string& raw, int lineno) {
    TomlValue v;
    v.kind = TomlValue::Kind::array;
    std::string inner = trim(raw.substr(1, raw.size() - 2));
    if (inner.empty()) return v;
    int depth = 0;
    bool in_str = false;
    std::string cur;
    auto flush = [&] {
        std::string item = trim(cur);
        if (!item.empty()) v.array.push_back(parse_value(item, lineno));
        cur.clear();
    };
    for (char c : inner) {
        if (c == '"') in_str = !in_str;
        if (!in_str) {
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (c == ',' && depth == 0) {
                flush();
                continue;
            }
        }
        cur += c;
    }
    flush();
    return v;
}

TomlValue parse_value(const std::string& raw, int lineno) {
    TomlValue v;
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
        v.kind = TomlValue::Kind::string;
        v.str = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']')
            throw ProblemError("unterminated array at line " + std::to_string(lineno));
        return parse_array(raw, lineno);
    }
    if (raw == "true" || raw == "false") {
        v.kind = TomlValue::Kind::boolean;
        v.boolean = raw == "true";
        return v;
    }
    char* end = nullptr;
    v.num = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0')
        throw ProblemError("malformed value '" + raw + "' at line " + std::to_string(lineno));
    v.kind = TomlValue::Kind::number;
    return v;
}

}  // namespace

std::map<std::string, TomlTable> parse_toml(const std::string& text) {
    std::map<std::string, TomlTable> out;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ProblemError("malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ProblemError("expected key = value at line " + std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string raw = trim(line.substr(eq + 1));
        if (key.empty() || raw.empty())
            throw ProblemError("empty key or value at line " + std::to_string(lineno));
        out[section][key] = parse_value(raw, lineno);
    }
    return out;
}

namespace {

const TomlValue* find(const std::map<std::string, TomlTable>& doc, const std::string& section,
                      const std::string& key) {
    auto s = doc.find(section);
    if (s == doc.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    return &k->second;
}

std::string require_string(const std::map<std::string, TomlTable>& doc,
                           const std::string& section, const std::string& key) {
    const TomlValue* v = find(doc, section, key);
    if (!v || v->kind != TomlValue::Kind::string)
        throw ProblemError("missing or non-string key '" + key + "' in [" + section + "]");
    return v->str;
}

std::vector<double> number_array(const TomlValue& v, const std::string& what) {
    if (v.kind != TomlValue::Kind::array)
        throw ProblemError("'" + what + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& el : v.array) {
        if (el.kind != TomlValue::Kind::number)
            throw ProblemError("'" + what + "' must contain numbers only");
        out.push_back(el.num);
    }
    return out;
}

}  // namespace

ProblemConfig parse_problem(const std::string& text) {
    auto doc = parse_toml(text);
    ProblemConfig cfg;

    cfg.kind = require_string(doc, "problem", "kind");
    if (cfg.kind != "riccati" && cfg.kind != "system3")
        throw ProblemError("kind must be \"riccati\" or \"system3\", got '" + cfg.kind + "'");

    const TomlValue* span = find(doc, "problem", "span");
    if (!span) throw ProblemError("missing key 'span' in [problem]");
    auto sp = number_array(*span, "span");
    if (sp.size() != 2 || !(sp[0] < sp[1]))
        throw ProblemError("span must be [t0, t1] with t0 < t1");
    cfg.t_a = sp[0];
    cfg.t_b = sp[1];
    cfg.horizon = cfg.t_b;

    if (const TomlValue* p = find(doc, "problem", "partition"))
        cfg.partition = number_array(*p, "partition");

    auto coeffs = doc.find("coefficients");
    if (coeffs == doc.end()) throw ProblemError("missing [coefficients] section");
    for (const auto& [k, v] : coeffs->second) {
        if (v.kind != TomlValue::Kind::string)
            throw ProblemError("coefficient '" + k + "' must be a formula string");
        cfg.formulas[k] = v.str;
    }

    if (const TomlValue* ids = find(doc, "theorems", "ids")) {
        if (ids->kind != TomlValue::Kind::array)
            throw ProblemError("'ids' in [theorems] must be an array of strings");
        for (const auto& el : ids->array) {
            if (el.kind != TomlValue::Kind::string)
                throw ProblemError("'ids' must contain strings");
            cfg.theorems.push_back(el.str);
        }
    }
    if (const TomlValue* g = find(doc, "theorems", "gamma")) cfg.gamma = g->num;
    if (const TomlValue* l = find(doc, "theorems", "lambda")) cfg.lambda = l->num;

    if (const TomlValue* v = find(doc, "numerics", "grid_n"))
        cfg.grid_n = static_cast<std::size_t>(v->num);
    if (const TomlValue* v = find(doc, "numerics", "rtol")) cfg.rtol = v->num;
    if (const TomlValue* v = find(doc, "numerics", "atol")) cfg.atol = v->num;
    if (const TomlValue* v = find(doc, "numerics", "condition_tol")) cfg.condition_tol = v->num;
    if (const TomlValue* v = find(doc, "numerics", "horizon")) cfg.horizon = v->num;
    if (const TomlValue* v = find(doc, "numerics", "d_mode")) {
        if (v->kind != TomlValue::Kind::string || (v->str != "paper" && v->str != "corrected"))
            throw ProblemError("d_mode must be \"paper\" or \"corrected\"");
        cfg.d_mode = v->str;
    }

    if (const TomlValue* v = find(doc, "initial", "count"))
        cfg.ic_count = static_cast<int>(v->num);
    if (const TomlValue* v = find(doc, "initial", "ics")) {
        if (v->kind != TomlValue::Kind::array) throw ProblemError("'ics' must be an array");
        for (const auto& pair : v->array) {
            auto p = number_array(pair, "ics entry");
            if (p.size() != 2) throw ProblemError("each ics entry must be [y0, dy0]");
            cfg.explicit_ics.push_back({p[0], p[1]});
        }
    }
    if (const TomlValue* v = find(doc, "initial", "states")) {
        if (v->kind != TomlValue::Kind::array) throw ProblemError("'states' must be an array");
        for (const auto& triple : v->array) {
            auto p = number_array(triple, "states entry");
            if (p.size() != 3)
                throw ProblemError("each states entry must be [phi, psi, chi]");
            cfg.system_states.push_back(p);
        }
    }

    if (auto cmp = doc.find("comparison"); cmp != doc.end()) {
        for (const auto& [k, v] : cmp->second) {
            if (v.kind != TomlValue::Kind::string)
                throw ProblemError("comparison entry '" + k + "' must be a formula string");
            if (k == "y1") cfg.y1_formula = v.str;
            else if (k == "y2") cfg.y2_formula = v.str;
            else if (k.size() == 2 && k.back() == '1') cfg.co1_formulas[k.substr(0, 1)] = v.str;
            else if (k.size() == 2 && k.back() == '2') cfg.co2_formulas[k.substr(0, 1)] = v.str;
            else throw ProblemError("unrecognized comparison key '" + k + "'");
        }
    }

    return cfg;
}

ProblemConfig load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProblemError("cannot open problem file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

namespace {

Expr parse_formula(const std::map<std::string, std::string>& formulas, const std::string& key,
                   const std::string& where) {
    auto it = formulas.find(key);
    if (it == formulas.end())
        throw ProblemError("missing coefficient '" + key + "' in " + where);
    try {
        return parse(it->second);
    } catch (const ParseError& ex) {
        throw ProblemError("coefficient '" + key + "' does not parse: " + ex.what());
    }
}

RiccatiCoefficients parse_coefficients(const std::map<std::string, std::string>& formulas,
                                       const std::string& where) {
    return RiccatiCoefficients::make(
        parse_formula(formulas, "a", where), parse_formula(formulas, "b", where),
        parse_formula(formulas, "c", where), parse_formula(formulas, "d", where),
        parse_formula(formulas, "e", where));
}

}  // namespace

RiccatiProblem build_riccati_problem(const ProblemConfig& cfg) {
    if (cfg.kind != "riccati")
        throw ProblemError("problem kind is '" + cfg.kind + "', expected riccati");
    RiccatiProblem p;
    p.co = parse_coefficients(cfg.formulas, "[coefficients]");
    p.t_a = cfg.t_a;
    p.t_b = cfg.t_b;
    p.partition = cfg.partition;
    if (!cfg.co1_formulas.empty()) p.co1 = parse_coefficients(cfg.co1_formulas, "[comparison]");
    if (!cfg.co2_formulas.empty()) p.co2 = parse_coefficients(cfg.co2_formulas, "[comparison]");
    auto parse_sol = [](const std::string& text, const char* name) {
        try {
            return parse(text);
        } catch (const ParseError& ex) {
            throw ProblemError(std::string(name) + " does not parse: " + ex.what());
        }
    };
    if (cfg.y1_formula) p.y1 = parse_sol(*cfg.y1_formula, "y1");
    if (cfg.y2_formula) p.y2 = parse_sol(*cfg.y2_formula, "y2");
    return p;
}

LinearSystem3 build_system3(const ProblemConfig& cfg) {
    if (cfg.kind != "system3")
        throw ProblemError("problem kind is '" + cfg.kind + "', expected system3");
    LinearSystem3 sys;
    for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k) {
            std::string key = "a" + std::to_string(j) + std::to_string(k);
            sys(j, k) = parse_formula(cfg.formulas, key, "[coefficients]");
        }
    return sys;
}

CriteriaOptions criteria_options(const ProblemConfig& cfg) {
    CriteriaOptions opts;
    opts.grid_n = cfg.grid_n;
    opts.condition_tol = cfg.condition_tol;
    opts.d_mode =
        cfg.d_mode == "paper" ? DiscriminantMode::paper_literal : DiscriminantMode::corrected;
    opts.lambda = cfg.lambda;
    opts.gamma = cfg.gamma;
    opts.integrate = integrate_options(cfg);
    return opts;
}

IntegrateOptions integrate_options(const ProblemConfig& cfg) {
    IntegrateOptions opts;
    opts.rtol = cfg.rtol;
    opts.atol = cfg.atol;
    return opts;
}

}  // namespace riccert
