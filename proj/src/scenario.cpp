#include "nlrd/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nlrd {

namespace {

struct Entry {
    std::string key;
    std::string value;
    int line;
};

using Sections = std::map<std::string, std::vector<Entry>>;

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    std::ostringstream ss;
    ss << name << ":" << line << ": " << msg;
    throw ScenarioError(ss.str());
}

Sections tokenize(const std::string& text, const std::string& name) {
    Sections out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail(name, lineno, "malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (!out.count(section)) out[section] = {};
            continue;
        }
        const size_t eq = t.find('=');
        if (eq == std::string::npos) fail(name, lineno, "expected key = value");
        if (section.empty()) fail(name, lineno, "key outside any section");
        out[section].push_back({trim(t.substr(0, eq)), trim(t.substr(eq + 1)), lineno});
    }
    return out;
}

double parse_num(const std::string& name, const Entry& e) {
    try {
        size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(name, e.line, "cannot parse number '" + e.value + "' for key '" + e.key + "'");
    }
}

long parse_int(const std::string& name, const Entry& e) {
    try {
        size_t pos = 0;
        const long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(name, e.line, "cannot parse integer '" + e.value + "' for key '" + e.key + "'");
    }
}

bool parse_flag(const std::string& name, const Entry& e) {
    if (e.value == "on" || e.value == "true" || e.value == "1") return true;
    if (e.value == "off" || e.value == "false" || e.value == "0") return false;
    fail(name, e.line, "expected on/off for key '" + e.key + "'");
}

std::vector<double> parse_list(const std::string& name, const Entry& e) {
    std::vector<double> out;
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            fail(name, e.line, "cannot parse list item '" + item + "'");
        }
    }
    return out;
}

// value forms: "<number>", "<ref>" or "<ref>*<factor>"
ScaledValue parse_scaled(const std::string& name, const Entry& e, const std::string& ref) {
    ScaledValue sv;
    if (e.value.rfind(ref, 0) == 0) {
        sv.relative = true;
        std::string rest = trim(e.value.substr(ref.size()));
        if (rest.empty()) {
            sv.value = 1.0;
        } else if (rest[0] == '*') {
            try {
                sv.value = std::stod(trim(rest.substr(1)));
            } catch (...) {
                fail(name, e.line, "cannot parse factor in '" + e.value + "'");
            }
        } else {
            fail(name, e.line, "expected '" + ref + "' or '" + ref + "*<factor>'");
        }
        if (!(sv.value > 0.0)) fail(name, e.line, "factor must be positive");
    } else {
        sv.relative = false;
        sv.value = parse_num(name, e);
    }
    return sv;
}

// "name" or "name(k=v, k=v)" entries separated by ';'
std::vector<AnalysisSpec> parse_analyses(const std::string& name, const Entry& e) {
    std::vector<AnalysisSpec> out;
    std::istringstream in(e.value);
    std::string item;
    while (std::getline(in, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        AnalysisSpec spec;
        const size_t paren = item.find('(');
        if (paren == std::string::npos) {
            spec.name = item;
        } else {
            if (item.back() != ')') fail(name, e.line, "malformed analysis '" + item + "'");
            spec.name = trim(item.substr(0, paren));
            std::istringstream args(item.substr(paren + 1, item.size() - paren - 2));
            std::string kv;
            while (std::getline(args, kv, ',')) {
                kv = trim(kv);
                if (kv.empty()) continue;
                const size_t eq = kv.find('=');
                if (eq == std::string::npos)
                    fail(name, e.line, "analysis parameter '" + kv + "' needs key=value");
                try {
                    spec.params[trim(kv.substr(0, eq))] = std::stod(trim(kv.substr(eq + 1)));
                } catch (...) {
                    fail(name, e.line, "cannot parse analysis parameter '" + kv + "'");
                }
            }
        }
        out.push_back(std::move(spec));
    }
    return out;
}

bool contains_norm(const std::vector<double>& norms, double k) {
    for (double v : norms)
        if (std::abs(v - k) <= 1e-12 * std::max(1.0, k)) return true;
    return false;
}

void validate(Scenario& s, const std::string& name, int line_hint) {
    auto reject = [&](const std::string& msg) { fail(name, line_hint, msg); };

    if (s.dim < 3) reject("requires n >= 3");
    if (!(s.radius > 0.0)) reject("radius must be positive");
    if (s.count < 16) reject("count must be >= 16");
    if (!s.alpha_critical && !(s.alpha > 1.0)) reject("alpha must exceed 1 (or 'critical')");
    if (!s.m_cap.relative && !(s.m_cap.value > 0.0)) reject("M0 must be positive");

    if (s.initial_kind != "gaussian" && s.initial_kind != "bump" && s.initial_kind != "singular")
        reject("initial kind must be gaussian, bump or singular");
    if (s.initial_kind == "gaussian") {
        if (!(s.sigma > 0.0)) reject("sigma must be positive");
        if (s.initial_mass.value < 0.0) reject("gaussian initial data needs a mass");
    }
    if (s.initial_kind == "bump") {
        if (!(s.height >= 0.0)) reject("height must be non-negative");
        if (!(s.width > 0.0) || !(s.width < s.radius)) reject("width must lie in (0, R)");
    }
    if (s.initial_kind == "singular") {
        if (!(s.beta > 0.0) || !(s.beta < s.dim)) reject("beta must lie in (0, n)");
        if (!(s.cutoff > 0.0) || !(s.cutoff < s.radius)) reject("cutoff must lie in (0, R)");
    }

    // standing assumption for damped runs: initial mass below the carrying capacity
    if (s.damping && s.initial_mass.value >= 0.0) {
        if (s.initial_mass.relative && !(s.initial_mass.value < 1.0))
            reject("damping-on runs require initial mass m0 < M0 (relative factor must be < 1)");
        if (!s.initial_mass.relative && !s.m_cap.relative &&
            !(s.initial_mass.value < s.m_cap.value))
            reject("damping-on runs require initial mass m0 < M0");
    }

    if (s.solver.sample_dt < 0.0) reject("sample_dt must be >= 0");
    for (double t : s.snapshot_times) {
        if (!(s.solver.sample_dt > 0.0))
            reject("snapshots_at requires sample_dt > 0");
        const double q = t / s.solver.sample_dt;
        if (t < 0.0 || t > s.solver.t_end || std::abs(q - std::round(q)) > 1e-9)
            reject("snapshot times must be multiples of sample_dt within [0, t_end]");
    }
    if (!s.snapshot_times.empty()) s.solver.store_snapshots = true;

    const double alpha = s.resolved_alpha();
    for (const auto& a : s.analyses) {
        auto need = [&](const char* p) {
            if (!a.params.count(p))
                reject("analysis '" + a.name + "' needs parameter '" + p + "'");
        };
        if (a.name == "decay_fit") {
            need("k");
            if (!contains_norm(s.norms, a.params.at("k")))
                reject("decay_fit needs its k among the recorded norms");
        } else if (a.name == "mass_gap") {
            if (!contains_norm(s.norms, alpha))
                reject("mass_gap needs the L^alpha norm among the recorded norms");
        } else if (a.name == "l2_envelope") {
            if (!contains_norm(s.norms, 2.0))
                reject("l2_envelope needs the L^2 norm among the recorded norms");
        } else if (a.name == "heat_asym") {
            if (!s.solver.store_snapshots)
                reject("heat_asym needs store_snapshots = on");
            if (!(s.solver.sample_dt > 0.0))
                reject("heat_asym needs sample_dt > 0 for matched time grids");
        } else if (a.name == "mass_ode" || a.name == "contractivity" || a.name == "blowup") {
            // no required parameters
        } else {
            reject("unknown analysis '" + a.name + "'");
        }
    }
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& name) {
    const Sections sec = tokenize(text, name);
    Scenario s;
    s.name = name;

    static const std::map<std::string, std::vector<std::string>> kKnown = {
        {"grid", {"n", "radius", "count"}},
        {"equation", {"alpha", "M0", "damping"}},
        {"initial", {"kind", "mass", "sigma", "height", "width", "beta", "cutoff"}},
        {"solver",
         {"dt_init", "dt_min", "dt_max", "dt_growth", "safety", "t_end", "blowup_sup",
          "record_every", "sample_dt", "store_snapshots", "expect"}},
        {"diagnostics", {"norms", "analyses"}},
        {"output", {"dir", "snapshots_at"}},
    };

    int last_line = 1;
    for (const auto& [section, entries] : sec) {
        const auto known = kKnown.find(section);
        if (known == kKnown.end())
            fail(name, entries.empty() ? 1 : entries.front().line, "unknown section [" + section + "]");
        for (const Entry& e : entries) {
            last_line = std::max(last_line, e.line);
            if (std::find(known->second.begin(), known->second.end(), e.key) == known->second.end())
                fail(name, e.line, "unknown key '" + e.key + "' in [" + section + "]");

            if (section == "grid") {
                if (e.key == "n") s.dim = static_cast<int>(parse_int(name, e));
                else if (e.key == "radius") s.radius = parse_num(name, e);
                else if (e.key == "count") s.count = static_cast<int>(parse_int(name, e));
            } else if (section == "equation") {
                if (e.key == "alpha") {
                    if (e.value == "critical") s.alpha_critical = true;
                    else s.alpha = parse_num(name, e);
                } else if (e.key == "M0") {
                    s.m_cap = parse_scaled(name, e, "auto");
                } else if (e.key == "damping") {
                    s.damping = parse_flag(name, e);
                }
            } else if (section == "initial") {
                if (e.key == "kind") s.initial_kind = e.value;
                else if (e.key == "mass") s.initial_mass = parse_scaled(name, e, "M0");
                else if (e.key == "sigma") s.sigma = parse_num(name, e);
                else if (e.key == "height") s.height = parse_num(name, e);
                else if (e.key == "width") s.width = parse_num(name, e);
                else if (e.key == "beta") s.beta = parse_num(name, e);
                else if (e.key == "cutoff") s.cutoff = parse_num(name, e);
            } else if (section == "solver") {
                if (e.key == "dt_init") s.solver.dt_init = parse_num(name, e);
                else if (e.key == "dt_min") s.solver.dt_min = parse_num(name, e);
                else if (e.key == "dt_max") s.solver.dt_max = parse_num(name, e);
                else if (e.key == "dt_growth") s.solver.dt_growth = parse_num(name, e);
                else if (e.key == "safety") s.solver.safety = parse_num(name, e);
                else if (e.key == "t_end") s.solver.t_end = parse_num(name, e);
                else if (e.key == "blowup_sup") s.solver.blowup_sup = parse_num(name, e);
                else if (e.key == "record_every") s.solver.record_every = static_cast<int>(parse_int(name, e));
                else if (e.key == "sample_dt") s.solver.sample_dt = parse_num(name, e);
                else if (e.key == "store_snapshots") s.solver.store_snapshots = parse_flag(name, e);
                else if (e.key == "expect") {
                    if (e.value == "completed") s.expected = Outcome::completed;
                    else if (e.value == "blowup") s.expected = Outcome::blowup;
                    else fail(name, e.line, "expect must be completed or blowup");
                }
            } else if (section == "diagnostics") {
                if (e.key == "norms") s.norms = parse_list(name, e);
                else if (e.key == "analyses") s.analyses = parse_analyses(name, e);
            } else if (section == "output") {
                if (e.key == "dir") s.out_dir = e.value;
                else if (e.key == "snapshots_at") s.snapshot_times = parse_list(name, e);
            }
        }
    }

    validate(s, name, last_line);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

namespace {

Scenario base_critical() {
    Scenario s;
    s.dim = 3;
    s.radius = 60.0;
    s.count = 512;
    s.alpha_critical = true;
    s.m_cap = {true, 0.5};  // half the estimated critical mass
    s.damping = true;
    s.initial_kind = "gaussian";
    s.sigma = 0.25;
    s.initial_mass = {true, 0.9};  // 0.9 M0
    s.solver.dt_init = 1e-4;
    s.solver.dt_min = 1e-10;
    s.solver.dt_max = 0.05;
    s.solver.dt_growth = 1.25;
    s.solver.safety = 0.5;
    s.solver.t_end = 100.0;
    s.solver.blowup_sup = 1e8;
    s.solver.sample_dt = 0.25;
    return s;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"critical-below-threshold", "fujita-control", "asymptotics", "singular-data",
            "subcritical"};
}

std::string preset_description(const std::string& name) {
    if (name == "critical-below-threshold")
        return "alpha = 1+2/n, M0 below the estimated threshold: global run with decay fits and mass laws";
    if (name == "fujita-control")
        return "same data with the damping off (u_t = Du + M0 u^alpha): finite-time blow-up expected";
    if (name == "asymptotics")
        return "critical run compared against the heat semigroup: sup-difference decay fit";
    if (name == "singular-data")
        return "L1-only initial data (r^-beta): hyper/ultra-contractive decay rates";
    if (name == "subcritical")
        return "1 < alpha < 1+2/n with large M0: uniformly bounded global run";
    throw ScenarioError("unknown preset '" + name + "'");
}

bool is_preset(const std::string& name) {
    const auto names = preset_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

Scenario preset(const std::string& name) {
    const double alpha3 = 1.0 + 2.0 / 3.0;
    if (name == "critical-below-threshold") {
        Scenario s = base_critical();
        s.name = name;
        s.norms = {alpha3, 2.0, 4.0};
        s.analyses = {
            {"decay_fit", {{"k", 2.0}, {"t_lo", 10.0}, {"t_hi", 100.0}, {"tol", 0.15}}},
            {"mass_ode", {}},
            {"mass_gap", {}},
            {"l2_envelope", {}},
        };
        s.snapshot_times = {0.0, 1.0, 10.0, 100.0};
        s.out_dir = "out/critical-below-threshold";
        validate(s, name, 0);
        return s;
    }
    if (name == "fujita-control") {
        Scenario s = base_critical();
        s.name = name;
        s.damping = false;
        s.solver.t_end = 500.0;
        s.expected = Outcome::blowup;
        s.norms = {2.0};
        s.analyses = {{"blowup", {}}};
        s.out_dir = "out/fujita-control";
        validate(s, name, 0);
        return s;
    }
    if (name == "asymptotics") {
        Scenario s = base_critical();
        s.name = name;
        s.solver.sample_dt = 0.5;
        s.solver.store_snapshots = true;
        s.norms = {alpha3, 2.0};
        s.analyses = {
            {"heat_asym",
             {{"p", 3.0}, {"r", 2.5}, {"t_lo", 5.0}, {"t_hi", 60.0}, {"tol", 0.1}}},
        };
        s.out_dir = "out/asymptotics";
        validate(s, name, 0);
        return s;
    }
    if (name == "singular-data") {
        Scenario s;
        s.name = name;
        s.dim = 3;
        s.radius = 8.0;
        s.count = 512;
        s.alpha_critical = true;
        s.m_cap = {true, 0.5};
        s.damping = true;
        s.initial_kind = "singular";
        s.beta = 2.5;
        s.cutoff = 1.0;
        s.initial_mass = {true, 0.9};
        s.solver.dt_init = 1e-6;
        s.solver.dt_min = 1e-12;
        s.solver.dt_max = 0.02;
        s.solver.dt_growth = 1.05;
        s.solver.safety = 0.5;
        s.solver.t_end = 100.0;
        s.solver.blowup_sup = 1e8;
        s.solver.record_every = 1;
        s.norms = {alpha3, 2.0, 3.0};
        s.analyses = {
            {"contractivity", {{"t_split", 1.0}, {"early_tol", 0.5}, {"late_tol", 0.3}}},
            {"decay_fit", {{"k", 3.0}, {"t_lo", 0.2}, {"t_hi", 2.0}, {"tol", 0.15}}},
        };
        s.out_dir = "out/singular-data";
        validate(s, name, 0);
        return s;
    }
    if (name == "subcritical") {
        Scenario s;
        s.name = name;
        s.dim = 3;
        s.radius = 40.0;
        s.count = 384;
        s.alpha = 1.3;
        s.m_cap = {false, 10.0};
        s.damping = true;
        s.initial_kind = "gaussian";
        s.sigma = 1.0;
        s.initial_mass = {false, 5.0};
        s.solver.dt_max = 0.05;
        s.solver.t_end = 100.0;
        s.solver.sample_dt = 0.5;
        s.norms = {1.3, 2.0};
        s.analyses = {{"mass_ode", {}}, {"mass_gap", {}}};
        s.out_dir = "out/subcritical";
        validate(s, name, 0);
        return s;
    }
    throw ScenarioError("unknown preset '" + name + "'");
}

}  // namespace nlrd
