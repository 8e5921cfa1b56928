#pragma once

#include <map>
#include <string>
#include <vector>

#include "nlrd/evolution.hpp"

namespace nlrd {

/// Thrown on config parse/validation failures; message carries the line.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AnalysisSpec {
    std::string name;  // decay_fit | mass_ode | mass_gap | l2_envelope |
                       // heat_asym | contractivity | blowup
    std::map<std::string, double> params;
};

/// Either an absolute value or a multiple of a resolved reference
/// (the estimated critical mass for M0, the resolved M0 for initial mass).
struct ScaledValue {
    bool relative = false;
    double value = 0.0;
};

/**
 * A named experiment preset: grid and equation parameters, the initial
 * data family, solver settings, requested diagnostics and analyses, and
 * output location.  Everything a run needs, resolved except for the
 * auto-threshold reference.
 */
struct Scenario {
    std::string name;

    // [grid]
    int dim = 3;
    double radius = 10.0;
    int count = 128;

    // [equation]
    bool alpha_critical = false;  // alpha = 1 + 2/n
    double alpha = 0.0;
    ScaledValue m_cap;  // relative => factor of the estimated critical mass
    bool damping = true;

    // [initial]
    std::string initial_kind;  // gaussian | bump | singular
    double sigma = 1.0;
    double height = 1.0;
    double width = 1.0;
    double beta = 2.5;
    double cutoff = 1.0;
    ScaledValue initial_mass{false, -1.0};  // < 0 => no rescale requested

    // [solver]
    SolverConfig solver;  // m_cap/alpha/norm_exponents filled at execution
    Outcome expected = Outcome::completed;

    // [diagnostics]
    std::vector<double> norms;
    std::vector<AnalysisSpec> analyses;

    // [output]
    std::string out_dir = "out";
    std::vector<double> snapshot_times;

    double resolved_alpha() const { return alpha_critical ? 1.0 + 2.0 / dim : alpha; }
};

// Parses a sectioned key=value config file.  Unknown sections or keys are
// rejected with the offending line number; constraint violations (n < 3,
// m0 >= M0 with damping on, analyses lacking their diagnostics) are
// reported with the rule that failed.
Scenario load_scenario(const std::string& path);

// Same grammar from an in-memory string (name used in messages).
Scenario parse_scenario(const std::string& text, const std::string& name);

// Shipped presets.
std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);
Scenario preset(const std::string& name);
bool is_preset(const std::string& name);

}  // namespace nlrd
