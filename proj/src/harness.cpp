#include "nlrd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nlrd/sha256.hpp"

namespace fs = std::filesystem;

namespace nlrd {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_short(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string now_utc() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

double get_param(const AnalysisSpec& a, const std::string& key, double fallback) {
    const auto it = a.params.find(key);
    return it == a.params.end() ? fallback : it->second;
}

std::string loglog_series(const std::vector<double>& t, const std::vector<double>& y,
                          double t_lo, double t_hi) {
    std::ostringstream out;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi || t[i] <= 0.0 || y[i] <= 0.0) continue;
        out << fmt(std::log(t[i])) << " " << fmt(std::log(y[i])) << "\n";
    }
    return out.str();
}

struct Artifacts {
    std::string dir;
    std::vector<std::string> paths;

    void emit(const std::string& rel, const std::string& content) {
        const std::string path = dir + "/" + rel;
        write_text_file(path, content);
        paths.push_back(rel);
    }
};

nlohmann::json result_to_json(const AnalysisResult& r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["values"] = r.values;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

// resolved-parameter snapshot embedded in the manifest
nlohmann::json scenario_to_json(const Scenario& s, double m_cap_resolved, double m0) {
    nlohmann::json j;
    j["name"] = s.name;
    j["grid"] = {{"n", s.dim}, {"radius", s.radius}, {"count", s.count}};
    j["equation"] = {{"alpha", s.resolved_alpha()},
                     {"M0", m_cap_resolved},
                     {"damping", s.damping}};
    nlohmann::json init{{"kind", s.initial_kind}, {"mass", m0}};
    if (s.initial_kind == "gaussian") init["sigma"] = s.sigma;
    if (s.initial_kind == "bump") {
        init["height"] = s.height;
        init["width"] = s.width;
    }
    if (s.initial_kind == "singular") {
        init["beta"] = s.beta;
        init["cutoff"] = s.cutoff;
    }
    j["initial"] = init;
    j["solver"] = {{"dt_init", s.solver.dt_init},   {"dt_min", s.solver.dt_min},
                   {"dt_max", s.solver.dt_max},     {"dt_growth", s.solver.dt_growth},
                   {"safety", s.solver.safety},     {"t_end", s.solver.t_end},
                   {"blowup_sup", s.solver.blowup_sup},
                   {"record_every", s.solver.record_every},
                   {"sample_dt", s.solver.sample_dt},
                   {"store_snapshots", s.solver.store_snapshots},
                   {"expect", to_string(s.expected)}};
    j["norms"] = s.norms;
    nlohmann::json an = nlohmann::json::array();
    for (const auto& a : s.analyses) an.push_back({{"name", a.name}, {"params", a.params}});
    j["analyses"] = an;
    return j;
}

AnalysisResult run_analysis(const AnalysisSpec& spec, const Scenario& s, const RunRecord& rec,
                            const RunRecord* heat_rec, Artifacts& art) {
    AnalysisResult res;
    res.name = spec.name;

    // fit windows default to the last decade of simulated time, past the
    // initial-data transient
    const double transient = s.initial_kind == "gaussian" ? 10.0 * s.sigma : 0.0;
    const double t_lo_default = std::max(rec.config.t_end / 10.0, transient);
    const double t_hi_default = rec.config.t_end;

    if (spec.name == "decay_fit") {
        const double k = spec.params.at("k");
        const DecayFit fit = fit_decay(rec, k, get_param(spec, "t_lo", t_lo_default),
                                       get_param(spec, "t_hi", t_hi_default));
        const double tol = get_param(spec, "tol", 0.15);
        res.passed = std::abs(fit.slope - fit.predicted_slope) <=
                     tol * std::abs(fit.predicted_slope);
        res.values = {{"k", k},          {"slope", fit.slope},
                      {"predicted", fit.predicted_slope}, {"r_squared", fit.r_squared},
                      {"tol", tol}};
        art.emit("decay_L" + std::string(fmt_short(k)) + ".loglog.dat",
                 loglog_series(rec.times, rec.lk(k), fit.t_lo, fit.t_hi));
    } else if (spec.name == "mass_ode") {
        const double residual = mass_ode_residual(rec);
        const double eps = epsilon_ts(rec.config);
        res.passed = residual <= eps;
        res.values = {{"residual", residual}, {"eps_ts", eps}};
    } else if (spec.name == "mass_gap") {
        const double dev = mass_gap_identity(rec, rec.initial_mass);
        const double eps = epsilon_ts(rec.config);
        res.passed = dev <= eps;
        res.values = {{"deviation", dev}, {"eps_ts", eps}};
    } else if (spec.name == "l2_envelope") {
        const double eta0 = get_param(spec, "eta0", 1.0);
        const double violation = l2_decay_envelope(rec, eta0, rec.config.m_cap);
        const double eps = epsilon_ts(rec.config);
        res.passed = violation <= eps;
        res.values = {{"violation", violation}, {"eps_ts", eps}};
    } else if (spec.name == "heat_asym") {
        if (!heat_rec) throw std::runtime_error("heat_asym: comparator run missing");
        // free parameters default to p = n and r at the midpoint of the
        // admissible window (2p/n, 2p/n + 1)
        const double p = get_param(spec, "p", s.dim);
        const double r = get_param(spec, "r", 2.0 * p / s.dim + 0.5);
        const DecayFit fit =
            heat_asymptotics(rec, *heat_rec, p, r, get_param(spec, "t_lo", t_lo_default),
                             get_param(spec, "t_hi", t_hi_default));
        const double tol = get_param(spec, "tol", 0.1);
        res.passed = fit.exact_match || fit.slope <= fit.predicted_slope + tol;
        res.values = {{"slope", fit.slope},
                      {"predicted", fit.predicted_slope},
                      {"tol", tol},
                      {"exact_match", fit.exact_match ? 1.0 : 0.0}};
        if (!fit.exact_match) {
            std::vector<double> diff(rec.times.size(), 0.0);
            for (size_t i = 0; i < rec.snapshots.size(); ++i) {
                double d = 0.0;
                for (size_t q = 0; q < rec.snapshots[i].size(); ++q)
                    d = std::max(d, rec.snapshots[i][q] - heat_rec->snapshots[i][q]);
                diff[i] = d;
            }
            art.emit("heat_gap.loglog.dat",
                     loglog_series(rec.times, diff, fit.t_lo, fit.t_hi));
        }
    } else if (spec.name == "contractivity") {
        const ContractivityReport rep =
            contractivity_report(rec, s.dim, get_param(spec, "t_split", 1.0));
        if (!rep.applicable) {
            res.passed = true;
            res.note = "not applicable: bounded initial data";
            res.values = {{"applicable", 0.0}};
        } else {
            const double early_tol = get_param(spec, "early_tol", 0.5);
            const double late_tol = get_param(spec, "late_tol", 0.3);
            const bool early_ok = rep.early.slope >= rep.early_bound - early_tol;
            const bool late_ok = rep.late.slope <= rep.late_bound + late_tol;
            res.passed = early_ok && late_ok;
            res.values = {{"applicable", 1.0},
                          {"early_slope", rep.early.slope},
                          {"early_bound", rep.early_bound},
                          {"late_slope", rep.late.slope},
                          {"late_bound", rep.late_bound}};
            art.emit("sup.loglog.dat",
                     loglog_series(rec.times, rec.sup_series, rec.times[1], rec.times.back()));
        }
    } else if (spec.name == "blowup") {
        const BlowupSummary bs = blowup_summary(rec);  // throws on completed runs
        res.passed = true;
        res.values = {{"t_star", bs.t_star}, {"sup_at_detect", bs.sup_at_detect}};
    } else {
        throw std::runtime_error("unknown analysis '" + spec.name + "'");
    }
    return res;
}

GnsEstimate load_estimate_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open estimate file " + path);
    nlohmann::json j;
    in >> j;
    GnsEstimate est;
    est.dim = j.at("n").get<int>();
    est.alpha = j.at("alpha").get<double>();
    est.cstar = j.at("cstar").get<double>();
    est.upper_bound = j.at("upper_bound").get<double>();
    est.m0_crit = j.at("m0_crit").get<double>();
    est.iterations = j.at("iterations").get<int>();
    est.converged = j.at("converged").get<bool>();
    return est;
}

}  // namespace

GnsEstimate resolve_threshold_estimate(int dim) {
    auto grid = std::make_shared<const RadialGrid>(build_grid(dim, 20.0, 385));
    return estimate_cstar(grid);
}

RunManifest execute(const Scenario& s, const ExecuteOptions& opt) {
    RunManifest man;
    man.scenario = s.name;
    man.tool_version = kToolVersion;
    man.started = now_utc();

    const std::string dir = opt.out_override.empty() ? s.out_dir : opt.out_override;
    Artifacts art{dir, {}};
    nlohmann::json scenario_snapshot;

    try {
        fs::create_directories(dir);

        const double alpha = s.resolved_alpha();

        // resolve the carrying capacity, estimating the threshold if requested
        double m_cap = s.m_cap.value;
        std::optional<GnsEstimate> estimate;
        if (s.m_cap.relative) {
            if (opt.cached_estimate) estimate = *opt.cached_estimate;
            else if (!opt.cstar_file.empty()) estimate = load_estimate_json(opt.cstar_file);
            else estimate = resolve_threshold_estimate(s.dim);
            if (estimate->dim != s.dim)
                throw std::runtime_error("threshold estimate dimension mismatch");
            m_cap = s.m_cap.value * estimate->m0_crit;
            art.emit("estimate.json", estimate_to_json(*estimate) + "\n");
        }

        auto grid = std::make_shared<const RadialGrid>(build_grid(s.dim, s.radius, s.count));

        // initial data, rescaled to the requested mass when asked
        ProfileSpec profile;
        double target_mass = s.initial_mass.relative ? s.initial_mass.value * m_cap
                                                     : s.initial_mass.value;
        if (s.initial_kind == "gaussian") {
            profile = GaussianProfile{target_mass, s.sigma};
        } else if (s.initial_kind == "bump") {
            profile = BumpProfile{s.height, s.width};
        } else {
            profile = SingularProfile{s.beta, s.cutoff};
        }
        Field u0 = make_initial(grid, profile);
        if (s.initial_kind != "gaussian" && target_mass >= 0.0) {
            const double raw = mass(u0);
            if (!(raw > 0.0)) throw std::runtime_error("initial profile has zero mass");
            for (double& v : u0.values) v *= target_mass / raw;
        }

        const double m0 = mass(u0);
        if (s.damping && !(m0 < m_cap))
            throw std::runtime_error("damping-on runs require initial mass m0 < M0");
        scenario_snapshot = scenario_to_json(s, m_cap, m0);

        SolverConfig cfg = s.solver;
        cfg.m_cap = m_cap;
        cfg.alpha = alpha;
        cfg.damping = s.damping;
        cfg.norm_exponents = s.norms;

        bool wants_heat = false;
        for (const auto& a : s.analyses)
            if (a.name == "heat_asym") wants_heat = true;

        const RunRecord rec = run(u0, cfg);
        {
            std::ostringstream csv;
            write_csv(rec, csv);
            art.emit("run.csv", csv.str());
        }

        std::optional<RunRecord> heat_rec;
        if (wants_heat) {
            heat_rec = heat_only_run(u0, cfg);
            std::ostringstream csv;
            write_csv(*heat_rec, csv);
            art.emit("heat.csv", csv.str());
        }

        // field snapshots at the configured sample times
        for (double t_req : s.snapshot_times) {
            const auto it = std::find_if(rec.times.begin(), rec.times.end(), [&](double t) {
                return std::abs(t - t_req) <= 1e-9 * std::max(1.0, t_req);
            });
            if (it == rec.times.end()) continue;  // run ended before this time
            const size_t idx = it - rec.times.begin();
            Field snap{grid, rec.snapshots[idx]};
            std::ostringstream out;
            write_snapshot(snap, rec.times[idx], out);
            char buf[64];
            std::snprintf(buf, sizeof buf, "snapshot_t%g.dat", t_req);
            art.emit(buf, out.str());
        }

        // analyses run only when the evolution completed
        bool contract_violation = false;
        if (rec.outcome == Outcome::completed) {
            for (const auto& spec : s.analyses) {
                if (spec.name == "blowup") {
                    contract_violation = true;  // expected blow-up did not happen
                    man.analyses.push_back(
                        {"blowup", false, {}, "run completed; no blow-up to summarize"});
                    continue;
                }
                AnalysisResult r = run_analysis(spec, s, rec, heat_rec ? &*heat_rec : nullptr, art);
                contract_violation = contract_violation || !r.passed;
                man.analyses.push_back(std::move(r));
            }
        } else if (rec.outcome == Outcome::blowup) {
            for (const auto& spec : s.analyses) {
                if (spec.name != "blowup") continue;
                AnalysisResult r = run_analysis(spec, s, rec, nullptr, art);
                man.analyses.push_back(std::move(r));
            }
        }

        {
            nlohmann::json j;
            j["scenario"] = s.name;
            j["outcome"] = to_string(rec.outcome);
            if (rec.outcome == Outcome::blowup) j["t_star"] = rec.t_star;
            j["initial_mass"] = m0;
            j["M0"] = m_cap;
            j["alpha"] = alpha;
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& r : man.analyses) arr.push_back(result_to_json(r));
            j["analyses"] = arr;
            art.emit("analysis.json", j.dump(2) + "\n");
        }

        {
            std::ostringstream rep;
            rep << "scenario   " << s.name << "\n";
            rep << "outcome    " << to_string(rec.outcome) << "\n";
            rep << "M0         " << fmt_short(m_cap) << "\n";
            rep << "m0         " << fmt_short(m0) << "\n";
            char line[160];
            for (const auto& r : man.analyses) {
                std::snprintf(line, sizeof line, "%-14s %s", r.name.c_str(),
                              r.passed ? "pass" : "FAIL");
                rep << line;
                for (const auto& [k, v] : r.values) rep << "  " << k << "=" << fmt_short(v);
                if (!r.note.empty()) rep << "  (" << r.note << ")";
                rep << "\n";
            }
            art.emit("report.txt", rep.str());
        }

        // outcome and exit status
        if (rec.outcome == Outcome::blowup) {
            if (s.expected == Outcome::blowup && !contract_violation) {
                man.outcome = "blowup-as-expected";
                man.exit_code = kExitBlowupAsExpected;
            } else {
                man.outcome = "contract-violation";
                man.exit_code = kExitContractViolation;
            }
        } else if (rec.outcome == Outcome::completed) {
            if (s.expected == Outcome::blowup || contract_violation) {
                man.outcome = "contract-violation";
                man.exit_code = kExitContractViolation;
            } else {
                man.outcome = "ok";
                man.exit_code = kExitOk;
            }
        } else {
            man.outcome = "error";
            man.exit_code = kExitError;
        }
    } catch (const std::exception& e) {
        man.outcome = "error";
        man.exit_code = kExitError;
        man.analyses.push_back({"error", false, {}, e.what()});
    }

    man.finished = now_utc();

    // manifest written atomically last, with digests of everything emitted
    try {
        fs::create_directories(dir);
        for (const std::string& rel : art.paths)
            man.files.emplace_back(rel, sha256_file(dir + "/" + rel));
        nlohmann::json j;
        j["scenario"] = man.scenario;
        if (!scenario_snapshot.is_null()) j["scenario_config"] = scenario_snapshot;
        j["tool_version"] = man.tool_version;
        j["started"] = man.started;
        j["finished"] = man.finished;
        j["outcome"] = man.outcome;
        j["exit_code"] = man.exit_code;
        nlohmann::json files = nlohmann::json::array();
        for (const auto& [path, digest] : man.files)
            files.push_back({{"path", path}, {"sha256", digest}});
        j["files"] = files;
        const std::string tmp = dir + "/manifest.json.tmp";
        write_text_file(tmp, j.dump(2) + "\n");
        fs::rename(tmp, dir + "/manifest.json");
    } catch (const std::exception& e) {
        man.outcome = "error";
        man.exit_code = kExitError;
    }
    return man;
}

SweepResult sweep(const Scenario& base, const std::string& axis,
                  const std::vector<double>& values, int workers,
                  const std::string& out_root) {
    static const std::vector<std::string> kAxes = {"M0", "alpha", "N", "R", "dt_max"};
    if (std::find(kAxes.begin(), kAxes.end(), axis) == kAxes.end())
        throw std::invalid_argument("sweep: axis must be one of M0, alpha, N, R, dt_max");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("sweep: values must be finite");

    fs::create_directories(out_root);

    // the threshold estimate lives on its own fixed grid, so one resolution
    // serves every run of the sweep
    ExecuteOptions shared;
    if (base.m_cap.relative) shared.cached_estimate = resolve_threshold_estimate(base.dim);

    std::vector<Scenario> runs;
    std::vector<std::string> dirs;
    for (double v : values) {
        Scenario s = base;
        if (axis == "M0") {
            if (s.m_cap.relative) s.m_cap.value = v;  // factor of the estimate
            else s.m_cap.value = v;
        } else if (axis == "alpha") {
            s.alpha_critical = false;
            s.alpha = v;
        } else if (axis == "N") {
            s.count = static_cast<int>(v);
        } else if (axis == "R") {
            s.radius = v;
        } else if (axis == "dt_max") {
            s.solver.dt_max = v;
            s.solver.dt_init = std::min(s.solver.dt_init, v);
            s.solver.dt_min = std::min(s.solver.dt_min, v);
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s_%g", axis.c_str(), v);
        s.name = base.name + "/" + buf;
        s.out_dir = out_root + "/" + buf;
        runs.push_back(std::move(s));
        dirs.push_back(buf);
    }

    SweepResult result;
    result.manifests.resize(runs.size());
    std::mutex mu;
    size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            size_t i;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= runs.size()) return;
                i = next++;
            }
            ExecuteOptions opt = shared;
            RunManifest m;
            try {
                m = execute(runs[i], opt);
            } catch (const std::exception& e) {
                m.scenario = runs[i].name;
                m.outcome = "error";
                m.exit_code = kExitError;
                m.analyses.push_back({"error", false, {}, e.what()});
            }
            result.manifests[i] = std::move(m);
        }
    };
    const int nw = std::max(1, std::min<int>(workers, static_cast<int>(runs.size())));
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::ostringstream csv;
    csv << "value,outcome,exit_code,analyses_passed,analyses_total,key_slope\n";
    for (size_t i = 0; i < runs.size(); ++i) {
        const RunManifest& m = result.manifests[i];
        int passed = 0;
        double key_slope = std::numeric_limits<double>::quiet_NaN();
        for (const auto& r : m.analyses) {
            if (r.passed) ++passed;
            const auto it = r.values.find("slope");
            if (it != r.values.end() && std::isnan(key_slope)) key_slope = it->second;
        }
        csv << fmt(values[i]) << "," << m.outcome << "," << m.exit_code << "," << passed
            << "," << m.analyses.size() << ","
            << (std::isnan(key_slope) ? "" : fmt(key_slope)) << "\n";
    }
    result.summary_csv_path = out_root + "/sweep_summary.csv";
    write_text_file(result.summary_csv_path, csv.str());
    return result;
}

}  // namespace nlrd
