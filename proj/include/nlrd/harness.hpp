#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlrd/analysis.hpp"
#include "nlrd/gns_optimizer.hpp"
#include "nlrd/scenario.hpp"

namespace nlrd {

inline constexpr const char* kToolVersion = "0.1.0";

// exit codes of the CLI and of execute()
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBlowupAsExpected = 2;
inline constexpr int kExitContractViolation = 3;

/// One evaluated analysis: measured values plus its pass/fail verdict.
struct AnalysisResult {
    std::string name;
    bool passed = false;
    std::map<std::string, double> values;
    std::string note;
};

/// What a run wrote, with content digests; the manifest file is written
/// atomically after every other artifact.
struct RunManifest {
    std::string scenario;
    std::string tool_version;
    std::string started;
    std::string finished;
    std::string outcome;  // ok | blowup-as-expected | contract-violation | error
    int exit_code = kExitError;
    std::vector<std::pair<std::string, std::string>> files;  // (path, sha256)
    std::vector<AnalysisResult> analyses;
};

struct ExecuteOptions {
    std::string out_override;                  // replaces the scenario's output dir
    std::optional<GnsEstimate> cached_estimate;  // reused for auto-threshold M0
    std::string cstar_file;                    // JSON estimate to load instead
};

// Resolves auto-threshold M0 (estimating C* if needed), builds the grid and
// initial data, runs the evolution and every requested analysis, and writes
// run.csv, snapshots, analysis.json, report.txt and manifest.json into the
// output directory.  I/O failures surface as the "error" outcome.
RunManifest execute(const Scenario& s, const ExecuteOptions& opt = {});

struct SweepResult {
    std::vector<RunManifest> manifests;
    std::string summary_csv_path;
};

// Independent executions along one parameter axis (M0 | alpha | N | R |
// dt_max), parallel up to `workers`; per-run failures are isolated and
// recorded.  Writes <out>/sweep_summary.csv.
SweepResult sweep(const Scenario& base, const std::string& axis,
                  const std::vector<double>& values, int workers,
                  const std::string& out_root);

// The estimator grid used to resolve auto-threshold scenarios.
GnsEstimate resolve_threshold_estimate(int dim);

}  // namespace nlrd
