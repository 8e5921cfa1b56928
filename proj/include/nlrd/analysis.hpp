#pragma once

#include "nlrd/evolution.hpp"

namespace nlrd {

/// Least-squares fit of log(series) against log(t) over a time window.
struct DecayFit {
    double k = 0.0;  // norm index (infinity for sup-norm fits)
    double t_lo = 0.0;
    double t_hi = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double predicted_slope = 0.0;
    bool exact_match = false;  // series identically ~0, nothing to fit
};

// Fits the recorded L^k series; predicted slope -(k-1)/(k(alpha-1)).
// Throws if the window holds fewer than 10 samples or a norm is zero.
DecayFit fit_decay(const RunRecord& rec, double k, double t_lo, double t_hi);

// Log-log fit of an arbitrary (t, y) series; predicted passed through.
DecayFit fit_series(const std::vector<double>& times, const std::vector<double>& values,
                    double k, double t_lo, double t_hi, double predicted_slope);

// Envelope check for the L^2 energy: fits the constant C in
//   ||u||_2^2 <= ((||U0||_2^2)^{1-alpha} + (alpha-1) C t)^{-1/(alpha-1)}
// by least squares on the linearized form z = (||u||_2^2)^{1-alpha}, and
// returns the worst relative overshoot of the series above the fitted
// envelope.  eta0 documents the regime and must be positive.
double l2_decay_envelope(const RunRecord& rec, double eta0, double m0_cap);

// Sup-norm gap to the heat comparator: fits || u - heat ||_inf from stored
// snapshots at matched sample times.  Predicted slope -(n r / (2p) - 1)
// under 1 < 2p/n < r < 2p/n + 1.  Throws on unmatched time grids or a
// parameter pair outside the admissible window.
DecayFit heat_asymptotics(const RunRecord& rec, const RunRecord& heat_rec,
                          double p, double r, double t_lo, double t_hi);

/// Sup-norm decay rates of a run seeded with unbounded (L^1-only) data.
struct ContractivityReport {
    bool applicable = false;  // false for bounded initial data
    DecayFit early;           // window (t_first, t_split]
    DecayFit late;            // window (t_split, t_end]
    double early_bound = 0.0; // -alpha/(alpha-1) + n/2
    double late_bound = 0.0;  // -alpha/(alpha-1)
};

ContractivityReport contractivity_report(const RunRecord& rec, int dim,
                                         double t_split = 1.0);

struct BlowupSummary {
    double t_star = 0.0;
    double sup_at_detect = 0.0;
};

// Throws if the record did not end in blow-up.
BlowupSummary blowup_summary(const RunRecord& rec);

// Relative detection-time drift between a run and its dt/h refinement.
double blowup_drift(const RunRecord& coarse, const RunRecord& fine);

}  // namespace nlrd
