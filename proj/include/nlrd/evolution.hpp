#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlrd/field.hpp"

namespace nlrd {

enum class Outcome { completed, blowup, stalled };

std::string to_string(Outcome o);

/**
 * Parameters of the IMEX integrator for
 *   u_t = Delta u + u^alpha (M0 - integral u)     (damping on)
 *   u_t = Delta u + M0 u^alpha                    (damping off)
 * Diffusion is treated by backward Euler, the nonlocal reaction explicitly
 * with the pre-step mass, so each step is one tridiagonal solve.
 */
struct SolverConfig {
    double m_cap = 1.0;   // M0 > 0
    double alpha = 0.0;   // reaction power, > 1
    bool damping = true;  // off = Fujita control M0 u^alpha

    double dt_init = 1e-4;
    double dt_min = 1e-10;
    double dt_max = 0.05;
    double dt_growth = 1.25;  // per-step growth cap on the adaptive dt
    double safety = 0.5;      // in (0,1]: dt <= safety / reaction stiffness
    double t_end = 100.0;
    double blowup_sup = 1e8;

    int record_every = 1;    // record each k-th accepted step (sample_dt == 0)
    double sample_dt = 0.0;  // > 0: steps land exactly on multiples, record there
    bool store_snapshots = false;
    std::vector<double> norm_exponents;  // extra L^k series to record

    long max_steps = 200'000'000;  // stalled-run guard

    void validate() const;
};

// Time-stepping tolerance for the run-level contracts: eps = C dt_max.
double epsilon_ts(const SolverConfig& cfg);

/// Full diagnostic series of one run.  All series are parallel to `times`.
struct RunRecord {
    SolverConfig config;
    double initial_mass = 0.0;

    std::vector<double> times;
    std::vector<double> mass_series;
    std::vector<double> sup_series;
    std::vector<double> reaction_series;  // integral of u^alpha
    std::vector<double> dt_series;        // dt of the last accepted step
    std::vector<std::vector<double>> lk_series;     // one per norm_exponents entry
    std::vector<std::vector<double>> snapshots;     // nodal values, if stored

    Outcome outcome = Outcome::completed;
    double t_star = 0.0;  // detection time when outcome == blowup

    const std::vector<double>& lk(double k) const;  // throws if k not recorded
    bool has_lk(double k) const;
};

// One accepted IMEX step: solves (I - dt L) u_new = u + dt * reaction(u).
// Non-negativity of the result is inherited from the M-matrix whenever the
// explicit reaction is non-negative.  Throws on dt outside [dt_min, dt_max].
Field step(const Field& u, const SolverConfig& cfg, double dt);

// Integrates to t_end or blow-up (sup >= blowup_sup, dt < dt_min, or
// non-finite values).  Requires mass(u0) < m_cap when damping is on.
RunRecord run(const Field& u0, const SolverConfig& cfg);

// Same engine with the reaction zeroed; the heat-semigroup comparator.
RunRecord heat_only_run(const Field& u0, const SolverConfig& cfg);

// Max over interior samples of |dm/dt - (M0 - m) integral u^alpha| relative
// to the peak magnitude of the right-hand side.  Needs >= 3 samples.
double mass_ode_residual(const RunRecord& rec);

// Max relative deviation between M0 - m(t) and
// (M0 - m0) exp(-integral_0^t ||u||^alpha_alpha ds), trapezoid in time.
// Requires the L^alpha series among the recorded norms.
double mass_gap_identity(const RunRecord& rec, double m0);

// CSV export: t,m,reaction_integral,dt,sup then one column per L^k norm.
void write_csv(const RunRecord& rec, std::ostream& out);

// Checkpoint: <prefix>.snap (field snapshot) + <prefix>.state (key=value).
void write_checkpoint(const Field& u, double t, double dt, const std::string& prefix);
Field read_checkpoint(std::shared_ptr<const RadialGrid> grid, const std::string& prefix,
                      double* t_out, double* dt_out);

}  // namespace nlrd
