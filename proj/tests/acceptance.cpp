// Acceptance suite: every criterion prints one [PASS]/[FAIL] line with the
// measured values; the exit code is 0 only if every requested criterion
// passed.  Run a single criterion with --criterion N.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nlrd/analysis.hpp"
#include "nlrd/evolution.hpp"
#include "nlrd/gns_optimizer.hpp"
#include "nlrd/harness.hpp"
#include "nlrd/inequalities.hpp"
#include "oracles.hpp"

using namespace nlrd;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid_ptr(int dim, double radius, int count) {
    return std::make_shared<const RadialGrid>(build_grid(dim, radius, count));
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// shared pieces

struct MixBump {
    double mass, width, center;
};

// one continuum profile, materializable on any grid; stressed widths sit at
// the resolution limit of the given spacing
std::vector<MixBump> draw_mix(std::mt19937& rng, double radius, double h_coarse,
                              bool stressed) {
    std::uniform_real_distribution<double> mdist(0.2, 3.0), cdist(0.0, 0.4 * radius),
        sdist(0.2, 2.0), udist(0.0, 1.0);
    std::vector<MixBump> mix(1 + rng() % 3);
    for (MixBump& b : mix) {
        b.width = stressed ? std::pow((1.5 + 1.5 * udist(rng)) * h_coarse, 2) : sdist(rng);
        b.mass = mdist(rng);
        b.center = cdist(rng);
    }
    return mix;
}

Field materialize(const GridPtr& g, const std::vector<MixBump>& mix) {
    std::vector<double> v(g->count, 0.0);
    for (const MixBump& b : mix) {
        const double amp = b.mass * std::pow(4.0 * std::numbers::pi * b.width, -0.5 * g->dim);
        for (int i = 0; i < g->count; ++i) {
            const double d = g->nodes[i] - b.center;
            v[i] += amp * std::exp(-d * d / (4.0 * b.width));
        }
    }
    v.back() = 0.0;
    return Field{g, std::move(v)};
}

struct SharedCritical {
    GnsEstimate estimate;
    double m_cap;
    double m0;
    SolverConfig cfg;
    GridPtr grid;
    Field u0;
};

// the shared configuration of criteria 4, 5, 7 and 9: M0 at half the
// estimated threshold, gaussian data with m0 = 0.9 M0
SharedCritical shared_critical_setup() {
    SharedCritical sc{.estimate = resolve_threshold_estimate(3),
                      .m_cap = 0.0,
                      .m0 = 0.0,
                      .cfg = {},
                      .grid = make_grid_ptr(3, 60.0, 512),
                      .u0 = {}};
    sc.m_cap = 0.5 * sc.estimate.m0_crit;
    sc.m0 = 0.9 * sc.m_cap;
    sc.cfg.m_cap = sc.m_cap;
    sc.cfg.alpha = 1.0 + 2.0 / 3.0;
    sc.cfg.dt_init = 1e-4;
    sc.cfg.dt_min = 1e-10;
    sc.cfg.dt_max = 0.05;
    sc.cfg.t_end = 100.0;
    sc.cfg.sample_dt = 0.25;
    sc.cfg.norm_exponents = {1.0 + 2.0 / 3.0, 2.0, 4.0};
    sc.u0 = make_initial(sc.grid, GaussianProfile{sc.m0, 0.25});
    return sc;
}

// ---------------------------------------------------------------------------
// 1. inequality suite

Verdict criterion_inequalities() {
    std::mt19937 rng(2024);
    double worst_margin = 0.0;          // most negative normalized margin seen
    double deficiency_coarse = 0.0;     // positive part of violations at h
    double deficiency_fine = 0.0;       // same fields at h/2
    bool all_hold = true;

    for (int dim : {3, 4, 5}) {
        const GridPtr coarse = make_grid_ptr(dim, 12.0, 192);
        const GridPtr fine = make_grid_ptr(dim, 12.0, 383);  // h/2
        const double b_sd = 2.0 + 2.0 / dim;                 // equality case at a = 1
        std::uniform_real_distribution<double> bdist(1.15, std::min(2.0 + 2.0 / dim - 0.2,
                                                                    2.0 * dim / (dim - 2.0) - 0.2)),
            cdist(-3.0, 3.0);

        for (int trial = 0; trial < 200; ++trial) {
            const bool stressed = trial % 5 == 0;
            const std::vector<MixBump> mix =
                draw_mix(rng, coarse->radius, coarse->spacing(), stressed);
            const Field f = materialize(coarse, mix);
            const Field ff = materialize(fine, mix);

            const double b_y = bdist(rng);
            const double c0 = std::pow(10.0, cdist(rng) * 0.4);

            for (int res = 0; res < 2; ++res) {
                const Field& u = res == 0 ? f : ff;
                const GridPtr& g = res == 0 ? coarse : fine;
                const double eps = epsilon_grid(*g);
                double deficiency = 0.0;

                const double sob = sobolev_check(u);
                const double sob_scale = grad_l2_sq(u);
                worst_margin = std::min(worst_margin, sob / sob_scale);
                if (sob < -eps * sob_scale) all_hold = false;
                deficiency = std::max(deficiency, -sob / sob_scale);

                const BoundPair sd = gns_sd_check(u, 1.0, b_sd);
                const double sd_margin = (sd.rhs - sd.lhs) / (1.0 + sd.rhs);
                worst_margin = std::min(worst_margin, sd_margin);
                if (sd_margin < -eps) all_hold = false;
                deficiency = std::max(deficiency, -sd_margin);

                const BoundPair yb = gns_young_bound(u, 1.0, b_y, c0);
                const double yb_margin = (yb.rhs - yb.lhs) / (1.0 + yb.rhs);
                worst_margin = std::min(worst_margin, yb_margin);
                if (yb_margin < -eps) all_hold = false;
                deficiency = std::max(deficiency, -yb_margin);

                if (res == 0)
                    deficiency_coarse = std::max(deficiency_coarse, deficiency);
                else
                    deficiency_fine = std::max(deficiency_fine, deficiency);
            }
        }
    }

    const double floor = 1e-14;
    const bool shrink_ok = deficiency_fine <= std::max(deficiency_coarse / 3.0, floor);
    Verdict v;
    v.pass = all_hold && shrink_ok;
    v.detail = "worst margin " + num(worst_margin) + ", violation h " +
               num(deficiency_coarse) + " -> h/2 " + num(deficiency_fine);
    return v;
}

// ---------------------------------------------------------------------------
// 2. ODE lemma oracles

Verdict criterion_ode_oracles() {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> edist(0.0, 5.0), bdist(0.2, 3.0), pdist(1.2, 3.5),
        ydist(0.0, 80.0), cdist(0.5, 4.0);
    std::vector<double> times;
    for (double t = 1e-3; t <= 20.0; t *= 1.5) times.push_back(t);

    double worst_ratio = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double eta = edist(rng), beta = bdist(rng), p = pdist(rng), y0 = ydist(rng);
        auto f = [&](double, double y) { return eta - beta * std::pow(std::max(y, 0.0), p); };
        const std::vector<double> y = oracle::rk4_trajectory(f, 0.0, y0, times);
        const double cap = ode_bound_capped(y0, eta, beta, p);
        for (size_t i = 0; i < times.size(); ++i) {
            const double hyper = ode_bound_hyper(eta, beta, p, times[i]);
            worst_ratio = std::max({worst_ratio, y[i] / hyper, y[i] / std::max(cap, 1e-300)});
            if (y[i] > hyper * (1.0 + 1e-6) + 1e-9) return {false, "hyper bound violated"};
            if (y[i] > cap * (1.0 + 1e-6) + 1e-9) return {false, "capped bound violated"};
        }
    }
    // shifted variant with a non-increasing forcing f(t)
    for (int trial = 0; trial < 20; ++trial) {
        const double c = cdist(rng), y0 = 0.2 * ydist(rng), t0 = 0.4;
        auto f = [&](double t, double y) { return c / ((1.0 + t) * (1.0 + t)) - y * y; };
        std::vector<double> late;
        for (double t = 1.05 * t0; t <= 10.0 * t0; t *= 1.2) late.push_back(t);
        const std::vector<double> y = oracle::rk4_trajectory(f, 0.0, y0, late);
        const double f_t0 = c / ((1.0 + t0) * (1.0 + t0));
        for (size_t i = 0; i < late.size(); ++i) {
            const double bound = ode_bound_shifted(f_t0, 1.0, 2.0, t0, late[i]);
            worst_ratio = std::max(worst_ratio, y[i] / bound);
            if (y[i] > bound * (1.0 + 1e-6)) return {false, "shifted bound violated"};
        }
    }
    return {true, "worst trajectory/bound ratio " + num(worst_ratio)};
}

// ---------------------------------------------------------------------------
// 3. C* certificate

Verdict criterion_cstar() {
    const GridPtr base = make_grid_ptr(3, 20.0, 512);
    const GridPtr doubled = make_grid_ptr(3, 20.0, 1024);
    const GnsEstimate e1 = estimate_cstar(base);
    const GnsEstimate e2 = estimate_cstar(doubled);

    bool monotone = true;
    for (size_t i = 1; i < e1.j_trace.size(); ++i)
        monotone = monotone && e1.j_trace[i] >= e1.j_trace[i - 1];

    const double upper = 1.0 / sobolev_constant(3).value;
    const double drift = std::abs(e1.cstar - e2.cstar) / e2.cstar;
    const bool in_range = e1.cstar > 0.0 && e1.cstar <= upper + epsilon_grid(*base);

    Verdict v;
    v.pass = in_range && monotone && drift < 0.02;
    v.detail = "cstar " + num(e1.cstar) + " <= 1/S3 " + num(upper) + ", drift " +
               num(100.0 * drift) + "%, trace " + (monotone ? "monotone" : "NOT monotone");
    return v;
}

// ---------------------------------------------------------------------------
// 4. critical-case global run

Verdict criterion_critical_run() {
    const SharedCritical sc = shared_critical_setup();
    const RunRecord rec = run(sc.u0, sc.cfg);
    if (rec.outcome != Outcome::completed) return {false, "run did not complete"};

    double sup_max = 0.0;
    for (double s : rec.sup_series) sup_max = std::max(sup_max, s);
    const bool bounded = std::isfinite(sup_max) && sup_max < sc.cfg.blowup_sup;

    const DecayFit fit = fit_decay(rec, 2.0, 10.0, 100.0);
    const bool slope_ok = std::abs(fit.slope - (-0.75)) <= 0.15 * 0.75;

    const double residual = mass_ode_residual(rec);
    const double gap_dev = mass_gap_identity(rec, rec.initial_mass);
    const double eps = epsilon_ts(sc.cfg);

    Verdict v;
    v.pass = bounded && slope_ok && residual <= eps && gap_dev <= eps;
    v.detail = "L2 slope " + num(fit.slope) + " (target -0.75 +/- 15%), mass residual " +
               num(residual) + ", gap deviation " + num(gap_dev) + " (eps_ts " + num(eps) +
               "), M0 " + num(sc.m_cap);
    return v;
}

// ---------------------------------------------------------------------------
// 5. Fujita control

Verdict criterion_fujita() {
    const SharedCritical sc = shared_critical_setup();
    SolverConfig cfg = sc.cfg;
    cfg.damping = false;
    cfg.t_end = 4000.0;

    const RunRecord coarse = run(sc.u0, cfg);
    if (coarse.outcome != Outcome::blowup) return {false, "no blow-up detected"};

    // dt/h refinement pair
    const GridPtr fine_grid = make_grid_ptr(3, 60.0, 1023);
    const Field u0f = make_initial(fine_grid, GaussianProfile{sc.m0, 0.25});
    SolverConfig fine_cfg = cfg;
    fine_cfg.dt_max = 0.5 * cfg.dt_max;
    const RunRecord fine = run(u0f, fine_cfg);
    if (fine.outcome != Outcome::blowup) return {false, "refined run did not blow up"};

    const double drift = blowup_drift(coarse, fine);
    Verdict v;
    v.pass = drift <= 0.20;
    v.detail = "t* " + num(coarse.t_star) + " -> refined " + num(fine.t_star) + ", drift " +
               num(100.0 * drift) + "%";
    return v;
}

// ---------------------------------------------------------------------------
// 6. subcritical run

Verdict criterion_subcritical() {
    const GridPtr grid = make_grid_ptr(3, 40.0, 384);
    const Field u0 = make_initial(grid, GaussianProfile{5.0, 1.0});
    SolverConfig cfg;
    cfg.m_cap = 10.0;
    cfg.alpha = 1.3;
    cfg.dt_max = 0.05;
    cfg.t_end = 100.0;
    cfg.sample_dt = 0.25;
    cfg.norm_exponents = {1.3, 2.0};

    const RunRecord rec = run(u0, cfg);
    if (rec.outcome != Outcome::completed) return {false, "run did not complete"};

    double max_all = 0.0, max_early = 0.0;
    for (size_t j = 0; j < rec.times.size(); ++j) {
        max_all = std::max(max_all, rec.sup_series[j]);
        if (rec.times[j] <= 10.0) max_early = std::max(max_early, rec.sup_series[j]);
    }
    Verdict v;
    v.pass = max_all <= 1.05 * max_early;
    v.detail = "sup max over [0,100] " + num(max_all) + " vs over [0,10] " + num(max_early) +
               " (ratio " + num(max_all / max_early) + " <= 1.05)";
    return v;
}

// ---------------------------------------------------------------------------
// 7. asymptotics toward the heat semigroup

Verdict criterion_asymptotics() {
    SharedCritical sc = shared_critical_setup();
    SolverConfig cfg = sc.cfg;
    cfg.sample_dt = 0.5;
    cfg.store_snapshots = true;

    const RunRecord damped = run(sc.u0, cfg);
    if (damped.outcome != Outcome::completed) return {false, "run did not complete"};
    const RunRecord heat = heat_only_run(sc.u0, cfg);

    const DecayFit fit = heat_asymptotics(damped, heat, 3.0, 2.5, 5.0, 60.0);
    Verdict v;
    v.pass = !fit.exact_match && fit.slope <= -0.25 + 0.1;
    v.detail = "sup-difference slope " + num(fit.slope) + " (need <= -0.15, predicted -0.25)";
    return v;
}

// ---------------------------------------------------------------------------
// 8. hyper/ultra-contractivity from singular data

Verdict criterion_contractivity() {
    const GnsEstimate est = resolve_threshold_estimate(3);
    const double m_cap = 0.5 * est.m0_crit;

    const GridPtr grid = make_grid_ptr(3, 8.0, 512);
    Field u0 = make_initial(grid, SingularProfile{2.5, 1.0});
    const double scale = 0.9 * m_cap / mass(u0);
    for (double& v : u0.values) v *= scale;

    SolverConfig cfg;
    cfg.m_cap = m_cap;
    cfg.alpha = 1.0 + 2.0 / 3.0;
    cfg.dt_init = 1e-6;
    cfg.dt_min = 1e-12;
    cfg.dt_max = 0.02;
    cfg.dt_growth = 1.05;
    cfg.t_end = 100.0;
    cfg.record_every = 1;
    cfg.norm_exponents = {1.0 + 2.0 / 3.0, 2.0, 3.0};

    const RunRecord rec = run(u0, cfg);
    if (rec.outcome != Outcome::completed) return {false, "run did not complete"};

    // L^3 norm finite (and recorded) for every t > t1 > 0
    const auto& l3 = rec.lk(3.0);
    bool l3_finite = true;
    for (size_t j = 1; j < l3.size(); ++j) l3_finite = l3_finite && std::isfinite(l3[j]);

    const ContractivityReport rep = contractivity_report(rec, 3, 1.0);
    if (!rep.applicable) return {false, "report flagged the data as bounded"};

    Verdict v;
    const double late_need = -2.5 + 0.3;
    v.pass = l3_finite && rep.late.slope <= late_need;
    v.detail = "late sup slope " + num(rep.late.slope) + " (need <= " + num(late_need) +
               "), early slope " + num(rep.early.slope) + ", L3 finite " +
               (l3_finite ? "yes" : "NO");
    return v;
}

// ---------------------------------------------------------------------------
// 9. structural invariants

Verdict criterion_invariants() {
    const GridPtr grid = make_grid_ptr(3, 20.0, 256);
    const Field u0 = make_initial(grid, GaussianProfile{1.0, 0.5});

    SolverConfig cfg;
    cfg.m_cap = 2.0;
    cfg.alpha = 1.0 + 2.0 / 3.0;
    cfg.dt_init = cfg.dt_min = cfg.dt_max = 5e-3;  // fixed dt for exact ordering
    cfg.dt_growth = 1.0;
    cfg.t_end = 5.0;
    cfg.sample_dt = 0.25;
    cfg.store_snapshots = true;
    cfg.norm_exponents = {1.0 + 2.0 / 3.0, 2.0};

    const RunRecord damped = run(u0, cfg);
    const RunRecord heat = heat_only_run(u0, cfg);
    SolverConfig off = cfg;
    off.damping = false;
    const RunRecord undamped = run(u0, off);
    if (damped.outcome != Outcome::completed || undamped.outcome != Outcome::completed)
        return {false, "short comparison runs did not complete"};

    const double eps = epsilon_ts(cfg);
    bool nonneg = true, mass_ok = true, sub_ok = true, super_ok = true;
    for (size_t j = 0; j < damped.times.size(); ++j) {
        const double tol = 1e-12 * (1.0 + damped.sup_series[j]);
        for (size_t i = 0; i < damped.snapshots[j].size(); ++i) {
            nonneg = nonneg && damped.snapshots[j][i] >= 0.0;
            sub_ok = sub_ok && damped.snapshots[j][i] >= heat.snapshots[j][i] - tol;
            super_ok = super_ok && undamped.snapshots[j][i] >= damped.snapshots[j][i] - tol;
        }
        if (j > 0) mass_ok = mass_ok && damped.mass_series[j] >= damped.mass_series[j - 1] - 1e-12;
        mass_ok = mass_ok && damped.mass_series[j] <= cfg.m_cap + eps;
    }

    // scale invariance at lambda = 2: rescaled data on the half-radius grid
    // with dt/4 reproduces lambda^n times the base run, node by node
    bool scale_ok = true;
    {
        const double lambda = 2.0;
        const int count = 192;
        const GridPtr gb = make_grid_ptr(3, 16.0, count);
        const GridPtr gf = make_grid_ptr(3, 16.0 / lambda, count);
        SolverConfig sc;
        sc.m_cap = 2.0;
        sc.alpha = 1.0 + 2.0 / 3.0;
        sc.dt_init = sc.dt_min = sc.dt_max = 1e-3;
        sc.dt_growth = 1.0;
        sc.t_end = 1.0;
        sc.record_every = 1 << 20;
        sc.store_snapshots = true;
        const Field b0 = make_initial(gb, GaussianProfile{1.0, 0.5});
        const RunRecord base = run(b0, sc);

        std::vector<double> v(count, 0.0);
        const double ln = std::pow(lambda, 3);
        for (int i = 0; i < count; ++i) v[i] = ln * b0.values[i];
        v.back() = 0.0;
        SolverConfig sf = sc;
        sf.dt_init = sf.dt_min = sf.dt_max = sc.dt_max / (lambda * lambda);
        sf.t_end = sc.t_end / (lambda * lambda);
        sf.blowup_sup = sc.blowup_sup * ln;
        const RunRecord scaled = run(Field{gf, v}, sf);

        const auto& ub = base.snapshots.back();
        const auto& us = scaled.snapshots.back();
        double sup = 0.0;
        for (double x : ub) sup = std::max(sup, x);
        for (int i = 0; i < count; ++i)
            scale_ok = scale_ok && std::abs(us[i] - ln * ub[i]) <= 1e-8 * ln * sup;
    }

    // determinism: byte-identical CSV on rerun
    const RunRecord again = run(u0, cfg);
    std::ostringstream csv1, csv2;
    write_csv(damped, csv1);
    write_csv(again, csv2);
    const bool deterministic = csv1.str() == csv2.str();

    Verdict v;
    v.pass = nonneg && mass_ok && sub_ok && super_ok && scale_ok && deterministic;
    v.detail = std::string("nonneg ") + (nonneg ? "ok" : "FAIL") + ", mass " +
               (mass_ok ? "ok" : "FAIL") + ", subsol " + (sub_ok ? "ok" : "FAIL") +
               ", supersol " + (super_ok ? "ok" : "FAIL") + ", scale " +
               (scale_ok ? "ok" : "FAIL") + ", deterministic " + (deterministic ? "ok" : "FAIL");
    return v;
}

// ---------------------------------------------------------------------------

struct Criterion {
    int id;
    const char* title;
    std::function<Verdict()> fn;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "inequality suite (Sobolev + GNS, randomized)", criterion_inequalities},
        {2, "ODE lemma oracles (RK4 vs bounds)", criterion_ode_oracles},
        {3, "C* certificate and refinement drift", criterion_cstar},
        {4, "critical-case global run, decay and mass laws", criterion_critical_run},
        {5, "Fujita control blow-up with refinement drift", criterion_fujita},
        {6, "subcritical run stays uniformly bounded", criterion_subcritical},
        {7, "asymptotic convergence to the heat semigroup", criterion_asymptotics},
        {8, "hyper/ultra-contractivity from singular data", criterion_contractivity},
        {9, "structural invariants", criterion_invariants},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
    }

    bool all_pass = true;
    for (const Criterion& c : criteria()) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.fn();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", c.id,
                    c.title, v.detail.c_str(), secs);
        std::fflush(stdout);
        all_pass = all_pass && v.pass;
    }
    return all_pass ? 0 : 1;
}
