#include "nlrd/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nlrd {

namespace {

constexpr double kEpsTsCoeff = 10.0;  // calibrated on dt-refinement studies
constexpr double kTiny = 1e-300;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

struct Engine {
    const RadialGrid& grid;
    RadialLaplacian lap;
    const SolverConfig& cfg;
    bool with_reaction;

    Engine(const RadialGrid& g, const SolverConfig& c, bool react)
        : grid(g), lap(build_laplacian(g)), cfg(c), with_reaction(react) {}

    double reaction_coeff(double m) const {
        if (!with_reaction) return 0.0;
        return cfg.damping ? (cfg.m_cap - m) : cfg.m_cap;
    }

    std::vector<double> advance(const std::vector<double>& u, double m, double dt) const {
        const int n = grid.count;
        std::vector<double> rhs(n);
        const double coef = reaction_coeff(m);
        for (int i = 0; i < n; ++i)
            rhs[i] = u[i] + dt * std::pow(u[i], cfg.alpha) * coef;
        rhs[n - 1] = 0.0;
        return lap.solve_implicit(dt, rhs);
    }
};

void record_sample(RunRecord& rec, const RadialGrid& grid, const std::vector<double>& u,
                   double t, double dt) {
    rec.times.push_back(t);
    rec.mass_series.push_back(integrate(grid, u));
    rec.sup_series.push_back(sup_norm(u));
    std::vector<double> pw(u.size());
    for (size_t i = 0; i < u.size(); ++i) pw[i] = std::pow(u[i], rec.config.alpha);
    rec.reaction_series.push_back(integrate(grid, pw));
    rec.dt_series.push_back(dt);
    for (size_t j = 0; j < rec.config.norm_exponents.size(); ++j) {
        const double k = rec.config.norm_exponents[j];
        double s = 0.0;
        for (size_t i = 0; i < u.size(); ++i) s += grid.weights[i] * std::pow(u[i], k);
        rec.lk_series[j].push_back(std::pow(s, 1.0 / k));
    }
    if (rec.config.store_snapshots) rec.snapshots.push_back(u);
}

RunRecord run_impl(const Field& u0, const SolverConfig& cfg, bool with_reaction) {
    cfg.validate();
    u0.validate();
    const RadialGrid& grid = *u0.grid;
    const double m0 = mass(u0);
    if (with_reaction && cfg.damping && !(m0 < cfg.m_cap))
        throw std::invalid_argument("run: requires initial mass m0 < M0 when damping is on");
    if (!(cfg.blowup_sup > sup_norm(u0.values)))
        throw std::invalid_argument("run: blowup_sup must exceed the initial sup norm");

    Engine eng(grid, cfg, with_reaction);

    RunRecord rec;
    rec.config = cfg;
    rec.initial_mass = m0;
    rec.lk_series.resize(cfg.norm_exponents.size());

    std::vector<double> u = u0.values;
    double t = 0.0;
    double dt_base = cfg.dt_init;
    double last_dt = 0.0;
    long accepted = 0;
    long next_sample_idx = 1;

    record_sample(rec, grid, u, 0.0, 0.0);

    // terminal sample at the detection state, so the record ends where the
    // run ended (skipped when the last lattice sample already sits at t)
    auto record_terminal = [&]() {
        if (rec.times.back() < t) record_sample(rec, grid, u, t, last_dt);
    };

    while (t < cfg.t_end - 1e-12 * cfg.t_end) {
        if (!all_finite(u)) {
            rec.outcome = Outcome::blowup;
            rec.t_star = t;
            return rec;
        }
        const double m = integrate(grid, u);
        const double sup = sup_norm(u);
        if (sup >= cfg.blowup_sup) {
            rec.outcome = Outcome::blowup;
            rec.t_star = t;
            record_terminal();
            return rec;
        }

        // explicit-reaction stiffness estimate
        const double coef = with_reaction ? (cfg.damping ? std::abs(cfg.m_cap - m) : cfg.m_cap) : 0.0;
        const double stiff = cfg.alpha * std::pow(sup, cfg.alpha - 1.0) * coef;
        const double dt_stable = cfg.safety / (stiff + kTiny);
        dt_base = std::min({dt_base * cfg.dt_growth, cfg.dt_max, dt_stable});
        if (dt_base < cfg.dt_min) {
            rec.outcome = Outcome::blowup;
            rec.t_star = t;
            record_terminal();
            return rec;
        }

        // clip so steps land exactly on sample times and t_end
        double dt = dt_base;
        bool hit_sample = false;
        double t_next = t + dt;
        if (cfg.sample_dt > 0.0) {
            const double t_sample = next_sample_idx * cfg.sample_dt;
            if (t_next >= t_sample - 1e-12 * cfg.sample_dt) {
                dt = t_sample - t;
                t_next = t_sample;
                hit_sample = true;
            }
        }
        if (t_next > cfg.t_end) {
            dt = cfg.t_end - t;
            t_next = cfg.t_end;
        }
        if (dt <= 0.0) break;

        u = eng.advance(u, m, dt);
        t = t_next;
        last_dt = dt;
        ++accepted;

        bool do_record;
        if (cfg.sample_dt > 0.0) {
            do_record = hit_sample;
            if (hit_sample) ++next_sample_idx;
        } else {
            do_record = (accepted % cfg.record_every == 0);
        }
        if (t >= cfg.t_end - 1e-12 * cfg.t_end) do_record = true;
        if (do_record) record_sample(rec, grid, u, t, dt);

        if (accepted >= cfg.max_steps) {
            rec.outcome = Outcome::stalled;
            rec.t_star = t;
            return rec;
        }
    }

    rec.outcome = Outcome::completed;
    return rec;
}

}  // namespace

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::completed: return "completed";
        case Outcome::blowup: return "blowup";
        case Outcome::stalled: return "stalled";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    if (!(m_cap > 0.0)) throw std::invalid_argument("SolverConfig: M0 must be positive");
    if (!(alpha > 1.0)) throw std::invalid_argument("SolverConfig: alpha must exceed 1");
    if (!(dt_min <= dt_init && dt_init <= dt_max))
        throw std::invalid_argument("SolverConfig: need dt_min <= dt_init <= dt_max");
    if (!(safety > 0.0) || !(safety <= 1.0))
        throw std::invalid_argument("SolverConfig: safety must lie in (0, 1]");
    if (!(dt_growth >= 1.0)) throw std::invalid_argument("SolverConfig: dt_growth must be >= 1");
    if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end must be positive");
    if (record_every < 1) throw std::invalid_argument("SolverConfig: record_every must be >= 1");
    for (double k : norm_exponents)
        if (!(k >= 1.0)) throw std::invalid_argument("SolverConfig: norm exponents must be >= 1");
}

double epsilon_ts(const SolverConfig& cfg) { return kEpsTsCoeff * cfg.dt_max; }

const std::vector<double>& RunRecord::lk(double k) const {
    for (size_t j = 0; j < config.norm_exponents.size(); ++j)
        if (std::abs(config.norm_exponents[j] - k) <= 1e-12 * std::max(1.0, k))
            return lk_series[j];
    throw std::invalid_argument("RunRecord: L^k series not recorded for k = " + fmt(k));
}

bool RunRecord::has_lk(double k) const {
    for (double kk : config.norm_exponents)
        if (std::abs(kk - k) <= 1e-12 * std::max(1.0, k)) return true;
    return false;
}

Field step(const Field& u, const SolverConfig& cfg, double dt) {
    cfg.validate();
    u.validate();
    if (!(dt >= cfg.dt_min) || !(dt <= cfg.dt_max))
        throw std::invalid_argument("step: dt outside [dt_min, dt_max]");
    Engine eng(*u.grid, cfg, true);
    std::vector<double> next = eng.advance(u.values, mass(u), dt);
    if (!all_finite(next)) throw std::runtime_error("step: non-finite state (blow-up)");
    return Field{u.grid, std::move(next)};
}

RunRecord run(const Field& u0, const SolverConfig& cfg) { return run_impl(u0, cfg, true); }

RunRecord heat_only_run(const Field& u0, const SolverConfig& cfg) {
    return run_impl(u0, cfg, false);
}

double mass_ode_residual(const RunRecord& rec) {
    const size_t n = rec.times.size();
    if (n < 3) throw std::invalid_argument("mass_ode_residual: needs >= 3 samples");
    if (!rec.config.damping)
        throw std::invalid_argument("mass_ode_residual: requires a damping-on record");

    double scale = 0.0;
    for (size_t j = 0; j < n; ++j)
        scale = std::max(scale, std::abs((rec.config.m_cap - rec.mass_series[j]) * rec.reaction_series[j]));
    if (scale == 0.0) return 0.0;

    double worst = 0.0;
    for (size_t j = 1; j + 1 < n; ++j) {
        const double t0 = rec.times[j - 1], t1 = rec.times[j], t2 = rec.times[j + 1];
        const double m0 = rec.mass_series[j - 1], m1 = rec.mass_series[j], m2 = rec.mass_series[j + 1];
        // derivative of the quadratic interpolant at the middle sample
        const double h1 = t1 - t0, h2 = t2 - t1;
        const double dmdt = (m2 * h1 * h1 + m1 * (h2 * h2 - h1 * h1) - m0 * h2 * h2) /
                            (h1 * h2 * (h1 + h2));
        const double ode_rhs = (rec.config.m_cap - m1) * rec.reaction_series[j];
        worst = std::max(worst, std::abs(dmdt - ode_rhs));
    }
    return worst / scale;
}

double mass_gap_identity(const RunRecord& rec, double m0) {
    if (!rec.config.damping)
        throw std::invalid_argument("mass_gap_identity: requires a damping-on record");
    if (!rec.has_lk(rec.config.alpha))
        throw std::invalid_argument("mass_gap_identity: L^alpha series not recorded");
    const auto& la = rec.lk(rec.config.alpha);
    const double gap0 = rec.config.m_cap - m0;
    if (!(gap0 > 0.0)) throw std::invalid_argument("mass_gap_identity: requires m0 < M0");

    double integral = 0.0;  // trapezoid of ||u||^alpha_alpha
    double worst = 0.0;
    double prev_val = std::pow(la[0], rec.config.alpha);
    for (size_t j = 0; j < rec.times.size(); ++j) {
        const double val = std::pow(la[j], rec.config.alpha);
        if (j > 0) integral += 0.5 * (prev_val + val) * (rec.times[j] - rec.times[j - 1]);
        prev_val = val;
        const double lhs = rec.config.m_cap - rec.mass_series[j];
        const double rhs = gap0 * std::exp(-integral);
        worst = std::max(worst, std::abs(lhs - rhs) / gap0);
    }
    return worst;
}

void write_csv(const RunRecord& rec, std::ostream& out) {
    out << "t,m,reaction_integral,dt,sup";
    for (double k : rec.config.norm_exponents) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "L%g", k);
        out << "," << buf;
    }
    out << "\n";
    for (size_t j = 0; j < rec.times.size(); ++j) {
        out << fmt(rec.times[j]) << "," << fmt(rec.mass_series[j]) << ","
            << fmt(rec.reaction_series[j]) << "," << fmt(rec.dt_series[j]) << ","
            << fmt(rec.sup_series[j]);
        for (const auto& series : rec.lk_series) out << "," << fmt(series[j]);
        out << "\n";
    }
}

void write_checkpoint(const Field& u, double t, double dt, const std::string& prefix) {
    write_snapshot_file(u, t, prefix + ".snap");
    std::ofstream st(prefix + ".state");
    if (!st) throw std::runtime_error("write_checkpoint: cannot open " + prefix + ".state");
    st << "t=" << fmt(t) << "\n" << "dt=" << fmt(dt) << "\n";
}

Field read_checkpoint(std::shared_ptr<const RadialGrid> grid, const std::string& prefix,
                      double* t_out, double* dt_out) {
    std::ifstream snap(prefix + ".snap");
    if (!snap) throw std::runtime_error("read_checkpoint: cannot open " + prefix + ".snap");
    Field u = read_snapshot(grid, snap);

    std::ifstream st(prefix + ".state");
    if (!st) throw std::runtime_error("read_checkpoint: cannot open " + prefix + ".state");
    std::string line;
    double t = 0.0, dt = 0.0;
    while (std::getline(st, line)) {
        if (line.rfind("t=", 0) == 0) t = std::stod(line.substr(2));
        else if (line.rfind("dt=", 0) == 0) dt = std::stod(line.substr(3));
    }
    if (t_out) *t_out = t;
    if (dt_out) *dt_out = dt;
    return u;
}

}  // namespace nlrd
