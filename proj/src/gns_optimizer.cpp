#include "nlrd/gns_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "nlrd/inequalities.hpp"

namespace nlrd {

namespace {

double alpha_of(const RadialGrid& g) { return 1.0 + 2.0 / g.dim; }

struct JParts {
    double p;  // ||f||^{alpha+1}_{alpha+1}
    double m;  // ||f||_1
    double g;  // ||grad f||^2
};

JParts j_parts(const Field& f, double alpha) {
    JParts parts;
    parts.m = mass(f);
    parts.g = grad_l2_sq(f);
    double s = 0.0;
    for (int i = 0; i < f.grid->count; ++i)
        s += f.grid->weights[i] * std::pow(f.values[i], alpha + 1.0);
    parts.p = s;
    return parts;
}

Field seed_profile(std::shared_ptr<const RadialGrid> grid, const std::string& name) {
    const auto& g = *grid;
    std::vector<double> v(g.count, 0.0);
    if (name == "gaussian") {
        for (int i = 0; i < g.count; ++i)
            v[i] = std::exp(-g.nodes[i] * g.nodes[i] / 4.0);
    } else if (name == "tent") {
        const double w = std::min(3.0, 0.5 * g.radius);
        for (int i = 0; i < g.count; ++i)
            v[i] = std::max(0.0, 1.0 - g.nodes[i] / w);
    } else if (name == "poly") {
        const double p = 0.5 * (g.dim + 2);
        for (int i = 0; i < g.count; ++i)
            v[i] = std::pow(1.0 + g.nodes[i] * g.nodes[i], -p);
    } else {
        throw std::invalid_argument("estimate_cstar: unknown seed profile '" + name + "'");
    }
    v.back() = 0.0;
    return Field{std::move(grid), std::move(v)};
}

struct SeedResult {
    double j = 0.0;
    Field profile;
    std::vector<double> trace;
    bool converged = false;
};

SeedResult ascend(const Field& seed, const OptimizerSettings& opt) {
    const double alpha = alpha_of(*seed.grid);
    const RadialLaplacian lap = build_laplacian(*seed.grid);
    const int n = seed.grid->count;

    SeedResult res;
    Field u = normalize(rearrange_decreasing(seed));
    double j = j_functional(u);
    double s = opt.ascent_step;
    res.trace.push_back(j);

    std::vector<double> lap_u(n), dir(n);
    for (int it = 0; it < opt.max_iterations; ++it) {
        const JParts parts = j_parts(u, alpha);
        lap.apply(u.values, lap_u);
        for (int i = 0; i < n; ++i)
            dir[i] = (alpha + 1.0) * std::pow(u.values[i], alpha) / parts.p -
                     (alpha - 1.0) / parts.m + 2.0 * lap_u[i] / parts.g;
        dir[n - 1] = 0.0;

        bool accepted = false;
        while (s > 1e-13) {
            Field cand = u;
            for (int i = 0; i < n; ++i)
                cand.values[i] = std::max(0.0, u.values[i] + s * dir[i]);
            if (lp_norm(cand, kInfinityNorm) <= 0.0) {
                s *= 0.5;
                continue;
            }
            cand = normalize(rearrange_decreasing(cand));
            const double jc = j_functional(cand);
            if (jc > j) {
                u = std::move(cand);
                j = jc;
                res.trace.push_back(j);
                s = std::min(s * 1.3, 10.0);
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            res.converged = true;  // no ascent direction left at any step size
            break;
        }
        const int w = opt.plateau_window;
        if (static_cast<int>(res.trace.size()) > w &&
            res.trace.back() - res.trace[res.trace.size() - 1 - w] < opt.tolerance) {
            res.converged = true;
            break;
        }
    }
    res.j = j;
    res.profile = std::move(u);
    return res;
}

}  // namespace

double j_functional(const Field& f) {
    const double alpha = alpha_of(*f.grid);
    const JParts parts = j_parts(f, alpha);
    if (!(parts.m > 0.0)) throw std::invalid_argument("j_functional: zero field");
    if (!(parts.g > 0.0)) throw std::invalid_argument("j_functional: zero gradient norm");
    return parts.p / (std::pow(parts.m, alpha - 1.0) * parts.g);
}

std::vector<double> j_first_variation(const Field& f) {
    const double alpha = alpha_of(*f.grid);
    const JParts parts = j_parts(f, alpha);
    if (!(parts.m > 0.0) || !(parts.g > 0.0))
        throw std::invalid_argument("j_first_variation: degenerate field");
    const RadialLaplacian lap = build_laplacian(*f.grid);
    const int n = f.grid->count;
    std::vector<double> lap_u(n), dir(n);
    lap.apply(f.values, lap_u);
    for (int i = 0; i < n; ++i)
        dir[i] = (alpha + 1.0) * std::pow(f.values[i], alpha) / parts.p -
                 (alpha - 1.0) / parts.m + 2.0 * lap_u[i] / parts.g;
    dir[n - 1] = 0.0;
    return dir;
}

Field rearrange_decreasing(const Field& f) {
    const auto& g = *f.grid;
    const int n = g.count;

    // (value, volume) chunks sorted by value descending; zero values act as filler
    std::vector<std::pair<double, double>> chunks;
    chunks.reserve(n);
    for (int i = 0; i < n; ++i)
        if (g.weights[i] > 0.0 && f.values[i] > 0.0)
            chunks.emplace_back(f.values[i], g.weights[i]);
    std::sort(chunks.begin(), chunks.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    Field out = zero_field(f.grid);
    if (chunks.empty()) return out;

    out.values[0] = chunks.front().first;  // zero-volume center node carries the sup
    size_t j = 0;
    double rem = chunks.front().second;
    for (int i = 1; i < n; ++i) {
        double cap = g.weights[i];
        double acc = 0.0;
        while (cap > 0.0 && j < chunks.size()) {
            const double take = std::min(cap, rem);
            acc += take * chunks[j].first;
            cap -= take;
            rem -= take;
            if (rem <= 0.0) {
                ++j;
                rem = j < chunks.size() ? chunks[j].second : 0.0;
            }
        }
        out.values[i] = acc / g.weights[i];
        if (j >= chunks.size() && acc == 0.0) break;  // remaining bins stay zero
    }
    out.values[n - 1] = 0.0;
    return out;
}

Field normalize(const Field& f) {
    const auto& g = *f.grid;
    const double alpha = alpha_of(g);
    const double l1 = lp_norm(f, 1.0);
    if (!(l1 > 0.0)) throw std::invalid_argument("normalize: zero field");
    const double la = lp_norm(f, alpha + 1.0);
    const double mu = std::pow(l1 / la, (alpha + 1.0) / (g.dim * alpha));
    const double lambda = std::pow(mu, g.dim) / l1;

    Field out = zero_field(f.grid);
    for (int i = 0; i < g.count; ++i)
        out.values[i] = lambda * sample(f, mu * g.nodes[i]);
    out.values[g.count - 1] = 0.0;
    return out;
}

GnsEstimate estimate_cstar(std::shared_ptr<const RadialGrid> grid,
                           const OptimizerSettings& settings) {
    const double alpha = alpha_of(*grid);
    if (settings.seeds.empty())
        throw std::invalid_argument("estimate_cstar: needs at least one seed");

    GnsEstimate est;
    est.dim = grid->dim;
    est.alpha = alpha;
    est.upper_bound = 1.0 / sobolev_constant(grid->dim).value;

    bool any = false;
    int total_accepted = 0;
    bool all_converged = true;
    for (const auto& name : settings.seeds) {
        SeedResult r = ascend(seed_profile(grid, name), settings);
        total_accepted += static_cast<int>(r.trace.size()) - 1;
        all_converged = all_converged && r.converged;
        if (!any || r.j > est.cstar) {
            est.cstar = r.j;
            est.profile = std::move(r.profile);
            est.j_trace = std::move(r.trace);
            any = true;
        }
    }
    if (!any || !(est.cstar > 0.0))
        throw std::runtime_error("estimate_cstar: no seed produced a finite J");

    est.iterations = total_accepted;
    est.converged = all_converged;
    est.m0_crit = critical_mass(est.cstar, alpha);

    if (est.cstar > est.upper_bound + epsilon_grid(*grid))
        throw std::runtime_error("estimate_cstar: estimate violates the 1/S_n certificate");
    return est;
}

double critical_mass(double cstar, double alpha) {
    if (!(cstar > 0.0)) throw std::invalid_argument("critical_mass: cstar must be positive");
    if (!(alpha > 1.0)) throw std::invalid_argument("critical_mass: alpha must exceed 1");
    return alpha / (alpha - 1.0) * std::pow((alpha - 1.0) / cstar, 1.0 / alpha);
}

double threshold_factor(double k) {
    if (!(k > 1.0)) throw std::invalid_argument("threshold_factor: k must exceed 1");
    return 4.0 * (k - 1.0) / (k * k);
}

std::string estimate_to_json(const GnsEstimate& est) {
    nlohmann::json j;
    j["n"] = est.dim;
    j["alpha"] = est.alpha;
    j["cstar"] = est.cstar;
    j["upper_bound"] = est.upper_bound;
    j["m0_crit"] = est.m0_crit;
    j["iterations"] = est.iterations;
    j["converged"] = est.converged;
    return j.dump(2);
}

}  // namespace nlrd
