#pragma once

#include <string>
#include <vector>

#include "nlrd/field.hpp"

namespace nlrd {

/**
 * Estimate of the sharp constant C* of
 *   ||u||^{alpha+1}_{alpha+1} <= C* ||u||^{alpha-1}_1 ||grad u||^2_2
 * at alpha = 1 + 2/n over non-negative radial profiles, together with the
 * certified upper bound 1/S_n and the derived critical mass threshold.
 */
struct GnsEstimate {
    int dim = 0;
    double alpha = 0.0;
    double cstar = 0.0;        // best J found
    double upper_bound = 0.0;  // 1/S_n
    double m0_crit = 0.0;      // (alpha/(alpha-1)) ((alpha-1)/cstar)^{1/alpha}
    int iterations = 0;        // accepted ascent steps across all seeds
    bool converged = false;
    Field profile;                 // maximizer candidate (unit L^1 and L^{alpha+1})
    std::vector<double> j_trace;   // J after each accepted step of the best seed
};

struct OptimizerSettings {
    int max_iterations = 600;
    double ascent_step = 0.5;
    double tolerance = 1e-11;    // plateau threshold on J
    int plateau_window = 15;
    std::vector<std::string> seeds = {"gaussian", "tent", "poly"};
};

// J(f) = ||f||^{alpha+1}_{alpha+1} / (||f||^{alpha-1}_1 ||grad f||^2) with
// alpha = 1 + 2/n taken from the grid.  Throws on a zero field or zero
// gradient norm.
double j_functional(const Field& f);

// Discrete symmetric non-increasing rearrangement: redistributes the
// (value, quadrature volume) chunks of f into radial bins in descending
// value order, averaging within each bin.  Preserves the discrete mass
// exactly; L^k norms up to the bin quantization; never spills onto the
// Dirichlet node.
Field rearrange_decreasing(const Field& f);

// Scaling lambda f(mu r) with mu = (||f||_1 / ||f||_{alpha+1})^{(alpha+1)/(n alpha)}
// and lambda = mu^n / ||f||_1, which drives both the L^1 and L^{alpha+1}
// norms to 1 and leaves J invariant.  Throws on a zero field.
Field normalize(const Field& f);

// Multi-start projected gradient ascent on J: first-variation step, clip to
// non-negative, rearrange, normalize; accepted steps never decrease J.
// Throws if no seed produces a finite J, or if the estimate violates the
// 1/S_n certificate beyond epsilon_grid.
GnsEstimate estimate_cstar(std::shared_ptr<const RadialGrid> grid,
                           const OptimizerSettings& settings = {});

// (alpha/(alpha-1)) ((alpha-1)/cstar)^{1/alpha}; every M0 strictly below it
// gives a positive threshold margin eta_0.  Throws on cstar <= 0.
double critical_mass(double cstar, double alpha);

// Per-exponent prefactor 4(k-1)/k^2 of the k-norm threshold; maximal at k = 2.
double threshold_factor(double k);

// Ascent direction: pointwise first variation of J divided by J.
std::vector<double> j_first_variation(const Field& f);

// JSON export with keys {n, alpha, cstar, upper_bound, m0_crit, iterations,
// converged}; the profile goes to a separate snapshot file.
std::string estimate_to_json(const GnsEstimate& est);

}  // namespace nlrd
