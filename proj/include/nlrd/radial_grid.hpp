#pragma once

#include <span>
#include <vector>

namespace nlrd {

/// Surface area of the unit sphere in R^n, s_n = 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int dim);

/// Volume of the unit ball in R^n, pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int dim);

/**
 * Uniform discretization of the radial coordinate r in [0, R] carrying
 * trapezoid quadrature weights that represent integration over R^n for
 * radially symmetric integrands:
 *
 *   sum_i weights[i] * f(nodes[i])  ~  integral_{R^n} f(|x|) dx.
 *
 * Immutable after construction; safe to share across threads.
 */
struct RadialGrid {
    int dim = 0;          // space dimension n >= 3
    double radius = 0.0;  // truncation radius R
    int count = 0;        // node count N >= 16
    std::vector<double> nodes;    // r_0 = 0 < ... < r_{N-1} = R, uniform
    std::vector<double> weights;  // w_i = s_n r_i^{n-1} h c_i, c = 1/2 at ends

    double spacing() const { return radius / (count - 1); }
};

// Throws std::invalid_argument for dim < 3, radius <= 0 or count < 16.
RadialGrid build_grid(int dim, double radius, int count);

// Quadrature of a nodal value sequence. Throws on length mismatch.
double integrate(const RadialGrid& grid, std::span<const double> values);

/**
 * Tridiagonal discretization of the radial Laplacian
 * Delta u = u_rr + (n-1)/r u_r.
 *
 * Row 0 is the symmetry closure Delta u(0) ~ 2n (u_1 - u_0)/h^2.  Interior
 * rows use central differences, which are exact on quadratics in r; where
 * the central first-order term would make the lower coefficient negative
 * (first nodes off the origin for n >= 4) the row falls back to the
 * conservative flux form r^{1-n} (r^{n-1} u_r)_r, keeping the off-diagonal
 * coefficients non-negative.  The last row encodes the Dirichlet value
 * u(R) = 0.  Off-diagonals >= 0 and zero row sums make I - dt L an
 * M-matrix for every dt > 0, so the implicit diffusion step preserves
 * non-negativity.
 */
struct RadialLaplacian {
    std::vector<double> lower;  // sub-diagonal, lower[0] unused
    std::vector<double> diag;
    std::vector<double> upper;  // super-diagonal, upper[N-1] unused

    int size() const { return static_cast<int>(diag.size()); }

    // out = L u
    void apply(std::span<const double> u, std::span<double> out) const;

    // Solves (I - dt L) x = rhs by the Thomas algorithm.  rhs must carry
    // rhs[N-1] = 0 so that the Dirichlet row yields x[N-1] = 0.
    std::vector<double> solve_implicit(double dt, std::span<const double> rhs) const;
};

RadialLaplacian build_laplacian(const RadialGrid& grid);

// Discretization tolerance used by the inequality predicates: eps = C h^2
// with C calibrated once against closed-form Gaussian norms.
double epsilon_grid(const RadialGrid& grid);

}  // namespace nlrd
