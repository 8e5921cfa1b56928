#include "nlrd/radial_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlrd {

namespace {
constexpr double kEpsGridCoeff = 25.0;  // calibrated on the Gaussian family
}

double unit_sphere_area(int dim) {
    if (dim < 1) throw std::invalid_argument("unit_sphere_area: dim must be >= 1");
    const double n = static_cast<double>(dim);
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double unit_ball_volume(int dim) {
    if (dim < 1) throw std::invalid_argument("unit_ball_volume: dim must be >= 1");
    const double n = static_cast<double>(dim);
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

RadialGrid build_grid(int dim, double radius, int count) {
    if (dim < 3) throw std::invalid_argument("build_grid: dim must be >= 3, got " + std::to_string(dim));
    if (!(radius > 0.0)) throw std::invalid_argument("build_grid: radius must be positive");
    if (count < 16) throw std::invalid_argument("build_grid: count must be >= 16, got " + std::to_string(count));

    RadialGrid g;
    g.dim = dim;
    g.radius = radius;
    g.count = count;
    g.nodes.resize(count);
    g.weights.resize(count);

    const double h = radius / (count - 1);
    const double sn = unit_sphere_area(dim);
    for (int i = 0; i < count; ++i) {
        const double r = i * h;
        const double c = (i == 0 || i == count - 1) ? 0.5 : 1.0;
        g.nodes[i] = r;
        g.weights[i] = sn * std::pow(r, dim - 1) * h * c;
    }
    g.nodes.back() = radius;  // exact endpoint
    return g;
}

double integrate(const RadialGrid& grid, std::span<const double> values) {
    if (static_cast<int>(values.size()) != grid.count)
        throw std::invalid_argument("integrate: values length does not match grid count");
    double s = 0.0;
    for (int i = 0; i < grid.count; ++i) s += grid.weights[i] * values[i];
    return s;
}

void RadialLaplacian::apply(std::span<const double> u, std::span<double> out) const {
    const int n = size();
    if (static_cast<int>(u.size()) != n || static_cast<int>(out.size()) != n)
        throw std::invalid_argument("RadialLaplacian::apply: size mismatch");
    out[0] = diag[0] * u[0] + upper[0] * u[1];
    for (int i = 1; i < n - 1; ++i)
        out[i] = lower[i] * u[i - 1] + diag[i] * u[i] + upper[i] * u[i + 1];
    out[n - 1] = 0.0;  // Dirichlet row
}

std::vector<double> RadialLaplacian::solve_implicit(double dt, std::span<const double> rhs) const {
    const int n = size();
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("solve_implicit: size mismatch");
    if (!(dt > 0.0)) throw std::invalid_argument("solve_implicit: dt must be positive");

    // A = I - dt L, with the last row forced to identity.
    std::vector<double> c(n, 0.0), x(n, 0.0);
    double beta = 1.0 - dt * diag[0];
    c[0] = -dt * upper[0] / beta;
    x[0] = rhs[0] / beta;
    for (int i = 1; i < n; ++i) {
        const double a = (i == n - 1) ? 0.0 : -dt * lower[i];
        const double d = (i == n - 1) ? 1.0 : 1.0 - dt * diag[i];
        beta = d - a * c[i - 1];
        if (beta == 0.0) throw std::runtime_error("solve_implicit: degenerate pivot");
        if (i < n - 1) c[i] = -dt * upper[i] / beta;
        x[i] = (rhs[i] - a * x[i - 1]) / beta;
    }
    for (int i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
    return x;
}

RadialLaplacian build_laplacian(const RadialGrid& grid) {
    const int n = grid.count;
    const int d = grid.dim;
    const double h = grid.spacing();

    RadialLaplacian lap;
    lap.lower.assign(n, 0.0);
    lap.diag.assign(n, 0.0);
    lap.upper.assign(n, 0.0);

    // r = 0: u'(0) = 0 and Delta u(0) = n u''(0).
    lap.diag[0] = -2.0 * d / (h * h);
    lap.upper[0] = 2.0 * d / (h * h);

    for (int i = 1; i < n - 1; ++i) {
        const double r = grid.nodes[i];
        const double lo_central = 1.0 / (h * h) - (d - 1) / (2.0 * h * r);
        if (lo_central >= 0.0) {
            lap.lower[i] = lo_central;
            lap.diag[i] = -2.0 / (h * h);
            lap.upper[i] = 1.0 / (h * h) + (d - 1) / (2.0 * h * r);
        } else {
            // conservative flux form keeps the M-matrix sign pattern near r = 0
            const double rn = std::pow(r, d - 1);
            const double rp = std::pow(r + 0.5 * h, d - 1);
            const double rm = std::pow(r - 0.5 * h, d - 1);
            lap.lower[i] = rm / (rn * h * h);
            lap.upper[i] = rp / (rn * h * h);
            lap.diag[i] = -(lap.lower[i] + lap.upper[i]);
        }
    }
    // last row stays zero: u(R) = 0
    return lap;
}

double epsilon_grid(const RadialGrid& grid) {
    const double h = grid.spacing();
    return kEpsGridCoeff * h * h;
}

}  // namespace nlrd
