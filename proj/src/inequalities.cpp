#include "nlrd/inequalities.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlrd {

namespace {

Field pointwise_root(const Field& f, double a) {
    if (a == 1.0) return f;
    Field g = f;
    for (double& v : g.values) v = std::pow(v, 1.0 / a);
    return g;
}

void require_admissible_pair(int n, double a, double b, bool equality_case) {
    if (!(a > 0.0)) throw std::invalid_argument("gns: a must be positive");
    const double ratio = b / a;
    const double upper = 2.0 * n / (a * (n - 2));
    if (!(ratio > 1.0) || !(ratio < upper))
        throw std::invalid_argument("gns: need 1 < b/a < 2n/(a(n-2))");
    const double crit = 2.0 / a + 2.0 / n;
    if (equality_case) {
        if (std::abs(ratio - crit) > 1e-12 * crit)
            throw std::invalid_argument("gns_sd_check: requires b/a = 2/a + 2/n");
    } else {
        if (!(ratio < crit))
            throw std::invalid_argument("gns_young_bound: requires b/a < 2/a + 2/n");
    }
}

}  // namespace

SobolevConstant sobolev_constant(int dim) {
    if (dim < 3) throw std::invalid_argument("sobolev_constant: dim must be >= 3");
    const double n = static_cast<double>(dim);
    const double value = n * (n - 2.0) / 4.0 * std::pow(2.0, 2.0 / n) *
                         std::pow(std::numbers::pi, 1.0 + 1.0 / n) *
                         std::pow(std::tgamma((n + 1.0) / 2.0), -2.0 / n);
    return {dim, value};
}

double sobolev_check(const Field& f) {
    const int n = f.grid->dim;
    const double sn = sobolev_constant(n).value;
    const double k = 2.0 * n / (n - 2.0);
    const double norm = lp_norm(f, k);
    return grad_l2_sq(f) - sn * norm * norm;
}

GnsExponents gns_exponents(int dim, double a, double b) {
    require_admissible_pair(dim, a, b, false);
    const double n = static_cast<double>(dim);
    GnsExponents e;
    e.a = a;
    e.b = b;
    e.delta = 2.0 * (1.0 / a - (n - 2.0) / (2.0 * n)) / (b / a - 1.0);
    e.gamma = 1.0 + 2.0 * (b - a) / (2.0 * a - (b - 2.0) * n);
    e.theta = (1.0 / a - 1.0 / b) / (1.0 / a - (n - 2.0) / (2.0 * n));
    return e;
}

BoundPair gns_sd_check(const Field& f, double a, double b) {
    const int n = f.grid->dim;
    require_admissible_pair(n, a, b, true);
    const double ratio = b / a;
    const double lhs = std::pow(lp_norm(f, ratio), ratio);
    const Field root = pointwise_root(f, a);
    const double sn = sobolev_constant(n).value;
    const double rhs = (1.0 / sn) * grad_l2_sq(root) * std::pow(lp_norm(f, 1.0), 2.0 / n);
    return {lhs, rhs};
}

BoundPair gns_young_bound(const Field& f, double a, double b, double c0) {
    const int n = f.grid->dim;
    if (!(c0 > 0.0)) throw std::invalid_argument("gns_young_bound: c0 must be positive");
    const GnsExponents e = gns_exponents(n, a, b);
    require_admissible_pair(n, a, b, false);
    if (!(b / a < 2.0 / a + 2.0 / n))
        throw std::invalid_argument("gns_young_bound: requires b/a < 2/a + 2/n");

    const double ratio = b / a;
    const double lhs = std::pow(lp_norm(f, ratio), ratio);
    const double sn = sobolev_constant(n).value;
    const double coeff = (1.0 - 1.0 / e.delta) * std::pow(e.delta, -1.0 / (e.delta - 1.0)) *
                         std::pow(sn * c0, -1.0 / (e.delta - 1.0));
    const Field root = pointwise_root(f, a);
    const double rhs = coeff * std::pow(lp_norm(f, 1.0), e.gamma) + c0 * grad_l2_sq(root);
    return {lhs, rhs};
}

double ode_bound_hyper(double eta, double beta, double p, double t) {
    if (!(eta >= 0.0) || !(beta > 0.0) || !(p > 1.0) || !(t > 0.0))
        throw std::invalid_argument("ode_bound_hyper: need eta >= 0, beta > 0, p > 1, t > 0");
    return std::pow(eta / beta, 1.0 / p) + std::pow(1.0 / (beta * (p - 1.0) * t), 1.0 / (p - 1.0));
}

double ode_bound_capped(double y0, double eta, double beta, double p) {
    if (!(y0 >= 0.0) || !(eta >= 0.0) || !(beta > 0.0) || !(p > 1.0))
        throw std::invalid_argument("ode_bound_capped: need y0 >= 0, eta >= 0, beta > 0, p > 1");
    return std::max(y0, std::pow(eta / beta, 1.0 / p));
}

double ode_bound_shifted(double f_at_t0, double beta, double p, double t0, double t) {
    if (!(f_at_t0 >= 0.0) || !(beta > 0.0) || !(p > 1.0) || !(t0 > 0.0))
        throw std::invalid_argument("ode_bound_shifted: invalid parameters");
    if (!(t > t0)) throw std::invalid_argument("ode_bound_shifted: requires t > t0");
    return std::pow(f_at_t0 / beta, 1.0 / p) +
           std::pow(1.0 / (beta * (p - 1.0) * (t - t0)), 1.0 / (p - 1.0));
}

}  // namespace nlrd
