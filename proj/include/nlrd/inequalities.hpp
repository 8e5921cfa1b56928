#pragma once

#include "nlrd/field.hpp"

namespace nlrd {

/// Sharp constant of S_n ||u||^2_{L^{2n/(n-2)}} <= ||grad u||^2_{L^2},
/// S_n = n(n-2)/4 * 2^{2/n} * pi^{1+1/n} * Gamma((n+1)/2)^{-2/n}.
struct SobolevConstant {
    int dim;
    double value;
};

// Throws for dim < 3.
SobolevConstant sobolev_constant(int dim);

// ||grad f||^2 - S_n ||f||^2_{L^{2n/(n-2)}}.  The continuum inequality
// predicts a non-negative result; discrete fields may dip to -epsilon_grid.
double sobolev_check(const Field& f);

struct BoundPair {
    double lhs;
    double rhs;
};

// Interpolation exponents of the general Gagliardo-Nirenberg-Sobolev bound
// for a pair (a, b) with 1 < b/a < 2n/(a(n-2)).
struct GnsExponents {
    double a;
    double b;
    double delta;  // 2(1/a - (n-2)/(2n)) / (b/a - 1)
    double gamma;  // 1 + 2(b-a) / (2a - (b-2)n)
    double theta;  // (1/a - 1/b) / (1/a - (n-2)/(2n)), in (0,1)
};

GnsExponents gns_exponents(int dim, double a, double b);

// Equality-case interpolation bound (b/a = 2/a + 2/n):
//   lhs = ||f||^{b/a}_{L^{b/a}},  rhs = (1/S_n) ||grad f^{1/a}||^2 ||f||^{2/n}_{L^1}.
// Throws if the exponent constraints are violated.
BoundPair gns_sd_check(const Field& f, double a, double b);

// Young-split form for b/a < 2/a + 2/n with free constant c0 > 0:
//   lhs = ||f||^{b/a}_{L^{b/a}},
//   rhs = (1 - 1/delta) delta^{-1/(delta-1)} (S_n c0)^{-1/(delta-1)} ||f||^gamma_{L^1}
//         + c0 ||grad f^{1/a}||^2.
BoundPair gns_young_bound(const Field& f, double a, double b, double c0);

// Bounds for y' <= eta - beta y^p (p > 1, beta > 0):

// (eta/beta)^{1/p} + (1/(beta (p-1) t))^{1/(p-1)}, valid for any t > 0.
double ode_bound_hyper(double eta, double beta, double p, double t);

// max(y0, (eta/beta)^{1/p}) for bounded initial data.
double ode_bound_capped(double y0, double eta, double beta, double p);

// Shifted variant for y' <= f(t) - beta y^p with f non-increasing:
// (f(t0)/beta)^{1/p} + (1/(beta (p-1)(t-t0)))^{1/(p-1)}, t > t0 > 0.
double ode_bound_shifted(double f_at_t0, double beta, double p, double t0, double t);

}  // namespace nlrd
