#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "nlrd/radial_grid.hpp"

namespace nlrd {

/// Non-negative radial profile u(r_i) on a shared grid.  The last value is
/// zero (Dirichlet closure at r = R).  Value-like; operations are pure.
struct Field {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> values;

    // Throws std::invalid_argument if a value is negative, non-finite, of
    // the wrong length, or the last value is nonzero.
    void validate() const;
};

Field make_field(std::shared_ptr<const RadialGrid> grid, std::vector<double> values);
Field zero_field(std::shared_ptr<const RadialGrid> grid);

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

// (sum w_i u_i^k)^{1/k} for finite k >= 1; max_i u_i for k = infinity.
double lp_norm(const Field& f, double k);

// integral of u over R^n; equals lp_norm(f, 1) for non-negative fields.
double mass(const Field& f);

// quadrature of s_n r^{n-1} u'(r)^2 with centered differences in the
// interior and one-sided differences at the ends.
double grad_l2_sq(const Field& f);

// u(x) by linear interpolation between nodes; 0 beyond R.
double sample(const Field& f, double r);

struct GaussianProfile {
    double mass0;  // target total mass
    double sigma;  // u = mass0 (4 pi sigma)^{-n/2} exp(-r^2/(4 sigma))
};

struct BumpProfile {
    double height;  // flat top: u = height on r <= width, 0 after
    double width;
};

struct SingularProfile {
    double beta;    // u = min(cap, r^{-beta}) on r <= cutoff, 0 < beta < n
    double cutoff;  // cap is the profile value at r = h (grid ceiling)
};

using ProfileSpec = std::variant<GaussianProfile, BumpProfile, SingularProfile>;

// Throws on invalid parameters (sigma/height/width <= 0, beta outside
// (0, n), cutoff outside (0, R)).
Field make_initial(std::shared_ptr<const RadialGrid> grid, const ProfileSpec& spec);

// Snapshot serialization: "# n=<dim> R=<radius> N=<count> t=<time>" header
// followed by one "r u" row per node.
void write_snapshot(const Field& f, double time, std::ostream& out);
void write_snapshot_file(const Field& f, double time, const std::string& path);
Field read_snapshot(std::shared_ptr<const RadialGrid> grid, std::istream& in, double* time_out = nullptr);

}  // namespace nlrd
