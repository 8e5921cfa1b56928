#include "nlrd/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nlrd {

void Field::validate() const {
    if (!grid) throw std::invalid_argument("Field: null grid");
    if (static_cast<int>(values.size()) != grid->count)
        throw std::invalid_argument("Field: values length does not match grid count");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("Field: non-finite value");
        if (v < 0.0) throw std::invalid_argument("Field: negative value");
    }
    if (values.back() != 0.0) throw std::invalid_argument("Field: last value must be 0 (Dirichlet)");
}

Field make_field(std::shared_ptr<const RadialGrid> grid, std::vector<double> values) {
    Field f{std::move(grid), std::move(values)};
    f.validate();
    return f;
}

Field zero_field(std::shared_ptr<const RadialGrid> grid) {
    const int n = grid->count;
    return Field{std::move(grid), std::vector<double>(n, 0.0)};
}

double lp_norm(const Field& f, double k) {
    if (k == kInfinityNorm) {
        double m = 0.0;
        for (double v : f.values) m = std::max(m, v);
        return m;
    }
    if (!(k >= 1.0)) throw std::invalid_argument("lp_norm: k must be >= 1 or infinity");
    double s = 0.0;
    for (int i = 0; i < f.grid->count; ++i)
        s += f.grid->weights[i] * std::pow(f.values[i], k);
    return std::pow(s, 1.0 / k);
}

double mass(const Field& f) { return integrate(*f.grid, f.values); }

double grad_l2_sq(const Field& f) {
    const auto& g = *f.grid;
    const int n = g.count;
    const double h = g.spacing();
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double du;
        if (i == 0)
            du = (f.values[1] - f.values[0]) / h;
        else if (i == n - 1)
            du = (f.values[n - 1] - f.values[n - 2]) / h;
        else
            du = (f.values[i + 1] - f.values[i - 1]) / (2.0 * h);
        s += g.weights[i] * du * du;
    }
    return s;
}

double sample(const Field& f, double r) {
    const auto& g = *f.grid;
    if (r < 0.0 || r >= g.radius) return 0.0;
    const double h = g.spacing();
    const int i = static_cast<int>(r / h);
    if (i >= g.count - 1) return 0.0;
    const double frac = r / h - i;
    return f.values[i] * (1.0 - frac) + f.values[i + 1] * frac;
}

Field make_initial(std::shared_ptr<const RadialGrid> grid, const ProfileSpec& spec) {
    const auto& g = *grid;
    std::vector<double> v(g.count, 0.0);

    if (const auto* p = std::get_if<GaussianProfile>(&spec)) {
        if (!(p->sigma > 0.0)) throw std::invalid_argument("make_initial: sigma must be positive");
        if (p->mass0 < 0.0) throw std::invalid_argument("make_initial: mass must be non-negative");
        const double amp = p->mass0 * std::pow(4.0 * std::numbers::pi * p->sigma, -0.5 * g.dim);
        for (int i = 0; i < g.count; ++i)
            v[i] = amp * std::exp(-g.nodes[i] * g.nodes[i] / (4.0 * p->sigma));
    } else if (const auto* p = std::get_if<BumpProfile>(&spec)) {
        if (p->height < 0.0) throw std::invalid_argument("make_initial: height must be non-negative");
        if (!(p->width > 0.0)) throw std::invalid_argument("make_initial: width must be positive");
        if (!(p->width < g.radius)) throw std::invalid_argument("make_initial: width must be below the grid radius");
        for (int i = 0; i < g.count; ++i)
            if (g.nodes[i] <= p->width) v[i] = p->height;
    } else if (const auto* p = std::get_if<SingularProfile>(&spec)) {
        if (!(p->beta > 0.0) || !(p->beta < g.dim))
            throw std::invalid_argument("make_initial: beta must lie in (0, n) for an L1 profile");
        if (!(p->cutoff > 0.0) || !(p->cutoff < g.radius))
            throw std::invalid_argument("make_initial: cutoff must lie in (0, R)");
        const double cap = std::pow(g.spacing(), -p->beta);
        for (int i = 0; i < g.count; ++i) {
            const double r = g.nodes[i];
            if (r > p->cutoff) continue;
            v[i] = (r == 0.0) ? cap : std::min(cap, std::pow(r, -p->beta));
        }
    }

    v.back() = 0.0;
    return Field{std::move(grid), std::move(v)};
}

namespace {
std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace

void write_snapshot(const Field& f, double time, std::ostream& out) {
    const auto& g = *f.grid;
    out << "# n=" << g.dim << " R=" << fmt(g.radius) << " N=" << g.count
        << " t=" << fmt(time) << "\n";
    for (int i = 0; i < g.count; ++i)
        out << fmt(g.nodes[i]) << " " << fmt(f.values[i]) << "\n";
}

void write_snapshot_file(const Field& f, double time, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_snapshot_file: cannot open " + path);
    write_snapshot(f, time, out);
}

Field read_snapshot(std::shared_ptr<const RadialGrid> grid, std::istream& in, double* time_out) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("# n=", 0) != 0)
        throw std::runtime_error("read_snapshot: missing header");
    int dim = 0, count = 0;
    double radius = 0.0, time = 0.0;
    if (std::sscanf(header.c_str(), "# n=%d R=%lf N=%d t=%lf", &dim, &radius, &count, &time) != 4)
        throw std::runtime_error("read_snapshot: malformed header");
    if (dim != grid->dim || count != grid->count)
        throw std::runtime_error("read_snapshot: header does not match grid");
    std::vector<double> v(count, 0.0);
    for (int i = 0; i < count; ++i) {
        double r = 0.0;
        if (!(in >> r >> v[i])) throw std::runtime_error("read_snapshot: truncated data");
    }
    if (time_out) *time_out = time;
    return make_field(std::move(grid), std::move(v));
}

}  // namespace nlrd
