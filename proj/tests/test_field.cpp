#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "nlrd/field.hpp"
#include "oracles.hpp"

using namespace nlrd;

namespace {

std::shared_ptr<const RadialGrid> grid3(double radius = 10.0, int count = 256) {
    return std::make_shared<const RadialGrid>(build_grid(3, radius, count));
}

Field gaussian_field(std::shared_ptr<const RadialGrid> g, double m0, double sigma) {
    return make_initial(std::move(g), GaussianProfile{m0, sigma});
}

}  // namespace

TEST_CASE("field validation") {
    auto g = grid3();
    std::vector<double> v(g->count, 1.0);
    CHECK_THROWS_AS(make_field(g, v), std::invalid_argument);  // last value nonzero
    v.back() = 0.0;
    CHECK_NOTHROW(make_field(g, v));
    v[3] = -1e-9;
    CHECK_THROWS_AS(make_field(g, v), std::invalid_argument);
}

TEST_CASE("lp_norm basics") {
    auto g = grid3();
    const Field zero = zero_field(g);
    CHECK(lp_norm(zero, 1.0) == 0.0);
    CHECK(lp_norm(zero, 2.0) == 0.0);
    CHECK(lp_norm(zero, kInfinityNorm) == 0.0);
    CHECK_THROWS_AS(lp_norm(zero, 0.5), std::invalid_argument);

    const Field u = gaussian_field(g, 1.0, 1.0);
    CHECK(lp_norm(u, kInfinityNorm) ==
          doctest::Approx(oracle::heat_kernel_peak(3, 1.0)).epsilon(1e-12));
    CHECK(lp_norm(u, 2.0) == doctest::Approx(oracle::heat_kernel_l2(3, 1.0)).epsilon(1e-6));

    // cross-check the L^2 value against the independent quadrature oracle
    const double ref = std::sqrt(oracle::radial_integral(3, 10.0, [](double r) {
        const double v = oracle::heat_kernel_peak(3, 1.0) * std::exp(-r * r / 4.0);
        return v * v;
    }));
    CHECK(lp_norm(u, 2.0) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("mass equals the L1 norm and matches the profile targets") {
    auto g = grid3();
    CHECK(mass(zero_field(g)) == 0.0);

    const Field u = gaussian_field(g, 2.5, 1.0);
    CHECK(mass(u) == doctest::Approx(2.5).epsilon(1e-6));
    CHECK(mass(u) == doctest::Approx(lp_norm(u, 1.0)).epsilon(1e-14));

    const Field bump = make_initial(g, BumpProfile{1.0, 1.0});
    CHECK(mass(bump) == doctest::Approx(4.18879).epsilon(0.02));
}

TEST_CASE("grad_l2_sq on the tent profile") {
    auto g = grid3(10.0, 512);
    std::vector<double> v(g->count, 0.0);
    for (int i = 0; i < g->count; ++i) v[i] = std::max(0.0, 1.0 - g->nodes[i]);
    const Field tent = make_field(g, v);
    // |u'| = 1 on the support: integral is the unit-ball volume 4 pi / 3
    CHECK(grad_l2_sq(tent) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(0.05));
    CHECK(grad_l2_sq(zero_field(g)) == 0.0);

    // refinement brings it closer
    auto gf = grid3(10.0, 1024);
    std::vector<double> vf(gf->count, 0.0);
    for (int i = 0; i < gf->count; ++i) vf[i] = std::max(0.0, 1.0 - gf->nodes[i]);
    const double exact = 4.0 * std::numbers::pi / 3.0;
    CHECK(std::abs(grad_l2_sq(make_field(gf, vf)) - exact) <
          std::abs(grad_l2_sq(tent) - exact));
}

TEST_CASE("make_initial parameter validation") {
    auto g = grid3();
    CHECK_THROWS_AS(make_initial(g, GaussianProfile{1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_initial(g, BumpProfile{1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_initial(g, BumpProfile{1.0, 11.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_initial(g, SingularProfile{0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_initial(g, SingularProfile{3.0, 1.0}), std::invalid_argument);
    CHECK_NOTHROW(make_initial(g, SingularProfile{2.5, 1.0}));
    CHECK(mass(make_initial(g, BumpProfile{0.0, 1.0})) == 0.0);
}

TEST_CASE("singular profile mass approaches the closed-form radial integral") {
    // 4 pi integral_0^1 r^{-2.5} r^2 dr = 8 pi, reduced slightly by the cap
    auto g = grid3(10.0, 2048);
    const Field u = make_initial(g, SingularProfile{2.5, 1.0});
    const double exact = 8.0 * std::numbers::pi;
    const double m = mass(u);
    CHECK(m <= exact);
    CHECK(m == doctest::Approx(exact).epsilon(0.10));
    CHECK(lp_norm(u, kInfinityNorm) == doctest::Approx(std::pow(g->spacing(), -2.5)).epsilon(1e-12));
}

TEST_CASE("Hoelder interpolation: ||u||_k^k <= ||u||_1^{2-k} ||u||_2^{2(k-1)} for 1<k<2") {
    auto g = grid3();
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> mdist(0.2, 4.0), sdist(0.3, 2.5), kdist(1.05, 1.95);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(g->count, 0.0);
        const int nb = 1 + trial % 3;
        for (int b = 0; b < nb; ++b) {
            const Field f = gaussian_field(g, mdist(rng), sdist(rng));
            for (int i = 0; i < g->count; ++i) v[i] += f.values[i];
        }
        v.back() = 0.0;
        const Field u = make_field(g, v);
        const double k = kdist(rng);
        const double lhs = std::pow(lp_norm(u, k), k);
        const double rhs =
            std::pow(lp_norm(u, 1.0), 2.0 - k) * std::pow(lp_norm(u, 2.0), 2.0 * (k - 1.0));
        CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
}

TEST_CASE("norms are monotone under pointwise domination") {
    auto g = grid3();
    const Field f = gaussian_field(g, 1.0, 1.0);
    Field h = f;
    for (double& v : h.values) v *= 1.5;
    for (double k : {1.0, 2.0, 3.5}) CHECK(lp_norm(f, k) <= lp_norm(h, k));
    CHECK(lp_norm(f, kInfinityNorm) <= lp_norm(h, kInfinityNorm));
}

TEST_CASE("epsilon_grid covers the Gaussian-family discretization error") {
    // the C h^2 tolerance is calibrated so that discrete norms of the
    // gaussian family sit well inside it at every tested resolution
    for (int count : {64, 128, 256}) {
        auto g = grid3(10.0, count);
        const double eps = epsilon_grid(*g);
        for (double sigma : {0.5, 1.0, 2.0}) {
            const Field u = gaussian_field(g, 1.0, sigma);
            const double m_err = std::abs(mass(u) - 1.0);
            CHECK(m_err <= eps);
            const double l2_ref = oracle::heat_kernel_l2(3, sigma);
            CHECK(std::abs(lp_norm(u, 2.0) - l2_ref) <= eps * l2_ref);
            const double grad_ref = oracle::radial_integral(3, 10.0, [&](double r) {
                const double v = oracle::heat_kernel_peak(3, sigma) *
                                 std::exp(-r * r / (4.0 * sigma)) * r / (2.0 * sigma);
                return v * v;
            });
            CHECK(std::abs(grad_l2_sq(u) - grad_ref) <= eps * grad_ref);
        }
    }
}

TEST_CASE("snapshot round trip") {
    auto g = grid3(10.0, 64);
    const Field u = gaussian_field(g, 1.25, 0.7);
    std::stringstream ss;
    write_snapshot(u, 3.5, ss);

    const std::string text = ss.str();
    CHECK(text.rfind("# n=3 R=10 N=64 t=3.5", 0) == 0);

    double t = 0.0;
    const Field back = read_snapshot(g, ss, &t);
    CHECK(t == 3.5);
    for (int i = 0; i < g->count; ++i) CHECK(back.values[i] == u.values[i]);
}
