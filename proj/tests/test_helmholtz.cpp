#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <chemrep/errors.hpp>
#include <chemrep/helmholtz.hpp>
#include <chemrep/operators.hpp>

using namespace chemrep;

namespace {

/// Residual sup |alpha w - lap w - rhs|.
double residual_sup(const ScalarField& w, double alpha, const ScalarField& rhs) {
    const ScalarField lap = laplacian(w);
    double m = 0.0;
    for (std::int64_t i = 0; i < w.size(); ++i)
        m = std::max(m, std::abs(alpha * w[i] - lap[i] - rhs[i]));
    return m;
}

} // namespace

TEST_CASE("constant right-hand side has the constant solution rhs/alpha") {
    const Grid g = Grid::make_uniform(3, 8);
    const double alpha = 4.0;
    const ScalarField w = solve_helmholtz(ScalarField(g, 2.0), alpha, 1e-12);
    for (std::int64_t i = 0; i < w.size(); ++i)
        CHECK(w[i] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("discrete eigenvector gives a closed-form solution") {
    // For f = cos(k pi x) sampled at centers, (alpha - lap_h) f = (alpha + mu) f
    // with mu = (2 - 2 cos(k pi h)) / h^2 exactly, so the solver must return
    // rhs / (alpha + mu) to the linear tolerance.
    const Grid g = Grid::make_uniform(1, 128);
    const double h = g.spacing(0);
    const int k = 3;
    const double mu = (2.0 - 2.0 * std::cos(k * std::numbers::pi * h)) / (h * h);
    const double alpha = 10.0;

    ScalarField rhs(g);
    for (int i = 0; i < g.cells(0); ++i)
        rhs[i] = std::cos(k * std::numbers::pi * g.center(0, i));

    const ScalarField w = solve_helmholtz(rhs, alpha, 1e-12);
    for (std::int64_t i = 0; i < w.size(); ++i)
        CHECK(std::abs(w[i] - rhs[i] / (alpha + mu)) <= 1e-10);
}

TEST_CASE("solver hits the requested residual tolerance") {
    const Grid g = Grid::make_uniform(2, 48);
    ScalarField rhs(g);
    for (int i = 0; i < g.cells(0); ++i)
        for (int j = 0; j < g.cells(1); ++j)
            rhs.at(i, j, 0) = std::sin(0.37 * i) + 0.2 * j; // rough data
    const double alpha = 1001.0; // (1+dt)/dt for dt = 1e-3
    const double tol = 1e-10;
    const ScalarField w = solve_helmholtz(rhs, alpha, tol);
    // stop rule: ||r||_2 <= tol * ||rhs||_2 in unweighted vector norms,
    // and sup|r| <= ||r||_2
    double rhs_vec = 0.0;
    for (std::int64_t i = 0; i < rhs.size(); ++i) rhs_vec += rhs[i] * rhs[i];
    rhs_vec = std::sqrt(rhs_vec);
    CHECK(residual_sup(w, alpha, rhs) <= tol * rhs_vec * (1.0 + 1e-6));
}

TEST_CASE("iteration cap raises a fault") {
    const Grid g = Grid::make_uniform(1, 64);
    ScalarField rhs(g);
    for (int i = 0; i < g.cells(0); ++i) rhs[i] = (i % 2 == 0) ? 1.0 : -1.0;
    CHECK_THROWS_AS((void)solve_helmholtz(rhs, 1e-6, 1e-16, 2), FaultError);
}
