#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>

#include <chemrep/errors.hpp>
#include <chemrep/grid.hpp>

using namespace chemrep;

TEST_CASE("uniform grid geometry") {
    const Grid g = Grid::make_uniform(2, 8, 2.0);
    CHECK(g.dim() == 2);
    CHECK(g.cells(0) == 8);
    CHECK(g.cells(1) == 8);
    CHECK(g.cells(2) == 1); // trailing axis collapsed
    CHECK(g.length(0) == 2.0);
    CHECK(g.length(2) == 1.0);
    CHECK(g.spacing(0) == doctest::Approx(0.25));
    CHECK(g.cell_count() == 64);
    CHECK(g.cell_volume() == doctest::Approx(0.25 * 0.25));
    CHECK(g.center(0, 0) == doctest::Approx(0.125));
    CHECK(g.center(0, 7) == doctest::Approx(2.0 - 0.125));
}

TEST_CASE("row-major index, last active axis fastest") {
    const int cells[] = {4, 5, 6};
    const double lengths[] = {1.0, 1.0, 1.0};
    const Grid g = Grid::make(3, cells, lengths);
    CHECK(g.index(0, 0, 0) == 0);
    CHECK(g.index(0, 0, 1) == 1);
    CHECK(g.index(0, 1, 0) == 6);
    CHECK(g.index(1, 0, 0) == 30);
    CHECK(g.index(3, 4, 5) == g.cell_count() - 1);
}

TEST_CASE("grid construction contract") {
    const int cells[] = {8};
    const double lengths[] = {1.0};
    CHECK_THROWS_AS((void)Grid::make(0, cells, lengths), ConfigError);
    CHECK_THROWS_AS((void)Grid::make(4, cells, lengths), ConfigError);
    CHECK_THROWS_AS((void)Grid::make_uniform(1, 3), ConfigError);        // < 4 cells
    CHECK_THROWS_AS((void)Grid::make_uniform(1, 8, -1.0), ConfigError);  // bad length
    CHECK_THROWS_AS((void)Grid::make_uniform(1, 8, 0.0), ConfigError);
    const int bad[] = {8, 8};
    CHECK_THROWS_AS((void)Grid::make(1, bad, lengths), ConfigError); // count mismatch
}

TEST_CASE("grid equality") {
    CHECK(Grid::make_uniform(2, 16) == Grid::make_uniform(2, 16));
    CHECK(Grid::make_uniform(2, 16) != Grid::make_uniform(2, 32));
    CHECK(Grid::make_uniform(2, 16) != Grid::make_uniform(2, 16, 2.0));
}

TEST_CASE("scalar field storage and extrema") {
    const Grid g = Grid::make_uniform(1, 8);
    ScalarField f(g, 2.5);
    CHECK(f.size() == 8);
    CHECK(f.min() == 2.5);
    CHECK(f.max() == 2.5);
    f[3] = -1.0;
    f.at(5, 0, 0) = 7.0;
    CHECK(f.min() == -1.0);
    CHECK(f.max() == 7.0);
    CHECK(f[5] == 7.0);
    CHECK(f.finite());
    f[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(f.finite());
    f[0] = std::numeric_limits<double>::infinity();
    CHECK_FALSE(f.finite());
}

TEST_CASE("vector field has one component per active axis") {
    const Grid g = Grid::make_uniform(2, 8);
    VectorField w(g);
    w.component(0)[0] = 1.0;
    w.component(1)[0] = 2.0;
    CHECK(w.component(0)[0] == 1.0);
    CHECK(w.component(1)[0] == 2.0);
    CHECK(w.grid() == g);
}

TEST_CASE("tensor field symmetry is storage-exact") {
    const Grid g = Grid::make_uniform(2, 8);
    TensorField h(g);
    h.entry(0, 1)[4] = 3.25;
    CHECK(h.entry(1, 0)[4] == 3.25); // same slot, not a copy
}

TEST_CASE("tensor frobenius and quadratic form") {
    const Grid g = Grid::make_uniform(2, 8);
    TensorField h(g);
    h.entry(0, 0)[0] = 2.0;
    h.entry(0, 1)[0] = -1.0;
    h.entry(1, 1)[0] = 3.0;
    CHECK(h.frobenius_sq(0) == doctest::Approx(4.0 + 2.0 * 1.0 + 9.0));
    const std::array<double, 2> v{1.0, 2.0};
    // v^T H v = 2*1 + 2*(-1)*1*2 + 3*4 = 10
    CHECK(h.quadratic_form(0, v) == doctest::Approx(10.0));
}

TEST_CASE("largest eigenvalue, closed forms") {
    SUBCASE("1d: the diagonal entry") {
        const Grid g = Grid::make_uniform(1, 8);
        TensorField h(g);
        h.entry(0, 0)[2] = -5.0;
        CHECK(h.max_eigenvalue(2) == doctest::Approx(-5.0));
    }
    SUBCASE("2d: [[2,1],[1,2]] has eigenvalues 1 and 3") {
        const Grid g = Grid::make_uniform(2, 8);
        TensorField h(g);
        h.entry(0, 0)[0] = 2.0;
        h.entry(0, 1)[0] = 1.0;
        h.entry(1, 1)[0] = 2.0;
        CHECK(h.max_eigenvalue(0) == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("3d: [[2,1,0],[1,3,1],[0,1,4]] has largest eigenvalue 3+sqrt(3)") {
        const Grid g = Grid::make_uniform(3, 4);
        TensorField h(g);
        h.entry(0, 0)[0] = 2.0;
        h.entry(0, 1)[0] = 1.0;
        h.entry(0, 2)[0] = 0.0;
        h.entry(1, 1)[0] = 3.0;
        h.entry(1, 2)[0] = 1.0;
        h.entry(2, 2)[0] = 4.0;
        CHECK(h.max_eigenvalue(0) == doctest::Approx(3.0 + std::sqrt(3.0)).epsilon(1e-12));
    }
    SUBCASE("eigenvalue dominates the quadratic form on unit vectors") {
        const Grid g = Grid::make_uniform(3, 4);
        TensorField h(g);
        h.entry(0, 0)[0] = 1.0;
        h.entry(0, 1)[0] = 0.5;
        h.entry(0, 2)[0] = -0.25;
        h.entry(1, 1)[0] = -2.0;
        h.entry(1, 2)[0] = 0.75;
        h.entry(2, 2)[0] = 0.5;
        const double lam = h.max_eigenvalue(0);
        double best = -1e300;
        for (int a = 0; a < 126; ++a)
            for (int b = 0; b < 63; ++b) {
                const double th = a * 0.05, ph = b * 0.05;
                const std::array<double, 3> v{std::sin(ph) * std::cos(th),
                                              std::sin(ph) * std::sin(th), std::cos(ph)};
                best = std::max(best, h.quadratic_form(0, v));
            }
        CHECK(best <= lam + 1e-12);
        CHECK(best == doctest::Approx(lam).epsilon(1e-2)); // coarse angular sweep
    }
}
