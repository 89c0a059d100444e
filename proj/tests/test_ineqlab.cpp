#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <chemrep/errors.hpp>
#include <chemrep/grid.hpp>
#include <chemrep/ineqlab.hpp>
#include <chemrep/test_functions.hpp>

using namespace chemrep;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField cos1d(const Grid& g, double base, double amp) {
    ScalarField f(g);
    for (int i = 0; i < g.cells(0); ++i) f[i] = base + amp * std::cos(kPi * g.center(0, i));
    return f;
}

ScalarField coscos(const Grid& g) {
    ScalarField f(g);
    for (int i = 0; i < g.cells(0); ++i)
        for (int j = 0; j < g.cells(1); ++j)
            f.at(i, j, 0) = 2.0
                            + std::cos(kPi * g.center(0, i)) * std::cos(kPi * g.center(1, j));
    return f;
}

} // namespace

TEST_CASE("dimension constants") {
    CHECK(winkler_bound(1) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(winkler_bound(2) == doctest::Approx(11.656854249492380).epsilon(1e-14));
    CHECK(winkler_bound(3) == doctest::Approx(13.928203230275509).epsilon(1e-14));
    CHECK(appendixA_bound(1) == doctest::Approx(1.625).epsilon(1e-15));
    CHECK(appendixA_bound(2) == doctest::Approx(1.9571067811865475).epsilon(1e-14));
    CHECK(appendixA_bound(3) == doctest::Approx(2.2410254037844387).epsilon(1e-14));
}

TEST_CASE("winkler ratio on 2 + cos(pi x): continuum quadrature oracle") {
    // int |phi'|^4/phi^3 = 6.05668318... and int phi (log phi)''^2 = 28.1195783...
    // (high-precision quadrature); the discrete integrals converge O(h^2).
    const Grid g = Grid::make_uniform(1, 128);
    const RatioResult r = winkler_ratio(cos1d(g, 2.0, 1.0));
    CHECK(r.lhs == doctest::Approx(6.056683186).epsilon(2e-3));
    CHECK(r.rhs == doctest::Approx(28.11957833).epsilon(2e-3));
    CHECK(r.ratio == doctest::Approx(0.21539).epsilon(5e-3));
    CHECK(r.ratio < winkler_bound(1));
    CHECK_FALSE(r.degenerate);
    CHECK_FALSE(r.anomaly);
}

TEST_CASE("appendixA ratio on 2 + cos(pi x)") {
    // int |(sqrt phi)''|^2 = 6.90371382..., same right side as above
    const Grid g = Grid::make_uniform(1, 128);
    const RatioResult r = appendixA_ratio(cos1d(g, 2.0, 1.0));
    CHECK(r.lhs == doctest::Approx(6.903713819).epsilon(2e-3));
    CHECK(r.rhs == doctest::Approx(28.11957833).epsilon(2e-3));
    CHECK(r.ratio == doctest::Approx(0.245513).epsilon(5e-3));
    CHECK(r.ratio < appendixA_bound(1));
}

TEST_CASE("constant data hits the degenerate 0/0 convention") {
    const Grid g = Grid::make_uniform(2, 16);
    const RatioResult w = winkler_ratio(ScalarField(g, 3.0));
    CHECK(w.degenerate);
    CHECK_FALSE(w.anomaly);
    CHECK(w.ratio == 0.0);
    const RatioResult a = appendixA_ratio(ScalarField(g, 3.0));
    CHECK(a.degenerate);
    CHECK(a.ratio == 0.0);
}

TEST_CASE("nonpositive data is rejected") {
    const Grid g = Grid::make_uniform(1, 16);
    ScalarField phi(g, 1.0);
    phi[5] = 0.0;
    CHECK_THROWS_AS((void)winkler_ratio(phi), FaultError);
    CHECK_THROWS_AS((void)appendixA_ratio(phi), FaultError);
    phi[5] = -1.0;
    CHECK_THROWS_AS((void)holder_chain_check(phi, phi), FaultError);
}

TEST_CASE("random admissible samples stay below the dimension bounds") {
    for (int n : {1, 2, 3}) {
        CAPTURE(n);
        const Grid g = Grid::make_uniform(n, n == 3 ? 16 : 32);
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            const ScalarField phi = realize(sample({g, 3, 1.0, 0.8}, 300 + seed));
            const RatioResult w = winkler_ratio(phi);
            const RatioResult a = appendixA_ratio(phi);
            CHECK_FALSE(w.anomaly);
            CHECK_FALSE(a.anomaly);
            CHECK(w.ratio <= winkler_bound(n));
            CHECK(a.ratio <= appendixA_bound(n));
        }
    }
}

TEST_CASE("pointwise counterexample: vanishing denominator, positive numerator") {
    const PointwiseCounterexampleReport rep = appendixA_pointwise_counterexample();
    // u = e^x: |Hess sqrt u|^2 = e^x/16 >= 1/16 e^{2h...}; u |Hess log u|^2 = 0 exactly
    CHECK(rep.min_interior_numerator == doctest::Approx(1.0 / 16.0).epsilon(0.1));
    CHECK(rep.max_interior_denominator <= 1e-20);
    CHECK(rep.min_interior_quotient >= 1e15);
    // the same function violates the Neumann condition: u' = e^x on both walls
    CHECK(rep.boundary_flux_max_abs == doctest::Approx(std::exp(1.0)).epsilon(1e-2));
    // shrinking the admissible perturbation blows the mid-cell quotient up
    CHECK(rep.epsilons[0] > rep.epsilons[1]);
    CHECK(rep.epsilons[1] > rep.epsilons[2]);
    CHECK(rep.perturbed_mid_quotients[0] < rep.perturbed_mid_quotients[1]);
    CHECK(rep.perturbed_mid_quotients[1] < rep.perturbed_mid_quotients[2]);
    CHECK(rep.perturbed_mid_quotients[2] >= 1e3);
}

TEST_CASE("bochner residual is stencil-exact on quadratics") {
    for (int dim : {1, 2, 3}) {
        CAPTURE(dim);
        const Grid g = Grid::make_uniform(dim, 12);
        ScalarField f(g);
        for (int i = 0; i < g.cells(0); ++i)
            for (int j = 0; j < g.cells(1); ++j)
                for (int k = 0; k < g.cells(2); ++k) {
                    const double x = g.center(0, i), y = g.center(1, j), z = g.center(2, k);
                    f.at(i, j, k) = 1.0 + 0.5 * x * x + 0.25 * x * y - y * y + 0.125 * z * z
                                    + 0.3 * x - 0.2 * y + 0.7 * z * x;
                }
        CHECK(bochner_residual(f) <= 1e-10);
    }
}

TEST_CASE("bochner residual converges at second order on a cosine sample") {
    // Max-norm orders for this frozen sample: 1.887 (32->64), 1.972 (64->128),
    // 1.993 (128->256); the order across the 32..128 triple is 1.930.
    TestFunctionSpec spec = sample({Grid::make_uniform(2, 32), 1, 1.0, 0.5}, 1);
    spec.grid = Grid::make_uniform(2, 32);
    const double r32 = bochner_residual(realize(spec));
    spec.grid = Grid::make_uniform(2, 64);
    const double r64 = bochner_residual(realize(spec));
    spec.grid = Grid::make_uniform(2, 128);
    const double r128 = bochner_residual(realize(spec));
    CHECK(r32 > 0.0);
    CHECK(0.5 * std::log2(r32 / r128) >= 1.9); // aggregate across the triple
    CHECK(std::log2(r64 / r128) >= 1.9);       // finest pair individually
}

TEST_CASE("bochner needs an interior at stencil offset 2") {
    CHECK_THROWS_AS((void)bochner_residual(ScalarField(Grid::make_uniform(1, 4), 1.0)),
                    FaultError);
}

TEST_CASE("boundary sign check on 2 + cos(pi x) cos(pi y): frozen O(h^2) envelope") {
    // worst outward derivative of |grad u|^2; values frozen from this
    // operator chain at three resolutions — the decay is the content.
    const double w64 = boundary_sign_check(coscos(Grid::make_uniform(2, 64))).worst_value;
    const double w128 = boundary_sign_check(coscos(Grid::make_uniform(2, 128))).worst_value;
    CHECK(w64 == doctest::Approx(2.91982e-2).epsilon(1e-3));
    CHECK(w128 == doctest::Approx(3.66299e-3).epsilon(1e-3));
    CHECK(w128 < w64);
    const BoundarySignReport rep = boundary_sign_check(coscos(Grid::make_uniform(2, 64)));
    CHECK_FALSE(rep.corner_adjacent);
}

TEST_CASE("boundary sign check is nonpositive for a concave-profile sample") {
    // u = 2 + cos(pi x) in 1d: |u'|^2 = pi^2 sin^2(pi x) has outward
    // derivative -pi^3 sin(2 pi x)|_{x=0,1} = 0 at both walls with negative
    // one-sided curvature; the check must report a value <= O(h^2).
    const double w = boundary_sign_check(cos1d(Grid::make_uniform(1, 64), 2.0, 1.0)).worst_value;
    CHECK(w <= 1e-2);
}

TEST_CASE("hessian/grad-laplacian probe against a single-mode closed form") {
    // phi = cos(pi x) on [0,1]^3: ||Hess phi||_L6 / ||grad lap phi||_L2
    //   = (int cos^6)^{1/6} pi^2 / (pi^3 (int sin^2)^{1/2})
    //   = (5/16)^{1/6} sqrt(2) / pi = 0.3708288...
    const Grid g = Grid::make_uniform(3, 48);
    ScalarField phi(g);
    for (int i = 0; i < g.cells(0); ++i)
        for (int j = 0; j < g.cells(1); ++j)
            for (int k = 0; k < g.cells(2); ++k)
                phi.at(i, j, k) = std::cos(kPi * g.center(0, i));
    std::vector<ScalarField> batch;
    batch.push_back(std::move(phi));
    const ProbeResult p = hessian_grad_laplacian_probe(batch);
    CHECK(p.evaluated == 1);
    CHECK(p.skipped == 0);
    const double analytic = std::pow(5.0 / 16.0, 1.0 / 6.0) * std::sqrt(2.0) / kPi;
    CHECK(p.sup_ratio == doctest::Approx(analytic).epsilon(1e-2));
}

TEST_CASE("probe skips degenerate samples and faults on an all-degenerate batch") {
    const Grid g = Grid::make_uniform(2, 16);
    std::vector<ScalarField> batch;
    batch.emplace_back(g, 1.0); // constant: grad lap vanishes
    CHECK_THROWS_AS((void)hessian_grad_laplacian_probe(batch), FaultError);

    batch.push_back(realize(sample({g, 2, 1.0, 0.5}, 3)));
    const ProbeResult p = hessian_grad_laplacian_probe(batch);
    CHECK(p.evaluated == 1);
    CHECK(p.skipped == 1);
}

TEST_CASE("holder chain holds to roundoff on random pairs") {
    for (int n : {1, 2, 3}) {
        CAPTURE(n);
        const Grid g = Grid::make_uniform(n, n == 3 ? 16 : 32);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const ScalarField phi = realize(sample({g, 3, 1.0, 0.7}, 500 + seed));
            const ScalarField psi = realize(sample({g, 3, 1.0, 0.7}, 900 + seed));
            const HolderChainReport rep = holder_chain_check(phi, psi);
            CHECK(rep.holds);
            CHECK(rep.lhs <= rep.rhs * (1.0 + 1e-8));
            CHECK(rep.rhs
                  == doctest::Approx(0.5 * rep.grad_sqrt_l2 * rep.hess_l6 * rep.quotient_l4
                                     * rep.root_l12)
                         .epsilon(1e-12));
        }
    }
}

TEST_CASE("holder chain on the 1d cosine pair keeps a visible margin") {
    // continuum oracle for phi = psi = 2 + cos(pi x): lhs/rhs = 0.455863805...
    // (30-digit quadrature of the four factors); N = 128 sits within O(h^2)
    const Grid g = Grid::make_uniform(1, 128);
    const HolderChainReport rep = holder_chain_check(cos1d(g, 2.0, 1.0), cos1d(g, 2.0, 1.0));
    CHECK(rep.holds);
    CHECK(rep.lhs / rep.rhs == doctest::Approx(0.45586380524185).epsilon(1e-3));
}
