#include "chemrep/ineqlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "chemrep/errors.hpp"

namespace chemrep {
namespace {

constexpr double kDegenerate = 1e-14;

void require_positive(const ScalarField& f, const char* who) {
    if (!(f.min() > 0.0))
        throw FaultError(std::string(who) + ": function must be strictly positive");
}

ScalarField log_field(const ScalarField& f) {
    ScalarField out(f.grid());
    for (std::int64_t i = 0; i < f.size(); ++i) out[i] = std::log(f[i]);
    return out;
}

ScalarField sqrt_field(const ScalarField& f) {
    ScalarField out(f.grid());
    for (std::int64_t i = 0; i < f.size(); ++i) out[i] = std::sqrt(f[i]);
    return out;
}

// integral of weight * |Hess log f|^2 with weight = f (the shared right side
// of both ratio checks)
double weighted_log_hessian(const ScalarField& f) {
    const TensorField h = hessian(log_field(f));
    ScalarField integrand(f.grid());
    for (std::int64_t i = 0; i < f.size(); ++i) integrand[i] = f[i] * h.frobenius_sq(i);
    return integrate(integrand);
}

RatioResult classify(double lhs, double rhs) {
    RatioResult r;
    r.lhs = lhs;
    r.rhs = rhs;
    if (lhs < kDegenerate && rhs < kDegenerate) {
        r.degenerate = true;
        return r; // ratio stays 0 by the 0/0 convention
    }
    if (rhs < kDegenerate) {
        r.anomaly = true;
        r.ratio = lhs / std::max(rhs, 1e-300);
        return r;
    }
    r.ratio = lhs / rhs;
    return r;
}

// Visit every cell whose index is at least `offset` away from both ends of
// each active axis; inactive axes contribute their only cell.
template <typename Fn>
void for_interior(const Grid& g, int offset, Fn&& fn) {
    int lo[3], hi[3];
    for (int a = 0; a < Grid::max_dim; ++a) {
        const bool active = a < g.dim();
        lo[a] = active ? offset : 0;
        hi[a] = active ? g.cells(a) - 1 - offset : 0;
        if (active && hi[a] < lo[a])
            throw FaultError("interior scan: axis too coarse for the stencil offset");
    }
    for (int i0 = lo[0]; i0 <= hi[0]; ++i0)
        for (int i1 = lo[1]; i1 <= hi[1]; ++i1)
            for (int i2 = lo[2]; i2 <= hi[2]; ++i2) fn(g.index(i0, i1, i2));
}

} // anonymous namespace

double winkler_bound(int dim) {
    const double r = 2.0 + std::sqrt(static_cast<double>(dim));
    return r * r;
}

double appendixA_bound(int dim) {
    const double n = static_cast<double>(dim);
    return 1.0 + std::sqrt(n) / 2.0 + n / 8.0;
}

RatioResult winkler_ratio(const ScalarField& phi) {
    require_positive(phi, "winkler_ratio");
    const ScalarField grad_sq = magnitude_sq(gradient(phi));
    ScalarField integrand(phi.grid());
    for (std::int64_t i = 0; i < phi.size(); ++i)
        integrand[i] = grad_sq[i] * grad_sq[i] / (phi[i] * phi[i] * phi[i]);
    return classify(integrate(integrand), weighted_log_hessian(phi));
}

RatioResult appendixA_ratio(const ScalarField& u) {
    require_positive(u, "appendixA_ratio");
    const TensorField h = hessian(sqrt_field(u));
    ScalarField integrand(u.grid());
    for (std::int64_t i = 0; i < u.size(); ++i) integrand[i] = h.frobenius_sq(i);
    return classify(integrate(integrand), weighted_log_hessian(u));
}

PointwiseCounterexampleReport appendixA_pointwise_counterexample() {
    PointwiseCounterexampleReport rep;
    rep.grid = Grid::make_uniform(1, 128);
    const Grid& g = rep.grid;

    const auto quotients = [&](const ScalarField& u) {
        const TensorField num_h = hessian(sqrt_field(u));
        const TensorField den_h = hessian(log_field(u));
        ScalarField num(g), den(g);
        for (std::int64_t i = 0; i < u.size(); ++i) {
            num[i] = num_h.frobenius_sq(i);
            den[i] = u[i] * den_h.frobenius_sq(i);
        }
        return std::pair(num, den);
    };

    ScalarField u(g);
    for (int i = 0; i < g.cells(0); ++i) u[i] = std::exp(g.center(0, i));
    const auto [num, den] = quotients(u);

    rep.min_interior_numerator = std::numeric_limits<double>::infinity();
    rep.min_interior_quotient = std::numeric_limits<double>::infinity();
    for_interior(g, 2, [&](std::int64_t i) {
        rep.min_interior_numerator = std::min(rep.min_interior_numerator, num[i]);
        rep.max_interior_denominator = std::max(rep.max_interior_denominator, den[i]);
        rep.min_interior_quotient =
            std::min(rep.min_interior_quotient, num[i] / std::max(den[i], 1e-300));
    });
    rep.boundary_flux_max_abs =
        std::max(std::abs(boundary_normal_derivative(u).max_value()),
                 std::abs(boundary_normal_derivative(u).min_value()));

    rep.epsilons = {1e-1, 1e-2, 1e-3};
    const std::int64_t mid = g.cells(0) / 2;
    for (std::size_t j = 0; j < rep.epsilons.size(); ++j) {
        ScalarField up(g);
        for (int i = 0; i < g.cells(0); ++i)
            up[i] = std::exp(g.center(0, i)) +
                    rep.epsilons[j] * std::cos(std::numbers::pi * g.center(0, i));
        const auto [pnum, pden] = quotients(up);
        rep.perturbed_mid_quotients[j] = pnum[mid] / std::max(pden[mid], 1e-300);
    }
    return rep;
}

double bochner_residual(const ScalarField& u) {
    const Grid& g = u.grid();
    const VectorField grad_u = gradient(u);
    const ScalarField lap_msq = laplacian(magnitude_sq(grad_u));
    const VectorField grad_lap = grad_laplacian(u);
    const TensorField h = hessian(u);

    double worst = 0.0;
    for_interior(g, 2, [&](std::int64_t i) {
        double transport = 0.0;
        for (int a = 0; a < g.dim(); ++a)
            transport += grad_lap.component(a)[i] * grad_u.component(a)[i];
        const double resid = 0.5 * lap_msq[i] - transport - h.frobenius_sq(i);
        worst = std::max(worst, std::abs(resid));
    });
    return worst;
}

BoundarySignReport boundary_sign_check(const ScalarField& u) {
    const Grid& g = u.grid();
    const BoundaryFaceValues faces = boundary_normal_derivative(magnitude_sq(gradient(u)));

    BoundarySignReport rep;
    rep.worst_value = -std::numeric_limits<double>::infinity();
    for (const BoundaryFace& face : faces.faces) {
        for (std::size_t v = 0; v < face.values.size(); ++v) {
            if (face.values[v] <= rep.worst_value) continue;
            rep.worst_value = face.values[v];
            rep.axis = face.axis;
            rep.side = face.side;
            // Transverse axes in face-value order; an extreme transverse
            // index means the worst cell touches an edge or corner.
            const int t1 = face.axis == 0 ? 1 : 0;
            const int t2 = face.axis == 2 ? 1 : 2;
            const int j1 = static_cast<int>(v) / g.cells(t2);
            const int j2 = static_cast<int>(v) % g.cells(t2);
            rep.corner_adjacent = (g.cells(t1) > 1 && (j1 == 0 || j1 == g.cells(t1) - 1)) ||
                                  (g.cells(t2) > 1 && (j2 == 0 || j2 == g.cells(t2) - 1));
        }
    }
    return rep;
}

ProbeResult hessian_grad_laplacian_probe(std::span<const ScalarField> batch) {
    ProbeResult res;
    for (const ScalarField& phi : batch) {
        const double denom = std::sqrt(integrate(magnitude_sq(grad_laplacian(phi))));
        if (denom < 1e-8) {
            ++res.skipped;
            continue;
        }
        const TensorField h = hessian(phi);
        ScalarField sixth(phi.grid());
        for (std::int64_t i = 0; i < phi.size(); ++i) {
            const double fsq = h.frobenius_sq(i);
            sixth[i] = fsq * fsq * fsq;
        }
        const double num = std::pow(integrate(sixth), 1.0 / 6.0);
        res.sup_ratio = std::max(res.sup_ratio, num / denom);
        ++res.evaluated;
    }
    if (res.evaluated == 0)
        throw FaultError("hessian_grad_laplacian_probe: every sample in the batch is degenerate");
    return res;
}

HolderChainReport holder_chain_check(const ScalarField& phi, const ScalarField& psi) {
    require_positive(phi, "holder_chain_check");
    const Grid& g = phi.grid();
    if (!(psi.grid() == g)) throw FaultError("holder_chain_check: fields live on different grids");

    const VectorField gs = gradient(sqrt_field(phi));
    const ScalarField gs_sq = magnitude_sq(gs);
    const TensorField h = hessian(psi);

    ScalarField lhs_integrand(g), hess_sixth(g), quot_fourth(g), root_twelfth(g);
    for (std::int64_t i = 0; i < phi.size(); ++i) {
        double gvec[Grid::max_dim] = {0.0, 0.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) gvec[a] = gs.component(a)[i];
        lhs_integrand[i] = std::abs(
            h.quadratic_form(i, std::span<const double>(gvec, static_cast<std::size_t>(g.dim()))));
        const double fsq = h.frobenius_sq(i);
        hess_sixth[i] = fsq * fsq * fsq;
        // (2 |grad sqrt phi| / phi^{1/4})^4 = 16 |grad sqrt phi|^4 / phi
        quot_fourth[i] = 16.0 * gs_sq[i] * gs_sq[i] / phi[i];
        root_twelfth[i] = phi[i] * phi[i] * phi[i];
    }

    HolderChainReport rep;
    rep.lhs = integrate(lhs_integrand);
    rep.grad_sqrt_l2 = std::sqrt(integrate(gs_sq));
    rep.hess_l6 = std::pow(integrate(hess_sixth), 1.0 / 6.0);
    rep.quotient_l4 = std::pow(integrate(quot_fourth), 0.25);
    rep.root_l12 = std::pow(integrate(root_twelfth), 1.0 / 12.0);
    rep.rhs = 0.5 * rep.grad_sqrt_l2 * rep.hess_l6 * rep.quotient_l4 * rep.root_l12;
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-8);
    return rep;
}

} // namespace chemrep
