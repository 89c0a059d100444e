#pragma once

#include <array>
#include <span>

#include "chemrep/grid.hpp"
#include "chemrep/operators.hpp"

namespace chemrep {

/// Two-sided functional-inequality evaluation. `degenerate` marks the 0/0
/// convention (both integrals below 1e-14, ratio reported as 0); `anomaly`
/// marks a vanished right side with a nonvanished left side, which no
/// admissible sample should produce.
struct RatioResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool degenerate = false;
    bool anomaly = false;
};

/// Dimension-dependent bound (2 + sqrt(n))^2 for winkler_ratio.
double winkler_bound(int dim);
/// Dimension-dependent bound 1 + sqrt(n)/2 + n/8 for appendixA_ratio.
double appendixA_bound(int dim);

/// lhs = integral of |grad phi|^4 / phi^3, rhs = integral of
/// phi |Hess log phi|^2. For strictly positive Neumann-compatible phi the
/// ratio is bounded by winkler_bound(dim) up to quadrature slack.
/// Throws FaultError unless phi > 0 everywhere.
RatioResult winkler_ratio(const ScalarField& phi);

/// lhs = integral of |Hess sqrt(u)|^2, rhs = integral of u |Hess log u|^2,
/// ratio bounded by appendixA_bound(dim). Throws FaultError unless u > 0.
RatioResult appendixA_ratio(const ScalarField& u);

/// Demonstration that the integral bound of appendixA_ratio has no pointwise
/// counterpart: for u = e^x the denominator integrand u|Hess log u|^2
/// vanishes identically (log u is linear) while the numerator integrand
/// |Hess sqrt u|^2 = e^x/16 stays bounded away from zero, so the pointwise
/// quotient is arbitrarily large. The same u violates the Neumann condition,
/// which is why the integral inequality is not contradicted; the report
/// carries the nonzero boundary flux as evidence. Perturbing toward an
/// admissible function, u = e^x + eps cos(pi x), the mid-cell quotient grows
/// without bound as eps shrinks.
struct PointwiseCounterexampleReport {
    Grid grid;                             ///< 1D evaluation grid
    double min_interior_numerator = 0.0;   ///< min of |Hess sqrt u|^2, interior cells
    double max_interior_denominator = 0.0; ///< max of u |Hess log u|^2, interior cells
    double min_interior_quotient = 0.0;    ///< numerator / max(denominator, 1e-300)
    double boundary_flux_max_abs = 0.0;    ///< max |normal derivative| of u over faces
    std::array<double, 3> epsilons{};
    std::array<double, 3> perturbed_mid_quotients{};
};
PointwiseCounterexampleReport appendixA_pointwise_counterexample();

/// Max-norm residual over interior cells (offset >= 2 per active axis, so
/// only pure central stencils contribute) of the identity
///   (1/2) lap |grad u|^2 = (grad lap u) . (grad u) + |Hess u|^2.
/// Exact on quadratics; second-order on analytic samples. Throws FaultError
/// if an active axis has fewer than 5 cells (no interior at offset 2).
double bochner_residual(const ScalarField& u);

/// Sign check of the outward normal derivative of |grad u|^2 on the faces of
/// the convex box: for Neumann-compatible u it is nonpositive up to O(h^2).
/// Reports the most positive face value and where it occurred;
/// corner_adjacent flags worst cells touching an edge or corner of the box,
/// where two one-sided stencils overlap.
struct BoundarySignReport {
    double worst_value = 0.0;
    int axis = 0;
    int side = 0;
    bool corner_adjacent = false;
};
BoundarySignReport boundary_sign_check(const ScalarField& u);

/// Empirical sup over a batch of ||Hess phi||_L6 / ||grad lap phi||_L2
/// (Frobenius magnitude under the L6 norm). Samples whose denominator falls
/// below 1e-8 are skipped as degenerate; an all-degenerate batch faults.
struct ProbeResult {
    double sup_ratio = 0.0;
    int evaluated = 0;
    int skipped = 0;
};
ProbeResult hessian_grad_laplacian_probe(std::span<const ScalarField> batch);

/// One pointwise bound and one four-factor Hoelder step:
///   integral |(grad sqrt phi)^T Hess psi (grad sqrt phi)|
///     <= (1/2) ||grad sqrt phi||_L2 * ||Hess psi||_L6
///            * ||2|grad sqrt phi| / phi^{1/4}||_L4 * ||phi^{1/4}||_L12.
/// The third factor is defined through the discrete gradient of sqrt(phi)
/// (continuum limit |grad phi| / phi^{3/4}), which makes the discrete chain
/// a pure Hoelder inequality — it holds to roundoff, with no stencil gap.
/// Throws FaultError unless phi > 0 everywhere.
struct HolderChainReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double grad_sqrt_l2 = 0.0;
    double hess_l6 = 0.0;
    double quotient_l4 = 0.0;
    double root_l12 = 0.0;
    bool holds = false; ///< lhs <= rhs * (1 + 1e-8)
};
HolderChainReport holder_chain_check(const ScalarField& phi, const ScalarField& psi);

} // namespace chemrep
