#pragma once

#include <vector>

#include "chemrep/grid.hpp"

namespace chemrep {

/// Values of a field on the boundary faces of the box, one entry per face
/// cell. `side` is 0 for the low face of `axis`, 1 for the high face.
struct BoundaryFace {
    int axis = 0;
    int side = 0;
    std::vector<double> values;
};

struct BoundaryFaceValues {
    std::vector<BoundaryFace> faces;

    double max_value() const;
    double min_value() const;
};

/// Midpoint-rule integral sum(f_i) * cell_volume, compensated summation so
/// quadrature roundoff stays O(eps) independent of cell count.
double integrate(const ScalarField& f);

/// (sum |f|^p * vol)^(1/p); midpoint quadrature of the p-th power.
double lp_norm(const ScalarField& f, double p);
double l2_norm(const ScalarField& f);
/// max |f_i|; no quadrature weight.
double sup_norm(const ScalarField& f);
/// Per-cell squared magnitude |w_i|^2 of a vector field.
ScalarField magnitude_sq(const VectorField& w);

/// First derivative along one axis: second-order central differences with
/// even-reflection ghosts, so the implied face-normal first difference at
/// the boundary is exactly zero (homogeneous Neumann closure).
ScalarField derivative(const ScalarField& f, int axis);

VectorField gradient(const ScalarField& f);

/// Sum of per-axis second central differences with even reflection. With
/// this closure the discrete operator is symmetric w.r.t. the midpoint
/// inner product and sums to exactly zero over the box (telescoping).
ScalarField laplacian(const ScalarField& f);

/// Diagonal entries by per-axis second central differences; mixed entries
/// by composed first-order central differences, each stage closed by even
/// reflection. The per-axis stencils commute, so entry(a,b) == entry(b,a)
/// holds exactly and is stored once.
TensorField hessian(const ScalarField& f);

/// gradient(laplacian(f)), both stages with the reflection closure.
VectorField grad_laplacian(const ScalarField& f);

/// One-sided second-order difference of f along the outward normal,
/// evaluated at each boundary face from the three cells nearest the face:
/// d f/d nu = (2 f1 - 3 f2 + f3) / h with f1 the boundary cell.
BoundaryFaceValues boundary_normal_derivative(const ScalarField& f);

} // namespace chemrep
