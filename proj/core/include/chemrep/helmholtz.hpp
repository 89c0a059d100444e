#pragma once

#include "chemrep/grid.hpp"

namespace chemrep {

/// Solves (alpha - Lap) w = rhs with the even-reflection Neumann closure,
/// alpha > 0, by matrix-free conjugate gradients. The closed operator is
/// symmetric positive definite, so CG applies; iteration stops when
/// ||residual||_2 <= tol * ||rhs||_2.
///
/// `max_iter` 0 means the default cap of 10 * cell_count + 100; exceeding
/// the cap throws FaultError.
ScalarField solve_helmholtz(const ScalarField& rhs, double alpha, double tol,
                            std::int64_t max_iter = 0);

} // namespace chemrep
