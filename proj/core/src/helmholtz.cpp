#include "chemrep/helmholtz.hpp"

#include <cmath>

#include "chemrep/errors.hpp"

namespace chemrep {

namespace {

// out = (alpha - Lap) x, fused across axes to avoid temporaries in the CG
// hot loop. Even reflection: the edge neighbor offset collapses to 0.
void apply_helmholtz(double alpha, const ScalarField& x, ScalarField& out) {
    const Grid& g = x.grid();
    const int n0 = g.cells(0), n1 = g.cells(1), n2 = g.cells(2);
    const std::int64_t s1 = n2, s0 = static_cast<std::int64_t>(n1) * n2;
    double invh2[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) invh2[a] = 1.0 / (g.spacing(a) * g.spacing(a));

    std::int64_t idx = 0;
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2, ++idx) {
                const double c = x[idx];
                double lap = 0.0;
                if (n0 > 1) {
                    const double lo = x[idx - (i0 > 0 ? s0 : 0)];
                    const double hi = x[idx + (i0 < n0 - 1 ? s0 : 0)];
                    lap += (hi - 2.0 * c + lo) * invh2[0];
                }
                if (n1 > 1) {
                    const double lo = x[idx - (i1 > 0 ? s1 : 0)];
                    const double hi = x[idx + (i1 < n1 - 1 ? s1 : 0)];
                    lap += (hi - 2.0 * c + lo) * invh2[1];
                }
                if (n2 > 1) {
                    const double lo = x[idx - (i2 > 0 ? 1 : 0)];
                    const double hi = x[idx + (i2 < n2 - 1 ? 1 : 0)];
                    lap += (hi - 2.0 * c + lo) * invh2[2];
                }
                out[idx] = alpha * c - lap;
            }
}

double dot(const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i) s += va[i] * vb[i];
    return s;
}

} // anonymous namespace

ScalarField solve_helmholtz(const ScalarField& rhs, double alpha, double tol,
                            std::int64_t max_iter) {
    if (!(alpha > 0.0)) throw FaultError("solve_helmholtz: alpha must be positive");
    if (!(tol > 0.0)) throw FaultError("solve_helmholtz: tolerance must be positive");
    if (max_iter <= 0) max_iter = 10 * rhs.grid().cell_count() + 100;

    const double rhs_norm = std::sqrt(dot(rhs, rhs));
    ScalarField x(rhs.grid());
    if (rhs_norm == 0.0) return x;

    // alpha-dominated systems start close to rhs/alpha, typically halving
    // the iteration count versus a zero guess.
    for (std::int64_t i = 0; i < x.size(); ++i) x[i] = rhs[i] / alpha;

    ScalarField r(rhs.grid()), p(rhs.grid()), ap(rhs.grid());
    apply_helmholtz(alpha, x, ap);
    for (std::int64_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - ap[i];
    p = r;
    double rr = dot(r, r);
    const double stop = tol * rhs_norm;

    for (std::int64_t it = 0; it < max_iter; ++it) {
        if (std::sqrt(rr) <= stop) return x;
        apply_helmholtz(alpha, p, ap);
        const double p_ap = dot(p, ap);
        if (!(p_ap > 0.0))
            throw FaultError("solve_helmholtz: lost positive definiteness (non-finite data?)");
        const double gamma = rr / p_ap;
        for (std::int64_t i = 0; i < x.size(); ++i) x[i] += gamma * p[i];
        for (std::int64_t i = 0; i < r.size(); ++i) r[i] -= gamma * ap[i];
        const double rr_next = dot(r, r);
        const double beta = rr_next / rr;
        for (std::int64_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
        rr = rr_next;
    }
    if (std::sqrt(rr) <= stop) return x;
    throw FaultError("solve_helmholtz: iteration cap exceeded before reaching tolerance");
}

} // namespace chemrep
