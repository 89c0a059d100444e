#include "chemrep/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace chemrep {

namespace {

struct Strides {
    std::int64_t s[3];
    int n[3];
    explicit Strides(const Grid& g) {
        n[0] = g.cells(0);
        n[1] = g.cells(1);
        n[2] = g.cells(2);
        s[2] = 1;
        s[1] = n[2];
        s[0] = static_cast<std::int64_t>(n[1]) * n[2];
    }
};

// Applies one first- or second-difference pass along `axis`. All stencils
// need a single ghost layer, and even reflection makes the ghost value
// equal the boundary cell's own value, so the edge neighbor offset is 0.
template <typename Op>
void axis_pass(const ScalarField& f, int axis, Op&& op) {
    const Grid& g = f.grid();
    const Strides st(g);
    const std::int64_t stride = st.s[axis];
    const int na = st.n[axis];
    std::int64_t idx = 0;
    for (int i0 = 0; i0 < st.n[0]; ++i0)
        for (int i1 = 0; i1 < st.n[1]; ++i1)
            for (int i2 = 0; i2 < st.n[2]; ++i2, ++idx) {
                const int ia = axis == 0 ? i0 : axis == 1 ? i1 : i2;
                const double lo = f[idx - (ia > 0 ? stride : 0)];
                const double hi = f[idx + (ia < na - 1 ? stride : 0)];
                op(idx, lo, f[idx], hi);
            }
}

} // anonymous namespace

double BoundaryFaceValues::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& f : faces)
        for (double v : f.values) m = std::max(m, v);
    return m;
}

double BoundaryFaceValues::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& f : faces)
        for (double v : f.values) m = std::min(m, v);
    return m;
}

double integrate(const ScalarField& f) {
    double sum = 0.0, comp = 0.0;
    for (double v : f.values()) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum * f.grid().cell_volume();
}

double lp_norm(const ScalarField& f, double p) {
    double sum = 0.0, comp = 0.0;
    for (double v : f.values()) {
        const double y = std::pow(std::abs(v), p) - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::pow(sum * f.grid().cell_volume(), 1.0 / p);
}

double l2_norm(const ScalarField& f) {
    double sum = 0.0, comp = 0.0;
    for (double v : f.values()) {
        const double y = v * v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::sqrt(sum * f.grid().cell_volume());
}

double sup_norm(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

ScalarField magnitude_sq(const VectorField& w) {
    ScalarField out(w.grid());
    for (int a = 0; a < w.grid().dim(); ++a) {
        const ScalarField& c = w.component(a);
        for (std::int64_t i = 0; i < out.size(); ++i) out[i] += c[i] * c[i];
    }
    return out;
}

ScalarField derivative(const ScalarField& f, int axis) {
    ScalarField out(f.grid());
    const double inv2h = 0.5 / f.grid().spacing(axis);
    axis_pass(f, axis, [&](std::int64_t idx, double lo, double, double hi) {
        out[idx] = (hi - lo) * inv2h;
    });
    return out;
}

VectorField gradient(const ScalarField& f) {
    VectorField out(f.grid());
    for (int a = 0; a < f.grid().dim(); ++a) out.component(a) = derivative(f, a);
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    ScalarField out(f.grid());
    for (int a = 0; a < f.grid().dim(); ++a) {
        const double invh2 = 1.0 / (f.grid().spacing(a) * f.grid().spacing(a));
        axis_pass(f, a, [&](std::int64_t idx, double lo, double c, double hi) {
            out[idx] += (hi - 2.0 * c + lo) * invh2;
        });
    }
    return out;
}

TensorField hessian(const ScalarField& f) {
    const Grid& g = f.grid();
    TensorField out(g);
    for (int a = 0; a < g.dim(); ++a) {
        const double invh2 = 1.0 / (g.spacing(a) * g.spacing(a));
        ScalarField& diag = out.entry(a, a);
        axis_pass(f, a, [&](std::int64_t idx, double lo, double c, double hi) {
            diag[idx] = (hi - 2.0 * c + lo) * invh2;
        });
        for (int b = a + 1; b < g.dim(); ++b) out.entry(a, b) = derivative(derivative(f, b), a);
    }
    return out;
}

VectorField grad_laplacian(const ScalarField& f) {
    return gradient(laplacian(f));
}

BoundaryFaceValues boundary_normal_derivative(const ScalarField& f) {
    const Grid& g = f.grid();
    const Strides st(g);
    BoundaryFaceValues out;
    for (int axis = 0; axis < g.dim(); ++axis) {
        const double invh = 1.0 / g.spacing(axis);
        const std::int64_t stride = st.s[axis];
        for (int side = 0; side < 2; ++side) {
            BoundaryFace face{axis, side, {}};
            // Walk the (dim-1)-dimensional face; `inward` points from the
            // face cell toward the interior.
            const std::int64_t inward = side == 0 ? stride : -stride;
            const std::int64_t base_a = side == 0 ? 0 : static_cast<std::int64_t>(st.n[axis] - 1) * stride;
            const int t1 = axis == 0 ? 1 : 0;
            const int t2 = axis == 2 ? 1 : 2;
            face.values.reserve(static_cast<std::size_t>(st.n[t1]) * st.n[t2]);
            for (int j1 = 0; j1 < st.n[t1]; ++j1)
                for (int j2 = 0; j2 < st.n[t2]; ++j2) {
                    const std::int64_t idx = base_a + j1 * st.s[t1] + j2 * st.s[t2];
                    const double f1 = f[idx];
                    const double f2 = f[idx + inward];
                    const double f3 = f[idx + 2 * inward];
                    face.values.push_back((2.0 * f1 - 3.0 * f2 + f3) * invh);
                }
            out.faces.push_back(std::move(face));
        }
    }
    return out;
}

} // namespace chemrep
