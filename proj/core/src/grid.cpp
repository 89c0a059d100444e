#include "chemrep/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chemrep {

Grid Grid::make(int dim, std::span<const int> cells, std::span<const double> lengths) {
    if (dim < 1 || dim > max_dim)
        throw ConfigError("grid.dim", "dimension must be 1, 2 or 3, got " + std::to_string(dim));
    if (static_cast<int>(cells.size()) != dim)
        throw ConfigError("grid.cells", "expected " + std::to_string(dim) + " cell counts, got " +
                                             std::to_string(cells.size()));
    if (static_cast<int>(lengths.size()) != dim)
        throw ConfigError("grid.lengths", "expected " + std::to_string(dim) + " lengths, got " +
                                              std::to_string(lengths.size()));
    Grid g;
    g.dim_ = dim;
    for (int a = 0; a < dim; ++a) {
        if (cells[a] < min_cells_per_axis)
            throw ConfigError("grid.cells", "axis " + std::to_string(a) + " needs >= " +
                                                std::to_string(min_cells_per_axis) + " cells, got " +
                                                std::to_string(cells[a]));
        if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
            throw ConfigError("grid.lengths", "axis " + std::to_string(a) + " length must be positive and finite");
        g.cells_[a] = cells[a];
        g.lengths_[a] = lengths[a];
    }
    g.count_ = 1;
    g.cell_volume_ = 1.0;
    for (int a = 0; a < max_dim; ++a) {
        g.spacing_[a] = g.lengths_[a] / g.cells_[a];
        g.count_ *= g.cells_[a];
        if (a < dim) g.cell_volume_ *= g.spacing_[a];
    }
    return g;
}

Grid Grid::make_uniform(int dim, int cells_per_axis, double length) {
    std::array<int, max_dim> c{cells_per_axis, cells_per_axis, cells_per_axis};
    std::array<double, max_dim> l{length, length, length};
    return make(dim, std::span<const int>(c.data(), static_cast<std::size_t>(dim)),
                std::span<const double>(l.data(), static_cast<std::size_t>(dim)));
}

double ScalarField::min() const noexcept {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
}

double ScalarField::max() const noexcept {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::max(m, v);
    return m;
}

bool ScalarField::finite() const noexcept {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

double TensorField::frobenius_sq(std::int64_t i) const noexcept {
    const int d = grid_.dim();
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
        const double daa = entry(a, a)[i];
        s += daa * daa;
        for (int b = a + 1; b < d; ++b) {
            const double dab = entry(a, b)[i];
            s += 2.0 * dab * dab;
        }
    }
    return s;
}

double TensorField::quadratic_form(std::int64_t i, std::span<const double> g) const noexcept {
    const int d = grid_.dim();
    double s = 0.0;
    for (int a = 0; a < d; ++a) {
        s += entry(a, a)[i] * g[a] * g[a];
        for (int b = a + 1; b < d; ++b) s += 2.0 * entry(a, b)[i] * g[a] * g[b];
    }
    return s;
}

namespace {

double eig_max_2x2(double a00, double a01, double a11) noexcept {
    const double mean = 0.5 * (a00 + a11);
    const double diff = 0.5 * (a00 - a11);
    return mean + std::hypot(diff, a01);
}

// Trigonometric closed form for the symmetric 3x3 eigenproblem. The acos
// argument is clamped: roundoff can push it epsilon outside [-1,1].
double eig_max_3x3(double a00, double a01, double a02, double a11, double a12, double a22) noexcept {
    const double p1 = a01 * a01 + a02 * a02 + a12 * a12;
    if (p1 == 0.0) return std::max(a00, std::max(a11, a22));
    const double q = (a00 + a11 + a22) / 3.0;
    const double b00 = a00 - q, b11 = a11 - q, b22 = a22 - q;
    const double p2 = b00 * b00 + b11 * b11 + b22 * b22 + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    const double det_b = b00 * (b11 * b22 - a12 * a12) - a01 * (a01 * b22 - a12 * a02) +
                         a02 * (a01 * a12 - b11 * a02);
    const double r = std::clamp(det_b / (2.0 * p * p * p), -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi);
}

} // namespace

double TensorField::max_eigenvalue(std::int64_t i) const noexcept {
    switch (grid_.dim()) {
    case 1:
        return entry(0, 0)[i];
    case 2:
        return eig_max_2x2(entry(0, 0)[i], entry(0, 1)[i], entry(1, 1)[i]);
    default:
        return eig_max_3x3(entry(0, 0)[i], entry(0, 1)[i], entry(0, 2)[i], entry(1, 1)[i],
                           entry(1, 2)[i], entry(2, 2)[i]);
    }
}

} // namespace chemrep
