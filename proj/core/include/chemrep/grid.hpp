#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "chemrep/errors.hpp"

namespace chemrep {

/// Uniform cell-centered grid on a box [0,L0] x ... x [0,L_{dim-1}],
/// dim in {1,2,3}. Cell (i0,i1,i2) has center ((i0+1/2)h0, ...). Unused
/// trailing axes hold one cell of unit length so loops stay rank-generic.
///
/// Storage convention for fields on this grid is row-major with the last
/// active axis fastest: index = (i0*n1 + i1)*n2 + i2.
class Grid {
public:
    static constexpr int max_dim = 3;
    static constexpr int min_cells_per_axis = 4;

    /// Uniform cell count per axis. Throws ConfigError for dim or cell
    /// counts outside the contract (>= 4 cells per active axis).
    static Grid make(int dim, std::span<const int> cells, std::span<const double> lengths);
    static Grid make_uniform(int dim, int cells_per_axis, double length = 1.0);

    int dim() const noexcept { return dim_; }
    int cells(int axis) const noexcept { return cells_[axis]; }
    double length(int axis) const noexcept { return lengths_[axis]; }
    double spacing(int axis) const noexcept { return spacing_[axis]; }
    std::int64_t cell_count() const noexcept { return count_; }
    /// Midpoint-rule cell volume, the quadrature weight of every integral.
    double cell_volume() const noexcept { return cell_volume_; }

    std::int64_t index(int i0, int i1, int i2) const noexcept {
        return (static_cast<std::int64_t>(i0) * cells_[1] + i1) * cells_[2] + i2;
    }
    /// Coordinate of the cell center along `axis`.
    double center(int axis, int i) const noexcept {
        return (i + 0.5) * spacing_[axis];
    }

    bool operator==(const Grid& o) const noexcept = default;

private:
    int dim_ = 1;
    std::array<int, max_dim> cells_{1, 1, 1};
    std::array<double, max_dim> lengths_{1.0, 1.0, 1.0};
    std::array<double, max_dim> spacing_{1.0, 1.0, 1.0};
    std::int64_t count_ = 1;
    double cell_volume_ = 1.0;
};

/// Cell-centered scalar values, value semantics, contiguous row-major.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid_(g), values_(static_cast<std::size_t>(g.cell_count()), fill) {}

    const Grid& grid() const noexcept { return grid_; }
    std::int64_t size() const noexcept { return static_cast<std::int64_t>(values_.size()); }

    double& operator[](std::int64_t i) noexcept { return values_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const noexcept { return values_[static_cast<std::size_t>(i)]; }
    double& at(int i0, int i1, int i2) noexcept { return (*this)[grid_.index(i0, i1, i2)]; }
    double at(int i0, int i1, int i2) const noexcept { return (*this)[grid_.index(i0, i1, i2)]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    double min() const noexcept;
    double max() const noexcept;
    /// False if any value is NaN or infinite, so blow-up traps see poisoned
    /// data instead of a silently absorbed comparison.
    bool finite() const noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// One cell-centered component field per active axis.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const Grid& g) : grid_(g) {
        for (int a = 0; a < g.dim(); ++a) comp_[a] = ScalarField(g);
    }

    const Grid& grid() const noexcept { return grid_; }
    ScalarField& component(int axis) noexcept { return comp_[axis]; }
    const ScalarField& component(int axis) const noexcept { return comp_[axis]; }

private:
    Grid grid_;
    std::array<ScalarField, Grid::max_dim> comp_;
};

/// Symmetric rank-2 tensor per cell; the (a,b) and (b,a) entries share
/// storage, so discrete symmetry is exact by construction.
class TensorField {
public:
    TensorField() = default;
    explicit TensorField(const Grid& g) : grid_(g) {
        for (int a = 0; a < g.dim(); ++a)
            for (int b = a; b < g.dim(); ++b) entries_[slot(a, b)] = ScalarField(g);
    }

    const Grid& grid() const noexcept { return grid_; }
    ScalarField& entry(int a, int b) noexcept { return entries_[slot(a, b)]; }
    const ScalarField& entry(int a, int b) const noexcept { return entries_[slot(a, b)]; }

    /// Frobenius norm squared at cell i, counting off-diagonal pairs twice.
    double frobenius_sq(std::int64_t i) const noexcept;
    /// Quadratic form g^T H g at cell i for the per-cell vector g.
    double quadratic_form(std::int64_t i, std::span<const double> g) const noexcept;
    /// Largest eigenvalue at cell i (closed-form symmetric solve, dim <= 3).
    double max_eigenvalue(std::int64_t i) const noexcept;

private:
    // Slots: 1D {00}; 2D {00,01,11}; 3D {00,01,02,11,12,22}.
    int slot(int a, int b) const noexcept {
        if (a > b) { const int t = a; a = b; b = t; }
        const int d = grid_.dim();
        return a * d - a * (a - 1) / 2 + (b - a);
    }

    Grid grid_;
    std::array<ScalarField, 6> entries_;
};

} // namespace chemrep
