#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "chemoctrl/errors.hpp"

namespace chemoctrl {

// Uniform cell-centered grid on an axis-aligned box, 1 to 3 axes.
// Cell centers sit at (i + 1/2) * spacing; axis 0 varies fastest in the flat
// cell order. The control mask marks the cells where a control may act.
// A Grid must outlive every field bound to it.
class Grid {
public:
    Grid(std::vector<std::int64_t> dims, std::vector<double> extents);

    int ndim() const { return static_cast<int>(dims_.size()); }
    std::int64_t dim(int axis) const { return dims_[static_cast<std::size_t>(axis)]; }
    const std::vector<std::int64_t>& dims() const { return dims_; }
    const std::vector<double>& spacings() const { return spacing_; }
    double spacing(int axis) const { return spacing_[static_cast<std::size_t>(axis)]; }
    double extent(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
    std::int64_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
    std::int64_t cell_count() const { return cells_; }
    double cell_volume() const { return cell_volume_; }
    double domain_volume() const { return cell_volume_ * static_cast<double>(cells_); }

    std::int64_t coord(std::int64_t cell, int axis) const {
        return (cell / stride(axis)) % dim(axis);
    }
    double center(std::int64_t cell, int axis) const {
        return (static_cast<double>(coord(cell, axis)) + 0.5) * spacing(axis);
    }

    // Marks the cells whose centers lie in [lo, hi] (per axis, inclusive).
    void set_control_box(const std::vector<double>& lo, const std::vector<double>& hi);
    void set_control_everywhere();

    bool in_control_region(std::int64_t cell) const { return mask_[static_cast<std::size_t>(cell)] != 0; }
    const std::vector<std::uint8_t>& control_mask() const { return mask_; }
    std::int64_t control_cell_count() const { return control_cells_; }

    bool same_layout(const Grid& other) const {
        return dims_ == other.dims_ && spacing_ == other.spacing_;
    }

private:
    std::vector<std::int64_t> dims_;
    std::vector<double> extents_;
    std::vector<double> spacing_;
    std::vector<std::int64_t> strides_;
    std::int64_t cells_ = 0;
    double cell_volume_ = 1.0;
    std::vector<std::uint8_t> mask_;
    std::int64_t control_cells_ = 0;
};

// One scalar value per cell.
class ScalarField {
public:
    explicit ScalarField(const Grid& grid, double value = 0.0)
        : grid_(&grid), v_(static_cast<std::size_t>(grid.cell_count()), value) {}

    double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }
    double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }
    const Grid& grid() const { return *grid_; }
    const double* data() const { return v_.data(); }
    double* data() { return v_.data(); }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

private:
    const Grid* grid_;
    std::vector<double> v_;
};

void check_same_grid(const ScalarField& a, const ScalarField& b, const char* where);
void check_field_on_grid(const ScalarField& f, const Grid& grid, const char* where);

// Uniform partition of [0, horizon] into `steps` intervals; stores the node
// count steps + 1. Trapezoidal node weights are the fixed time-quadrature
// convention used by every space-time sum in this library.
class TimeGrid {
public:
    TimeGrid(double horizon, int steps);

    double horizon() const { return horizon_; }
    int steps() const { return steps_; }
    int nodes() const { return steps_ + 1; }
    double dt() const { return dt_; }
    double time(int n) const { return static_cast<double>(n) * dt_; }
    double weight(int n) const { return (n == 0 || n == steps_) ? 0.5 : 1.0; }

private:
    double horizon_;
    int steps_;
    double dt_;
};

}  // namespace chemoctrl
