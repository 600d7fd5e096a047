#include "chemoctrl/grid.hpp"

#include <cmath>
#include <string>

namespace chemoctrl {

Grid::Grid(std::vector<std::int64_t> dims, std::vector<double> extents)
    : dims_(std::move(dims)), extents_(std::move(extents)) {
    if (dims_.empty() || dims_.size() > 3)
        throw InvalidInputError("grid: need 1 to 3 axes, got " + std::to_string(dims_.size()));
    if (extents_.size() != dims_.size())
        throw InvalidInputError("grid: extents count must match dims count");
    cells_ = 1;
    cell_volume_ = 1.0;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
        if (dims_[a] < 1)
            throw InvalidInputError("grid: dims must be >= 1 on every axis");
        if (!(extents_[a] > 0.0) || !std::isfinite(extents_[a]))
            throw InvalidInputError("grid: extents must be positive and finite");
        strides_.push_back(cells_);
        cells_ *= dims_[a];
        spacing_.push_back(extents_[a] / static_cast<double>(dims_[a]));
        cell_volume_ *= spacing_[a];
    }
    set_control_everywhere();
}

void Grid::set_control_everywhere() {
    mask_.assign(static_cast<std::size_t>(cells_), 1);
    control_cells_ = cells_;
}

void Grid::set_control_box(const std::vector<double>& lo, const std::vector<double>& hi) {
    if (lo.size() != dims_.size() || hi.size() != dims_.size())
        throw InvalidInputError("grid: control box corners must have one value per axis");
    for (std::size_t a = 0; a < dims_.size(); ++a)
        if (lo[a] > hi[a])
            throw InvalidInputError("grid: control box must have lo <= hi on every axis");
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(cells_), 0);
    std::int64_t hits = 0;
    for (std::int64_t c = 0; c < cells_; ++c) {
        bool inside = true;
        for (int a = 0; a < ndim(); ++a) {
            const double x = center(c, a);
            if (x < lo[static_cast<std::size_t>(a)] || x > hi[static_cast<std::size_t>(a)]) {
                inside = false;
                break;
            }
        }
        if (inside) {
            mask[static_cast<std::size_t>(c)] = 1;
            ++hits;
        }
    }
    if (hits == 0)
        throw InvalidInputError("grid: control box contains no cell centers");
    mask_ = std::move(mask);
    control_cells_ = hits;
}

void check_same_grid(const ScalarField& a, const ScalarField& b, const char* where) {
    if (&a.grid() == &b.grid()) return;
    if (!a.grid().same_layout(b.grid()))
        throw InvalidInputError(std::string(where) + ": fields live on different grids");
}

void check_field_on_grid(const ScalarField& f, const Grid& grid, const char* where) {
    if (&f.grid() == &grid) return;
    if (!f.grid().same_layout(grid))
        throw InvalidInputError(std::string(where) + ": field does not match the grid");
}

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw InvalidInputError("time grid: horizon must be positive and finite");
    if (steps < 1) throw InvalidInputError("time grid: steps must be >= 1");
    dt_ = horizon_ / static_cast<double>(steps_);
}

}  // namespace chemoctrl
