#include "geis/grid.hpp"

#include <cmath>

#include <fmt/format.h>

#include "geis/errors.hpp"

namespace geis {

Grid::Grid(int dim, double half_width, int points_per_axis)
    : dim_(dim), half_width_(half_width), points_(points_per_axis) {
    if (dim != 1 && dim != 2) {
        throw DomainError(fmt::format("grid dimension must be 1 or 2, got {}", dim));
    }
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw DomainError(fmt::format("grid half width must be positive, got {}", half_width));
    }
    if (points_per_axis < 2 || (points_per_axis & (points_per_axis - 1)) != 0) {
        throw DomainError(
            fmt::format("points per axis must be a power of two >= 2, got {}", points_per_axis));
    }
}

std::size_t Grid::size() const noexcept {
    auto n = static_cast<std::size_t>(points_);
    return dim_ == 1 ? n : n * n;
}

double Grid::cell_volume() const noexcept {
    return dim_ == 1 ? spacing() : spacing() * spacing();
}

double Grid::freq_cell_volume() const noexcept {
    return dim_ == 1 ? freq_spacing() : freq_spacing() * freq_spacing();
}

Point Grid::point(std::size_t idx) const noexcept {
    if (dim_ == 1) return {coord(static_cast<int>(idx)), 0.0};
    auto n = static_cast<std::size_t>(points_);
    return {coord(static_cast<int>(idx / n)), coord(static_cast<int>(idx % n))};
}

Point Grid::frequency(std::size_t idx) const noexcept {
    if (dim_ == 1) return {freq(static_cast<int>(idx)), 0.0};
    auto n = static_cast<std::size_t>(points_);
    return {freq(static_cast<int>(idx / n)), freq(static_cast<int>(idx % n))};
}

std::size_t Grid::origin_index() const noexcept {
    auto half = static_cast<std::size_t>(points_ / 2);
    return dim_ == 1 ? half : half * static_cast<std::size_t>(points_) + half;
}

double norm(const Point& p, int dim) noexcept {
    return dim == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]);
}

GridFunction::GridFunction(Grid grid) : grid_(grid), values_(grid.size(), cplx{}) {}

GridFunction::GridFunction(Grid grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw ShapeError(fmt::format("grid function has {} values, grid expects {}",
                                     values_.size(), grid_.size()));
    }
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<cplx(const Point&)>& f) {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.point(i));
    return GridFunction(grid, std::move(v));
}

GridFunction GridFunction::sample_frequency(const Grid& grid,
                                            const std::function<cplx(const Point&)>& f) {
    std::vector<cplx> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.frequency(i));
    return GridFunction(grid, std::move(v));
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_grid(grid_, other.grid_, "addition");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_grid(grid_, other.grid_, "subtraction");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(cplx s) {
    for (auto& v : values_) v *= s;
    return *this;
}

GridFunction GridFunction::map(const std::function<cplx(cplx)>& f) const {
    std::vector<cplx> out(values_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(values_[i]);
    return GridFunction(grid_, std::move(out));
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx s, GridFunction a) { return a *= s; }

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) {
        throw ShapeError(fmt::format("grid mismatch in {}: (d={}, L={}, N={}) vs (d={}, L={}, N={})",
                                     what, a.dim(), a.half_width(), a.points_per_axis(), b.dim(),
                                     b.half_width(), b.points_per_axis()));
    }
}

}  // namespace geis
