#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace geis {

using cplx = std::complex<double>;

/// A point in physical or frequency space. Only the first `dim` entries are used.
using Point = std::array<double, 2>;

/**
 * Periodic grid on the torus [-L, L)^d, d in {1, 2}, with N points per axis.
 *
 * Spatial samples sit at x_j = -L + j h, h = 2L/N. Frequencies use the same
 * centered layout: xi_k = (k - N/2) / (2L). Multi-dimensional data is stored
 * row-major with the first axis slowest.
 */
class Grid {
public:
    /// Throws DomainError unless d in {1,2}, L > 0 and N is a power of two >= 2.
    Grid(int dim, double half_width, int points_per_axis);

    int dim() const noexcept { return dim_; }
    double half_width() const noexcept { return half_width_; }
    int points_per_axis() const noexcept { return points_; }
    std::size_t size() const noexcept;

    double spacing() const noexcept { return 2.0 * half_width_ / points_; }
    double freq_spacing() const noexcept { return 1.0 / (2.0 * half_width_); }
    /// h^d, the quadrature weight of one cell.
    double cell_volume() const noexcept;
    /// (1/(2L))^d, the quadrature weight of one frequency cell.
    double freq_cell_volume() const noexcept;

    double coord(int i) const noexcept { return -half_width_ + i * spacing(); }
    double freq(int k) const noexcept { return (k - points_ / 2) * freq_spacing(); }

    /// Spatial point of flat index `idx`.
    Point point(std::size_t idx) const noexcept;
    /// Frequency of flat index `idx`.
    Point frequency(std::size_t idx) const noexcept;
    /// Flat index of the sample at x = 0.
    std::size_t origin_index() const noexcept;

    bool operator==(const Grid&) const = default;

private:
    int dim_;
    double half_width_;
    int points_;
};

/// Euclidean norm of the first `dim` components.
double norm(const Point& p, int dim) noexcept;

/**
 * Complex samples on a Grid. The values are either spatial samples or,
 * after `transform`, samples of the Fourier transform on the frequency list.
 */
class GridFunction {
public:
    explicit GridFunction(Grid grid);
    GridFunction(Grid grid, std::vector<cplx> values);

    static GridFunction zeros(const Grid& grid) { return GridFunction(grid); }
    static GridFunction sample(const Grid& grid, const std::function<cplx(const Point&)>& f);
    static GridFunction sample_frequency(const Grid& grid,
                                         const std::function<cplx(const Point&)>& f);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const cplx> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(cplx s);

    /// Pointwise map; the result lives on the same grid.
    GridFunction map(const std::function<cplx(cplx)>& f) const;

    std::vector<cplx> release() && { return std::move(values_); }

private:
    Grid grid_;
    std::vector<cplx> values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx s, GridFunction a);

/// Throws ShapeError when the grids differ.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace geis
