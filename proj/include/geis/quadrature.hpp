#pragma once

#include <vector>

namespace geis {

/// Nodes and weights of a quadrature rule on an interval.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    template <typename F>
    auto integrate(F&& f) const {
        decltype(f(0.0)) sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

/// Gauss-Legendre points per panel used by every composite rule in the library.
inline constexpr int gauss_points_per_panel = 16;

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels.
QuadratureRule composite_gauss_legendre(double a, double b, int panels);

/// Composite trapezoid rule on the uniform nodes a + j (b - a)/steps, j = 0..steps.
QuadratureRule composite_trapezoid(double a, double b, int steps);

}  // namespace geis
