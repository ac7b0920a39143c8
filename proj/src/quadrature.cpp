#include "geis/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "geis/errors.hpp"

namespace geis {

QuadratureRule composite_gauss_legendre(double a, double b, int panels) {
    if (panels < 1) throw DomainError(fmt::format("need at least one panel, got {}", panels));
    using Gauss = boost::math::quadrature::gauss<double, gauss_points_per_panel>;
    // Boost stores the non-negative abscissae only; the rule is symmetric.
    const auto& x = Gauss::abscissa();
    const auto& w = Gauss::weights();
    std::vector<double> ref_nodes, ref_weights;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ref_nodes.push_back(x[i]);
        ref_weights.push_back(w[i]);
        if (x[i] != 0.0) {
            ref_nodes.push_back(-x[i]);
            ref_weights.push_back(w[i]);
        }
    }
    QuadratureRule rule;
    const double width = (b - a) / panels;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * ref_nodes.size());
    rule.weights.reserve(rule.nodes.capacity());
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * width;
        for (std::size_t i = 0; i < ref_nodes.size(); ++i) {
            rule.nodes.push_back(mid + 0.5 * width * ref_nodes[i]);
            rule.weights.push_back(0.5 * width * ref_weights[i]);
        }
    }
    return rule;
}

QuadratureRule composite_trapezoid(double a, double b, int steps) {
    if (steps < 1) throw DomainError(fmt::format("need at least one step, got {}", steps));
    QuadratureRule rule;
    const double dt = (b - a) / steps;
    for (int j = 0; j <= steps; ++j) {
        rule.nodes.push_back(a + j * dt);
        rule.weights.push_back((j == 0 || j == steps) ? 0.5 * dt : dt);
    }
    return rule;
}

}  // namespace geis
