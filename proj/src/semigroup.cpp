#include "geis/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <fmt/format.h>

#include "geis/errors.hpp"
#include "geis/quadrature.hpp"
#include "geis/spectral.hpp"

namespace geis {
namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double relative_l2(const GridFunction& diff, const GridFunction& u) {
    const double base = lp_norm(u, 2.0);
    if (base == 0.0) return 0.0;
    return lp_norm(diff, 2.0) / base;
}

void require_admissible(cplx lambda, std::span<const cplx> symbol, const Grid& grid, double margin) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t where = 0;
    for (std::size_t k = 0; k < symbol.size(); ++k) {
        const double d = std::abs(lambda - symbol[k]);
        if (d < best) {
            best = d;
            where = k;
        }
    }
    if (best <= margin) {
        const double xi = grid.frequency(where)[0];
        throw ResolventSingularity(
            fmt::format("lambda = {}{:+}i is within {} of the spectrum at xi = {}", lambda.real(),
                        lambda.imag(), best, xi),
            xi, best);
    }
}

}  // namespace

cplx expm1(cplx z) {
    const double x = z.real(), y = z.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

cplx phi(double t, cplx a) {
    if (t < 0.0) throw DomainError(fmt::format("phi needs t >= 0, got {}", t));
    const cplx z = t * a;
    if (std::abs(z) < phi_taylor_threshold) {
        return t * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
    }
    return t * expm1(z) / z;
}

MultiplierOp::MultiplierOp(Grid grid, std::vector<cplx> factor)
    : grid_(grid), factor_(std::move(factor)) {
    if (factor_.size() != grid_.size()) {
        throw ShapeError(fmt::format("multiplier has {} factors, grid expects {}", factor_.size(),
                                     grid_.size()));
    }
}

GridFunction MultiplierOp::apply(const GridFunction& u) const {
    require_same_grid(grid_, u.grid(), "multiplier application");
    return inverse_transform(apply_hat(transform(u)));
}

GridFunction MultiplierOp::apply_hat(const GridFunction& u_hat) const {
    require_same_grid(grid_, u_hat.grid(), "multiplier application");
    std::vector<cplx> v(factor_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = factor_[i] * u_hat[i];
    return GridFunction(grid_, std::move(v));
}

double MultiplierOp::l2_norm() const noexcept {
    double m = 0.0;
    for (const auto& f : factor_) m = std::max(m, std::abs(f));
    return m;
}

MultiplierOp MultiplierOp::compose(const MultiplierOp& other) const {
    require_same_grid(grid_, other.grid_, "multiplier composition");
    std::vector<cplx> v(factor_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = factor_[i] * other.factor_[i];
    return MultiplierOp(grid_, std::move(v));
}

MultiplierOp MultiplierOp::operator-(const MultiplierOp& other) const {
    require_same_grid(grid_, other.grid_, "multiplier difference");
    std::vector<cplx> v(factor_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = factor_[i] - other.factor_[i];
    return MultiplierOp(grid_, std::move(v));
}

MultiplierOp MultiplierOp::scaled(cplx s) const {
    std::vector<cplx> v(factor_);
    for (auto& f : v) f *= s;
    return MultiplierOp(grid_, std::move(v));
}

MultiplierOp symbol_op(const SymbolSeq& s, int n, const Grid& grid) {
    return MultiplierOp(grid, symbol_values(s, n, grid));
}

MultiplierOp semigroup_op(const SymbolSeq& s, int n, double t, const Grid& grid) {
    std::vector<cplx> a = symbol_values(s, n, grid);
    for (std::size_t k = 0; k < a.size(); ++k) {
        const cplx f = phi(t, a[k]);
        if (!finite(f)) {
            throw EvaluationError(fmt::format(
                "integrated semigroup factor overflows at n = {}, t = {}, xi = {}", n, t,
                grid.frequency(k)[0]));
        }
        a[k] = f;
    }
    return MultiplierOp(grid, std::move(a));
}

MultiplierOp resolvent_op(const SymbolSeq& s, int n, cplx lambda, const Grid& grid, double margin) {
    std::vector<cplx> a = symbol_values(s, n, grid);
    require_admissible(lambda, a, grid, margin);
    for (auto& v : a) v = 1.0 / (lambda - v);
    return MultiplierOp(grid, std::move(a));
}

GridFunction apply_S(const SymbolSeq& s, int n, double t, const GridFunction& u) {
    return semigroup_op(s, n, t, u.grid()).apply(u);
}

GridFunction apply_resolvent(const SymbolSeq& s, int n, cplx lambda, const GridFunction& u,
                             double margin) {
    return resolvent_op(s, n, lambda, u.grid(), margin).apply(u);
}

double laplace_truncation(double lambda, double omega) {
    if (!(lambda > omega)) {
        throw DomainError(fmt::format("Laplace truncation needs lambda > omega ({} <= {})", lambda, omega));
    }
    return 40.0 / (lambda - omega);
}

double laplace_identity_residual(const SymbolSeq& s, int n, double lambda, const GridFunction& u,
                                 double T, int panels) {
    if (!(lambda > s.re_bound)) {
        throw DomainError(fmt::format("lambda = {} must exceed the real-part bound {} of '{}'",
                                      lambda, s.re_bound, s.name));
    }
    if (!(T > 0.0)) throw DomainError("Laplace truncation time must be positive");
    const Grid& g = u.grid();
    const std::vector<cplx> a = symbol_values(s, n, g);
    const QuadratureRule rule = composite_gauss_legendre(0.0, T, panels);
    const MultiplierOp resolvent = resolvent_op(s, n, lambda, g);
    std::vector<cplx> laplace(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        laplace[k] = lambda * rule.integrate([&](double t) {
            return std::exp(-lambda * t) * phi(t, a[k]);
        });
    }
    const GridFunction u_hat = transform(u);
    const GridFunction lhs = resolvent.apply_hat(u_hat);
    const GridFunction rhs = MultiplierOp(g, std::move(laplace)).apply_hat(u_hat);
    return relative_l2(inverse_transform(lhs - rhs), u);
}

double pseudoresolvent_residual(const SymbolSeq& s, int n, cplx lambda, cplx mu,
                                const GridFunction& u) {
    const MultiplierOp rl = resolvent_op(s, n, lambda, u.grid());
    const MultiplierOp rm = resolvent_op(s, n, mu, u.grid());
    const GridFunction rlu = rl.apply(u);
    const GridFunction rmu = rm.apply(u);
    const GridFunction both = rl.apply(rm.apply(u));
    return relative_l2(rlu - rmu - (mu - lambda) * both, u);
}

GridFunction bromwich_S(const SymbolSeq& s, int n, double t, const GridFunction& u, double alpha,
                        double r_max, int steps) {
    if (!(alpha > s.re_bound)) {
        throw DomainError(fmt::format("contour abscissa {} must exceed the real-part bound {}",
                                      alpha, s.re_bound));
    }
    if (!(r_max > 0.0) || steps < 1) throw DomainError("contour needs r_max > 0 and steps >= 1");
    const Grid& g = u.grid();
    const std::vector<cplx> a = symbol_values(s, n, g);
    const QuadratureRule rule = composite_trapezoid(-r_max, r_max, steps);
    std::vector<cplx> lambdas(rule.nodes.size()), weights(rule.nodes.size());
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        lambdas[j] = cplx{alpha, rule.nodes[j]};
        weights[j] = rule.weights[j] * std::exp(lambdas[j] * t) / lambdas[j] /
                     (2.0 * std::numbers::pi);
        require_admissible(lambdas[j], a, g, default_resolvent_margin);
    }
    std::vector<cplx> factor(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < lambdas.size(); ++j) acc += weights[j] / (lambdas[j] - a[k]);
        factor[k] = acc;
    }
    return MultiplierOp(g, std::move(factor)).apply(u);
}

std::vector<cplx> default_lambda_samples(double omega, double offset, double r_max,
                                         int line_points, int ray_points) {
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(line_points + ray_points));
    for (int j = 0; j < line_points; ++j) {
        const double r = -r_max + 2.0 * r_max * j / (line_points - 1);
        out.emplace_back(omega + offset, r);
    }
    const double lo = std::log(1e-2), hi = std::log(1e4);
    for (int j = 0; j < ray_points; ++j) {
        out.emplace_back(omega + std::exp(lo + (hi - lo) * j / (ray_points - 1)), 0.0);
    }
    return out;
}

std::vector<double> default_t_samples(double t_max, int count) {
    std::vector<double> out;
    const double lo = std::log(1e-3), hi = std::log(t_max);
    for (int j = 0; j < count; ++j) out.push_back(std::exp(lo + (hi - lo) * j / (count - 1)));
    return out;
}

GrowthCertificate certify_growth(const SymbolSeq& s, const std::vector<int>& n_list, double omega,
                                 double b, const std::vector<cplx>& lambda_samples,
                                 const std::vector<double>& t_samples, const Grid& grid) {
    for (const auto& l : lambda_samples) {
        if (!(l.real() > omega)) {
            throw DomainError(fmt::format("lambda sample {}{:+}i is not right of omega = {}",
                                          l.real(), l.imag(), omega));
        }
    }
    for (double t : t_samples) {
        if (!(t > 0.0)) throw DomainError(fmt::format("t sample must be positive, got {}", t));
    }
    GrowthCertificate cert;
    cert.omega = omega;
    cert.b = b;
    cert.lambda_samples = lambda_samples;
    cert.t_samples = t_samples;
    std::map<int, double> m_res, m_sg;
    for (int n : n_list) {
        const std::vector<cplx> a = symbol_values(s, n, grid);
        GrowthEntry e;
        e.n = n;
        for (const auto& l : lambda_samples) {
            const double lb = std::abs(std::pow(l, b));
            for (const auto& ak : a) e.resolvent_bound = std::max(e.resolvent_bound, lb / std::abs(l - ak));
        }
        for (double t : t_samples) {
            const double w = std::exp(-omega * t) * std::pow(t, -b);
            for (const auto& ak : a) e.semigroup_bound = std::max(e.semigroup_bound, w * std::abs(phi(t, ak)));
        }
        m_res[n] = e.resolvent_bound;
        m_sg[n] = e.semigroup_bound;
        cert.entries.push_back(e);
    }
    if (n_list.size() >= 4) {
        cert.resolvent_fit = fit_moderate(m_res);
        cert.semigroup_fit = fit_moderate(m_sg);
    }
    return cert;
}

}  // namespace geis
