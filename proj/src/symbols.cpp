#include "geis/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <fmt/format.h>

#include "geis/errors.hpp"

namespace geis {
namespace {

cplx checked_eval(const SymbolSeq& s, int n, const Point& xi) {
    const cplx v = s.eval(n, xi);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw EvaluationError(fmt::format("symbol '{}' is not finite at n = {}, xi = ({}, {})",
                                          s.name, n, xi[0], xi[1]));
    }
    return v;
}

std::vector<MultiIndex> multi_indices(int dim, int max_order) {
    std::vector<MultiIndex> out;
    for (int k = 0; k <= max_order; ++k) {
        if (dim == 1) {
            out.push_back({k, 0});
        } else {
            for (int j = k; j >= 0; --j) out.push_back({j, k - j});
        }
    }
    return out;
}

// Central differences of order |alpha| <= 2 with step h.
cplx finite_difference(const SymbolSeq& s, int n, const Point& xi, const MultiIndex& alpha,
                       double h) {
    auto at = [&](double dx, double dy) { return checked_eval(s, n, {xi[0] + dx, xi[1] + dy}); };
    const int order = alpha[0] + alpha[1];
    if (order == 0) return at(0, 0);
    if (order == 1) {
        if (alpha[0] == 1) return (at(h, 0) - at(-h, 0)) / (2.0 * h);
        return (at(0, h) - at(0, -h)) / (2.0 * h);
    }
    if (alpha[0] == 2) return (at(h, 0) - 2.0 * at(0, 0) + at(-h, 0)) / (h * h);
    if (alpha[1] == 2) return (at(0, h) - 2.0 * at(0, 0) + at(0, -h)) / (h * h);
    return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
}

}  // namespace

std::vector<cplx> symbol_values(const SymbolSeq& s, int n, const Grid& grid) {
    std::vector<cplx> out(grid.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked_eval(s, n, grid.frequency(i));
    return out;
}

SymbolSeq sum(const SymbolSeq& a, const SymbolSeq& b, std::string name) {
    SymbolSeq out = a;
    out.name = name.empty() ? a.name + "+" + b.name : std::move(name);
    out.eval = [fa = a.eval, fb = b.eval](int n, const Point& xi) { return fa(n, xi) + fb(n, xi); };
    out.re_bound = a.re_bound + b.re_bound;
    return out;
}

PolySymbolParams PolySymbolParams::constant(std::vector<cplx> coeffs) {
    PolySymbolParams p;
    p.rule = [c = std::move(coeffs)](int) { return c; };
    return p;
}

PolySymbolParams PolySymbolParams::inverse_n(std::vector<cplx> base, std::vector<cplx> per_n) {
    const std::size_t len = std::max(base.size(), per_n.size());
    base.resize(len);
    per_n.resize(len);
    PolySymbolParams p;
    p.rule = [base = std::move(base), per_n = std::move(per_n)](int n) {
        std::vector<cplx> c(base.size());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = base[j] + per_n[j] / static_cast<double>(n);
        return c;
    };
    return p;
}

double poly_real_part_sup(const std::vector<cplx>& coeffs) {
    // Re p(i eta) = alpha0 - beta1 eta - alpha2 eta^2.
    const auto c = [&](std::size_t j) { return j < coeffs.size() ? coeffs[j] : cplx{}; };
    const double alpha0 = c(0).real(), beta1 = c(1).imag(), alpha2 = c(2).real();
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (alpha2 > 0.0) return alpha0 + beta1 * beta1 / (4.0 * alpha2);
    if (alpha2 == 0.0 && beta1 == 0.0) return alpha0;
    return inf;
}

double poly_omega(const std::vector<cplx>& coeffs) {
    return std::max(0.0, poly_real_part_sup(coeffs));
}

SymbolSeq make_poly_symbol_seq(const PolySymbolParams& params, std::string name) {
    if (!params.rule) throw DomainError("polynomial symbol needs a coefficient rule");
    int degree = 0;
    double re_bound = -std::numeric_limits<double>::infinity();
    for (int n : params.sample_n) {
        const auto c = params.rule(n);
        if (c.size() > 3) {
            for (std::size_t j = 3; j < c.size(); ++j) {
                if (c[j] != cplx{}) {
                    throw UnsupportedFamily(fmt::format(
                        "polynomial symbols of degree {} are not supported (max 2)", j));
                }
            }
        }
        for (std::size_t j = 0; j < std::min<std::size_t>(c.size(), 3); ++j) {
            if (c[j] != cplx{}) degree = std::max(degree, static_cast<int>(j));
        }
        re_bound = std::max(re_bound, poly_real_part_sup(c));
    }
    SymbolSeq s;
    s.name = std::move(name);
    s.eval = [rule = params.rule](int n, const Point& xi) {
        const auto c = rule(n);
        const cplx z{0.0, 2.0 * std::numbers::pi * xi[0]};
        cplx acc{};
        for (std::size_t j = c.size(); j-- > 0;) acc = acc * z + c[j];
        return acc;
    };
    s.order_m = degree;
    s.ellipticity_r = degree;
    s.cutoff_L = 1.0;
    s.dimension = 1;
    s.re_bound = re_bound;
    return s;
}

SymbolSeq heat_symbol() {
    const double a2 = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
    return make_poly_symbol_seq(PolySymbolParams::constant({0.0, 0.0, a2}), "heat");
}

SymbolSeq make_fractional_symbol_seq(std::function<double(int)> c, double m, int dim,
                                     double c_bound, const std::vector<int>& sample_n) {
    if (dim != 1 && dim != 2) throw DomainError(fmt::format("dimension must be 1 or 2, got {}", dim));
    for (int n : sample_n) {
        const double cn = c(n);
        if (!std::isfinite(cn) || std::abs(cn) > c_bound) {
            throw HypothesisViolation(fmt::format(
                "coefficient c_{} = {} exceeds the declared uniform bound {}", n, cn, c_bound));
        }
    }
    SymbolSeq s;
    s.name = "fractional";
    s.eval = [c = std::move(c), m, dim](int n, const Point& xi) {
        return cplx{0.0, c(n) * std::pow(norm(xi, dim), m)};
    };
    s.order_m = m;
    s.ellipticity_r = m;
    s.cutoff_L = 1.0;
    s.dimension = dim;
    s.re_bound = 0.0;
    return s;
}

SymbolClassReport check_symbol_class(const SymbolSeq& s, const std::vector<int>& n_list,
                                     const std::vector<Point>& points, double fd_step,
                                     int max_order) {
    if (max_order < 0 || max_order > 2) {
        throw DomainError(fmt::format("symbol derivatives are checked up to order 2, got {}", max_order));
    }
    if (!(fd_step > 0.0)) throw DomainError("finite-difference step must be positive");
    SymbolClassReport report;
    report.alphas = multi_indices(s.dimension, max_order);
    std::map<int, double> constants;
    for (int n : n_list) {
        SymbolClassEntry entry;
        entry.n = n;
        entry.per_alpha.assign(report.alphas.size(), 0.0);
        for (const auto& xi : points) {
            const double bracket = std::sqrt(1.0 + std::pow(norm(xi, s.dimension), 2));
            for (std::size_t a = 0; a < report.alphas.size(); ++a) {
                const auto& alpha = report.alphas[a];
                const int order = alpha[0] + alpha[1];
                const double ratio = std::abs(finite_difference(s, n, xi, alpha, fd_step)) /
                                     std::pow(bracket, s.order_m - order);
                entry.per_alpha[a] = std::max(entry.per_alpha[a], ratio);
            }
        }
        entry.constant = *std::max_element(entry.per_alpha.begin(), entry.per_alpha.end());
        constants[n] = entry.constant;
        report.entries.push_back(std::move(entry));
    }
    if (constants.size() >= 4) {
        report.fit = fit_moderate(constants);
        report.moderate = report.fit->moderate();
    }
    return report;
}

SymbolClassReport check_symbol_class(const SymbolSeq& s, const std::vector<int>& n_list,
                                     const Grid& grid, int max_order) {
    std::vector<Point> points(grid.size());
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = grid.frequency(i);
    return check_symbol_class(s, n_list, points, grid.freq_spacing(), max_order);
}

bool EllipticityReport::all_ok() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const EllipticityEntry& e) { return e.lower_ok && e.re_ok; });
}

EllipticityReport check_ellipticity(const SymbolSeq& s, const std::vector<int>& n_list,
                                    const Grid& grid, double c0) {
    EllipticityReport report;
    report.c0 = c0;
    bool any_outside = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (norm(grid.frequency(i), grid.dim()) > s.cutoff_L) any_outside = true;
    }
    if (!any_outside) {
        throw DomainError(fmt::format("no grid frequency lies outside the cutoff |xi| > {}", s.cutoff_L));
    }
    for (int n : n_list) {
        EllipticityEntry e;
        e.n = n;
        e.lower_constant = std::numeric_limits<double>::infinity();
        e.sup_re = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Point xi = grid.frequency(i);
            const cplx a = checked_eval(s, n, xi);
            e.sup_re = std::max(e.sup_re, a.real());
            const double r = norm(xi, grid.dim());
            if (r > s.cutoff_L) {
                const double ratio = std::abs(a) / std::pow(r, s.ellipticity_r);
                e.lower_constant = std::min(e.lower_constant, ratio);
                e.upper_constant = std::max(e.upper_constant, ratio);
            }
        }
        e.lower_ok = e.lower_constant > 0.0 && 1.0 / e.lower_constant <= c0;
        e.re_ok = e.sup_re <= s.re_bound + 1e-12 * std::max(1.0, std::abs(s.re_bound));
        report.entries.push_back(e);
    }
    return report;
}

bool check_p_condition(double p, double r, double m, int d) {
    if (!(p > 1.0)) throw DomainError(fmt::format("p must lie in (1, inf), got {}", p));
    if (m * d == 0.0) throw DomainError("p-condition undefined for m * d = 0");
    return std::abs(0.5 - 1.0 / p) < r / (m * d);
}

}  // namespace geis
