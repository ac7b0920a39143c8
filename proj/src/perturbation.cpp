#include "geis/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <fmt/format.h>

#include "geis/errors.hpp"
#include "geis/quadrature.hpp"
#include "geis/spectral.hpp"

namespace geis {
namespace {

constexpr double exponent_limit = 700.0;

const QuadratureRule& unit_rule(int panels) {
    static std::mutex m;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard lock(m);
    auto it = cache.find(panels);
    if (it == cache.end()) it = cache.emplace(panels, composite_gauss_legendre(0.0, 1.0, panels)).first;
    return it->second;
}

}  // namespace

BoundedMultiplierSeq BoundedMultiplierSeq::zero() {
    return {"zero", [](int, const Point&) { return cplx{}; }, 0.0};
}

BoundedMultiplierSeq BoundedMultiplierSeq::constant(cplx b) {
    return {fmt::format("const({},{})", b.real(), b.imag()), [b](int, const Point&) { return b; },
            std::abs(b)};
}

BoundedMultiplierSeq BoundedMultiplierSeq::inverse_n(cplx c) {
    return {fmt::format("({},{})/n", c.real(), c.imag()),
            [c](int n, const Point&) { return c / static_cast<double>(n); }, std::abs(c)};
}

BoundedMultiplierSeq BoundedMultiplierSeq::operator+(const BoundedMultiplierSeq& other) const {
    return {name + "+" + other.name,
            [f = eval, g = other.eval](int n, const Point& xi) { return f(n, xi) + g(n, xi); },
            bound + other.bound};
}

void check_bound(const BoundedMultiplierSeq& b, const std::vector<int>& n_list, const Grid& grid) {
    for (int n : n_list) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double v = std::abs(b.eval(n, grid.frequency(k)));
            if (!(v <= b.bound * (1.0 + 1e-12))) {
                throw HypothesisViolation(fmt::format(
                    "|b_{}| = {} exceeds the declared bound {} of '{}'", n, v, b.bound, b.name));
            }
        }
    }
}

SymbolSeq perturbed_symbol(const SymbolSeq& s, const BoundedMultiplierSeq& b) {
    SymbolSeq out = s;
    out.name = s.name + "+" + b.name;
    out.eval = [f = s.eval, g = b.eval](int n, const Point& xi) { return f(n, xi) + g(n, xi); };
    out.re_bound = s.re_bound + b.bound;
    return out;
}

cplx perturbed_factor(double t, cplx a, cplx b, int panels) {
    if (t < 0.0) throw DomainError(fmt::format("perturbed factor needs t >= 0, got {}", t));
    if (t * b.real() > exponent_limit || t * (a + b).real() > exponent_limit) {
        throw OverflowGuard(fmt::format("exp(t Re b) or exp(t Re(a + b)) overflows at t = {}", t));
    }
    if (t == 0.0) return 0.0;
    const QuadratureRule& rule = unit_rule(panels);
    cplx q{};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double s = t * rule.nodes[j];
        q += rule.weights[j] * std::exp(s * b) * phi(s, a);
    }
    q *= t;
    return std::exp(t * b) * phi(t, a) - b * q;
}

cplx perturbed_factor_closed(double t, cplx a, cplx b) { return phi(t, a + b); }

MultiplierOp perturbed_S_op(const SymbolSeq& s, const BoundedMultiplierSeq& b, int n, double t,
                            const Grid& grid) {
    const std::vector<cplx> a = symbol_values(s, n, grid);
    std::vector<cplx> f(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) f[k] = perturbed_factor(t, a[k], b.eval(n, grid.frequency(k)));
    return MultiplierOp(grid, std::move(f));
}

GridFunction perturbed_S(const SymbolSeq& s, const BoundedMultiplierSeq& b, int n, double t,
                         const GridFunction& u) {
    return perturbed_S_op(s, b, n, t, u.grid()).apply(u);
}

SemigroupFamily perturbed_family(const SymbolSeq& s, const BoundedMultiplierSeq& b, const Grid& grid) {
    return [s, b, grid](int n, double t) { return perturbed_S_op(s, b, n, t, grid); };
}

PerturbationReport perturbation_suite(const SymbolSeq& s, const SymbolSeq& st,
                                          const BoundedMultiplierSeq& b,
                                          const BoundedMultiplierSeq& c,
                                          const std::vector<TestSequence>& tests,
                                          const PerturbationSettings& settings, const Grid& grid) {
    check_bound(b, settings.n_list, grid);
    check_bound(c, settings.n_list, grid);
    std::map<int, double> c_sup;
    for (int n : settings.n_list) {
        double m = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) m = std::max(m, std::abs(c.eval(n, grid.frequency(k))));
        c_sup[n] = m;
    }
    const SequenceVerdict null_check = classify(c_sup, settings.thresholds, c.name);
    if (null_check.verdict != Verdict::associated) {
        throw HypothesisViolation(fmt::format("'{}' is not a null sequence on the grid ({})", c.name,
                                              to_string(null_check.verdict)));
    }
    const double re_max = std::max(s.re_bound, st.re_bound) + b.bound + c.bound;
    if (!(settings.omega > re_max)) {
        throw DomainError(fmt::format("omega = {} must exceed the perturbed real-part bound {}",
                                      settings.omega, re_max));
    }

    PerturbationReport r;
    r.growth = certify_growth(perturbed_symbol(s, b), settings.n_list, settings.omega, settings.b,
                              settings.lambda_samples, settings.t_samples, grid);
    r.perturbations = check_geis_association(perturbed_family(s, b, grid),
                                             perturbed_family(s, b + c, grid), settings.omega,
                                             settings.t_samples, tests, settings.n_list, grid,
                                             settings.thresholds);
    r.ge4 = check_GE4(s, st, settings.omega, settings.b, settings.lambda_samples, tests,
                      settings.n_list, grid, settings.thresholds);
    if (r.ge4.verdict == Verdict::associated) {
        r.perturbed_pair = check_geis_association(perturbed_family(s, b, grid),
                                                  perturbed_family(st, b, grid), settings.omega,
                                                  settings.t_samples, tests, settings.n_list, grid,
                                                  settings.thresholds);
        r.consistent = r.perturbed_pair->verdict == Verdict::associated;
    }
    return r;
}

AssociationReport closing_example(const GridFunction& f, const std::vector<cplx>& coeffs,
                                  const std::vector<int>& n_list, double t_max, int t_count,
                                  double p, const AssociationThresholds& thr) {
    const Grid& g = f.grid();
    if (g.dim() != 1) throw DomainError("the closing example is one-dimensional");
    if (!std::isfinite(poly_real_part_sup(coeffs))) {
        throw HypothesisViolation("real part of p(2 pi i xi) is not bounded above");
    }
    if (!(t_max > 0.0) || t_count < 1) throw DomainError("closing example needs t_max > 0 and t_count >= 1");
    const SymbolSeq base = make_poly_symbol_seq(PolySymbolParams::constant(coeffs), "p");
    const SymbolSeq seq = make_poly_symbol_seq(PolySymbolParams::inverse_n(coeffs, {1.0, 0.0, 1.0}), "p_n");
    const GridFunction f_hat = transform(f);
    std::map<int, double> norms;
    for (int n : n_list) {
        double best = 0.0;
        for (int j = 1; j <= t_count; ++j) {
            const double t = t_max * j / t_count;
            const MultiplierOp d = semigroup_op(seq, n, t, g) - semigroup_op(base, 1, t, g);
            best = std::max(best, lp_norm(inverse_transform(d.apply_hat(f_hat)), p));
        }
        norms[n] = best;
    }
    AssociationReport r;
    r.check = "closing";
    r.thresholds = thr;
    r.sequences.push_back(classify(norms, thr, "f"));
    r.verdict = aggregate(r.sequences);
    return r;
}

}  // namespace geis
