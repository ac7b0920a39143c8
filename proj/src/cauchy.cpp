#include "geis/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "geis/errors.hpp"
#include "geis/semigroup.hpp"
#include "geis/spectral.hpp"

namespace geis {
namespace {

// log(DBL_MAX) with some headroom for the panel prefactors.
constexpr double exponent_limit = 700.0;

GridFunction forcing_hat(const ForcingSeq& f, int n, double t, const Grid& grid) {
    GridFunction ft = f.eval(n, t);
    require_same_grid(grid, ft.grid(), "forcing sample");
    return transform(ft);
}

bool vanishes_on_boundary(const GridFunction& rho) {
    const Grid& g = rho.grid();
    const int n = g.points_per_axis();
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const int row = g.dim() == 1 ? static_cast<int>(i) : static_cast<int>(i) / n;
        const int col = g.dim() == 1 ? 0 : static_cast<int>(i) % n;
        const bool edge = row == 0 || row == n - 1 ||
                          (g.dim() == 2 && (col == 0 || col == n - 1));
        if (edge && rho[i] != cplx{}) return false;
    }
    return true;
}

void require_test_support(const MildSolution& sol, const SpaceTimeTest& psi) {
    if (!psi.chi || !psi.chi_dt) throw TestFunctionError("test function has no time factor");
    const auto [lo, hi] = psi.support;
    if (!(lo > 0.0 && hi < sol.times().t_end() && lo < hi)) {
        throw TestFunctionError(fmt::format(
            "time support [{}, {}] is not inside (0, {})", lo, hi, sol.times().t_end()));
    }
    require_same_grid(sol.grid(), psi.rho.grid(), "test function");
    if (!vanishes_on_boundary(psi.rho)) {
        throw TestFunctionError("spatial factor does not vanish at the grid boundary");
    }
}

// Trapezoid weights of the solution nodes.
double trapezoid_weight(const TimeGrid& tg, std::size_t j) {
    return (j == 0 || j + 1 == tg.size()) ? 0.5 * tg.dt() : tg.dt();
}

}  // namespace

TimeGrid::TimeGrid(double t_end, double dt) : t_end_(t_end), dt_(dt), steps_(0) {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw DomainError(fmt::format("time grid needs t_end > 0 and dt > 0, got {} and {}", t_end, dt));
    }
    const double k = std::round(t_end / dt);
    if (std::abs(k * dt - t_end) > 1e-9 * t_end || k > 1e8) {
        throw DomainError(fmt::format("t_end = {} is not an integer multiple of dt = {}", t_end, dt));
    }
    steps_ = static_cast<int>(k);
}

std::size_t TimeGrid::index_of(double t) const {
    const double k = std::round(t / dt_);
    if (k < 0 || k > steps_ || std::abs(k * dt_ - t) > 1e-9 * dt_) {
        throw DomainError(fmt::format("t = {} is not a node of the time grid (dt = {}, t_end = {})",
                                      t, dt_, t_end_));
    }
    return static_cast<std::size_t>(k);
}

ForcingSeq ForcingSeq::zero(const Grid& grid) {
    return {[grid](int, double) { return GridFunction::zeros(grid); }, true};
}

ForcingSeq ForcingSeq::constant(std::function<GridFunction(int n)> g) {
    return {[g = std::move(g)](int n, double) { return g(n); }, true};
}

MildSolution::MildSolution(int n, TimeGrid times, GridFunction u0, std::vector<GridFunction> v_hat,
                           std::vector<GridFunction> w_hat)
    : n_(n), times_(times), u0_(std::move(u0)), v_hat_(std::move(v_hat)), w_hat_(std::move(w_hat)) {
    if (v_hat_.size() != times_.size() || w_hat_.size() != times_.size()) {
        throw ShapeError("solution needs one snapshot per time node");
    }
}

GridFunction MildSolution::v(std::size_t j) const { return inverse_transform(v_hat(j)); }
GridFunction MildSolution::w(std::size_t j) const { return inverse_transform(w_hat(j)); }

PhiFunctions phi_functions(cplx z) {
    if (std::abs(z) < 1.0) {
        // Terms fall below 1e-25 well before j = 25.
        PhiFunctions p{};
        cplx term = 1.0;
        double fact1 = 1.0, fact2 = 2.0, fact3 = 6.0;  // (j+1)!, (j+2)!, (j+3)!
        for (int j = 0; j < 25; ++j) {
            p.phi1 += term / fact1;
            p.phi2 += term / fact2;
            p.phi3 += term / fact3;
            term *= z;
            fact1 *= j + 2;
            fact2 *= j + 3;
            fact3 *= j + 4;
        }
        return p;
    }
    const cplx p1 = expm1(z) / z;
    const cplx p2 = (p1 - 1.0) / z;
    const cplx p3 = (p2 - 0.5) / z;
    return {p1, p2, p3};
}

MildSolution duhamel_solve(const SymbolSeq& s, int n, const GridFunction& u0n, const ForcingSeq& f,
                           const TimeGrid& times) {
    const Grid& g = u0n.grid();
    const std::vector<cplx> a = symbol_values(s, n, g);
    double max_re = -std::numeric_limits<double>::infinity();
    for (const auto& ak : a) max_re = std::max(max_re, ak.real());
    if (max_re * times.t_end() > exponent_limit) {
        throw OverflowGuard(fmt::format(
            "exp(t Re a) overflows: max Re a_{} = {} on [0, {}] breaks the exponential growth bound",
            n, max_re, times.t_end()));
    }
    const double h = times.dt();
    std::vector<PhiFunctions> panel(a.size());
    std::vector<cplx> growth(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        const cplx z = h * a[k];
        panel[k] = phi_functions(z);
        growth[k] = std::exp(z);
    }

    const GridFunction u0_hat = transform(u0n);
    std::vector<GridFunction> v_hat, w_hat;
    v_hat.reserve(times.size());
    w_hat.reserve(times.size());
    v_hat.push_back(GridFunction::zeros(g));
    w_hat.push_back(u0_hat);
    GridFunction f_prev = forcing_hat(f, n, 0.0, g);
    for (std::size_t j = 1; j < times.size(); ++j) {
        GridFunction f_next = forcing_hat(f, n, times.node(j), g);
        const GridFunction& vj = v_hat.back();
        const GridFunction& wj = w_hat.back();
        std::vector<cplx> v(a.size()), w(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            const auto& p = panel[k];
            w[k] = growth[k] * wj[k] + h * ((p.phi1 - p.phi2) * f_prev[k] + p.phi2 * f_next[k]);
            v[k] = vj[k] + h * p.phi1 * wj[k] +
                   h * h * ((p.phi2 - p.phi3) * f_prev[k] + p.phi3 * f_next[k]);
        }
        v_hat.emplace_back(g, std::move(v));
        w_hat.emplace_back(g, std::move(w));
        f_prev = std::move(f_next);
    }
    return MildSolution(n, times, u0n, std::move(v_hat), std::move(w_hat));
}

double integral_equation_residual(const MildSolution& sol, const SymbolSeq& s, const ForcingSeq& f,
                                  double t) {
    const std::size_t m = sol.times().index_of(t);
    const Grid& g = sol.grid();
    const std::vector<cplx> a = symbol_values(s, sol.n(), g);
    std::vector<cplx> int_w(a.size()), int_f(a.size());
    for (std::size_t j = 0; j <= m && m > 0; ++j) {
        const double wt = (j == 0 || j == m) ? 0.5 * sol.times().dt() : sol.times().dt();
        const GridFunction fj = forcing_hat(f, sol.n(), sol.times().node(j), g);
        const GridFunction& wj = sol.w_hat(j);
        for (std::size_t k = 0; k < a.size(); ++k) {
            int_w[k] += wt * wj[k];
            int_f[k] += wt * fj[k];
        }
    }
    const GridFunction u0_hat = transform(sol.initial());
    const GridFunction& wm = sol.w_hat(m);
    std::vector<cplx> r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = wm[k] - u0_hat[k] - a[k] * int_w[k] - int_f[k];
    const double scale = std::max(1.0, frequency_lp_norm(wm, 2.0));
    return frequency_lp_norm(GridFunction(g, std::move(r)), 2.0) / scale;
}

SpaceTimeTest bump_in_time(double lo, double hi, GridFunction rho) {
    if (!(lo < hi)) throw TestFunctionError(fmt::format("empty time support [{}, {}]", lo, hi));
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    auto chi = [mid, half](double t) {
        const double r = (t - mid) / half;
        return std::abs(r) < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
    };
    auto chi_dt = [mid, half, chi](double t) {
        const double r = (t - mid) / half;
        if (std::abs(r) >= 1.0) return 0.0;
        const double q = 1.0 - r * r;
        return chi(t) * (-2.0 * r / (q * q)) / half;
    };
    return {chi, chi_dt, {lo, hi}, std::move(rho)};
}

std::vector<SpaceTimeTest> bundled_space_time_tests(const Grid& grid, double t_end) {
    if (!(grid.half_width() > 2.5)) {
        throw TestFunctionError(fmt::format("bundled tests need half_width > 2.5, got {}", grid.half_width()));
    }
    const int d = grid.dim();
    auto spatial_bump = [&](Point c, double radius, bool odd) {
        return GridFunction::sample(grid, [=](const Point& x) {
            const Point y{x[0] - c[0], x[1] - c[1]};
            const double r = norm(y, d) / radius;
            const double v = r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0;
            return cplx{odd ? x[0] * v : v};
        });
    };
    return {
        bump_in_time(0.1 * t_end, 0.9 * t_end, spatial_bump({0.0, 0.0}, 1.0, false)),
        bump_in_time(0.2 * t_end, 0.6 * t_end, spatial_bump({0.5, 0.0}, 1.5, false)),
        bump_in_time(0.3 * t_end, 0.95 * t_end, spatial_bump({0.0, 0.0}, 2.0, true)),
    };
}

cplx very_weak_pairing(const MildSolution& sol, const SpaceTimeTest& psi) {
    require_test_support(sol, psi);
    const TimeGrid& tg = sol.times();
    cplx acc{};
    for (std::size_t j = 0; j < tg.size(); ++j) {
        const double c = psi.chi(tg.node(j));
        if (c == 0.0) continue;
        acc += trapezoid_weight(tg, j) * c * pair(sol.w(j), psi.rho);
    }
    return acc;
}

cplx distributional_residual(const MildSolution& sol, const SymbolSeq& s, const ForcingSeq& f,
                             const SpaceTimeTest& psi) {
    require_test_support(sol, psi);
    const TimeGrid& tg = sol.times();
    const Grid& g = sol.grid();
    const std::vector<cplx> a = symbol_values(s, sol.n(), g);
    cplx acc{};
    for (std::size_t j = 0; j < tg.size(); ++j) {
        const double t = tg.node(j);
        const double c = psi.chi(t), cd = psi.chi_dt(t);
        if (c == 0.0 && cd == 0.0) continue;
        const GridFunction& wh = sol.w_hat(j);
        std::vector<cplx> rhs(a.size());
        const GridFunction fh = forcing_hat(f, sol.n(), t, g);
        for (std::size_t k = 0; k < a.size(); ++k) rhs[k] = a[k] * wh[k] + fh[k];
        const cplx term = -cd * pair(inverse_transform(wh), psi.rho) -
                          c * pair(inverse_transform(GridFunction(g, std::move(rhs))), psi.rho);
        acc += trapezoid_weight(tg, j) * term;
    }
    return acc;
}

bool WeakLimitReport::all_convergent() const {
    return std::all_of(limits.begin(), limits.end(), [](const PairingLimit& l) { return l.convergent; });
}

WeakLimitReport weak_limit_extract(const PairingTable& pairings, double tol) {
    if (!(tol > 0.0)) throw DomainError("weak-limit tolerance must be positive");
    std::map<int, std::vector<std::pair<int, cplx>>> by_psi;
    for (const auto& [key, value] : pairings) by_psi[key.second].emplace_back(key.first, value);
    if (by_psi.size() < 2) {
        throw InsufficientData(fmt::format("weak limits need at least 2 test functions, got {}", by_psi.size()));
    }
    WeakLimitReport report;
    report.tol = tol;
    for (auto& [id, seq] : by_psi) {
        if (seq.size() < 4) {
            throw InsufficientData(fmt::format(
                "test function {} has {} indices, at least 4 are needed", id, seq.size()));
        }
        std::sort(seq.begin(), seq.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        PairingLimit lim;
        lim.psi_id = id;
        for (std::size_t i = 1; i < seq.size(); ++i) {
            lim.increments.push_back(std::abs(seq[i].second - seq[i - 1].second));
        }
        std::size_t start = seq.size() - 1;
        while (start > 0 && lim.increments[start - 1] < tol) --start;
        for (std::size_t i = start; i < seq.size(); ++i) lim.subsequence.push_back(seq[i].first);
        lim.convergent = lim.subsequence.size() >= 2;
        lim.limit = seq.back().second;
        report.limits.push_back(std::move(lim));
    }
    return report;
}

}  // namespace geis
