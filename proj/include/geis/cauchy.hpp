#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "geis/grid.hpp"
#include "geis/symbols.hpp"

namespace geis {

/// Uniform time grid t_j = j dt, j = 0..steps, with steps dt = t_end.
class TimeGrid {
public:
    /// Throws DomainError unless dt > 0 and t_end is an integer multiple of dt.
    TimeGrid(double t_end, double dt);

    double t_end() const noexcept { return t_end_; }
    double dt() const noexcept { return dt_; }
    int steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(steps_) + 1; }
    double node(std::size_t j) const noexcept { return static_cast<double>(j) * dt_; }
    /// Index of the node at t. Throws DomainError when t is not a node.
    std::size_t index_of(double t) const;

private:
    double t_end_;
    double dt_;
    int steps_;
};

/// Regularized forcing n, t -> f_n(t, .), sampled at time nodes.
struct ForcingSeq {
    std::function<GridFunction(int n, double t)> eval;
    /// Set when t -> f_n(t) is differentiable and the samples resolve it.
    bool smooth_in_time = true;

    static ForcingSeq zero(const Grid& grid);
    /// f_n(t) = g_n for every t.
    static ForcingSeq constant(std::function<GridFunction(int n)> g);
};

/**
 * Duhamel solution of w' = a_n(D) w + f_n, w(0) = u_{0,n}, together with
 * v = \int_0^t w, stored in frequency space at every time node.
 */
class MildSolution {
public:
    MildSolution(int n, TimeGrid times, GridFunction u0, std::vector<GridFunction> v_hat,
                 std::vector<GridFunction> w_hat);

    int n() const noexcept { return n_; }
    const TimeGrid& times() const noexcept { return times_; }
    const Grid& grid() const noexcept { return u0_.grid(); }
    const GridFunction& initial() const noexcept { return u0_; }

    const GridFunction& v_hat(std::size_t j) const { return v_hat_.at(j); }
    const GridFunction& w_hat(std::size_t j) const { return w_hat_.at(j); }
    GridFunction v(std::size_t j) const;
    GridFunction w(std::size_t j) const;

private:
    int n_;
    TimeGrid times_;
    GridFunction u0_;
    std::vector<GridFunction> v_hat_;
    std::vector<GridFunction> w_hat_;
};

/// phi_k(z) = sum_j z^j / (j + k)!, k = 1, 2, 3, evaluated without cancellation.
struct PhiFunctions {
    cplx phi1, phi2, phi3;
};
PhiFunctions phi_functions(cplx z);

/**
 * Per-mode exponential integrator with piecewise-linear forcing on each time
 * panel; exact when f is linear in t on every panel. Throws OverflowGuard
 * when max Re a_n * t_end exceeds the double range.
 */
MildSolution duhamel_solve(const SymbolSeq& s, int n, const GridFunction& u0n, const ForcingSeq& f,
                           const TimeGrid& times);

/**
 * ||w(t) - u0 - a_n(D) \int_0^t w - \int_0^t f||_2 / max(1, ||w(t)||_2) with the
 * time integrals by the composite trapezoid rule on the solution nodes.
 */
double integral_equation_residual(const MildSolution& sol, const SymbolSeq& s, const ForcingSeq& f,
                                  double t);

/**
 * Separable test function psi(t, x) = chi(t) rho(x). `support` encloses the
 * support of chi; rho must vanish on the outermost grid cells.
 */
struct SpaceTimeTest {
    std::function<double(double)> chi;
    std::function<double(double)> chi_dt;
    std::pair<double, double> support;
    GridFunction rho;
};

/// Smooth bump supported in (lo, hi), with its derivative.
SpaceTimeTest bump_in_time(double lo, double hi, GridFunction rho);

/**
 * Three separable tests on (0, t_end) x grid: bumps of radius 1 at 0 and of
 * radius 1.5 at 0.5, and x times a bump of radius 2. Needs half_width > 2.5.
 */
std::vector<SpaceTimeTest> bundled_space_time_tests(const Grid& grid, double t_end);

/// <w_n, psi> by the trapezoid rule in t and the grid sum in x.
cplx very_weak_pairing(const MildSolution& sol, const SpaceTimeTest& psi);

/// <w_n, -d_t psi> - <a_n(D) w_n + f_n, psi>; vanishes up to quadrature error.
cplx distributional_residual(const MildSolution& sol, const SymbolSeq& s, const ForcingSeq& f,
                             const SpaceTimeTest& psi);

struct PairingLimit {
    int psi_id = 0;
    bool convergent = false;
    cplx limit{};
    std::vector<int> subsequence;  // tail of n over which increments stay below tol
    std::vector<double> increments;
};

struct WeakLimitReport {
    double tol = 0.0;
    std::vector<PairingLimit> limits;
    bool all_convergent() const;
};

/// Key (n, psi_id) of a pairing table.
using PairingTable = std::map<std::pair<int, int>, cplx>;

/**
 * Cauchy-criterion detection per test function: the tail of n over which
 * successive increments stay below tol. Convergent when that tail holds at
 * least two indices; the limit estimate is its last value. Throws
 * InsufficientData for fewer than 2 test functions or 4 indices per function.
 */
WeakLimitReport weak_limit_extract(const PairingTable& pairings, double tol);

}  // namespace geis
