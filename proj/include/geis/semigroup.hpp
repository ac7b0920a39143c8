#pragma once

#include <optional>
#include <span>
#include <vector>

#include "geis/grid.hpp"
#include "geis/moderate.hpp"
#include "geis/symbols.hpp"

namespace geis {

/// exp(z) - 1 without cancellation for small |z|.
cplx expm1(cplx z);

/// |t a| below this switches phi to its Taylor expansion.
inline constexpr double phi_taylor_threshold = 1e-6;

/// phi(t, a) = \int_0^t e^{s a} ds = (e^{t a} - 1) / a, entire in a. Requires t >= 0.
cplx phi(double t, cplx a);

/// Minimum distance from lambda to the sampled spectrum accepted by resolvents.
inline constexpr double default_resolvent_margin = 1e-8;

/**
 * Operator acting diagonally in frequency: F(Op u) = factor . F(u).
 * Resolvents, integrated semigroups and bounded perturbations are all
 * instances on a fixed grid.
 */
class MultiplierOp {
public:
    MultiplierOp(Grid grid, std::vector<cplx> factor);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const cplx> factor() const noexcept { return factor_; }

    GridFunction apply(const GridFunction& u) const;
    /// Multiplies transformed data; no transforms are performed.
    GridFunction apply_hat(const GridFunction& u_hat) const;

    /// Operator norm on the discrete L^2: max |factor|.
    double l2_norm() const noexcept;

    /// Composition: (*this)(other(u)).
    MultiplierOp compose(const MultiplierOp& other) const;
    MultiplierOp operator-(const MultiplierOp& other) const;
    MultiplierOp scaled(cplx s) const;

private:
    Grid grid_;
    std::vector<cplx> factor_;
};

/// Op a_n on the grid.
MultiplierOp symbol_op(const SymbolSeq& s, int n, const Grid& grid);
/// S_n(t) with factor phi(t, a_n(xi_k)). Throws EvaluationError on a non-finite factor.
MultiplierOp semigroup_op(const SymbolSeq& s, int n, double t, const Grid& grid);
/**
 * R(lambda, Op a_n) with factor 1/(lambda - a_n(xi_k)). Throws
 * ResolventSingularity when some |lambda - a_n(xi_k)| <= margin.
 */
MultiplierOp resolvent_op(const SymbolSeq& s, int n, cplx lambda, const Grid& grid,
                          double margin = default_resolvent_margin);

GridFunction apply_S(const SymbolSeq& s, int n, double t, const GridFunction& u);
GridFunction apply_resolvent(const SymbolSeq& s, int n, cplx lambda, const GridFunction& u,
                             double margin = default_resolvent_margin);

/// Truncation time T = 40 / (lambda - omega) for the Laplace integral.
double laplace_truncation(double lambda, double omega);

/**
 * ||R(lambda) u - lambda \int_0^T e^{-lambda t} S_n(t) u dt||_2 / ||u||_2 with
 * the integral by composite Gauss-Legendre on `panels` panels.
 * Requires lambda > re_bound of the family.
 */
double laplace_identity_residual(const SymbolSeq& s, int n, double lambda, const GridFunction& u,
                                 double T, int panels);

/// ||R(l)u - R(m)u - (m - l) R(l) R(m) u||_2 / ||u||_2.
double pseudoresolvent_residual(const SymbolSeq& s, int n, cplx lambda, cplx mu,
                                const GridFunction& u);

/**
 * Trapezoid discretization of the truncated inversion integral
 *   S_n(t) u = (1/2 pi) \int_{-R}^{R} e^{(alpha + i r) t} R(alpha + i r) u / (alpha + i r) dr.
 * Independent of apply_S; requires alpha > re_bound.
 */
GridFunction bromwich_S(const SymbolSeq& s, int n, double t, const GridFunction& u, double alpha,
                        double r_max, int steps);

struct GrowthEntry {
    int n = 0;
    double resolvent_bound = 0.0;  // M_n = max_lambda ||lambda^b R(lambda)||
    double semigroup_bound = 0.0;  // M'_n = max_t ||e^{-omega t} t^{-b} S_n(t)||
};

/// Sampled growth bounds; every stored bound is the maximum over the declared samples.
struct GrowthCertificate {
    double omega = 0.0;
    double b = 1.0;
    std::vector<cplx> lambda_samples;
    std::vector<double> t_samples;
    std::vector<GrowthEntry> entries;
    std::optional<ModerateSeq> resolvent_fit;
    std::optional<ModerateSeq> semigroup_fit;
};

/// A vertical line Re lambda = omega + offset plus a log-spaced real ray (omega + 1e-2, omega + 1e4].
std::vector<cplx> default_lambda_samples(double omega, double offset = 0.5, double r_max = 2000.0,
                                         int line_points = 8001, int ray_points = 61);
/// Log-spaced times in [1e-3, t_max].
std::vector<double> default_t_samples(double t_max = 10.0, int count = 81);

/// Throws DomainError when a lambda sample has Re lambda <= omega or a t sample is not positive.
GrowthCertificate certify_growth(const SymbolSeq& s, const std::vector<int>& n_list, double omega,
                                 double b, const std::vector<cplx>& lambda_samples,
                                 const std::vector<double>& t_samples, const Grid& grid);

}  // namespace geis
