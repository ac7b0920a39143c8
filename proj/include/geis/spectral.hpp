#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "geis/grid.hpp"

namespace geis {

// Fourier convention shared by every module:
//   (F u)(xi) = \int u(x) exp(-2 pi i xi x) dx,
// so d/dx has symbol 2 pi i xi. The discrete transform is the Riemann-sum
// approximation of F on the grid; it is unitary up to the h^d / (1/2L)^d
// cell weights, and the discrete convolution (u*v)_j = h^d sum_m u_m v_{j-m}
// satisfies F(u*v) = F(u) F(v) with no extra constant.

/// Forward transform. The result holds samples on the frequency list of the grid.
GridFunction transform(const GridFunction& u);
/// Inverse of `transform`.
GridFunction inverse_transform(const GridFunction& u_hat);

inline constexpr double infinity_norm = std::numeric_limits<double>::infinity();

/// (sum |u|^p h^d)^(1/p), or max |u| for p = infinity_norm. Throws DomainError for p < 1.
double lp_norm(const GridFunction& u, double p);

/// The same norm with frequency-cell weights, for transformed data.
double frequency_lp_norm(const GridFunction& u_hat, double p);

/// Real dual pairing sum u * psi h^d (no conjugation).
cplx pair(const GridFunction& u, const GridFunction& psi);

/// Periodic convolution h^d sum_m u_m v_{j-m}, computed directly in O(size^2).
/// Reference route for checking spectral products.
GridFunction direct_convolution(const GridFunction& u, const GridFunction& v);

using MultiIndex = std::array<int, 2>;

/// prod_j (2 pi i xi_j)^{alpha_j}.
cplx derivative_symbol(const Point& xi, const MultiIndex& alpha, int dim);

/// Spectral derivative d^alpha u.
GridFunction differentiate(const GridFunction& u, const MultiIndex& alpha);

/**
 * Delta sequence theta_n(x) = n^d theta(n x) built from a smooth bump
 * theta(x) = c exp(-s / (1 - |x|^2)) on |x| < 1, with sharpness s > 0.
 * The discretized profile is normalized so that h^d sum theta_n = 1.
 */
class Mollifier {
public:
    explicit Mollifier(double sharpness = 1.0);

    /// Named profiles accepted by the config layer: "bump" (s = 1) and "narrow_bump" (s = 4).
    static Mollifier from_name(const std::string& name);

    double sharpness() const noexcept { return sharpness_; }
    /// Unnormalized profile value at radius r.
    double profile(double r) const noexcept;

    /// Largest n with n * h <= 1/4 on this grid.
    static int max_resolved_n(const Grid& grid) noexcept;

    /// Samples theta_n. Throws ResolutionError when n * h > 1/4.
    GridFunction sample(const Grid& grid, int n) const;

private:
    double sharpness_;
};

/// A distribution sum_alpha d^alpha g_alpha with every g_alpha a grid function.
struct DistributionTerm {
    MultiIndex alpha{0, 0};
    GridFunction g;
};

class DistributionRep {
public:
    explicit DistributionRep(Grid grid) : grid_(grid) {}

    /// Unit mass point measure: grid impulse of height 1/h^d at x = 0.
    static DistributionRep delta(const Grid& grid);
    /// d^alpha delta.
    static DistributionRep delta_derivative(const Grid& grid, const MultiIndex& alpha);
    static DistributionRep function(const GridFunction& g);

    DistributionRep& add(const MultiIndex& alpha, GridFunction g);

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<DistributionTerm>& terms() const noexcept { return terms_; }
    int max_order() const noexcept;

private:
    Grid grid_;
    std::vector<DistributionTerm> terms_;
};

/// The discrete unit impulse of `delta`.
GridFunction unit_impulse(const Grid& grid);

/**
 * Regularization sum_alpha g_alpha * d^alpha theta_n, computed spectrally so
 * the derivatives fall on the mollifier. Every ||g_alpha||_p must be finite.
 * Throws ResolutionError when theta_n is not resolved by the grid.
 */
GridFunction mollify(const DistributionRep& u, const Mollifier& theta, int n, double p = 2.0);

}  // namespace geis
