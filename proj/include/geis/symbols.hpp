#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geis/grid.hpp"
#include "geis/moderate.hpp"
#include "geis/spectral.hpp"

namespace geis {

using SymbolFn = std::function<cplx(int n, const Point& xi)>;

/**
 * A sequence of Fourier multiplier symbols n -> a_n(xi) with the metadata the
 * hypothesis checks need: the symbol order, the ellipticity exponent r and
 * radius L (|a_n(xi)| >= C_n |xi|^r for |xi| > L), and an upper bound for
 * Re a_n (`re_bound`).
 */
struct SymbolSeq {
    std::string name;
    SymbolFn eval;
    double order_m = 0.0;
    double ellipticity_r = 0.0;
    double cutoff_L = 1.0;
    int dimension = 1;
    double re_bound = 0.0;

    cplx operator()(int n, const Point& xi) const { return eval(n, xi); }
};

/// a_n(xi_k) over the frequency list of `grid`. Throws EvaluationError on a non-finite value.
std::vector<cplx> symbol_values(const SymbolSeq& s, int n, const Grid& grid);

/// Pointwise sum a_n + b_n. Metadata is taken from `a` with re_bound added.
SymbolSeq sum(const SymbolSeq& a, const SymbolSeq& b, std::string name = {});

/// Coefficients c_j(n) = alpha_{j,n} + i beta_{j,n} of a polynomial symbol
/// sum_j c_j(n) (2 pi i xi)^j of degree at most 2.
struct PolySymbolParams {
    std::function<std::vector<cplx>(int n)> rule;
    /// Indices used to derive the real-part bound of the family.
    std::vector<int> sample_n{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};

    static PolySymbolParams constant(std::vector<cplx> coeffs);
    /// c_j(n) = base_j + per_n_j / n.
    static PolySymbolParams inverse_n(std::vector<cplx> base, std::vector<cplx> per_n);
};

/// sup_eta Re p(i eta) for p(z) = c0 + c1 z + c2 z^2; +infinity when unbounded.
double poly_real_part_sup(const std::vector<cplx>& coeffs);
/// max(0, poly_real_part_sup), the exponential type of the generated semigroup.
double poly_omega(const std::vector<cplx>& coeffs);

/// Throws UnsupportedFamily for degree > 2.
SymbolSeq make_poly_symbol_seq(const PolySymbolParams& params, std::string name = "poly");

/// The stationary heat symbol -xi^2, i.e. coefficients (0, 0, 1/(4 pi^2)).
SymbolSeq heat_symbol();

/**
 * a_n(xi) = i c_n |xi|^m. Throws HypothesisViolation when a sampled |c_n|
 * exceeds the declared uniform bound.
 */
SymbolSeq make_fractional_symbol_seq(std::function<double(int)> c, double m, int dim,
                                     double c_bound,
                                     const std::vector<int>& sample_n = {1, 2, 4, 8, 16, 32, 64});

/// max over points of |D^alpha a_n(xi)| / <xi>^{m - |alpha|}, per multi-index and in total.
struct SymbolClassEntry {
    int n = 0;
    std::vector<double> per_alpha;
    double constant = 0.0;  // C_n
};

struct SymbolClassReport {
    std::vector<MultiIndex> alphas;
    std::vector<SymbolClassEntry> entries;
    std::optional<ModerateSeq> fit;  // present with at least 4 indices
    bool moderate = true;
};

/**
 * Symbol-class estimate with derivatives by central differences of step
 * `fd_step`. Adding points to `points` never decreases a reported constant.
 * Throws DomainError for max_order > 2 and EvaluationError on non-finite values.
 */
SymbolClassReport check_symbol_class(const SymbolSeq& s, const std::vector<int>& n_list,
                                     const std::vector<Point>& points, double fd_step,
                                     int max_order);
/// Same, on the frequency list of `grid` with step = frequency spacing.
SymbolClassReport check_symbol_class(const SymbolSeq& s, const std::vector<int>& n_list,
                                     const Grid& grid, int max_order);

struct EllipticityEntry {
    int n = 0;
    double lower_constant = 0.0;  // min_{|xi|>L} |a_n(xi)| / |xi|^r
    double upper_constant = 0.0;  // max of the same ratio
    bool lower_ok = false;        // 1 / C_n <= c0
    double sup_re = 0.0;
    bool re_ok = false;           // sup_re <= re_bound
};

struct EllipticityReport {
    double c0 = 0.0;
    std::vector<EllipticityEntry> entries;
    bool all_ok() const;
};

/**
 * Ellipticity lower bound outside |xi| <= L and the upper bound on Re a_n,
 * sampled on the frequency list. Report only; throws DomainError when no
 * grid frequency lies outside the cutoff.
 */
EllipticityReport check_ellipticity(const SymbolSeq& s, const std::vector<int>& n_list,
                                    const Grid& grid, double c0);

/// |1/2 - 1/p| < r / (m d). Throws DomainError for p <= 1 or m d = 0.
bool check_p_condition(double p, double r, double m, int d);

}  // namespace geis
