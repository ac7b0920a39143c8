#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geis/association.hpp"
#include "geis/semigroup.hpp"
#include "geis/symbols.hpp"

namespace geis {

/// Bounded Fourier multipliers n -> b_n(xi) with sup_{n, xi} |b_n| <= bound.
struct BoundedMultiplierSeq {
    std::string name;
    std::function<cplx(int n, const Point& xi)> eval;
    double bound = 0.0;

    static BoundedMultiplierSeq zero();
    static BoundedMultiplierSeq constant(cplx b);
    /// b_n = c / n.
    static BoundedMultiplierSeq inverse_n(cplx c);
    /// Pointwise sum; bounds add.
    BoundedMultiplierSeq operator+(const BoundedMultiplierSeq& other) const;
};

/// Throws HypothesisViolation when some grid value exceeds the declared bound.
void check_bound(const BoundedMultiplierSeq& b, const std::vector<int>& n_list, const Grid& grid);

/// The sum a_n + b_n as a symbol sequence.
SymbolSeq perturbed_symbol(const SymbolSeq& s, const BoundedMultiplierSeq& b);

/// Panels of the Gauss-Legendre rule for the s-integral of the perturbed factor.
inline constexpr int perturbation_panels = 64;

/**
 * e^{tb} phi(t, a) - b \int_0^t e^{sb} phi(s, a) ds with the integral by
 * composite Gauss-Legendre. Throws OverflowGuard when t Re b or t Re(a + b)
 * exceeds the double exponent range.
 */
cplx perturbed_factor(double t, cplx a, cplx b, int panels = perturbation_panels);
/// phi(t, a + b), the same factor after integrating by parts.
cplx perturbed_factor_closed(double t, cplx a, cplx b);

MultiplierOp perturbed_S_op(const SymbolSeq& s, const BoundedMultiplierSeq& b, int n, double t,
                            const Grid& grid);
GridFunction perturbed_S(const SymbolSeq& s, const BoundedMultiplierSeq& b, int n, double t,
                         const GridFunction& u);
SemigroupFamily perturbed_family(const SymbolSeq& s, const BoundedMultiplierSeq& b, const Grid& grid);

struct PerturbationSettings {
    std::vector<int> n_list{4, 8, 16, 32, 64};
    double omega = 2.0;  // must exceed Re(a_n + b_n) for every family involved
    double b = 1.0;
    std::vector<double> t_samples = default_t_samples(5.0, 41);
    std::vector<cplx> lambda_samples = default_lambda_samples(2.0, 0.5, 200.0, 801, 31);
    AssociationThresholds thresholds;
};

struct PerturbationReport {
    GrowthCertificate growth;           // summed family a_n + b_n
    AssociationReport perturbations;    // S^{B} against S^{B + C}
    AssociationReport ge4;              // premise of the third claim
    std::optional<AssociationReport> perturbed_pair;  // S^{B} against tilde S^{B}, run when ge4 is associated
    /// False when the premise holds but the perturbed pair is not associated.
    bool consistent = true;
};

/**
 * Growth certificate of the summed family, association of the perturbations
 * by B and B + C, and the transfer of GE4 association through B. Throws
 * HypothesisViolation when C is not a null sequence on the grid.
 */
PerturbationReport perturbation_suite(const SymbolSeq& s, const SymbolSeq& st,
                                          const BoundedMultiplierSeq& b,
                                          const BoundedMultiplierSeq& c,
                                          const std::vector<TestSequence>& tests,
                                          const PerturbationSettings& settings, const Grid& grid);

/**
 * Families p(D) and p(D) + (1 + D^2)/n with p(z) = c0 + c1 z + c2 z^2:
 * norms max_{t in (0, t_max]} ||S_n(t) f - S(t) f||_p over t_count uniform
 * times. Requires d = 1 and a real part of p bounded above.
 */
AssociationReport closing_example(const GridFunction& f, const std::vector<cplx>& coeffs,
                                  const std::vector<int>& n_list, double t_max, int t_count = 200,
                                  double p = 2.0, const AssociationThresholds& thr = {});

}  // namespace geis
