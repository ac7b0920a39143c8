#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geis/grid.hpp"
#include "geis/moderate.hpp"
#include "geis/semigroup.hpp"
#include "geis/symbols.hpp"

namespace geis {

enum class Verdict { associated, not_associated, inconclusive };

const char* to_string(Verdict v) noexcept;

/**
 * Decision rule for a sequence of difference norms x_n:
 *  - associated: fitted slope < -slope_min and either the last norm is below
 *    tol = rel_tol * (first norm) or the decay does not slow down, i.e. the
 *    slope of the last two points is at most decel_ratio * slope;
 *  - not associated: last norm > not_factor * tol and slope >= -flat_slope;
 *  - inconclusive otherwise.
 * All-zero sequences are associated.
 */
struct AssociationThresholds {
    double rel_tol = 1e-3;
    double slope_min = 0.2;
    double decel_ratio = 0.8;
    double not_factor = 10.0;
    double flat_slope = 1e-9;
};

/// Verdict for one test sequence.
struct SequenceVerdict {
    std::string sequence;
    std::vector<int> n;
    std::vector<double> norms;
    double slope = 0.0;
    double tail_slope = 0.0;
    double tol_assoc = 0.0;
    Verdict verdict = Verdict::inconclusive;
};

/**
 * Verdicts over a set of test sequences. The aggregate is not associated when
 * any sequence is, inconclusive when any sequence is, associated otherwise.
 */
struct AssociationReport {
    std::string check;
    AssociationThresholds thresholds;
    std::vector<SequenceVerdict> sequences;
    Verdict verdict = Verdict::associated;

    /// The decay slope of the first sequence, the headline number of single-sequence checks.
    double slope() const;
};

/// Throws InsufficientData for fewer than 4 indices.
SequenceVerdict classify(const std::map<int, double>& norms, const AssociationThresholds& thr,
                         std::string sequence = {});
Verdict aggregate(const std::vector<SequenceVerdict>& v);

/// A moderate sequence n -> x_n of grid functions.
struct TestSequence {
    std::string name;
    std::function<GridFunction(int n)> at;
};

/// Fixed Gaussian, fixed narrow bump, oscillatory packet and sqrt(n) times a Gaussian.
std::vector<TestSequence> bundled_test_sequences(const Grid& grid);

/// Throws HypothesisViolation when some ||x_n||_2 is not moderate over n_list.
void require_moderate(const TestSequence& x, const std::vector<int>& n_list);

/// Norms ||(Op a_n - Op b_n) x_n||_2.
AssociationReport check_generator_association(const SymbolSeq& s, const SymbolSeq& st,
                                              const std::vector<TestSequence>& tests,
                                              const std::vector<int>& n_list, const Grid& grid,
                                              const AssociationThresholds& thr = {});

/// Norms max_lambda ||(R(lambda, A_n) - R(lambda, B_n)) x_n||_2.
AssociationReport check_resolvent_association(const SymbolSeq& s, const SymbolSeq& st,
                                              const std::vector<cplx>& lambda_list,
                                              const std::vector<TestSequence>& tests,
                                              const std::vector<int>& n_list, const Grid& grid,
                                              const AssociationThresholds& thr = {});

/// Integrated semigroup of index n at time t; lets perturbed families reuse the checks.
using SemigroupFamily = std::function<MultiplierOp(int n, double t)>;

SemigroupFamily semigroup_family(const SymbolSeq& s, const Grid& grid);

/**
 * Norms max_t e^{-omega t} ||(S_n(t) - T_n(t)) x_n||_2 over t_samples.
 * The symbol overload requires omega > both real-part bounds.
 */
AssociationReport check_geis_association(const SemigroupFamily& s, const SemigroupFamily& st,
                                         double omega, const std::vector<double>& t_samples,
                                         const std::vector<TestSequence>& tests,
                                         const std::vector<int>& n_list, const Grid& grid,
                                         const AssociationThresholds& thr = {});
AssociationReport check_geis_association(const SymbolSeq& s, const SymbolSeq& st, double omega,
                                         const std::vector<double>& t_samples,
                                         const std::vector<TestSequence>& tests,
                                         const std::vector<int>& n_list, const Grid& grid,
                                         const AssociationThresholds& thr = {});

/// Norms max_lambda ||lambda^b (R(lambda, A_n) - R(lambda, B_n)) x_n||_2; Re lambda > omega required.
AssociationReport check_GE4(const SymbolSeq& s, const SymbolSeq& st, double omega, double b,
                            const std::vector<cplx>& lambda_samples,
                            const std::vector<TestSequence>& tests, const std::vector<int>& n_list,
                            const Grid& grid, const AssociationThresholds& thr = {});

/// Per lambda: c1 = min_n ||R(lambda, A_n)||, c2 = max_n, and the growth exponent of ||R||.
struct G4Entry {
    cplx lambda;
    std::vector<double> norms;  // per n
    double c1 = 0.0;
    double c2 = 0.0;
    double spread = 1.0;  // c2 / c1
    std::optional<double> exponent;
    bool bounded = true;  // |exponent| <= max_exponent
};

struct G4Report {
    std::vector<int> n_list;
    std::vector<G4Entry> entries;
    bool all_bounded() const;
};

G4Report check_G4(const SymbolSeq& s, const std::vector<int>& n_list,
                  const std::vector<cplx>& lambda_list, const Grid& grid,
                  double max_exponent = 0.5);

/// k-th lambda-derivative of 1/(lambda (lambda - a)) by partial fractions.
cplx resolvent_over_lambda_derivative(cplx a, double lambda, int k);

/**
 * (lambda - omega)^{k+1} / k! * d^k/dlambda^k [1/(lambda (lambda - a))] up to
 * the sign (-1)^k, evaluated as r2^{k+1} expm1(-(k+1) log1p(-a/lambda)) / a
 * with r2 = (lambda - omega)/lambda, so no factorial is formed.
 */
cplx d1_signed(cplx a, double lambda, double omega, int k);
inline double d1_quantity(cplx a, double lambda, double omega, int k) {
    return std::abs(d1_signed(a, lambda, omega, k));
}

/// Largest k accepted by the derivative checks.
inline constexpr int d1_k_limit = 60;

struct D1Entry {
    int n = 0;
    double sup = 0.0;
    int argmax_k = 0;
    double argmax_lambda = 0.0;
};

struct D1Report {
    double omega = 0.0;
    int k_max = 0;
    std::vector<double> lambda_list;
    std::vector<D1Entry> entries;
    std::optional<ModerateSeq> fit;
};

/// Log-spaced real lambda in [omega + delta, omega + 1e4].
std::vector<double> d1_lambda_samples(double omega, double delta = 1e-2, int count = 121);

/// Throws OverflowGuard for k_max > 60 and DomainError for lambda <= omega.
D1Report check_d1(const SymbolSeq& s, const std::vector<int>& n_list, double omega, int k_max,
                  const std::vector<double>& lambda_list, const Grid& grid);

/// Same quantity with the difference of the two resolvents applied to x_n.
AssociationReport check_d2(const SymbolSeq& s, const SymbolSeq& st, const std::vector<int>& n_list,
                           double omega, int k_max, const std::vector<double>& lambda_list,
                           const std::vector<TestSequence>& tests, const Grid& grid,
                           const AssociationThresholds& thr = {});

struct FamilyPair {
    std::string name;
    SymbolSeq s;
    SymbolSeq st;
};

struct SuiteSettings {
    std::vector<int> n_list{4, 8, 16, 32, 64};
    std::vector<cplx> resolvent_lambdas{{2.0, 0.0}, {3.0, 1.0}};
    double omega = 1.5;
    double b = 1.0;
    std::vector<double> t_samples = default_t_samples(5.0, 41);
    std::vector<cplx> ge4_lambdas = default_lambda_samples(1.5, 0.5, 200.0, 801, 31);
    AssociationThresholds thresholds;
};

struct PairVerdicts {
    std::string name;
    G4Report g4_s, g4_st;
    AssociationReport generator, resolvent, geis, ge4;
    std::vector<std::string> disagreements;
};

struct CrosscheckReport {
    std::vector<PairVerdicts> pairs;
    std::size_t disagreements() const;
};

/**
 * Runs all four checks on every pair and records violations of
 *   generator <=> resolvent,  geis => resolvent,  GE4 => geis,
 * counting a violation whenever the premise is associated and the
 * conclusion is not, or the two sides of the equivalence differ.
 */
CrosscheckReport crosscheck_theorems(const std::vector<FamilyPair>& pairs,
                                     const std::vector<TestSequence>& tests,
                                     const SuiteSettings& settings, const Grid& grid);

/// Nine pairs on one-dimensional grids: associated, not associated and one borderline pair.
std::vector<FamilyPair> bundled_family_pairs();

}  // namespace geis
