#include "geis/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "geis/errors.hpp"
#include "geis/parallel.hpp"
#include "geis/spectral.hpp"

namespace geis {
namespace {

// ||factor . x_hat|| in the frequency-side L^2 norm, equal to the spatial norm.
double weighted_norm(std::span<const cplx> factor, const GridFunction& x_hat) {
    double s = 0.0;
    for (std::size_t k = 0; k < factor.size(); ++k) s += std::norm(factor[k] * x_hat[k]);
    return std::sqrt(s * x_hat.grid().freq_cell_volume());
}

cplx log1p(cplx z) {
    const cplx u = 1.0 + z;
    if (u == cplx{1.0, 0.0}) return z;
    return std::log(u) * z / (u - 1.0);
}

AssociationReport classify_all(std::string check, const std::vector<TestSequence>& tests,
                               const std::vector<int>& n_list, const AssociationThresholds& thr,
                               const std::vector<double>& values);

// norms[test][n-index] filled by `measure(test, n) -> norm`, then classified per test.
template <typename Measure>
AssociationReport run_check(std::string check, const std::vector<TestSequence>& tests,
                            const std::vector<int>& n_list, const AssociationThresholds& thr,
                            Measure&& measure) {
    for (const auto& x : tests) require_moderate(x, n_list);
    std::vector<double> values(tests.size() * n_list.size());
    parallel_for(values.size(), [&](std::size_t idx) {
        const std::size_t i = idx / n_list.size(), j = idx % n_list.size();
        values[idx] = measure(tests[i], n_list[j]);
    });
    return classify_all(std::move(check), tests, n_list, thr, values);
}

AssociationReport classify_all(std::string check, const std::vector<TestSequence>& tests,
                               const std::vector<int>& n_list, const AssociationThresholds& thr,
                               const std::vector<double>& values) {
    AssociationReport report;
    report.check = std::move(check);
    report.thresholds = thr;
    for (std::size_t i = 0; i < tests.size(); ++i) {
        std::map<int, double> norms;
        for (std::size_t j = 0; j < n_list.size(); ++j) norms[n_list[j]] = values[i * n_list.size() + j];
        report.sequences.push_back(classify(norms, thr, tests[i].name));
    }
    report.verdict = aggregate(report.sequences);
    return report;
}

void require_right_of(const std::vector<cplx>& lambdas, double omega) {
    for (const auto& l : lambdas) {
        if (!(l.real() > omega)) {
            throw DomainError(fmt::format("lambda sample {}{:+}i is not right of omega = {}",
                                          l.real(), l.imag(), omega));
        }
    }
}

void require_d1_args(double omega, int k_max, const std::vector<double>& lambda_list) {
    if (k_max > d1_k_limit) {
        throw OverflowGuard(fmt::format("k_max = {} exceeds the derivative limit {}", k_max, d1_k_limit));
    }
    if (k_max < 0) throw DomainError("k_max must be non-negative");
    for (double l : lambda_list) {
        if (!(l > omega)) throw DomainError(fmt::format("lambda = {} is not right of omega = {}", l, omega));
    }
}

SymbolSeq shifted(const SymbolSeq& base, std::function<cplx(int)> shift, std::string name,
                  double re_shift_bound) {
    SymbolSeq out = base;
    out.name = std::move(name);
    out.eval = [f = base.eval, shift = std::move(shift)](int n, const Point& xi) {
        return f(n, xi) + shift(n);
    };
    out.re_bound = base.re_bound + re_shift_bound;
    return out;
}

}  // namespace

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::associated: return "associated";
        case Verdict::not_associated: return "not-associated";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double AssociationReport::slope() const {
    return sequences.empty() ? 0.0 : sequences.front().slope;
}

SequenceVerdict classify(const std::map<int, double>& norms, const AssociationThresholds& thr,
                         std::string sequence) {
    SequenceVerdict out;
    out.sequence = std::move(sequence);
    const ModerateSeq fit = fit_moderate(norms);
    out.n = fit.indices;
    out.norms = fit.values;
    const double first = out.norms.front(), last = out.norms.back();
    out.tol_assoc = thr.rel_tol * first;
    if (std::all_of(out.norms.begin(), out.norms.end(), [](double v) { return v == 0.0; })) {
        out.verdict = Verdict::associated;
        return out;
    }
    out.slope = fit.slope;
    out.tail_slope = tail_slope(fit);
    const bool decaying = out.slope < -thr.slope_min;
    const bool steady = out.tail_slope <= thr.decel_ratio * out.slope;
    if (decaying && (last < out.tol_assoc || steady)) {
        out.verdict = Verdict::associated;
    } else if (last > thr.not_factor * out.tol_assoc && out.slope >= -thr.flat_slope) {
        out.verdict = Verdict::not_associated;
    } else {
        out.verdict = Verdict::inconclusive;
    }
    return out;
}

Verdict aggregate(const std::vector<SequenceVerdict>& v) {
    auto any = [&](Verdict x) {
        return std::any_of(v.begin(), v.end(), [x](const SequenceVerdict& s) { return s.verdict == x; });
    };
    if (any(Verdict::not_associated)) return Verdict::not_associated;
    if (any(Verdict::inconclusive)) return Verdict::inconclusive;
    return Verdict::associated;
}

std::vector<TestSequence> bundled_test_sequences(const Grid& grid) {
    const int d = grid.dim();
    const GridFunction gauss = GridFunction::sample(grid, [d](const Point& x) {
        return cplx{std::exp(-std::numbers::pi * std::pow(norm(x, d), 2))};
    });
    const GridFunction bump = GridFunction::sample(grid, [d](const Point& x) {
        const double r = 2.0 * norm(x, d);
        return cplx{r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0};
    });
    const GridFunction packet = GridFunction::sample(grid, [d](const Point& x) {
        return std::exp(-std::numbers::pi * std::pow(norm(x, d), 2)) *
               std::exp(cplx{0.0, 2.0 * std::numbers::pi * 2.0 * x[0]});
    });
    return {
        {"gaussian", [gauss](int) { return gauss; }},
        {"narrow_bump", [bump](int) { return bump; }},
        {"packet", [packet](int) { return packet; }},
        {"sqrt_n_gaussian",
         [gauss](int n) { return cplx{std::sqrt(static_cast<double>(n))} * gauss; }},
    };
}

void require_moderate(const TestSequence& x, const std::vector<int>& n_list) {
    if (n_list.size() < 4) return;
    std::map<int, double> norms;
    for (int n : n_list) norms[n] = lp_norm(x.at(n), 2.0);
    if (!fit_moderate(norms).moderate()) {
        throw HypothesisViolation(fmt::format("test sequence '{}' is not moderate", x.name));
    }
}

AssociationReport check_generator_association(const SymbolSeq& s, const SymbolSeq& st,
                                              const std::vector<TestSequence>& tests,
                                              const std::vector<int>& n_list, const Grid& grid,
                                              const AssociationThresholds& thr) {
    return run_check("generator", tests, n_list, thr, [&](const TestSequence& x, int n) {
        const auto a = symbol_values(s, n, grid), b = symbol_values(st, n, grid);
        std::vector<cplx> diff(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) diff[k] = a[k] - b[k];
        return weighted_norm(diff, transform(x.at(n)));
    });
}

AssociationReport check_resolvent_association(const SymbolSeq& s, const SymbolSeq& st,
                                              const std::vector<cplx>& lambda_list,
                                              const std::vector<TestSequence>& tests,
                                              const std::vector<int>& n_list, const Grid& grid,
                                              const AssociationThresholds& thr) {
    if (lambda_list.empty()) throw DomainError("resolvent association needs at least one lambda");
    return run_check("resolvent", tests, n_list, thr, [&](const TestSequence& x, int n) {
        const GridFunction x_hat = transform(x.at(n));
        double best = 0.0;
        for (const auto& l : lambda_list) {
            const MultiplierOp d = resolvent_op(s, n, l, grid) - resolvent_op(st, n, l, grid);
            best = std::max(best, weighted_norm(d.factor(), x_hat));
        }
        return best;
    });
}

SemigroupFamily semigroup_family(const SymbolSeq& s, const Grid& grid) {
    return [s, grid](int n, double t) { return semigroup_op(s, n, t, grid); };
}

AssociationReport check_geis_association(const SemigroupFamily& s, const SemigroupFamily& st,
                                         double omega, const std::vector<double>& t_samples,
                                         const std::vector<TestSequence>& tests,
                                         const std::vector<int>& n_list, const Grid& grid,
                                         const AssociationThresholds& thr) {
    (void)grid;
    for (double t : t_samples) {
        if (t < 0.0) throw DomainError(fmt::format("time sample must be non-negative, got {}", t));
    }
    for (const auto& x : tests) require_moderate(x, n_list);
    // Differences are formed once per (n, t) and applied to every test sequence.
    std::vector<double> values(tests.size() * n_list.size());
    parallel_for(n_list.size(), [&](std::size_t j) {
        const int n = n_list[j];
        std::vector<GridFunction> x_hat;
        for (const auto& x : tests) x_hat.push_back(transform(x.at(n)));
        std::vector<double> best(tests.size(), 0.0);
        for (double t : t_samples) {
            const MultiplierOp d = s(n, t) - st(n, t);
            const double w = std::exp(-omega * t);
            for (std::size_t i = 0; i < tests.size(); ++i) {
                best[i] = std::max(best[i], w * weighted_norm(d.factor(), x_hat[i]));
            }
        }
        for (std::size_t i = 0; i < tests.size(); ++i) values[i * n_list.size() + j] = best[i];
    });
    return classify_all("geis", tests, n_list, thr, values);
}

AssociationReport check_geis_association(const SymbolSeq& s, const SymbolSeq& st, double omega,
                                         const std::vector<double>& t_samples,
                                         const std::vector<TestSequence>& tests,
                                         const std::vector<int>& n_list, const Grid& grid,
                                         const AssociationThresholds& thr) {
    if (!(omega > s.re_bound && omega > st.re_bound)) {
        throw DomainError(fmt::format("omega = {} must exceed the real-part bounds {} and {}", omega,
                                      s.re_bound, st.re_bound));
    }
    return check_geis_association(semigroup_family(s, grid), semigroup_family(st, grid), omega,
                                  t_samples, tests, n_list, grid, thr);
}

AssociationReport check_GE4(const SymbolSeq& s, const SymbolSeq& st, double omega, double b,
                            const std::vector<cplx>& lambda_samples,
                            const std::vector<TestSequence>& tests, const std::vector<int>& n_list,
                            const Grid& grid, const AssociationThresholds& thr) {
    if (!(b > 0.0)) throw DomainError(fmt::format("GE4 exponent b must be positive, got {}", b));
    require_right_of(lambda_samples, omega);
    return run_check("GE4", tests, n_list, thr, [&](const TestSequence& x, int n) {
        const GridFunction x_hat = transform(x.at(n));
        const auto a = symbol_values(s, n, grid), at = symbol_values(st, n, grid);
        double best = 0.0;
        std::vector<cplx> f(a.size());
        for (const auto& l : lambda_samples) {
            const cplx lb = std::pow(l, b);
            for (std::size_t k = 0; k < a.size(); ++k) f[k] = lb * (1.0 / (l - a[k]) - 1.0 / (l - at[k]));
            best = std::max(best, weighted_norm(f, x_hat));
        }
        return best;
    });
}

bool G4Report::all_bounded() const {
    return std::all_of(entries.begin(), entries.end(), [](const G4Entry& e) { return e.bounded; });
}

G4Report check_G4(const SymbolSeq& s, const std::vector<int>& n_list,
                  const std::vector<cplx>& lambda_list, const Grid& grid, double max_exponent) {
    G4Report report;
    report.n_list = n_list;
    for (const auto& l : lambda_list) {
        G4Entry e;
        e.lambda = l;
        std::map<int, double> by_n;
        for (int n : n_list) {
            const double r = resolvent_op(s, n, l, grid).l2_norm();
            e.norms.push_back(r);
            by_n[n] = r;
        }
        if (!e.norms.empty()) {
            e.c1 = *std::min_element(e.norms.begin(), e.norms.end());
            e.c2 = *std::max_element(e.norms.begin(), e.norms.end());
            e.spread = e.c2 / e.c1;
        }
        if (by_n.size() >= 4) {
            e.exponent = fit_moderate(by_n).slope;
            e.bounded = std::abs(*e.exponent) <= max_exponent;
        }
        report.entries.push_back(std::move(e));
    }
    return report;
}

cplx resolvent_over_lambda_derivative(cplx a, double lambda, int k) {
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= j;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (a == cplx{}) return sign * fact * (k + 1) * std::pow(lambda, -k - 2);
    return sign * fact / a * (std::pow(lambda - a, -k - 1) - std::pow(lambda, -k - 1));
}

cplx d1_signed(cplx a, double lambda, double omega, int k) {
    const double r2 = (lambda - omega) / lambda;
    const double r2k = std::pow(r2, k + 1);
    if (a == cplx{}) return (k + 1) / lambda * r2k;
    return r2k * expm1(-static_cast<double>(k + 1) * log1p(-a / lambda)) / a;
}

std::vector<double> d1_lambda_samples(double omega, double delta, int count) {
    std::vector<double> out;
    const double lo = std::log(delta), hi = std::log(1e4);
    for (int j = 0; j < count; ++j) out.push_back(omega + std::exp(lo + (hi - lo) * j / (count - 1)));
    return out;
}

D1Report check_d1(const SymbolSeq& s, const std::vector<int>& n_list, double omega, int k_max,
                  const std::vector<double>& lambda_list, const Grid& grid) {
    require_d1_args(omega, k_max, lambda_list);
    D1Report report;
    report.omega = omega;
    report.k_max = k_max;
    report.lambda_list = lambda_list;
    report.entries.resize(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t i) {
        const auto a = symbol_values(s, n_list[i], grid);
        D1Entry e;
        e.n = n_list[i];
        for (int k = 0; k <= k_max; ++k) {
            for (double l : lambda_list) {
                for (const auto& ak : a) {
                    const double q = d1_quantity(ak, l, omega, k);
                    if (q > e.sup) {
                        e.sup = q;
                        e.argmax_k = k;
                        e.argmax_lambda = l;
                    }
                }
            }
        }
        report.entries[i] = e;
    });
    if (n_list.size() >= 4) {
        std::map<int, double> m;
        for (const auto& e : report.entries) m[e.n] = e.sup;
        report.fit = fit_moderate(m);
    }
    return report;
}

AssociationReport check_d2(const SymbolSeq& s, const SymbolSeq& st, const std::vector<int>& n_list,
                           double omega, int k_max, const std::vector<double>& lambda_list,
                           const std::vector<TestSequence>& tests, const Grid& grid,
                           const AssociationThresholds& thr) {
    require_d1_args(omega, k_max, lambda_list);
    return run_check("d2", tests, n_list, thr, [&](const TestSequence& x, int n) {
        const GridFunction x_hat = transform(x.at(n));
        const auto a = symbol_values(s, n, grid), at = symbol_values(st, n, grid);
        std::vector<cplx> f(a.size());
        double best = 0.0;
        for (int k = 0; k <= k_max; ++k) {
            for (double l : lambda_list) {
                for (std::size_t j = 0; j < a.size(); ++j) {
                    f[j] = d1_signed(a[j], l, omega, k) - d1_signed(at[j], l, omega, k);
                }
                best = std::max(best, weighted_norm(f, x_hat));
            }
        }
        return best;
    });
}

std::size_t CrosscheckReport::disagreements() const {
    std::size_t total = 0;
    for (const auto& p : pairs) total += p.disagreements.size();
    return total;
}

CrosscheckReport crosscheck_theorems(const std::vector<FamilyPair>& pairs,
                                     const std::vector<TestSequence>& tests,
                                     const SuiteSettings& st, const Grid& grid) {
    CrosscheckReport report;
    for (const auto& p : pairs) {
        PairVerdicts v;
        v.name = p.name;
        v.g4_s = check_G4(p.s, st.n_list, st.resolvent_lambdas, grid);
        v.g4_st = check_G4(p.st, st.n_list, st.resolvent_lambdas, grid);
        v.generator = check_generator_association(p.s, p.st, tests, st.n_list, grid, st.thresholds);
        v.resolvent = check_resolvent_association(p.s, p.st, st.resolvent_lambdas, tests, st.n_list,
                                                  grid, st.thresholds);
        v.geis = check_geis_association(p.s, p.st, st.omega, st.t_samples, tests, st.n_list, grid,
                                        st.thresholds);
        v.ge4 = check_GE4(p.s, p.st, st.omega, st.b, st.ge4_lambdas, tests, st.n_list, grid,
                          st.thresholds);
        if (v.generator.verdict != v.resolvent.verdict) {
            v.disagreements.push_back(fmt::format("generator {} vs resolvent {}",
                                                  to_string(v.generator.verdict),
                                                  to_string(v.resolvent.verdict)));
        }
        if (v.geis.verdict == Verdict::associated && v.resolvent.verdict != Verdict::associated) {
            v.disagreements.push_back(fmt::format("geis associated but resolvent {}",
                                                  to_string(v.resolvent.verdict)));
        }
        if (v.ge4.verdict == Verdict::associated && v.geis.verdict != Verdict::associated) {
            v.disagreements.push_back(
                fmt::format("GE4 associated but geis {}", to_string(v.geis.verdict)));
        }
        report.pairs.push_back(std::move(v));
    }
    return report;
}

std::vector<FamilyPair> bundled_family_pairs() {
    const SymbolSeq heat = heat_symbol();
    const SymbolSeq closing_base = make_poly_symbol_seq(PolySymbolParams::constant({-1.0, 0.0, 1.0}), "closing");
    const SymbolSeq closing_n = make_poly_symbol_seq(
        PolySymbolParams::inverse_n({-1.0, 0.0, 1.0}, {1.0, 0.0, 1.0}), "closing_n");
    PolySymbolParams root_n;
    const double a2 = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
    root_n.rule = [a2](int n) {
        const double c = 1.0 / std::sqrt(static_cast<double>(n));
        return std::vector<cplx>{c, 0.0, a2 + c};
    };
    const SymbolSeq heat_root = make_poly_symbol_seq(root_n, "heat+(1+D^2)/sqrt(n)");
    const SymbolSeq schr = make_fractional_symbol_seq([](int) { return 1.0; }, 2.0, 1, 2.0);
    const SymbolSeq schr_n = make_fractional_symbol_seq(
        [](int n) { return 1.0 + 1.0 / n; }, 2.0, 1, 2.0);
    const SymbolSeq heat2 = make_poly_symbol_seq(PolySymbolParams::constant({0.0, 0.0, 2.0 * a2}), "2heat");
    return {
        {"identical_heat", heat, heat},
        {"closing", closing_base, closing_n},
        {"heat_root_n", heat, heat_root},
        {"heat_i_over_n", heat, shifted(heat, [](int n) { return cplx{0.0, 1.0 / n}; }, "heat+i/n", 0.0)},
        {"schroedinger_scaled", schr, schr_n},
        {"heat_shift_one", heat, shifted(heat, [](int) { return cplx{1.0}; }, "heat+1", 1.0)},
        {"schroedinger_shift_i", schr, shifted(schr, [](int) { return cplx{0.0, 1.0}; }, "schr+i", 0.0)},
        {"heat_double", heat, heat2},
        {"heat_log_shift", heat,
         shifted(heat,
                 [](int n) {
                     return cplx{-0.5 / (std::sqrt(static_cast<double>(n)) * std::log(n + 1.0))};
                 },
                 "heat-slow", 0.0)},
    };
}

}  // namespace geis
