#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "geis/association.hpp"
#include "geis/cauchy.hpp"
#include "geis/csv.hpp"
#include "geis/errors.hpp"
#include "geis/parallel.hpp"
#include "geis/perturbation.hpp"
#include "geis/quadrature.hpp"
#include "geis/semigroup.hpp"
#include "geislab/app.hpp"
#include "svg.hpp"

namespace geislab {
namespace {

using namespace geis;
namespace fs = std::filesystem;
using csv::num;

const char* error_kind(const std::exception& e) {
    if (dynamic_cast<const ResolventSingularity*>(&e)) return "resolvent-singularity";
    if (dynamic_cast<const ResolutionError*>(&e)) return "resolution";
    if (dynamic_cast<const OverflowGuard*>(&e)) return "overflow-guard";
    if (dynamic_cast<const HypothesisViolation*>(&e)) return "hypothesis-violation";
    if (dynamic_cast<const DomainError*>(&e)) return "domain";
    if (dynamic_cast<const EvaluationError*>(&e)) return "evaluation";
    return "error";
}

// Outcome of one suite inside a subcommand.
struct SuiteResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string note;
};

class Runner {
public:
    explicit Runner(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    const fs::path& dir() const { return dir_; }

    template <typename F>
    void run(const std::string& name, double tolerance, F&& body) {
        SuiteResult r{name, false, 0.0, tolerance, {}};
        try {
            r.value = body(r);
            r.passed = r.passed || (r.note.empty() && r.value <= tolerance);
        } catch (const std::exception& e) {
            r.passed = false;
            r.note = fmt::format("{}: {}", error_kind(e), e.what());
        }
        std::fprintf(stderr, "%-18s %s  value %s  tol %s%s%s\n", name.c_str(), r.passed ? "pass" : "FAIL",
                     num(r.value).c_str(), num(tolerance).c_str(), r.note.empty() ? "" : "  ", r.note.c_str());
        results_.push_back(std::move(r));
    }

    int finish() const {
        std::ofstream out(dir_ / "summary.txt");
        bool ok = true;
        for (const auto& r : results_) {
            out << r.name << ' ' << (r.passed ? "pass" : "fail") << ' ' << num(r.value) << ' ' << num(r.tolerance);
            if (!r.note.empty()) out << ' ' << r.note;
            out << '\n';
            ok = ok && r.passed;
        }
        return ok ? 0 : 1;
    }

private:
    fs::path dir_;
    std::vector<SuiteResult> results_;
};

GridFunction gaussian(const Grid& g) {
    const int d = g.dim();
    return GridFunction::sample(g, [d](const Point& x) {
        return cplx{std::exp(-std::numbers::pi * std::pow(norm(x, d), 2))};
    });
}

ForcingSeq build_forcing(const ExperimentConfig& cfg, const Grid& g, const Mollifier& theta) {
    if (cfg.forcing == "zero") return ForcingSeq::zero(g);
    const GridFunction base = gaussian(g);
    return ForcingSeq::constant([base, theta](int n) {
        return mollify(DistributionRep::function(base), theta, n);
    });
}

// Real lambda samples right of omega for the pseudoresolvent and growth checks.
std::vector<cplx> as_complex(const std::vector<double>& v) {
    return std::vector<cplx>(v.begin(), v.end());
}

void write_g4(const fs::path& path, const G4Report& r) {
    std::ofstream out(path);
    out << "lambda_re,lambda_im,c1,c2,spread,exponent,bounded\n";
    for (const auto& e : r.entries) {
        out << num(e.lambda.real()) << ',' << num(e.lambda.imag()) << ',' << num(e.c1) << ',' << num(e.c2) << ','
            << num(e.spread) << ',' << (e.exponent ? num(*e.exponent) : "") << ',' << (e.bounded ? 1 : 0) << '\n';
    }
}

void plot_association(const fs::path& path, const AssociationReport& r) {
    std::vector<svg::Series> s;
    for (const auto& q : r.sequences) {
        s.push_back({q.sequence, std::vector<double>(q.n.begin(), q.n.end()), q.norms});
    }
    svg::plot(path, fmt::format("{} differences ({})", r.check, to_string(r.verdict)), s, true, true);
}

void write_report(const fs::path& dir, const std::string& stem, const AssociationReport& r, bool plots) {
    csv::write_association(dir / (stem + ".csv"), dir / (stem + ".json"), r);
    if (plots) plot_association(dir / (stem + ".svg"), r);
}

// \int chi(t) <G_t, rho> dt for the heat kernel G_t(x) = sqrt(pi/t) exp(-pi^2 |x|^2 / t) in d dimensions.
double heat_kernel_pairing(const SpaceTimeTest& psi, const Grid& g) {
    using boost::math::quadrature::gauss;
    const auto [lo, hi] = psi.support;
    const int d = g.dim();
    auto spatial = [&](double t) {
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (psi.rho[i] == cplx{}) continue;
            const double r = norm(g.point(i), d);
            s += std::pow(std::numbers::pi / t, 0.5 * d) * std::exp(-std::numbers::pi * std::numbers::pi * r * r / t) *
                 psi.rho[i].real();
        }
        return s * g.cell_volume();
    };
    double total = 0.0;
    const int panels = 32;
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        total += gauss<double, 20>::integrate([&](double t) { return psi.chi(t) * spatial(t); }, lo + p * h,
                                              lo + (p + 1) * h);
    }
    return total;
}

}  // namespace

int run_verify(const ExperimentConfig& cfg, bool plots) {
    (void)plots;
    const Grid g = build_grid(cfg);
    const SymbolSeq s = build_symbol(cfg.symbol, cfg.dim);
    const GridFunction u = gaussian(g);
    Runner runner(fs::path(cfg.output_dir) / "verify");
    const int n0 = cfg.n_list.front();

    runner.run("laplace", cfg.tol.laplace, [&](SuiteResult&) {
        std::ofstream out(runner.dir() / "laplace.csv");
        out << "n,lambda,T,residual\n";
        double worst = 0.0;
        for (int n : cfg.n_list) {
            for (double l : cfg.lambda) {
                resolvent_op(s, n, l, g);  // names a spectral hit before the real-part check
                const double T = laplace_truncation(l, s.re_bound);
                const double r = laplace_identity_residual(s, n, l, u, T, 64);
                out << n << ',' << num(l) << ',' << num(T) << ',' << num(r) << '\n';
                worst = std::max(worst, r);
            }
        }
        return worst;
    });

    runner.run("pseudoresolvent", cfg.tol.pseudoresolvent, [&](SuiteResult&) {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> re(s.re_bound + 0.1, s.re_bound + 10.0), im(-10.0, 10.0);
        std::vector<std::pair<cplx, cplx>> pairs;
        for (double l : cfg.lambda)
            for (double m : cfg.lambda) pairs.emplace_back(l, m);
        for (int i = 0; i < 20; ++i) pairs.emplace_back(cplx{re(rng), im(rng)}, cplx{re(rng), im(rng)});
        std::ofstream out(runner.dir() / "pseudoresolvent.csv");
        out << "lambda_re,lambda_im,mu_re,mu_im,residual\n";
        double worst = 0.0;
        for (const auto& [l, m] : pairs) {
            const double r = pseudoresolvent_residual(s, n0, l, m, u);
            out << num(l.real()) << ',' << num(l.imag()) << ',' << num(m.real()) << ',' << num(m.imag()) << ','
                << num(r) << '\n';
            worst = std::max(worst, r);
        }
        return worst;
    });

    runner.run("functional", cfg.tol.functional, [&](SuiteResult&) {
        const auto a = symbol_values(s, n0, g);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> time(0.0, 2.0);
        std::uniform_int_distribution<std::size_t> mode(0, a.size() - 1);
        const QuadratureRule unit = composite_gauss_legendre(0.0, 1.0, 64);
        std::ofstream out(runner.dir() / "functional.csv");
        out << "t,s,a_re,a_im,residual\n";
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double t = time(rng), sv = time(rng);
            const cplx ak = a[mode(rng)];
            const cplx rhs = sv * unit.integrate([&](double x) { return phi(t + sv * x, ak) - phi(sv * x, ak); });
            const cplx lhs = phi(t, ak) * phi(sv, ak);
            const double r = std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
            out << num(t) << ',' << num(sv) << ',' << num(ak.real()) << ',' << num(ak.imag()) << ',' << num(r) << '\n';
            worst = std::max(worst, r);
        }
        return worst;
    });

    runner.run("bromwich", cfg.tol.bromwich, [&](SuiteResult&) {
        std::ofstream out(runner.dir() / "bromwich.csv");
        out << "t,alpha,R_max,steps,error\n";
        const double alpha = std::max(s.re_bound, 0.0) + 2.0;
        double worst = 0.0;
        for (double t : {0.25, 0.5, 1.0}) {
            const double e = lp_norm(bromwich_S(s, n0, t, u, alpha, 200.0, 20000) - apply_S(s, n0, t, u), 2.0);
            out << num(t) << ',' << num(alpha) << ",200,20000," << num(e) << '\n';
            worst = std::max(worst, e);
        }
        return worst;
    });

    runner.run("perturbation", cfg.tol.perturbation, [&](SuiteResult&) {
        const auto a = symbol_values(s, n0, g);
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> time(0.0, 5.0), rad(0.0, 10.0), ang(-std::numbers::pi, std::numbers::pi);
        std::uniform_int_distribution<std::size_t> mode(0, a.size() - 1);
        std::ofstream out(runner.dir() / "perturbation.csv");
        out << "t,a_re,a_im,b_re,b_im,deviation\n";
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const double t = time(rng);
            const cplx ak = a[mode(rng)], b = std::polar(rad(rng), ang(rng));
            const double scale = std::max(1.0, std::abs(std::exp(t * b) * phi(t, ak)));
            const double dev = std::abs(perturbed_factor(t, ak, b) - perturbed_factor_closed(t, ak, b)) / scale;
            out << num(t) << ',' << num(ak.real()) << ',' << num(ak.imag()) << ',' << num(b.real()) << ','
                << num(b.imag()) << ',' << num(dev) << '\n';
            worst = std::max(worst, dev);
        }
        return worst;
    });
    return runner.finish();
}

int run_solve(const ExperimentConfig& cfg, bool plots) {
    const Grid g = build_grid(cfg);
    const SymbolSeq s = build_symbol(cfg.symbol, cfg.dim);
    const Mollifier theta = Mollifier::from_name(cfg.mollifier);
    const DistributionRep data = build_initial_data(cfg, g);
    const ForcingSeq f = build_forcing(cfg, g, theta);
    const TimeGrid times(cfg.t_end, cfg.dt);
    const auto tests = bundled_space_time_tests(g, cfg.t_end);
    Runner runner(fs::path(cfg.output_dir) / "solve");

    std::vector<std::optional<MildSolution>> sols(cfg.n_list.size());
    parallel_for(cfg.n_list.size(), [&](std::size_t i) {
        const int n = cfg.n_list[i];
        sols[i].emplace(duhamel_solve(s, n, mollify(data, theta, n), f, times));
    });
    std::vector<MildSolution> solved;
    for (auto& x : sols) solved.push_back(std::move(*x));

    PairingTable table;
    std::map<int, double> u0_norms, w_norms;
    double worst_weak = 0.0;
    {
        std::ofstream out(runner.dir() / "residuals.csv");
        out << "n,residual_t_end,norm_u0,sup_w,distributional_residual\n";
        for (const auto& sol : solved) {
            const int n = sol.n();
            for (std::size_t i = 0; i < tests.size(); ++i) table[{n, static_cast<int>(i)}] = very_weak_pairing(sol, tests[i]);
            double sup_w = 0.0;
            for (std::size_t j = 0; j < times.size(); ++j) {
                sup_w = std::max(sup_w, std::exp(-cfg.omega * times.node(j)) * frequency_lp_norm(sol.w_hat(j), 2.0));
            }
            const double res = integral_equation_residual(sol, s, f, times.node(times.size() - 1));
            double dres = 0.0;
            for (const auto& psi : tests) dres = std::max(dres, std::abs(distributional_residual(sol, s, f, psi)));
            worst_weak = std::max(worst_weak, dres);
            u0_norms[n] = lp_norm(sol.initial(), 2.0);
            w_norms[n] = sup_w;
            out << n << ',' << num(res) << ',' << num(u0_norms[n]) << ',' << num(sup_w) << ',' << num(dres) << '\n';
        }
    }
    runner.run("weak_form", cfg.tol.residual, [&](SuiteResult&) { return worst_weak; });
    const std::size_t stride = std::max<std::size_t>(1, times.size() / 8);
    csv::write_solutions(runner.dir() / "solution.csv", solved, stride);
    csv::write_pairings(runner.dir() / "pairings.csv", table);

    nlohmann::ordered_json summary;
    WeakLimitReport limits;
    const bool enough = cfg.n_list.size() >= 4;
    if (enough) {
        limits = weak_limit_extract(table, cfg.tol.weak_limit);
        auto arr = nlohmann::ordered_json::array();
        for (const auto& l : limits.limits) {
            arr.push_back({{"psi_id", l.psi_id},
                           {"convergent", l.convergent},
                           {"limit_re", l.limit.real()},
                           {"limit_im", l.limit.imag()},
                           {"subsequence", l.subsequence}});
        }
        summary["limits"] = arr;
        const ModerateSeq fu = fit_moderate(u0_norms), fw = fit_moderate(w_norms);
        summary["moderateness"] = {{"u0_exponent", fu.slope}, {"w_exponent", fw.slope}, {"w_moderate", fw.moderate()}};
    }
    summary["time_derivative_of_forcing"] = f.smooth_in_time ? "estimated from samples" : "not available";

    // Heat kernel oracle for point initial data without forcing.
    const bool oracle = enough && cfg.symbol.family == "heat" && cfg.u0 == "delta" && cfg.forcing == "zero";
    if (oracle) {
        runner.run("heat_kernel", cfg.tol.weak_limit, [&](SuiteResult& r) {
            double worst = 0.0;
            auto arr = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < tests.size(); ++i) {
                const double o = heat_kernel_pairing(tests[i], g);
                worst = std::max(worst, std::abs(limits.limits[i].limit - o));
                arr.push_back(o);
            }
            summary["heat_kernel_oracle"] = arr;
            if (!limits.all_convergent()) r.note = "pairings not convergent";
            return worst;
        });
    }
    {
        std::ofstream out(runner.dir() / "limits.json");
        out << summary.dump(2) << '\n';
    }
    if (plots && !solved.empty()) {
        const MildSolution& last = solved.back();
        const GridFunction w = last.w(times.size() - 1);
        svg::Series re{"re w", {}, {}};
        const int np = g.points_per_axis();
        for (int i = 0; i < np; ++i) {
            const std::size_t idx = g.dim() == 1 ? i : static_cast<std::size_t>(i) * np + np / 2;
            re.x.push_back(g.coord(i));
            re.y.push_back(w[idx].real());
        }
        svg::plot(runner.dir() / "snapshot.svg", fmt::format("w_{} at t = {}", last.n(), cfg.t_end), {re}, false, false);
    }
    return runner.finish();
}

int run_associate(const ExperimentConfig& cfg, bool plots) {
    if (!cfg.symbol2) throw ConfigError("associate needs a [symbol2] section");
    const Grid g = build_grid(cfg);
    const SymbolSeq s = build_symbol(cfg.symbol, cfg.dim), st = build_symbol(*cfg.symbol2, cfg.dim);
    const auto tests = bundled_test_sequences(g);
    SuiteSettings settings;
    settings.n_list = cfg.n_list;
    settings.resolvent_lambdas = as_complex(cfg.lambda);
    settings.omega = cfg.omega;
    settings.b = cfg.b;
    settings.t_samples = default_t_samples(cfg.t_end, 41);
    settings.ge4_lambdas = default_lambda_samples(cfg.omega, 0.5, 200.0, 801, 31);
    Runner runner(fs::path(cfg.output_dir) / "associate");

    runner.run("theorems", 0.0, [&](SuiteResult&) {
        const CrosscheckReport r = crosscheck_theorems({{cfg.scenario, s, st}}, tests, settings, g);
        const PairVerdicts& p = r.pairs.front();
        write_report(runner.dir(), "generator", p.generator, plots);
        write_report(runner.dir(), "resolvent", p.resolvent, plots);
        write_report(runner.dir(), "geis", p.geis, plots);
        write_report(runner.dir(), "ge4", p.ge4, plots);
        write_g4(runner.dir() / "g4_symbol.csv", p.g4_s);
        write_g4(runner.dir() / "g4_symbol2.csv", p.g4_st);
        nlohmann::ordered_json j;
        j["pair"] = p.name;
        j["generator"] = to_string(p.generator.verdict);
        j["resolvent"] = to_string(p.resolvent.verdict);
        j["geis"] = to_string(p.geis.verdict);
        j["ge4"] = to_string(p.ge4.verdict);
        j["g4_bounded"] = p.g4_s.all_bounded() && p.g4_st.all_bounded();
        j["disagreements"] = p.disagreements;
        std::ofstream(runner.dir() / "theorems.json") << j.dump(2) << '\n';
        return static_cast<double>(p.disagreements.size());
    });

    if (cfg.symbol.family == "poly" && cfg.symbol2->family == "closing" && cfg.symbol.alpha == cfg.symbol2->alpha &&
        cfg.symbol.beta == cfg.symbol2->beta && cfg.dim == 1) {
        runner.run("closing", 0.0, [&](SuiteResult& res) {
            std::vector<cplx> coeffs(3);
            for (std::size_t j = 0; j < 3; ++j) {
                coeffs[j] = {j < cfg.symbol.alpha.size() ? cfg.symbol.alpha[j] : 0.0,
                             j < cfg.symbol.beta.size() ? cfg.symbol.beta[j] : 0.0};
            }
            const AssociationReport r = closing_example(gaussian(g), coeffs, cfg.n_list, cfg.t_end);
            write_report(runner.dir(), "closing", r, plots);
            res.passed = r.verdict == Verdict::associated;
            if (!res.passed) res.note = fmt::format("verdict {}", to_string(r.verdict));
            return r.slope();
        });
    }
    return runner.finish();
}

int run_perturb(const ExperimentConfig& cfg, bool plots) {
    const Grid g = build_grid(cfg);
    const SymbolSeq s = build_symbol(cfg.symbol, cfg.dim);
    const SymbolSeq st = cfg.symbol2 ? build_symbol(*cfg.symbol2, cfg.dim) : s;
    const auto b = BoundedMultiplierSeq::constant({cfg.perturb_re, cfg.perturb_im});
    const auto c = BoundedMultiplierSeq::inverse_n(cfg.c_seq);
    PerturbationSettings settings;
    settings.n_list = cfg.n_list;
    settings.omega = cfg.omega;
    settings.b = cfg.b;
    settings.t_samples = default_t_samples(cfg.t_end, 41);
    settings.lambda_samples = default_lambda_samples(cfg.omega, 0.5, 200.0, 801, 31);
    Runner runner(fs::path(cfg.output_dir) / "perturb");

    runner.run("oracle", cfg.tol.perturbation, [&](SuiteResult&) {
        const auto a = symbol_values(s, cfg.n_list.front(), g);
        std::ofstream out(runner.dir() / "oracle.csv");
        out << "t,xi,quadrature_re,quadrature_im,closed_re,closed_im\n";
        double worst = 0.0;
        for (double t : {0.25, 0.5, 1.0, cfg.t_end}) {
            for (std::size_t k = 0; k < a.size(); k += std::max<std::size_t>(1, a.size() / 16)) {
                const cplx bk = b.eval(cfg.n_list.front(), g.frequency(k));
                const cplx q = perturbed_factor(t, a[k], bk), e = perturbed_factor_closed(t, a[k], bk);
                const double scale = std::max(1.0, std::abs(std::exp(t * bk) * phi(t, a[k])));
                worst = std::max(worst, std::abs(q - e) / scale);
                out << num(t) << ',' << num(g.frequency(k)[0]) << ',' << num(q.real()) << ',' << num(q.imag()) << ','
                    << num(e.real()) << ',' << num(e.imag()) << '\n';
            }
        }
        return worst;
    });

    runner.run("transfer", 0.0, [&](SuiteResult& res) {
        const PerturbationReport r = perturbation_suite(s, st, b, c, bundled_test_sequences(g), settings, g);
        csv::write_certificate(runner.dir() / "growth.csv", r.growth);
        write_report(runner.dir(), "perturbations", r.perturbations, plots);
        write_report(runner.dir(), "ge4", r.ge4, plots);
        if (r.perturbed_pair) write_report(runner.dir(), "perturbed_pair", *r.perturbed_pair, plots);
        nlohmann::ordered_json j;
        j["growth_exponent"] = r.growth.resolvent_fit ? nlohmann::json(r.growth.resolvent_fit->slope) : nlohmann::json();
        j["perturbations"] = to_string(r.perturbations.verdict);
        j["perturbation_slope"] = r.perturbations.slope();
        j["ge4"] = to_string(r.ge4.verdict);
        j["perturbed_pair"] = r.perturbed_pair ? to_string(r.perturbed_pair->verdict) : "not run";
        j["consistent"] = r.consistent;
        std::ofstream(runner.dir() / "transfer.json") << j.dump(2) << '\n';
        if (!r.consistent) res.note = "association is not transferred through the perturbation";
        res.passed = r.consistent;
        return 0.0;
    });
    return runner.finish();
}

int run_growth(const ExperimentConfig& cfg, bool plots) {
    const Grid g = build_grid(cfg);
    const SymbolSeq s = build_symbol(cfg.symbol, cfg.dim);
    Runner runner(fs::path(cfg.output_dir) / "growth");
    runner.run("certificate", 0.0, [&](SuiteResult& res) {
        const GrowthCertificate cert = certify_growth(s, cfg.n_list, cfg.omega, cfg.b,
                                                      default_lambda_samples(cfg.omega),
                                                      default_t_samples(), g);
        csv::write_certificate(runner.dir() / "certificate.csv", cert);
        write_g4(runner.dir() / "g4.csv", check_G4(s, cfg.n_list, as_complex(cfg.lambda), g));
        const D1Report d1 = check_d1(s, cfg.n_list, cfg.omega, 20, d1_lambda_samples(cfg.omega), g);
        std::ofstream out(runner.dir() / "d1.csv");
        out << "n,sup,k,lambda\n";
        for (const auto& e : d1.entries) out << e.n << ',' << num(e.sup) << ',' << e.argmax_k << ',' << num(e.argmax_lambda) << '\n';
        if (plots) {
            svg::Series m{"M_n", {}, {}}, mp{"M'_n", {}, {}};
            for (const auto& e : cert.entries) {
                m.x.push_back(e.n);
                m.y.push_back(e.resolvent_bound);
                mp.x.push_back(e.n);
                mp.y.push_back(e.semigroup_bound);
            }
            svg::plot(runner.dir() / "growth.svg", "sampled growth bounds", {m, mp}, true, true);
        }
        res.passed = true;
        return 0.0;
    });
    return runner.finish();
}

}  // namespace geislab
