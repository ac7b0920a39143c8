// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "geis/association.hpp"
#include "geis/cauchy.hpp"
#include "geis/perturbation.hpp"
#include "geis/semigroup.hpp"
#include "geis/spectral.hpp"
#include "geislab/app.hpp"

using namespace geis;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s criterion %2d %-32s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <typename F>
void guarded(int id, const std::string& name, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, fmt::format("raised: {}", e.what()));
    }
}

GridFunction gaussian(const Grid& g) {
    return GridFunction::sample(g, [](const Point& x) { return cplx{std::exp(-pi * x[0] * x[0])}; });
}

// Independent composite Gauss-Legendre for the oracles.
template <typename F>
double integrate(F&& f, double a, double b, int panels = 64) {
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        s += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, lo + h);
    }
    return s;
}

// ---------------------------------------------------------------------------

void laplace_identity() {
    const Grid g(1, 8.0, 256);
    const SymbolSeq heat = heat_symbol();
    const GridFunction u = gaussian(g);
    double worst = 0.0;
    for (double lambda : {2.0, 10.0, 1e3}) {
        const double T = laplace_truncation(lambda, heat.re_bound);
        worst = std::max(worst, laplace_identity_residual(heat, 1, lambda, u, T, 64));
    }
    report(1, "Laplace identity", worst < 1e-8, fmt::format("max residual {:.3e} < 1e-8", worst));
}

void pseudoresolvent() {
    const Grid g(1, 8.0, 256);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> re(0.1, 10.0), im(-10.0, 10.0), val(-1.0, 1.0);
    std::vector<cplx> data(g.size());
    for (auto& v : data) v = {val(rng), val(rng)};
    const GridFunction u(g, data);
    const std::vector<SymbolSeq> families{heat_symbol(),
                                          make_fractional_symbol_seq([](int) { return 1.0; }, 2.0, 1, 1.0)};
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const cplx l{re(rng), im(rng)}, m{re(rng), im(rng)};
        worst = std::max(worst, pseudoresolvent_residual(families[i % 2], 1, l, m, u));
    }
    report(2, "pseudoresolvent identity", worst < 1e-12, fmt::format("max residual {:.3e} < 1e-12", worst));
}

void functional_equation() {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> time(0.0, 5.0), rad(0.0, 100.0), ang(0.5 * pi, 1.5 * pi);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = time(rng), s = time(rng);
        const cplx a = std::polar(rad(rng), ang(rng));
        const cplx lhs = phi(t, a) * phi(s, a);
        const double re = integrate([&](double r) { return (phi(t + r, a) - phi(r, a)).real(); }, 0.0, s);
        const double imv = integrate([&](double r) { return (phi(t + r, a) - phi(r, a)).imag(); }, 0.0, s);
        worst = std::max(worst, std::abs(lhs - cplx{re, imv}) / std::max(1.0, std::abs(lhs)));
    }
    report(3, "integrated functional equation", worst < 1e-8, fmt::format("max residual {:.3e} < 1e-8", worst));
}

void bromwich() {
    const Grid g(1, 8.0, 256);
    const SymbolSeq heat = heat_symbol();
    const GridFunction u = gaussian(g);
    const double alpha = 2.0, u_norm = lp_norm(u, 2.0);
    bool ok = true;
    std::string detail;
    for (double t : {0.25, 0.5, 1.0}) {
        const GridFunction exact = apply_S(heat, 1, t, u);
        auto err = [&](double r_max, int steps) {
            return lp_norm(bromwich_S(heat, 1, t, u, alpha, r_max, steps) - exact, 2.0);
        };
        const double e200 = err(200.0, 20000), e400 = err(400.0, 40000);
        // Truncation bound of the b = 1 law: sup|lambda R(lambda)| e^{alpha t} / (pi R) with sup <= 1 here.
        const double bound200 = std::exp(alpha * t) / (pi * 200.0) * u_norm;
        const double bound400 = std::exp(alpha * t) / (pi * 400.0) * u_norm;
        const bool t_ok = e200 < 1e-4 && e400 <= e200 && e200 <= bound200 && e400 <= bound400;
        ok = ok && t_ok;
        detail += fmt::format("t={} err {:.2e}->{:.2e} ratio {:.2f}; ", t, e200, e400, e200 / e400);
    }
    report(4, "Bromwich oracle", ok, detail + "need err < 1e-4, ratio >= 1, below 1/(pi R) bound");
}

void mild_residual() {
    const Grid g(1, 8.0, 256);
    const SymbolSeq heat = heat_symbol();
    const GridFunction u = gaussian(g);
    const ForcingSeq f = ForcingSeq::zero(g);
    auto res = [&](double dt) {
        const MildSolution sol = duhamel_solve(heat, 1, u, f, TimeGrid(1.0, dt));
        return integral_equation_residual(sol, heat, f, 0.5);
    };
    const double r1 = res(1.0 / 64), r2 = res(1.0 / 128), r3 = res(1.0 / 256);
    const double order = std::log2(r2 / r3);
    const bool ok = r2 < 1e-5 && order >= 1.8 && order <= 2.2;
    report(5, "mild-solution residual", ok,
           fmt::format("residual {:.3e} at dt=1/128; orders {:.3f}, {:.3f} in [1.8, 2.2]",
                       r2, std::log2(r1 / r2), order));
}

// Heat kernel on the line for a(xi) = -xi^2: G_t(x) = sqrt(pi/t) exp(-pi^2 x^2 / t).
double heat_kernel(double t, double x) { return std::sqrt(pi / t) * std::exp(-pi * pi * x * x / t); }

void weak_limits() {
    const Grid g(1, 4.0, 1024);
    const SymbolSeq heat = heat_symbol();
    const TimeGrid times(1.0, 1.0 / 128);
    const auto tests = bundled_space_time_tests(g, times.t_end());
    const Mollifier theta = Mollifier::from_name("bump");
    const ForcingSeq f = ForcingSeq::zero(g);
    PairingTable table;
    for (int n : {4, 8, 16, 32}) {
        const MildSolution sol = duhamel_solve(heat, n, mollify(DistributionRep::delta(g), theta, n), f, times);
        for (std::size_t i = 0; i < tests.size(); ++i) table[{n, static_cast<int>(i)}] = very_weak_pairing(sol, tests[i]);
    }
    const WeakLimitReport rep = weak_limit_extract(table, 1e-3);

    // Oracle: \int chi(t) \int G_t(x) rho(x) dx dt with the spatial factors written out again here.
    struct Spatial {
        double center, radius;
        bool odd;
    };
    const std::vector<Spatial> rho{{0.0, 1.0, false}, {0.5, 1.5, false}, {0.0, 2.0, true}};
    const std::vector<std::pair<double, double>> support{{0.1, 0.9}, {0.2, 0.6}, {0.3, 0.95}};
    bool ok = rep.all_convergent();
    double worst = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const auto [lo, hi] = support[i];
        const auto [c, r, odd] = rho[i];
        auto chi = [lo = lo, hi = hi](double t) {
            const double s = (2.0 * t - lo - hi) / (hi - lo);
            return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
        };
        auto rho_at = [c = c, r = r, odd = odd](double x) {
            const double s = (x - c) / r;
            const double v = std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
            return odd ? x * v : v;
        };
        const double oracle = integrate(
            [&](double t) {
                return chi(t) * integrate([&](double x) { return heat_kernel(t, x) * rho_at(x); }, c - r, c + r);
            },
            lo, hi);
        const double e = std::abs(rep.limits[i].limit - oracle);
        worst = std::max(worst, e);
        ok = ok && e < 1e-3;
    }
    report(6, "weak limit of very weak solutions", ok,
           fmt::format("max |limit - heat-kernel oracle| {:.3e} < 1e-3; all convergent: {}", worst,
                       rep.all_convergent()));
}

void mollifier_scaling() {
    const Grid g(1, 4.0, 4096);
    const Mollifier theta;
    bool ok = true;
    std::string detail;
    for (int alpha : {0, 1}) {
        for (double q : {2.0, 4.0}) {
            std::map<int, double> norms;
            for (int n : {2, 4, 8, 16, 32}) norms[n] = lp_norm(differentiate(theta.sample(g, n), {alpha, 0}), q);
            const double slope = fit_moderate(norms).slope;
            const double expected = alpha + (1.0 - 1.0 / q);
            ok = ok && std::abs(slope - expected) <= 0.1;
            detail += fmt::format("a={} q={}: {:.3f} (exp {:.2f}); ", alpha, q, slope, expected);
        }
    }
    report(7, "mollifier scaling", ok, detail);
}

void closing() {
    const Grid g(1, 4.0, 128);
    const AssociationReport r = closing_example(gaussian(g), {-1.0, 0.0, 1.0}, {4, 8, 16, 32, 64}, 5.0);
    const double slope = r.slope();
    const auto& norms = r.sequences.front().norms;
    const bool ok = std::abs(slope + 1.0) <= 0.1 && r.verdict == Verdict::associated;
    report(8, "closing example", ok,
           fmt::format("slope {:.3f} in [-1.1, -0.9]; verdict {}; reduction 4->64 {:.2f}x", slope,
                       to_string(r.verdict), norms.front() / norms.back()));
}

void theorem_agreement() {
    const Grid g(1, 4.0, 128);
    const CrosscheckReport r =
        crosscheck_theorems(bundled_family_pairs(), bundled_test_sequences(g), SuiteSettings{}, g);
    std::map<Verdict, int> mix;
    for (const auto& p : r.pairs) ++mix[p.generator.verdict];
    const bool mixed = mix[Verdict::associated] > 0 && mix[Verdict::not_associated] > 0 &&
                       mix[Verdict::inconclusive] > 0;
    const bool ok = r.pairs.size() >= 8 && r.disagreements() == 0 && mixed;
    report(9, "theorem agreement suite", ok,
           fmt::format("{} pairs ({} associated, {} not, {} inconclusive), {} disagreements",
                       r.pairs.size(), mix[Verdict::associated], mix[Verdict::not_associated],
                       mix[Verdict::inconclusive], r.disagreements()));
}

void perturbation() {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> time(0.0, 5.0), rad(0.0, 100.0), ang(0.5 * pi, 1.5 * pi),
        full(-pi, pi);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = time(rng);
        const cplx a = std::polar(rad(rng), ang(rng)), b = std::polar(rad(rng), full(rng));
        // Scalar oracle phi(t, a + b) = (e^{t(a+b)} - 1)/(a + b), relative to the size of e^{tb} phi(t, a).
        const cplx z = a + b;
        const cplx oracle = std::abs(z) > 1e-3 ? (std::exp(t * z) - 1.0) / z : t * (1.0 + t * z / 2.0);
        const double scale = std::max(1.0, std::abs(std::exp(t * b) * phi(t, a)));
        worst = std::max(worst, std::abs(perturbed_factor(t, a, b) - oracle) / scale);
    }
    const Grid g(1, 4.0, 128);
    const SymbolSeq heat = heat_symbol();
    const PerturbationReport r = perturbation_suite(
        heat, heat, BoundedMultiplierSeq::constant({0.0, 0.5}), BoundedMultiplierSeq::inverse_n(1.0),
        bundled_test_sequences(g), PerturbationSettings{}, g);
    const double slope = r.perturbations.slope();
    const bool ok = worst < 1e-10 && std::abs(slope + 1.0) <= 0.1;
    report(10, "perturbation oracle", ok,
           fmt::format("max scaled deviation {:.3e} < 1e-10; perturbation slope {:.3f} ({})", worst,
                       slope, to_string(r.perturbations.verdict)));
}

// k-th derivative of g by central differences of step h with four Richardson levels.
cplx central_difference(const std::function<cplx(double)>& g, double x, int k, double h) {
    auto d = [&](double step) {
        cplx s{};
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            s += sign * binom * g(x + (0.5 * k - j) * step);
            binom = binom * (k - j) / (j + 1);
        }
        return s / std::pow(step, k);
    };
    std::vector<cplx> level;
    for (int i = 0; i < 5; ++i) level.push_back(d(h / std::pow(2.0, i)));
    for (int m = 1; m < 5; ++m) {
        const double f = std::pow(4.0, m);
        for (int i = 0; i + m < 5; ++i) level[i] = (f * level[i + 1] - level[i]) / (f - 1.0);
    }
    return level[0];
}

void d1_engine() {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> lam(0.5, 10.0), rad(0.0, 10.0), ang(0.5 * pi, 1.5 * pi);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double l = lam(rng);
        const cplx a = std::polar(rad(rng), ang(rng));
        const double dist = std::min(l, std::abs(l - a));
        for (int k = 0; k <= 3; ++k) {
            const cplx fd = central_difference([&](double x) { return 1.0 / (x * (x - a)); }, l, k, 0.1 * dist);
            const cplx pf = resolvent_over_lambda_derivative(a, l, k);
            worst = std::max(worst, std::abs(pf - fd) / std::abs(fd));
        }
    }
    report(11, "d1 derivative engine", worst < 1e-6, fmt::format("max relative error {:.3e} < 1e-6", worst));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void determinism(const std::string& config_path) {
    const auto root = std::filesystem::temp_directory_path() / "geislab_determinism";
    std::filesystem::remove_all(root);
    auto cfg = geislab::load_config(config_path);
    int codes[2];
    for (int i = 0; i < 2; ++i) {
        cfg.output_dir = (root / std::to_string(i)).string();
        codes[i] = geislab::run_verify(cfg, false);
    }
    std::size_t files = 0, differing = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root / "0")) {
        if (e.path().extension() != ".csv") continue;
        ++files;
        const auto other = root / "1" / std::filesystem::relative(e.path(), root / "0");
        if (slurp(e.path()) != slurp(other)) ++differing;
    }
    const bool ok = files > 0 && differing == 0 && codes[0] == 0 && codes[1] == 0;
    report(12, "determinism", ok,
           fmt::format("{} CSV files, {} differing; exit codes {} {}", files, differing, codes[0], codes[1]));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string config = argc > 1 ? argv[1] : GEISLAB_DEFAULT_CONFIG;
    guarded(1, "Laplace identity", laplace_identity);
    guarded(2, "pseudoresolvent identity", pseudoresolvent);
    guarded(3, "integrated functional equation", functional_equation);
    guarded(4, "Bromwich oracle", bromwich);
    guarded(5, "mild-solution residual", mild_residual);
    guarded(6, "weak limit of very weak solutions", weak_limits);
    guarded(7, "mollifier scaling", mollifier_scaling);
    guarded(8, "closing example", closing);
    guarded(9, "theorem agreement suite", theorem_agreement);
    guarded(10, "perturbation oracle", perturbation);
    guarded(11, "d1 derivative engine", d1_engine);
    guarded(12, "determinism", [&] { determinism(config); });
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
