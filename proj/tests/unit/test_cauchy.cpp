#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geis/cauchy.hpp"
#include "geis/errors.hpp"
#include "geis/semigroup.hpp"
#include "generators.hpp"

using namespace geis;
using std::numbers::pi;

namespace {

// phi_k by the defining series, oracle for small |z|.
cplx phi_series(cplx z, int k) {
    cplx sum{}, term = 1.0;
    for (int j = 1; j <= k; ++j) term /= double(j);
    for (int j = 0; j < 40; ++j) {
        sum += term;
        term *= z / double(j + k + 1);
    }
    return sum;
}

GridFunction gaussian(const Grid& g, double width = 1.0) {
    return GridFunction::sample(g, [=](const Point& x) { return cplx{std::exp(-pi * x[0] * x[0] / (width * width))}; });
}

}  // namespace

TEST_CASE("time grid") {
    const TimeGrid t(1.0, 0.125);
    CHECK(t.steps() == 8);
    CHECK(t.size() == 9);
    CHECK(t.index_of(0.5) == 4);
    CHECK_THROWS_AS(t.index_of(0.3), DomainError);
    CHECK_THROWS_AS(TimeGrid(1.0, 0.3), DomainError);
    CHECK_THROWS_AS(TimeGrid(1.0, 0.0), DomainError);
}

TEST_CASE("property: phi functions match their series") {
    for (int i = 0; i < 300; ++i) {
        const cplx z = gen::complex_in_disc(3.0);
        const PhiFunctions p = phi_functions(z);
        CHECK(std::abs(p.phi1 - phi_series(z, 1)) < 1e-13);
        CHECK(std::abs(p.phi2 - phi_series(z, 2)) < 1e-13);
        CHECK(std::abs(p.phi3 - phi_series(z, 3)) < 1e-13);
    }
    const PhiFunctions big = phi_functions({-200.0, 0.0});
    CHECK(std::abs(big.phi1 - (1.0 - std::exp(-200.0)) / 200.0) < 1e-15);
}

TEST_CASE("Duhamel solver is exact for time-constant forcing") {
    const Grid g(1, 4.0, 64);
    const SymbolSeq h = heat_symbol();
    const GridFunction u0 = gaussian(g), f0 = gaussian(g, 0.5);
    const TimeGrid times(1.0, 0.0625);
    const MildSolution sol = duhamel_solve(h, 1, u0, ForcingSeq::constant([&](int) { return f0; }), times);
    const GridFunction uh = transform(u0), fh = transform(f0);
    const auto a = symbol_values(h, 1, g);
    double err = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double t = times.node(j);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const cplx w = std::exp(a[k] * t) * uh[k] + phi(t, a[k]) * fh[k];
            const cplx v = phi(t, a[k]) * uh[k] +
                           (std::abs(a[k]) > 0 ? (phi(t, a[k]) - t) / a[k] : cplx{0.5 * t * t}) * fh[k];
            err = std::max({err, std::abs(sol.w_hat(j)[k] - w), std::abs(sol.v_hat(j)[k] - v)});
        }
    }
    CHECK(err < 1e-12);
    CHECK(std::abs(sol.w(0)[10] - u0[10]) < 1e-14);
}

TEST_CASE("integral-equation residual is second order in dt") {
    const Grid g(1, 4.0, 64);
    const SymbolSeq h = heat_symbol();
    const GridFunction u0 = gaussian(g);
    double prev = 0.0;
    for (double dt : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
        const MildSolution sol = duhamel_solve(h, 1, u0, ForcingSeq::zero(g), TimeGrid(1.0, dt));
        const double r = integral_equation_residual(sol, h, ForcingSeq::zero(g), 1.0);
        if (prev > 0.0) CHECK(std::log2(prev / r) == doctest::Approx(2.0).epsilon(0.05));
        prev = r;
    }
}

TEST_CASE("overflow guard on growing families") {
    const Grid g(1, 4.0, 32);
    const SymbolSeq grow = make_poly_symbol_seq(PolySymbolParams::constant({{10.0, 0.0}}));
    CHECK_THROWS_AS(duhamel_solve(grow, 1, gaussian(g), ForcingSeq::zero(g), TimeGrid(100.0, 1.0)), OverflowGuard);
}

TEST_CASE("test functions must be compactly supported") {
    const Grid g(1, 4.0, 256);
    const MildSolution sol = duhamel_solve(heat_symbol(), 1, gaussian(g), ForcingSeq::zero(g), TimeGrid(1.0, 0.125));
    const GridFunction rho = gaussian(g, 0.5);
    CHECK_THROWS_AS(very_weak_pairing(sol, bump_in_time(0.0, 1.5, rho)), TestFunctionError);
    const GridFunction wide = GridFunction::sample(g, [](const Point&) { return cplx{1.0}; });
    CHECK_THROWS_AS(very_weak_pairing(sol, bump_in_time(0.2, 0.8, wide)), TestFunctionError);
    CHECK_THROWS_AS(bundled_space_time_tests(Grid(1, 2.0, 64), 1.0), TestFunctionError);
}

TEST_CASE("distributional residual vanishes for the heat flow") {
    const Grid g(1, 4.0, 256);
    const SymbolSeq h = heat_symbol();
    const MildSolution coarse = duhamel_solve(h, 1, gaussian(g), ForcingSeq::zero(g), TimeGrid(1.0, 1.0 / 128));
    const MildSolution fine = duhamel_solve(h, 1, gaussian(g), ForcingSeq::zero(g), TimeGrid(1.0, 1.0 / 512));
    for (const auto& psi : bundled_space_time_tests(g, 1.0)) {
        const double rc = std::abs(distributional_residual(coarse, h, ForcingSeq::zero(g), psi));
        const double rf = std::abs(distributional_residual(fine, h, ForcingSeq::zero(g), psi));
        CHECK(rc < 1e-4);
        CHECK(rf < 1e-9);
    }
}

TEST_CASE("weak limit extraction on synthetic tables") {
    PairingTable t;
    for (int n : {4, 8, 16, 32, 64}) {
        t[{n, 0}] = 1.0 + 1.0 / (double(n) * n * n);  // converges
        t[{n, 1}] = double(n);                        // diverges
    }
    const WeakLimitReport r = weak_limit_extract(t, 1e-3);
    REQUIRE(r.limits.size() == 2);
    CHECK(r.limits[0].convergent);
    CHECK(std::abs(r.limits[0].limit - cplx{1.0 + 1.0 / 262144.0}) < 1e-15);
    CHECK_FALSE(r.limits[1].convergent);
    CHECK_FALSE(r.all_convergent());

    PairingTable one;
    for (int n : {4, 8, 16, 32}) one[{n, 0}] = 1.0;
    CHECK_THROWS_AS(weak_limit_extract(one, 1e-3), InsufficientData);
    PairingTable few;
    for (int n : {4, 8, 16}) few[{n, 0}] = few[{n, 1}] = 1.0;
    CHECK_THROWS_AS(weak_limit_extract(few, 1e-3), InsufficientData);
}

TEST_CASE("heat flow of a Gaussian widens in closed form") {
    const Grid g(1, 8.0, 512);
    const SymbolSeq h = heat_symbol();
    const MildSolution sol = duhamel_solve(h, 1, gaussian(g), ForcingSeq::zero(g), TimeGrid(1.0, 0.125));
    for (std::size_t j : {2u, 4u, 8u}) {
        const double t = sol.times().node(j), s = 1.0 + t / pi;
        const GridFunction exact = GridFunction::sample(g, [s](const Point& x) {
            return cplx{std::exp(-pi * x[0] * x[0] / s) / std::sqrt(s)};
        });
        CHECK(lp_norm(sol.w(j) - exact, 2.0) < 1e-6);
    }
}

TEST_CASE("property: solutions are linear in the data") {
    const Grid g(1, 4.0, 64);
    const SymbolSeq h = heat_symbol();
    const TimeGrid times(0.5, 0.0625);
    for (int trial = 0; trial < 5; ++trial) {
        const GridFunction u = gen::smooth_function(g), v = gen::smooth_function(g);
        const cplx c = gen::complex_in_disc(3.0);
        const MildSolution a = duhamel_solve(h, 2, u, ForcingSeq::zero(g), times);
        const MildSolution b = duhamel_solve(h, 2, v, ForcingSeq::zero(g), times);
        const MildSolution ab = duhamel_solve(h, 2, u + c * v, ForcingSeq::zero(g), times);
        const std::size_t j = times.size() - 1;
        CHECK(lp_norm(ab.w(j) - (a.w(j) + c * b.w(j)), 2.0) < 1e-12 * std::max(1.0, lp_norm(ab.w(j), 2.0)));
    }
}

TEST_CASE("logarithmically growing pairings are not convergent") {
    PairingTable t;
    for (int n : {4, 8, 16, 32, 64}) {
        t[{n, 0}] = std::log(double(n));
        t[{n, 1}] = 0.5;
    }
    const WeakLimitReport r = weak_limit_extract(t, 1e-3);
    CHECK_FALSE(r.limits[0].convergent);
    CHECK(r.limits[1].convergent);
}
