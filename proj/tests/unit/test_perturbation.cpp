#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geis/errors.hpp"
#include "geis/perturbation.hpp"
#include "generators.hpp"

using namespace geis;

TEST_CASE("property: quadrature factor equals phi(t, a + b)") {
    for (int trial = 0; trial < 500; ++trial) {
        const double t = gen::uniform(0.0, 5.0);
        const cplx a = gen::left_half_plane(100.0), b = gen::complex_in_disc(10.0);
        const double scale = std::max(1.0, std::abs(std::exp(t * b) * phi(t, a)));
        CHECK(std::abs(perturbed_factor(t, a, b) - perturbed_factor_closed(t, a, b)) / scale < 1e-10);
    }
}

TEST_CASE("zero perturbation leaves phi unchanged") {
    for (int trial = 0; trial < 50; ++trial) {
        const double t = gen::uniform(0.0, 3.0);
        const cplx a = gen::left_half_plane(30.0);
        CHECK(std::abs(perturbed_factor(t, a, {}) - phi(t, a)) < 1e-14 * std::max(1.0, std::abs(phi(t, a))));
    }
}

TEST_CASE("perturbed factor guards the exponent range") {
    CHECK_THROWS_AS(perturbed_factor(10.0, {-1.0, 0.0}, {80.0, 0.0}), OverflowGuard);
    CHECK_NOTHROW(perturbed_factor(10.0, {-1.0, 0.0}, {10.0, 0.0}));
}

TEST_CASE("bounded multiplier sequences") {
    const auto b = BoundedMultiplierSeq::constant({0.0, 0.5});
    const auto c = BoundedMultiplierSeq::inverse_n(2.0);
    const auto s = b + c;
    CHECK(s.bound == doctest::Approx(2.5));
    CHECK(std::abs(s.eval(4, {1.0, 0.0}) - cplx{0.5, 0.5}) < 1e-15);
    const Grid g(1, 4.0, 32);
    CHECK_NOTHROW(check_bound(s, {1, 2, 4}, g));
    BoundedMultiplierSeq liar{"liar", [](int n, const Point&) { return cplx{double(n)}; }, 1.0};
    CHECK_THROWS_AS(check_bound(liar, {1, 2}, g), HypothesisViolation);
    CHECK(perturbed_symbol(heat_symbol(), s).re_bound == doctest::Approx(2.5));
}

TEST_CASE("perturbed semigroup matches the semigroup of the summed symbol") {
    const Grid g(1, 4.0, 64);
    const auto b = BoundedMultiplierSeq::constant({0.3, -0.2});
    const SymbolSeq h = heat_symbol();
    const MultiplierOp p = perturbed_S_op(h, b, 2, 1.5, g);
    const MultiplierOp q = semigroup_op(perturbed_symbol(h, b), 2, 1.5, g);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(p.factor()[k] - q.factor()[k]) < 1e-12);
}

TEST_CASE("perturbation suite on the heat family") {
    const Grid g(1, 4.0, 128);
    PerturbationSettings st;
    st.n_list = {4, 8, 16, 32};
    st.t_samples = default_t_samples(2.0, 11);
    st.lambda_samples = default_lambda_samples(2.0, 0.5, 100.0, 101, 11);
    const SymbolSeq h = heat_symbol();
    const auto r = perturbation_suite(h, h, BoundedMultiplierSeq::constant({0.0, 0.5}),
                                         BoundedMultiplierSeq::inverse_n(1.0), bundled_test_sequences(g), st, g);
    CHECK(r.perturbations.verdict == Verdict::associated);
    CHECK(r.consistent);
    CHECK_THROWS_AS(perturbation_suite(h, h, BoundedMultiplierSeq::constant({0.0, 0.5}),
                                          BoundedMultiplierSeq::constant(1.0), bundled_test_sequences(g), st, g),
                    HypothesisViolation);
}

TEST_CASE("closing example decays like 1/n") {
    const Grid g(1, 4.0, 128);
    const auto f = GridFunction::sample(g, [](const Point& x) { return cplx{std::exp(-std::numbers::pi * x[0] * x[0])}; });
    const AssociationReport r = closing_example(f, {-1.0, 0.0, 1.0}, {4, 8, 16, 32, 64}, 5.0);
    CHECK(r.verdict == Verdict::associated);
    CHECK(r.slope() == doctest::Approx(-1.0).epsilon(0.1));
    CHECK_THROWS(closing_example(GridFunction::zeros(Grid(2, 4.0, 16)), {-1.0, 0.0, 1.0}, {4, 8, 16, 32}, 1.0));
}

TEST_CASE("closing example with heat-type coefficients") {
    const Grid g(1, 4.0, 128);
    const auto f = GridFunction::sample(g, [](const Point& x) { return cplx{std::exp(-std::numbers::pi * x[0] * x[0])}; });
    const double a2 = 0.25 / (std::numbers::pi * std::numbers::pi);
    const AssociationReport r = closing_example(f, {0.0, 0.0, a2}, {4, 8, 16, 32, 64, 128, 256}, 5.0);
    REQUIRE(r.sequences.size() == 1);
    const auto& s = r.sequences.front();
    CHECK(r.verdict == Verdict::associated);
    CHECK(s.norms.front() / s.norms.back() >= 8.0);
    // Local slope over the last doubling approaches -1 once 1/n is small against a2.
    CHECK(s.tail_slope == doctest::Approx(-1.0).epsilon(0.1));
}
