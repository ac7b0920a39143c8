#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geis/association.hpp"
#include "geis/errors.hpp"
#include "generators.hpp"

using namespace geis;

namespace {

std::map<int, double> sequence(double (*f)(double)) {
    std::map<int, double> m;
    for (int n : {4, 8, 16, 32, 64}) m[n] = f(n);
    return m;
}

// |(lambda - omega)^{k+1} / k! * d^k/dlambda^k [1/(lambda (lambda - a))]| by partial fractions.
double d1_oracle(cplx a, double lambda, double omega, int k) {
    if (a == cplx{}) return (k + 1) / lambda * std::pow((lambda - omega) / lambda, k + 1);
    const cplx diff = std::pow(lambda - a, -(k + 1)) - std::pow(cplx{lambda}, -(k + 1));
    return std::abs(std::pow(lambda - omega, k + 1) / a * diff);
}

SymbolSeq shifted_heat(double c) {
    return make_poly_symbol_seq(PolySymbolParams::constant({{c, 0.0}, {0.0, 0.0}, {0.25 / (std::numbers::pi * std::numbers::pi), 0.0}}));
}

}  // namespace

TEST_CASE("classification of synthetic norm sequences") {
    const AssociationThresholds thr;
    CHECK(classify(sequence([](double n) { return 1.0 / n; }), thr).verdict == Verdict::associated);
    CHECK(classify(sequence([](double n) { return 1.0 / std::sqrt(n); }), thr).verdict == Verdict::associated);
    CHECK(classify(sequence([](double) { return 0.3; }), thr).verdict == Verdict::not_associated);
    CHECK(classify(sequence([](double n) { return 1.0 / std::log(n); }), thr).verdict == Verdict::inconclusive);
    CHECK(classify(sequence([](double) { return 0.0; }), thr).verdict == Verdict::associated);
    CHECK(classify(sequence([](double n) { return n; }), thr).verdict == Verdict::not_associated);
    CHECK_THROWS_AS(classify({{1, 1.0}, {2, 0.5}}, thr), InsufficientData);
}

TEST_CASE("property: scaling a sequence does not change its verdict") {
    for (int trial = 0; trial < 50; ++trial) {
        const double p = gen::uniform(-1.0, 2.0), c = std::pow(10.0, gen::uniform(-6.0, 6.0));
        std::map<int, double> a, b;
        for (int n : {4, 8, 16, 32, 64}) {
            a[n] = std::pow(n, -p);
            b[n] = c * a[n];
        }
        CHECK(classify(a, {}).verdict == classify(b, {}).verdict);
        CHECK(classify(a, {}).slope == doctest::Approx(-p).epsilon(1e-9));
    }
}

TEST_CASE("aggregation prefers the weakest verdict") {
    SequenceVerdict a, n, i;
    a.verdict = Verdict::associated;
    n.verdict = Verdict::not_associated;
    i.verdict = Verdict::inconclusive;
    CHECK(aggregate({a, a}) == Verdict::associated);
    CHECK(aggregate({a, i}) == Verdict::inconclusive);
    CHECK(aggregate({i, n, a}) == Verdict::not_associated);
    CHECK(std::string(to_string(Verdict::not_associated)) == "not-associated");
}

TEST_CASE("property: derivative quantity against partial fractions") {
    for (int trial = 0; trial < 500; ++trial) {
        const double omega = gen::uniform(0.0, 2.0);
        const double lambda = omega + std::pow(10.0, gen::uniform(-1.0, 2.0));
        const cplx a = gen::left_half_plane(20.0);
        const int k = gen::integer(0, 20);
        if (std::abs(a) < 1e-2) continue;
        const double o = d1_oracle(a, lambda, omega, k);
        CHECK(std::abs(d1_quantity(a, lambda, omega, k) - o) <= 1e-9 * std::max(o, 1e-300) + 1e-300);
    }
    CHECK(d1_quantity({}, 2.0, 1.0, 3) == doctest::Approx(4.0 / 2.0 * std::pow(0.5, 4)));
}

TEST_CASE("derivative checks guard their inputs") {
    const Grid g(1, 4.0, 64);
    CHECK_THROWS_AS(check_d1(heat_symbol(), {1, 2, 4, 8}, 0.5, 61, {1.0}, g), OverflowGuard);
    CHECK_THROWS_AS(check_d1(heat_symbol(), {1, 2, 4, 8}, 0.5, 5, {0.5}, g), DomainError);
    const D1Report r = check_d1(heat_symbol(), {1, 2, 4, 8}, 0.5, 10, d1_lambda_samples(0.5, 1e-2, 41), g);
    REQUIRE(r.entries.size() == 4);
    for (const auto& e : r.entries) CHECK(e.sup <= 1.0 + 1e-12);  // dissipative family
}

TEST_CASE("identical families are associated, shifted ones are not") {
    const Grid g(1, 4.0, 128);
    const auto tests = bundled_test_sequences(g);
    const std::vector<int> n{4, 8, 16, 32};
    const SymbolSeq h = heat_symbol();
    CHECK(check_generator_association(h, h, tests, n, g).verdict == Verdict::associated);
    CHECK(check_resolvent_association(h, shifted_heat(1.0), {cplx{3.0, 0.0}}, tests, n, g).verdict ==
          Verdict::not_associated);
    CHECK(check_geis_association(h, shifted_heat(1.0), 1.5, default_t_samples(2.0, 11), tests, n, g).verdict ==
          Verdict::not_associated);
    CHECK_THROWS_AS(check_geis_association(h, shifted_heat(1.0), 0.5, default_t_samples(2.0, 11), tests, n, g),
                    DomainError);
}

TEST_CASE("G4 bounds of the heat family") {
    const Grid g(1, 4.0, 64);
    const G4Report r = check_G4(heat_symbol(), {1, 2, 4, 8}, {cplx{1.0, 0.0}, cplx{2.0, 3.0}}, g);
    CHECK(r.all_bounded());
    for (const auto& e : r.entries) CHECK(e.spread == doctest::Approx(1.0));
}

TEST_CASE("bundled pairs cover every verdict") {
    const auto pairs = bundled_family_pairs();
    CHECK(pairs.size() >= 8);
    const Grid g(1, 4.0, 128);
    for (const auto& t : bundled_test_sequences(g)) CHECK_NOTHROW(require_moderate(t, {4, 8, 16, 32}));
    TestSequence bad{"exp", [g](int n) {
                         return GridFunction::sample(g, [n](const Point&) { return cplx{std::exp(double(n))}; });
                     }};
    CHECK_THROWS_AS(require_moderate(bad, {4, 8, 16, 32, 64}), HypothesisViolation);
}

TEST_CASE("moderate fits") {
    std::map<int, double> sq;
    for (int n : {1, 2, 4, 8, 16}) sq[n] = double(n) * n;
    const ModerateSeq f = fit_moderate(sq);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(f.moderate());
    std::map<int, double> ex;
    for (int n : {4, 8, 16, 32, 64}) ex[n] = std::exp(double(n));
    CHECK_FALSE(fit_moderate(ex).moderate());
}

TEST_CASE("property: fits are scale-equivariant") {
    for (int trial = 0; trial < 50; ++trial) {
        std::map<int, double> a, b;
        const double s = std::pow(10.0, gen::uniform(-5.0, 5.0));
        for (int n : {2, 4, 8, 16, 32}) {
            a[n] = gen::uniform(0.1, 10.0);
            b[n] = s * a[n];
        }
        const ModerateSeq fa = fit_moderate(a), fb = fit_moderate(b);
        CHECK(fb.slope == doctest::Approx(fa.slope).epsilon(1e-10));
        CHECK(fb.log_c - fa.log_c == doctest::Approx(std::log(s)).epsilon(1e-10));
    }
}

TEST_CASE("G4 flags resolvent norms that drift with n") {
    const Grid g(1, 4.0, 64);
    SymbolSeq scaled = heat_symbol();
    scaled.eval = [](int n, const Point& xi) { return cplx{-double(n) * xi[0] * xi[0] - double(n)}; };
    const G4Report r = check_G4(scaled, {1, 2, 4, 8, 16}, {cplx{1.0, 0.0}}, g);
    CHECK_FALSE(r.all_bounded());
    CHECK(r.entries.front().spread == doctest::Approx(17.0 / 2.0));
}
