#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "geis/csv.hpp"
#include "geis/errors.hpp"
#include "geislab/app.hpp"
#include "generators.hpp"

using namespace geislab;
namespace fs = std::filesystem;

namespace {

ExperimentConfig random_config() {
    ExperimentConfig c;
    c.scenario = "trial" + std::to_string(gen::integer(0, 999));
    c.dim = gen::integer(1, 2);
    c.half_width = gen::uniform(1.0, 20.0);
    c.points = 1 << gen::integer(3, 10);
    c.symbol.family = c.dim == 1 ? "poly" : "fractional";
    for (auto* v : {&c.symbol.alpha, &c.symbol.beta, &c.symbol.alpha_per_n, &c.symbol.beta_per_n}) {
        for (auto& x : *v) x = gen::uniform(-3.0, 3.0);
    }
    c.symbol.c = gen::uniform(-2.0, 2.0);
    c.symbol.m = gen::uniform(0.5, 3.0);
    if (gen::integer(0, 1)) c.symbol2 = c.symbol;
    c.mollifier = gen::integer(0, 1) ? "bump" : "narrow_bump";
    c.u0 = gen::integer(0, 1) ? "delta" : "gaussian";
    c.n_list = {gen::integer(1, 5), gen::integer(6, 20), gen::integer(21, 99)};
    c.t_end = gen::uniform(0.1, 10.0);
    c.dt = c.t_end / gen::integer(1, 500);
    c.lambda = {gen::uniform(0.1, 1e4), gen::uniform(0.1, 1e4)};
    c.omega = gen::uniform(0.0, 3.0);
    c.b = gen::uniform(0.1, 3.0);
    c.perturb_re = gen::uniform(-1.0, 1.0);
    c.perturb_im = gen::uniform(-1.0, 1.0);
    c.c_seq = gen::uniform(0.0, 2.0);
    c.tol.laplace = std::pow(10.0, gen::uniform(-14.0, -2.0));
    c.tol.weak_limit = std::pow(10.0, gen::uniform(-14.0, -2.0));
    c.output_dir = "out/" + c.scenario;
    return c;
}

int run(std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return main_entry(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("empty text yields the defaults") { CHECK(parse_config("") == ExperimentConfig{}); }

TEST_CASE("property: serialize then parse is the identity") {
    for (int trial = 0; trial < 200; ++trial) {
        const ExperimentConfig c = random_config();
        CHECK(parse_config(serialize_config(c)) == c);
    }
}

TEST_CASE("comments and spacing") {
    const auto c = parse_config("; comment\n# another\n[grid]\npoints = 64 \n\n[run]\nn_list = 4, 8 ,16\n");
    CHECK(c.points == 64);
    CHECK(c.n_list == std::vector<int>{4, 8, 16});
}

TEST_CASE("errors carry the line number") {
    auto line_of = [](const std::string& text) {
        try {
            parse_config(text, "x.ini");
        } catch (const geis::ConfigError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("[grid]\nd = 1\npoints = 12\n") == 3);
    CHECK(line_of("[grid]\nhalf_width = abc\n") == 2);
    CHECK(line_of("[run]\n\nspeed = 3\n") == 3);
    CHECK(line_of("[grid]\nd = 1\n[nope]\nx = 1\n") == 3);
    CHECK(line_of("[run]\nn_list = 4, 0\n") == 2);
    CHECK(line_of("[symbol]\nfamily = cubic\n") == 2);
    CHECK(line_of("[data]\nu0 = lightning\n") == 2);
    CHECK(line_of("[grid\n") == 1);
    CHECK(line_of("[grid]\nd = 3\n") == 2);
}

TEST_CASE("missing files are config errors") {
    CHECK_THROWS_AS(load_config("/nonexistent/geislab.ini"), geis::ConfigError);
}

TEST_CASE("initial data from a CSV file") {
    const fs::path dir = fs::temp_directory_path() / "geislab_config_test";
    fs::create_directories(dir);
    ExperimentConfig c;
    c.half_width = 4.0;
    c.points = 64;
    const geis::Grid g = build_grid(c);
    const geis::GridFunction u = gen::noise(g);
    geis::csv::write_grid_function(dir / "u0.csv", u);
    c.u0 = "file:" + (dir / "u0.csv").string();
    const geis::DistributionRep d = build_initial_data(c, g);
    REQUIRE(d.terms().size() == 1);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(d.terms()[0].g[i] == u[i]);
    CHECK_THROWS_AS(geis::csv::read_grid_function(dir / "u0.csv", geis::Grid(1, 4.0, 32)), geis::ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("command line exit codes") {
    const fs::path dir = fs::temp_directory_path() / "geislab_cli_test";
    fs::create_directories(dir);
    CHECK(run({"geislab"}) == 2);
    CHECK(run({"geislab", "verify"}) == 2);
    CHECK(run({"geislab", "verify", "--config", (dir / "missing.ini").string()}) == 2);
    std::ofstream(dir / "bad.ini") << "[grid]\npoints = 3\n";
    CHECK(run({"geislab", "verify", "--config", (dir / "bad.ini").string()}) == 2);
    std::ofstream(dir / "spectral.ini") << "[run]\nlambda = 2, 0\n[output]\ndir = " << (dir / "out").string() << "\n";
    CHECK(run({"geislab", "verify", "--config", (dir / "spectral.ini").string(), "--no-plots"}) == 1);
    std::ofstream(dir / "ok.ini") << "[grid]\npoints = 64\n[output]\ndir = " << (dir / "out").string() << "\n";
    CHECK(run({"geislab", "verify", "--config", (dir / "ok.ini").string(), "--jobs", "2"}) == 0);
    CHECK(fs::exists(dir / "out" / "verify" / "summary.txt"));
    CHECK(run({"geislab", "associate", "--config", (dir / "ok.ini").string()}) == 2);
    fs::remove_all(dir);
}
