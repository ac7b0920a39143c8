#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "geis/csv.hpp"
#include "geis/errors.hpp"
#include "geislab/app.hpp"

namespace geislab {
namespace {

namespace pt = boost::property_tree;
using geis::ConfigError;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::set<std::string> family_keys{"family", "alpha", "beta", "alpha_per_n", "beta_per_n",
                                                   "c", "c_per_n", "m", "c_bound"};
    static const std::map<std::string, std::set<std::string>> s{
        {"scenario", {"name"}},
        {"grid", {"d", "half_width", "points"}},
        {"symbol", family_keys},
        {"symbol2", family_keys},
        {"mollifier", {"profile"}},
        {"data", {"u0", "forcing"}},
        {"run", {"n_list", "t_end", "dt", "lambda", "omega", "b", "perturb_re", "perturb_im", "c_seq"}},
        {"tolerances",
         {"laplace", "pseudoresolvent", "functional", "bromwich", "residual", "perturbation", "weak_limit"}},
        {"output", {"dir"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Line of `key` inside `[section]`, or of the section header when key is empty.
int locate(const std::string& text, const std::string& section, const std::string& key) {
    std::istringstream in(text);
    std::string line, current;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        const std::string t = trim(line);
        if (t.size() > 1 && t.front() == '[' && t.back() == ']') {
            current = t.substr(1, t.size() - 2);
            if (key.empty() && current == section) return no;
            continue;
        }
        if (current == section && trim(t.substr(0, t.find('='))) == key) return no;
    }
    return 0;
}

class Reader {
public:
    Reader(const pt::ptree& tree, const std::string& text, std::string origin)
        : tree_(tree), text_(text), origin_(std::move(origin)) {}

    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& msg) const {
        const int line = locate(text_, section, key);
        throw ConfigError(fmt::format("{}:{}: [{}] {}: {}", origin_, line, section, key, msg), line);
    }

    std::optional<std::string> raw(const std::string& section, const std::string& key) const {
        const auto sec = tree_.get_child_optional(section);
        if (!sec) return std::nullopt;
        const auto v = sec->get_optional<std::string>(key);
        if (!v) return std::nullopt;
        return trim(*v);
    }

    void get(const std::string& section, const std::string& key, std::string& out) const {
        if (auto v = raw(section, key)) out = *v;
    }

    void get(const std::string& section, const std::string& key, double& out) const {
        if (auto v = raw(section, key)) out = number(section, key, *v);
    }

    void get(const std::string& section, const std::string& key, int& out) const {
        if (auto v = raw(section, key)) {
            const double d = number(section, key, *v);
            if (d != std::floor(d) || std::abs(d) > 1e9) fail(section, key, "expected an integer");
            out = static_cast<int>(d);
        }
    }

    void get(const std::string& section, const std::string& key, std::vector<double>& out) const {
        if (auto v = raw(section, key)) {
            out.clear();
            std::stringstream ss(*v);
            std::string cell;
            while (std::getline(ss, cell, ',')) out.push_back(number(section, key, trim(cell)));
            if (out.empty()) fail(section, key, "empty list");
        }
    }

    void get(const std::string& section, const std::string& key, std::vector<int>& out) const {
        std::vector<double> d;
        get(section, key, d);
        if (d.empty()) return;
        out.clear();
        for (double x : d) {
            if (x != std::floor(x) || x < 1 || x > 1e6) fail(section, key, "expected positive integers");
            out.push_back(static_cast<int>(x));
        }
    }

private:
    double number(const std::string& section, const std::string& key, const std::string& v) const {
        try {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            fail(section, key, fmt::format("'{}' is not a number", v));
        }
    }

    const pt::ptree& tree_;
    const std::string& text_;
    std::string origin_;
};

FamilySpec read_family(const Reader& r, const std::string& section) {
    FamilySpec f;
    r.get(section, "family", f.family);
    r.get(section, "alpha", f.alpha);
    r.get(section, "beta", f.beta);
    r.get(section, "alpha_per_n", f.alpha_per_n);
    r.get(section, "beta_per_n", f.beta_per_n);
    r.get(section, "c", f.c);
    r.get(section, "c_per_n", f.c_per_n);
    r.get(section, "m", f.m);
    r.get(section, "c_bound", f.c_bound);
    static const std::set<std::string> families{"heat", "poly", "fractional", "closing"};
    if (!families.count(f.family)) r.fail(section, "family", fmt::format("unknown family '{}'", f.family));
    for (const auto* v : {&f.alpha, &f.beta, &f.alpha_per_n, &f.beta_per_n}) {
        if (v->size() > 3) r.fail(section, "alpha", "polynomial coefficients beyond degree 2 are not supported");
    }
    return f;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + geis::csv::num(v[i]);
    return s;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

void write_family(std::ostream& out, const std::string& section, const FamilySpec& f) {
    using geis::csv::num;
    out << '[' << section << "]\n"
        << "family = " << f.family << '\n'
        << "alpha = " << join(f.alpha) << '\n'
        << "beta = " << join(f.beta) << '\n'
        << "alpha_per_n = " << join(f.alpha_per_n) << '\n'
        << "beta_per_n = " << join(f.beta_per_n) << '\n'
        << "c = " << num(f.c) << '\n'
        << "c_per_n = " << num(f.c_per_n) << '\n'
        << "m = " << num(f.m) << '\n'
        << "c_bound = " << num(f.c_bound) << "\n\n";
}

std::vector<geis::cplx> coefficients(const std::vector<double>& re, const std::vector<double>& im) {
    std::vector<geis::cplx> c(std::max(re.size(), im.size()));
    for (std::size_t j = 0; j < c.size(); ++j) {
        c[j] = {j < re.size() ? re[j] : 0.0, j < im.size() ? im[j] : 0.0};
    }
    return c;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("{}:{}: {}", origin, e.line(), e.message()), static_cast<int>(e.line()));
    }
    const Reader r(tree, text, origin);
    for (const auto& [section, body] : tree) {
        const auto it = schema().find(section);
        if (it == schema().end()) {
            const int line = locate(text, section, "");
            throw ConfigError(fmt::format("{}:{}: unknown section [{}]", origin, line, section), line);
        }
        for (const auto& [key, value] : body) {
            if (!it->second.count(key)) r.fail(section, key, "unknown key");
        }
    }
    ExperimentConfig c;
    r.get("scenario", "name", c.scenario);
    r.get("grid", "d", c.dim);
    r.get("grid", "half_width", c.half_width);
    r.get("grid", "points", c.points);
    if (tree.get_child_optional("symbol")) c.symbol = read_family(r, "symbol");
    if (tree.get_child_optional("symbol2")) c.symbol2 = read_family(r, "symbol2");
    r.get("mollifier", "profile", c.mollifier);
    r.get("data", "u0", c.u0);
    r.get("data", "forcing", c.forcing);
    r.get("run", "n_list", c.n_list);
    r.get("run", "t_end", c.t_end);
    r.get("run", "dt", c.dt);
    r.get("run", "lambda", c.lambda);
    r.get("run", "omega", c.omega);
    r.get("run", "b", c.b);
    r.get("run", "perturb_re", c.perturb_re);
    r.get("run", "perturb_im", c.perturb_im);
    r.get("run", "c_seq", c.c_seq);
    r.get("tolerances", "laplace", c.tol.laplace);
    r.get("tolerances", "pseudoresolvent", c.tol.pseudoresolvent);
    r.get("tolerances", "functional", c.tol.functional);
    r.get("tolerances", "bromwich", c.tol.bromwich);
    r.get("tolerances", "residual", c.tol.residual);
    r.get("tolerances", "perturbation", c.tol.perturbation);
    r.get("tolerances", "weak_limit", c.tol.weak_limit);
    r.get("output", "dir", c.output_dir);

    if (c.dim != 1 && c.dim != 2) r.fail("grid", "d", "must be 1 or 2");
    if (c.points < 2 || (c.points & (c.points - 1)) != 0) r.fail("grid", "points", "must be a power of two");
    if (!(c.half_width > 0.0)) r.fail("grid", "half_width", "must be positive");
    if (c.mollifier != "bump" && c.mollifier != "narrow_bump") {
        r.fail("mollifier", "profile", fmt::format("unknown profile '{}'", c.mollifier));
    }
    static const std::set<std::string> data{"delta", "delta_prime", "gaussian", "zero"};
    if (!data.count(c.u0) && c.u0.rfind("file:", 0) != 0) {
        r.fail("data", "u0", fmt::format("unknown initial data '{}'", c.u0));
    }
    if (c.forcing != "zero" && c.forcing != "gaussian_const") {
        r.fail("data", "forcing", fmt::format("unknown forcing '{}'", c.forcing));
    }
    if (!(c.t_end > 0.0) || !(c.dt > 0.0)) r.fail("run", "dt", "t_end and dt must be positive");
    if (!(c.b > 0.0)) r.fail("run", "b", "must be positive");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

std::string serialize_config(const ExperimentConfig& c) {
    using geis::csv::num;
    std::ostringstream out;
    out << "[scenario]\nname = " << c.scenario << "\n\n"
        << "[grid]\nd = " << c.dim << "\nhalf_width = " << num(c.half_width) << "\npoints = " << c.points
        << "\n\n";
    write_family(out, "symbol", c.symbol);
    if (c.symbol2) write_family(out, "symbol2", *c.symbol2);
    out << "[mollifier]\nprofile = " << c.mollifier << "\n\n"
        << "[data]\nu0 = " << c.u0 << "\nforcing = " << c.forcing << "\n\n"
        << "[run]\nn_list = " << join(c.n_list) << "\nt_end = " << num(c.t_end) << "\ndt = " << num(c.dt)
        << "\nlambda = " << join(c.lambda) << "\nomega = " << num(c.omega) << "\nb = " << num(c.b)
        << "\nperturb_re = " << num(c.perturb_re) << "\nperturb_im = " << num(c.perturb_im)
        << "\nc_seq = " << num(c.c_seq) << "\n\n"
        << "[tolerances]\nlaplace = " << num(c.tol.laplace) << "\npseudoresolvent = " << num(c.tol.pseudoresolvent)
        << "\nfunctional = " << num(c.tol.functional) << "\nbromwich = " << num(c.tol.bromwich)
        << "\nresidual = " << num(c.tol.residual) << "\nperturbation = " << num(c.tol.perturbation)
        << "\nweak_limit = " << num(c.tol.weak_limit) << "\n\n"
        << "[output]\ndir = " << c.output_dir << '\n';
    return out.str();
}

geis::Grid build_grid(const ExperimentConfig& cfg) { return geis::Grid(cfg.dim, cfg.half_width, cfg.points); }

geis::SymbolSeq build_symbol(const FamilySpec& spec, int dim) {
    if (spec.family == "fractional") {
        const double c = spec.c, cn = spec.c_per_n;
        return geis::make_fractional_symbol_seq([c, cn](int n) { return c + cn / n; }, spec.m, dim, spec.c_bound);
    }
    if (dim != 1) throw ConfigError(fmt::format("family '{}' is one-dimensional", spec.family));
    if (spec.family == "heat") return geis::heat_symbol();
    auto base = coefficients(spec.alpha, spec.beta);
    auto per_n = coefficients(spec.alpha_per_n, spec.beta_per_n);
    if (spec.family == "closing") {
        per_n.resize(std::max<std::size_t>(per_n.size(), 3));
        per_n[0] += 1.0;
        per_n[2] += 1.0;
    }
    return geis::make_poly_symbol_seq(geis::PolySymbolParams::inverse_n(base, per_n), spec.family);
}

geis::DistributionRep build_initial_data(const ExperimentConfig& cfg, const geis::Grid& grid) {
    using geis::DistributionRep;
    if (cfg.u0 == "delta") return DistributionRep::delta(grid);
    if (cfg.u0 == "delta_prime") return DistributionRep::delta_derivative(grid, {1, 0});
    if (cfg.u0 == "zero") return DistributionRep::function(geis::GridFunction::zeros(grid));
    if (cfg.u0 == "gaussian") {
        const int d = grid.dim();
        return DistributionRep::function(geis::GridFunction::sample(grid, [d](const geis::Point& x) {
            return geis::cplx{std::exp(-std::numbers::pi * std::pow(geis::norm(x, d), 2))};
        }));
    }
    return DistributionRep::function(geis::csv::read_grid_function(cfg.u0.substr(5), grid));
}

}  // namespace geislab
