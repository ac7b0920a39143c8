#include "geis/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "geis/errors.hpp"

namespace geis::csv {
namespace {

std::ofstream open(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    return out;
}

// JSON has no representation for non-finite numbers.
nlohmann::json json_num(double v) {
    if (std::isfinite(v)) return v;
    return num(v);
}

}  // namespace

std::string num(double v) { return fmt::format("{:.17g}", v); }

void write_grid_function(const std::filesystem::path& path, const GridFunction& u) {
    auto out = open(path);
    const Grid& g = u.grid();
    out << (g.dim() == 1 ? "x,re,im\n" : "x,y,re,im\n");
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Point p = g.point(i);
        out << num(p[0]) << ',';
        if (g.dim() == 2) out << num(p[1]) << ',';
        out << num(u[i].real()) << ',' << num(u[i].imag()) << '\n';
    }
}

GridFunction read_grid_function(const std::filesystem::path& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read data file '{}'", path.string()));
    std::string line;
    std::getline(in, line);
    const std::size_t cols = grid.dim() == 1 ? 3 : 4;
    std::vector<cplx> values;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> fields;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                fields.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError(fmt::format("{}: non-numeric field '{}'", path.string(), cell), line_no);
            }
        }
        if (fields.size() != cols) {
            throw ConfigError(fmt::format("{}: expected {} columns, got {}", path.string(), cols,
                                          fields.size()),
                              line_no);
        }
        const Point p = grid.point(values.size());
        const double tol = 1e-9 * grid.spacing();
        if (values.size() >= grid.size() || std::abs(fields[0] - p[0]) > tol ||
            (grid.dim() == 2 && std::abs(fields[1] - p[1]) > tol)) {
            throw ConfigError(fmt::format("{}: sample does not match the configured grid", path.string()),
                              line_no);
        }
        values.emplace_back(fields[cols - 2], fields[cols - 1]);
    }
    if (values.size() != grid.size()) {
        throw ConfigError(fmt::format("{}: {} samples, grid has {}", path.string(), values.size(),
                                      grid.size()));
    }
    return GridFunction(grid, std::move(values));
}

void write_certificate(const std::filesystem::path& path, const GrowthCertificate& cert) {
    auto out = open(path);
    out << "n,M_n,M_prime_n,omega,b,fitted_C,fitted_a\n";
    for (const auto& e : cert.entries) {
        out << e.n << ',' << num(e.resolvent_bound) << ',' << num(e.semigroup_bound) << ','
            << num(cert.omega) << ',' << num(cert.b) << ',';
        if (cert.resolvent_fit) out << num(cert.resolvent_fit->constant()) << ',' << num(cert.resolvent_fit->slope);
        else out << ',';
        out << '\n';
    }
}

void write_solutions(const std::filesystem::path& path, const std::vector<MildSolution>& sols,
                     std::size_t stride) {
    if (stride == 0) stride = 1;
    auto out = open(path);
    const bool two_d = !sols.empty() && sols.front().grid().dim() == 2;
    out << (two_d ? "n,t,x,y,re_w,im_w\n" : "n,t,x,re_w,im_w\n");
    for (const auto& s : sols) {
        const Grid& g = s.grid();
        for (std::size_t j = 0; j < s.times().size(); j += stride) {
            const GridFunction w = s.w(j);
            const std::string prefix = fmt::format("{},{},", s.n(), num(s.times().node(j)));
            for (std::size_t i = 0; i < w.size(); ++i) {
                const Point p = g.point(i);
                out << prefix << num(p[0]) << ',';
                if (two_d) out << num(p[1]) << ',';
                out << num(w[i].real()) << ',' << num(w[i].imag()) << '\n';
            }
        }
    }
}

void write_pairings(const std::filesystem::path& path, const PairingTable& table) {
    auto out = open(path);
    out << "n,psi_id,re_pair,im_pair\n";
    for (const auto& [key, v] : table) {
        out << key.first << ',' << key.second << ',' << num(v.real()) << ',' << num(v.imag()) << '\n';
    }
}

void write_association(const std::filesystem::path& csv_path,
                       const std::filesystem::path& summary_path, const AssociationReport& r) {
    {
        auto out = open(csv_path);
        out << "n,norm,sequence\n";
        for (const auto& s : r.sequences) {
            for (std::size_t i = 0; i < s.n.size(); ++i) {
                out << s.n[i] << ',' << num(s.norms[i]) << ',' << s.sequence << '\n';
            }
        }
    }
    nlohmann::ordered_json j;
    j["check"] = r.check;
    j["verdict"] = to_string(r.verdict);
    j["thresholds"] = {{"rel_tol", r.thresholds.rel_tol},
                       {"slope_min", r.thresholds.slope_min},
                       {"decel_ratio", r.thresholds.decel_ratio},
                       {"not_factor", r.thresholds.not_factor}};
    auto seqs = nlohmann::ordered_json::array();
    for (const auto& s : r.sequences) {
        seqs.push_back({{"sequence", s.sequence},
                        {"verdict", to_string(s.verdict)},
                        {"slope", json_num(s.slope)},
                        {"tail_slope", json_num(s.tail_slope)},
                        {"tol_assoc", json_num(s.tol_assoc)}});
    }
    j["sequences"] = seqs;
    auto out = open(summary_path);
    out << j.dump(2) << '\n';
}

}  // namespace geis::csv
