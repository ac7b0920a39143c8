#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "geis/grid.hpp"
#include "geis/spectral.hpp"
#include "geis/symbols.hpp"

namespace geislab {

/// One symbol family of the [symbol] or [symbol2] section.
struct FamilySpec {
    std::string family = "heat";  // heat | poly | fractional | closing
    // poly and closing: c_j(n) = alpha_j + i beta_j + (alpha_per_n_j + i beta_per_n_j) / n
    std::vector<double> alpha{0.0, 0.0, 0.0};
    std::vector<double> beta{0.0, 0.0, 0.0};
    std::vector<double> alpha_per_n{0.0, 0.0, 0.0};
    std::vector<double> beta_per_n{0.0, 0.0, 0.0};
    // fractional: i (c + c_per_n / n) |xi|^m with |c_n| <= c_bound
    double c = 1.0;
    double c_per_n = 0.0;
    double m = 2.0;
    double c_bound = 10.0;

    bool operator==(const FamilySpec&) const = default;
};

struct Tolerances {
    double laplace = 1e-8;
    double pseudoresolvent = 1e-12;
    double functional = 1e-8;
    double bromwich = 1e-4;
    double residual = 1e-5;
    double perturbation = 1e-10;
    double weak_limit = 1e-3;

    bool operator==(const Tolerances&) const = default;
};

struct ExperimentConfig {
    std::string scenario = "default";
    int dim = 1;
    double half_width = 8.0;
    int points = 256;
    FamilySpec symbol;
    std::optional<FamilySpec> symbol2;
    std::string mollifier = "bump";
    std::string u0 = "gaussian";  // delta | delta_prime | gaussian | zero | file:PATH
    std::string forcing = "zero";  // zero | gaussian_const
    std::vector<int> n_list{4, 8, 16, 32};
    double t_end = 1.0;
    double dt = 1.0 / 128.0;
    std::vector<double> lambda{2.0, 10.0, 1000.0};
    double omega = 0.5;
    double b = 1.0;
    double perturb_re = 0.0;  // constant bounded perturbation B
    double perturb_im = 0.5;
    double c_seq = 1.0;  // null sequence C_n = c_seq / n
    Tolerances tol;
    std::string output_dir = "out";

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses INI text. Throws geis::ConfigError with the offending line.
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
/// Throws geis::ConfigError when the file cannot be read or parsed.
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

geis::Grid build_grid(const ExperimentConfig& cfg);
geis::SymbolSeq build_symbol(const FamilySpec& spec, int dim);
geis::DistributionRep build_initial_data(const ExperimentConfig& cfg, const geis::Grid& grid);

/// Subcommands; each returns the process exit status (0 ok, 1 tolerance failure).
int run_verify(const ExperimentConfig& cfg, bool plots);
int run_solve(const ExperimentConfig& cfg, bool plots);
int run_associate(const ExperimentConfig& cfg, bool plots);
int run_perturb(const ExperimentConfig& cfg, bool plots);
int run_growth(const ExperimentConfig& cfg, bool plots);

/// Full command line entry point; 2 on usage or config errors.
int main_entry(int argc, char** argv);

}  // namespace geislab
