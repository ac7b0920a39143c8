#include <cstdio>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "geis/errors.hpp"
#include "geis/parallel.hpp"
#include "geislab/app.hpp"

namespace geislab {

int main_entry(int argc, char** argv) {
    CLI::App app{"geislab: generalized integrated semigroup experiments"};
    app.require_subcommand(1, 1);
    std::string config_path, out_dir;
    int jobs = 1;
    bool no_plots = false;

    const std::map<std::string, std::function<int(const ExperimentConfig&, bool)>> commands{
        {"verify", run_verify},   {"solve", run_solve},   {"associate", run_associate},
        {"perturb", run_perturb}, {"growth", run_growth},
    };
    const std::map<std::string, std::string> help{
        {"verify", "check the semigroup identities of one family"},
        {"solve", "solve the regularized Cauchy problems and extract weak limits"},
        {"associate", "compare two families under the association checks"},
        {"perturb", "run the bounded perturbation suite"},
        {"growth", "certify the growth bounds of one family"},
    };
    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--config", config_path, "INI experiment file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
        sub->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 1024));
        sub->add_flag("--no-plots", no_plots, "skip SVG output");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    geis::set_jobs(jobs);
    const std::string name = app.get_subcommands().front()->get_name();
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const geis::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    try {
        return commands.at(name)(cfg, !no_plots);
    } catch (const geis::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s failed: %s\n", name.c_str(), e.what());
        return 1;
    }
}

}  // namespace geislab
