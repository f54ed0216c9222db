// Command-line front end: pick an experiment, optionally load a JSON
// config, apply flag overrides (flags win), run, optionally check the
// results against their acceptance targets.
//
// Exit codes: 0 ok, 1 config error, 2 runtime error, 3 check failed.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lqgdim/experiments.hpp"

namespace {

int run_and_check(lqgdim::ExperimentConfig config, bool check) {
    const lqgdim::RunResult result = lqgdim::run(config);
    if (result.exit_code != 0) {
        std::fprintf(stderr, "lqgdim: %s\n", result.message.c_str());
        return result.exit_code;
    }
    std::printf("wrote %s/{config.json,raw.csv,summary.csv,plot.gp,run.meta}\n",
                config.output_dir.c_str());
    if (!check) return 0;

    const lqgdim::AcceptanceReport report = lqgdim::check_acceptance(config);
    if (!report.error.empty()) {
        std::fprintf(stderr, "lqgdim: %s\n", report.error.c_str());
        return 2;
    }
    for (const auto& c : report.criteria)
        std::printf("%-24s %s  measured=%.6g target=%.6g tol=%.3g%s%s\n", c.name.c_str(),
                    c.pass ? "pass" : "FAIL", c.measured, c.target, c.tolerance,
                    c.detail.empty() ? "" : "  ", c.detail.c_str());
    return report.pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gamma-LQG dimension experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    int threads = -1;
    int replicates = 0;
    bool check = false;
    std::vector<double> gammas, eps_list;
    std::vector<int> sizes;
    int grid_n = 0;
    double t_min = 0.0, xi = -1.0;
    long long walk_n = 0;
    int substeps = 0, r_lo = 0, r_hi = 0;

    std::vector<std::pair<CLI::App*, lqgdim::Experiment>> subs;
    for (int e = 0; e < 6; ++e) {
        const auto kind = static_cast<lqgdim::Experiment>(e);
        CLI::App* sub = app.add_subcommand(lqgdim::experiment_name(kind));
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--gamma", gamma, "coupling parameter in (0,2)");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--threads", threads, "worker threads (default: LQGDIM_THREADS or 1)");
        sub->add_option("--replicates", replicates, "independent replicates");
        sub->add_option("--output-dir", output_dir, "artifact directory");
        sub->add_option("--gammas", gammas, "gamma evaluation points (bounds-table)");
        sub->add_option("--eps", eps_list, "mass thresholds, ascending (lgd-exponent)");
        sub->add_option("--sizes", sizes, "grid sizes, ascending (lfpp-exponent)");
        sub->add_option("--grid-n", grid_n, "field grid points per side");
        sub->add_option("--t-min", t_min, "finest dyadic scale");
        sub->add_option("--xi", xi, "LFPP weight exponent (default gamma/watabiki)");
        sub->add_option("--walk-n", walk_n, "walk cells (crt-ball)");
        sub->add_option("--substeps", substeps, "increments per walk cell");
        sub->add_option("--r-lo", r_lo, "smallest fitted radius");
        sub->add_option("--r-hi", r_hi, "largest fitted radius");
        sub->add_flag("--check", check, "verify results against acceptance targets");
        subs.emplace_back(sub, kind);
    }

    CLI11_PARSE(app, argc, argv);

    CLI::App* active = nullptr;
    lqgdim::ExperimentConfig config;
    for (const auto& [sub, kind] : subs) {
        if (!sub->parsed()) continue;
        active = sub;
        config.experiment = kind;
    }

    if (active->count("--config") > 0) {
        std::ifstream is(config_path);
        if (!is) {
            std::fprintf(stderr, "lqgdim: cannot read config %s\n", config_path.c_str());
            return 1;
        }
        std::ostringstream text;
        text << is.rdbuf();
        const lqgdim::Experiment from_cli = config.experiment;
        try {
            config = lqgdim::config_from_json(text.str());
        } catch (const std::exception& e) {
            std::fprintf(stderr, "lqgdim: %s\n", e.what());
            return 1;
        }
        config.experiment = from_cli;  // the subcommand, not the file, picks it
    }

    auto override_if = [&](const char* flag, auto& target, const auto& value) {
        if (active->count(flag) > 0) target = value;
    };
    override_if("--gamma", config.gamma, gamma);
    override_if("--seed", config.master_seed, seed);
    override_if("--threads", config.threads, threads);
    override_if("--replicates", config.replicates, replicates);
    override_if("--output-dir", config.output_dir, output_dir);
    override_if("--gammas", config.gamma_list, gammas);
    override_if("--eps", config.eps_list, eps_list);
    override_if("--sizes", config.size_list, sizes);
    override_if("--grid-n", config.grid_n, grid_n);
    override_if("--t-min", config.t_min, t_min);
    override_if("--xi", config.xi, xi);
    override_if("--walk-n", config.walk_n, static_cast<std::int64_t>(walk_n));
    override_if("--substeps", config.substeps, substeps);
    override_if("--r-lo", config.r_lo, r_lo);
    override_if("--r-hi", config.r_hi, r_hi);

    return run_and_check(std::move(config), check);
}
