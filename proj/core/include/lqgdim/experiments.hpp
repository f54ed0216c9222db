#ifndef LQGDIM_EXPERIMENTS_HPP
#define LQGDIM_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lqgdim {

enum class Experiment {
    bounds_table,
    field_check,
    lgd_exponent,
    lfpp_exponent,
    crt_ball,
    oracle_suite,
};

const char* experiment_name(Experiment e);
std::optional<Experiment> parse_experiment(const std::string& name);

/// Full description of one reproducible run. Identical config (threads
/// excluded) implies byte-identical result CSVs.
struct ExperimentConfig {
    Experiment experiment = Experiment::bounds_table;
    double gamma = 1.632993161855452;  // sqrt(8/3)

    std::vector<double> gamma_list;  // bounds-table; empty: 199-point grid

    int grid_n = 65;        // field experiments
    double t_min = 0.0625;  // finest whitenoise scale
    std::vector<double> eps_list;  // lgd-exponent mass thresholds, ascending
    std::vector<int> size_list;    // lfpp-exponent grid sizes, ascending
    double xi = 0.0;               // lfpp weight exponent; 0: gamma/watabiki

    std::int64_t walk_n = 100000;  // crt-ball
    int substeps = 16;
    int r_lo = 10;
    int r_hi = 40;

    int replicates = 1;
    std::uint64_t master_seed = 1;
    int threads = 0;  // 0: LQGDIM_THREADS env, else 1
    std::string output_dir = ".";

    /// Empty string when valid, else the first problem found.
    std::string validate() const;
};

std::string config_to_json(const ExperimentConfig& config);
/// Throws std::runtime_error on malformed JSON or unknown experiment.
ExperimentConfig config_from_json(const std::string& text);

int resolve_threads(int requested);

struct RunResult {
    int exit_code = 0;  // 0 ok, 1 config error, 2 runtime/resource error
    std::string message;
};

/// Execute the experiment; writes config.json, raw.csv, summary.csv,
/// plot.gp and run.meta under config.output_dir.
RunResult run(const ExperimentConfig& config);

struct CriterionResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct AcceptanceReport {
    bool pass = false;
    std::string error;  // nonempty: inputs missing/unreadable
    std::vector<CriterionResult> criteria;
};

/// Re-reads summary.csv from config.output_dir and checks it against
/// the targets appropriate for the experiment.
AcceptanceReport check_acceptance(const ExperimentConfig& config);

} // namespace lqgdim

#endif
