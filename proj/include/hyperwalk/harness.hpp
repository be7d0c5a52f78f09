#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hyperwalk {

enum class Quantity { thit, tcov, ttarget, kirchhoff, avg_resist, flow_energy, dangling, degree };

Quantity parse_quantity(std::string_view name);
std::string_view quantity_name(Quantity q);

struct ExperimentConfig {
    double alpha = 0.7;
    double nu = 1.0;
    std::vector<double> n_values;
    std::size_t seeds_per_n = 1;
    std::uint64_t seed = 0;
    std::vector<Quantity> quantities{Quantity::degree};
    std::size_t mc_reps = 20;           // cover walks per trial
    std::uint64_t max_steps = 1'000'000'000;
    std::size_t resist_pairs = 1000;
    std::size_t resist_cap = 2000;      // exact Kirchhoff index up to this size
    std::size_t target_samples = 200;
    std::size_t hit_candidates = 20;
    std::size_t hit_exact_limit = 500;
    std::size_t flow_pairs = 50;
    std::size_t dangling_min_length = 2;
    std::optional<double> C;            // tiling constants; defaults when absent
    std::optional<double> Cprime;
    std::optional<double> c;            // absent: calibrated
    std::size_t workers = 1;            // concurrent trials; 0: worker_count()
    bool timing = false;                // wall-clock columns are 0 unless set
    std::string output;

    bool wants(Quantity q) const;
    // Throws InvalidArgument on an unusable configuration.
    void validate() const;
};

// Parses `key = value` lines; '#' starts a comment. Unknown keys throw.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig read_config_file(const std::string& path);
// Applies one key=value pair on top of an existing config.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

// Optional columns are absent when not requested or when the measurement
// failed; failures leave a reason in `notes`.
struct ExperimentRow {
    double n = 0;
    std::uint64_t seed = 0;
    std::size_t V = 0;
    std::optional<std::size_t> Vc;
    std::optional<std::size_t> Ec;
    std::optional<double> mean_deg;
    std::optional<double> thit_est;
    std::optional<double> tcov_mean;
    std::optional<double> tcov_se;
    std::optional<double> ttarget;
    std::optional<double> ttarget_se;
    std::optional<double> kirchhoff_est;
    std::optional<double> avg_resist;
    std::optional<double> avg_resist_ci;
    std::optional<double> flow_energy_med;
    std::optional<std::size_t> dangling_count;
    std::optional<std::size_t> dangling_maxlen;
    double t_sample_s = 0;
    double t_build_s = 0;
    double t_solve_s = 0;
    double t_walk_s = 0;
    std::string notes;

    // Not written to CSV: per-trial bound checks.
    std::optional<double> kklv_lower;     // U = tips of dangling paths, >= 2 of them
    std::optional<double> matthews_upper; // thit_est * H_{Vc}
    std::size_t flow_pairs_built = 0;
};

// Per-trial seed for trial i at intensity n.
std::uint64_t trial_seed(std::uint64_t master, double n, std::size_t trial);

ExperimentRow run_trial(const ExperimentConfig& cfg, double n, std::uint64_t seed);
// Rows sorted by (n, trial index). Writes cfg.output when it is nonempty.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

const std::vector<std::string>& csv_columns();
std::string to_csv(const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> parse_csv(std::string_view text);
std::vector<ExperimentRow> read_csv_file(const std::string& path);

enum class ScalingModel { one, n, n_log_n, n_log2_n, n2 };
ScalingModel parse_model(std::string_view name);
double model_value(ScalingModel m, double size);

struct ScalingFit {
    std::vector<double> sizes;   // mean size per n group
    std::vector<double> ratios;  // mean of quantity / model(size) per group
    double band;                 // max ratio / min ratio
    double exponent;             // least-squares slope of ln quantity on ln size
    double exponent_stderr;
    std::size_t points;
};

// `quantity` and `size_column` are CSV column names; size_column is "n" or
// "Vc". Rows lacking the quantity are skipped. Throws InsufficientData with
// fewer than 3 distinct n.
ScalingFit fit_scaling(const std::vector<ExperimentRow>& rows, std::string_view quantity, ScalingModel model,
                       std::string_view size_column = "n");

} // namespace hyperwalk
