#ifndef DPRONY_EXPERIMENT_HPP
#define DPRONY_EXPERIMENT_HPP

#include "dprony/decimated.hpp"
#include "dprony/signal.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dprony {

enum class ExperimentKind
{
    sweep_delta,
    sweep_srf,
    threshold,
    compare,
    collision_scan,
    single_run,
};

enum class Method
{
    prony,
    dpm,
    esprit,
};

std::string_view to_string(ExperimentKind kind) noexcept;
std::string_view to_string(Method method) noexcept;
std::optional<ExperimentKind> parse_kind(std::string_view text) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;

/// Raised for specs that fail validation.
class SpecError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

///
/// A Monte-Carlo experiment: the Cartesian product deltas x omegas x epss
/// forms the cells, and every cell runs `trials` independent trials of each
/// method. When `epss` is empty the noise level of a cell is derived as
/// eps_scale * (omega delta / (2n-1))^(2 ell - 1), which for omega = 2n-1
/// is eps_scale * delta^(2 ell - 1).
///
struct ExperimentSpec
{
    ExperimentKind kind = ExperimentKind::single_run;
    std::vector<Method> methods{Method::prony};
    int n = 3;
    int ell = 2;
    std::vector<double> deltas{1e-2};
    std::vector<double> omegas{5.0};
    std::vector<double> epss;
    double eps_scale = 1e-2;
    int trials = 1;
    std::uint64_t seed = 0;
    int n_lambda = 0; ///< 0: default_n_lambda(omega)
    int n_bins = 0;   ///< 0: default_n_bins(delta)
    NoiseMode noise = NoiseMode::boundary;
    int threads = 1;  ///< 0: hardware concurrency
    bool extended_precision = false; ///< prony only: 113-bit samples and solve

    /// Throws SpecError.
    void validate() const;
};

/// Figure-style defaults for each experiment kind.
ExperimentSpec default_spec(ExperimentKind kind);

/// Per-node outcome of one trial, flattened into one table row.
struct ResultRow
{
    std::int64_t trial_id = 0;
    std::string method;
    int n = 0;
    int ell = 0;
    double delta = 0.0;
    double omega = 0.0;
    double eps = 0.0;
    double srf = 0.0;
    int n_lambda = 0;
    int n_bins = 0;
    int node_index = 0;
    bool in_cluster = false;
    double abs_node_err = 0.0;
    double abs_amp_err = 0.0;
    double k_x = 0.0;     ///< NaN when eps = 0
    double k_alpha = 0.0; ///< NaN when eps = 0
    bool success = false;
    std::string status;
    std::int64_t runtime_ns = 0;
    std::uint64_t seed = 0;

    bool operator==(const ResultRow&) const = default;
};

struct TableMetadata
{
    std::string spec_json;
    std::string version;
    std::string timestamp;
};

struct ResultTable
{
    TableMetadata metadata;
    std::vector<ResultRow> rows;
};

/// Everything one trial needs; reproducible from (spec, cell, trial).
struct TrialSetup
{
    ClusterConfig config;
    SpikeSignal signal;
    double eps = 0.0;
    std::uint64_t seed = 0;       ///< child seed
    std::uint64_t noise_seed = 0;
    int n_bins = 0;               ///< bins used for center nudging and DPM
};

struct Cell
{
    double delta = 0.0;
    double omega = 0.0;
    double eps = 0.0;
};

std::vector<Cell> experiment_cells(const ExperimentSpec& spec);

TrialSetup make_trial(const ExperimentSpec& spec, const Cell& cell, std::size_t cell_index,
                      std::size_t trial_index);

///
/// Shifts config.cluster_center within one bin width so that every node of
/// the resulting signal sits as far as possible from a bin edge. Returns the
/// smallest node-to-edge distance in units of the bin width (at most 0.5).
///
double nudge_center(ClusterConfig& config, int n_bins);

struct MethodRun
{
    std::string status;
    std::vector<double> nodes;
    std::vector<Complex> amplitudes;
    std::int64_t runtime_ns = 0;
    int n_lambda = 0;
    int n_bins = 0;
};

/// Acquires the method's samples (with noise) and times the method call only.
MethodRun run_method(Method method, const TrialSetup& trial, const ExperimentSpec& spec,
                     const Cell& cell);

/// Scores a run against the truth; one row per true node.
std::vector<ResultRow> score_trial(const TrialSetup& trial, const Cell& cell, Method method,
                                   const MethodRun& run, std::int64_t trial_id);

/// Runs every (cell, trial, method); rows ordered by cell, trial, method, node.
ResultTable run_experiment(const ExperimentSpec& spec);

struct CollisionRow
{
    double lambda = 0.0;
    double delta_lambda = 0.0;
    bool avoiding = false; ///< delta_lambda > 1/n^2
};

std::vector<CollisionRow> collision_scan(const SpikeSignal& signal, const DecimationGrid& grid);

std::string spec_to_json(const ExperimentSpec& spec);

/// Version string recorded in table metadata.
std::string_view library_version() noexcept;

} // namespace dprony

#endif // DPRONY_EXPERIMENT_HPP
