#ifndef DPRONY_DECIMATED_HPP
#define DPRONY_DECIMATED_HPP

#include "dprony/prony.hpp"
#include "dprony/signal.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace dprony {

///
/// Uniform grid of decimation steps spanning
/// [omega / (2 (2n-1)), omega / (2n-1)], both endpoints included.
///
struct DecimationGrid
{
    double omega = 0.0;
    int n = 0;
    int n_lambda = 0;
    std::vector<double> lambdas;
};

DecimationGrid decimation_grid(double omega, int n, int n_lambda);

struct AliasCandidate
{
    int node_index = 0; ///< index j of the wrapped node that produced it
    double t = 0.0;     ///< (y_j + m) / lambda, |t| <= 1/2
};

/// All positions in [-1/2, 1/2] consistent with the wrapped nodes at one lambda.
struct AliasedSolutionSet
{
    double lambda = 0.0;
    std::vector<double> wrapped_nodes;
    std::vector<AliasCandidate> candidates;
};

AliasedSolutionSet aliased_solutions(double lambda, std::span<const double> wrapped_nodes);

struct DealiasHistogram
{
    int n_bins = 0;
    std::vector<double> edges;                    ///< n_bins + 1 uniform edges
    std::vector<std::int64_t> counts;             ///< candidates per bin
    std::vector<std::vector<double>> contributors; ///< distinct lambdas per bin

    int bin_of(double t) const noexcept;
    std::size_t contributor_count(int bin) const { return contributors[static_cast<std::size_t>(bin)].size(); }
};

/// Bin index floor((t + 1/2) n_bins), with t = 1/2 clamped into the last bin.
int histogram_bin(double t, int n_bins) noexcept;

DealiasHistogram build_histogram(std::span<const AliasedSolutionSet> all_sets, int n_bins);

/// The n bins with the largest counts; ties go to more contributors, then to
/// the lower index. Throws DealiasingError when fewer than n bins are nonempty.
std::vector<int> top_bins(const DealiasHistogram& hist, int n);

/// Lambdas whose alias set places a candidate in every one of `bins`, ascending.
std::vector<double> collision_set(std::span<const AliasedSolutionSet> all_sets,
                                  std::span<const int> bins, const DealiasHistogram& hist);

class DealiasingError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class RecoveryStatus
{
    success,
    empty_collision_set,
    prony_failure,
};

std::string_view to_string(RecoveryStatus status) noexcept;

struct LambdaDiagnostics
{
    double lambda = 0.0;
    bool prony_ok = false;
    std::vector<double> wrapped_nodes;
    double hankel_residual = 0.0;
    double vandermonde_residual = 0.0;
    std::size_t candidate_count = 0;
};

struct RecoveryResult
{
    RecoveryStatus status = RecoveryStatus::prony_failure;
    std::vector<double> est_nodes; ///< ascending
    std::vector<Complex> est_amplitudes;
    double lambda_star = 0.0;
    std::size_t collision_set_size = 0;
    std::vector<int> selected_bins;
    std::optional<std::vector<LambdaDiagnostics>> per_lambda_diagnostics;

    bool ok() const noexcept { return status == RecoveryStatus::success; }
};

struct DpmParams
{
    double omega = 0.0;
    int n = 0;
    int n_lambda = 0; ///< 0 selects default_n_lambda(omega)
    int n_bins = 0;   ///< required; see default_n_bins
    bool keep_diagnostics = false;
};

/// ceil(omega), clamped to at least 10.
int default_n_lambda(double omega);

/// ceil(3 / delta).
int default_n_bins(double delta);

/// Returns g(lambda k) for a grid step lambda and sample index k.
using SampleProvider = std::function<Complex(double lambda, int k)>;

/// Decimated Prony method: per-lambda Prony solves, alias histogram, collision
/// set, and amplitude recovery at the largest collision-avoiding lambda.
RecoveryResult decimated_prony(const SampleProvider& sample_provider, const DpmParams& params);

/// Smallest |arg e^{2 pi j lambda (x_k - x_s)}| over node pairs, in [0, pi].
double wrapped_separation(const SpikeSignal& signal, double lambda);

} // namespace dprony

#endif // DPRONY_DECIMATED_HPP
