#ifndef DPRONY_METRICS_HPP
#define DPRONY_METRICS_HPP

#include "dprony/signal.hpp"

#include <span>
#include <vector>

namespace dprony {

/// Largest node count accepted by match_nodes (exhaustive permutation search).
inline constexpr std::size_t max_matching_size = 9;

struct NodeMatching
{
    std::vector<int> permutation; ///< permutation[i] = true index matched to estimate i
    std::vector<double> distances; ///< circular distance of each matched pair, by estimate
    double total = 0.0;

    /// Estimate index matched to each true node.
    std::vector<int> inverse() const;
};

/// Bijection minimizing the summed circular distance.
NodeMatching match_nodes(std::span<const double> true_nodes, std::span<const double> est_nodes);

struct Amplification
{
    double k_x = 0.0;
    double k_alpha = 0.0;
};

/// Per true node: K_x = omega |x - x~| / eps and K_alpha = |alpha - alpha~| / eps,
/// on matched pairs. Node distances are circular.
std::vector<Amplification> amplification_factors(const SpikeSignal& truth,
                                                 std::span<const double> est_nodes,
                                                 std::span<const Complex> est_amps, double eps,
                                                 double omega);

/// Per true node: matched error strictly below a third of the distance to the
/// nearest other true node.
std::vector<bool> is_success(const SpikeSignal& truth, std::span<const double> est_nodes);

struct Point
{
    double x = 0.0;
    double y = 0.0;
};

struct LogLogFit
{
    double slope = 0.0;
    double intercept = 0.0; ///< log10 y at log10 x = 0
    double r2 = 0.0;
};

/// Ordinary least squares on (log10 x, log10 y).
LogLogFit fit_loglog_slope(std::span<const Point> points);

struct ThresholdCell
{
    double delta = 0.0;
    double eps = 0.0;
    double success_rate = 0.0;
};

struct ThresholdBoundary
{
    double slope = 0.0;     ///< d log eps* / d log delta
    double intercept = 0.0;
    std::vector<Point> crossings; ///< (delta, eps*) per column with a crossing
};

/// (delta, eps*) for every delta column whose success rate crosses 0.5; see
/// threshold_boundary.
std::vector<Point> threshold_crossings(std::span<const ThresholdCell> grid);

///
/// For every delta column, scans eps upwards and interpolates (linearly in
/// log eps) the first point where the success rate drops from >= 0.5 to
/// < 0.5. Columns without such a crossing are dropped; fewer than three
/// remaining columns is an error.
///
ThresholdBoundary threshold_boundary(std::span<const ThresholdCell> grid);

} // namespace dprony

#endif // DPRONY_METRICS_HPP
