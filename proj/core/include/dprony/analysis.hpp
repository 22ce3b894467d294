#ifndef DPRONY_ANALYSIS_HPP
#define DPRONY_ANALYSIS_HPP

#include "dprony/experiment.hpp"
#include "dprony/metrics.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace dprony {

// Summaries of a ResultTable shared by the acceptance suite and the plots.

enum class Quantity
{
    k_x,
    k_alpha,
    abs_node_err,
    abs_amp_err,
};

enum class Axis
{
    delta,
    srf,
    eps,
};

double median(std::vector<double> values);

/// Axis along which the table's cells vary: delta if it takes more than one
/// value, else SRF if that does, else eps.
Axis sweep_axis(const ResultTable& table);

/// One point per successful trial of `method`: (axis value, largest value of
/// `q` over the cluster nodes).
std::vector<Point> cluster_points(const ResultTable& table, std::string_view method, Quantity q,
                                  Axis axis);

/// One point per non-cluster node of every successful trial of `method`.
std::vector<Point> singleton_points(const ResultTable& table, std::string_view method,
                                    Quantity q, Axis axis);

/// Median y for each distinct x, ascending in x.
std::vector<Point> median_by_x(std::span<const Point> points);

/// Log-log fit of the per-x medians of cluster_points.
LogLogFit cluster_scaling_fit(const ResultTable& table, std::string_view method, Quantity q,
                              Axis axis);

/// Fraction of trials per (delta, eps) cell in which every cluster node was
/// recovered. Failed runs count as failures.
std::vector<ThresholdCell> cluster_success_cells(const ResultTable& table,
                                                 std::string_view method);

} // namespace dprony

#endif // DPRONY_ANALYSIS_HPP
