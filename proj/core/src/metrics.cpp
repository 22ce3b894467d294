#include "dprony/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dprony {

std::vector<int> NodeMatching::inverse() const
{
    std::vector<int> inv(permutation.size());
    for (std::size_t i = 0; i < permutation.size(); ++i) {
        inv[static_cast<std::size_t>(permutation[i])] = static_cast<int>(i);
    }
    return inv;
}

NodeMatching match_nodes(std::span<const double> true_nodes, std::span<const double> est_nodes)
{
    if (true_nodes.size() != est_nodes.size()) {
        throw std::invalid_argument("match_nodes: length mismatch (" +
                                    std::to_string(true_nodes.size()) + " vs " +
                                    std::to_string(est_nodes.size()) + ")");
    }
    const std::size_t n = true_nodes.size();
    if (n > max_matching_size) {
        throw std::invalid_argument("match_nodes: at most " + std::to_string(max_matching_size) +
                                    " nodes supported");
    }

    std::vector<double> cost(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cost[i * n + j] = circular_distance(est_nodes[i], true_nodes[j]);
        }
    }

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    NodeMatching best;
    best.total = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            total += cost[i * n + static_cast<std::size_t>(perm[i])];
        }
        if (total < best.total) {
            best.total = total;
            best.permutation = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (n == 0) {
        best.total = 0.0;
    }
    best.distances.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        best.distances[i] = cost[i * n + static_cast<std::size_t>(best.permutation[i])];
    }
    return best;
}

std::vector<Amplification> amplification_factors(const SpikeSignal& truth,
                                                 std::span<const double> est_nodes,
                                                 std::span<const Complex> est_amps, double eps,
                                                 double omega)
{
    if (!(eps > 0.0)) {
        throw std::invalid_argument("amplification_factors: eps must be positive");
    }
    if (est_amps.size() != est_nodes.size()) {
        throw std::invalid_argument("amplification_factors: node/amplitude length mismatch");
    }
    const NodeMatching match = match_nodes(truth.nodes(), est_nodes);
    const std::vector<int> est_of = match.inverse();
    std::vector<Amplification> out(truth.size());
    for (std::size_t j = 0; j < truth.size(); ++j) {
        const auto i = static_cast<std::size_t>(est_of[j]);
        out[j].k_x = omega * match.distances[i] / eps;
        out[j].k_alpha = std::abs(truth.amplitudes()[j] - est_amps[i]) / eps;
    }
    return out;
}

std::vector<bool> is_success(const SpikeSignal& truth, std::span<const double> est_nodes)
{
    const auto& x = truth.nodes();
    if (x.size() < 2) {
        throw std::invalid_argument("is_success: need at least two nodes");
    }
    const NodeMatching match = match_nodes(x, est_nodes);
    const std::vector<int> est_of = match.inverse();
    std::vector<bool> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < x.size(); ++s) {
            if (s != j) {
                nearest = std::min(nearest, circular_distance(x[j], x[s]));
            }
        }
        const double err = match.distances[static_cast<std::size_t>(est_of[j])];
        out[j] = err < nearest / 3.0;
    }
    return out;
}

LogLogFit fit_loglog_slope(std::span<const Point> points)
{
    if (points.size() < 3) {
        throw std::invalid_argument("fit_loglog_slope: need at least 3 points");
    }
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& p : points) {
        if (!(p.x > 0.0) || !(p.y > 0.0)) {
            throw std::invalid_argument("fit_loglog_slope: points must be positive");
        }
        mean_x += std::log10(p.x);
        mean_y += std::log10(p.y);
    }
    const auto count = static_cast<double>(points.size());
    mean_x /= count;
    mean_y /= count;

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& p : points) {
        const double dx = std::log10(p.x) - mean_x;
        const double dy = std::log10(p.y) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("fit_loglog_slope: degenerate x range");
    }
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    // A constant y is fitted exactly.
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::vector<Point> threshold_crossings(std::span<const ThresholdCell> grid)
{
    std::map<double, std::vector<ThresholdCell>> columns;
    for (const auto& cell : grid) {
        if (!(cell.delta > 0.0) || !(cell.eps > 0.0)) {
            throw std::invalid_argument("threshold_boundary: delta and eps must be positive");
        }
        columns[cell.delta].push_back(cell);
    }

    std::vector<Point> crossings;
    for (auto& [delta, cells] : columns) {
        std::sort(cells.begin(), cells.end(),
                  [](const ThresholdCell& a, const ThresholdCell& b) { return a.eps < b.eps; });
        for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
            const auto& lo = cells[i];
            const auto& hi = cells[i + 1];
            if (lo.success_rate >= 0.5 && hi.success_rate < 0.5) {
                const double frac = (lo.success_rate - 0.5) / (lo.success_rate - hi.success_rate);
                const double log_eps =
                    std::log10(lo.eps) + frac * (std::log10(hi.eps) - std::log10(lo.eps));
                crossings.push_back({delta, std::pow(10.0, log_eps)});
                break;
            }
        }
    }
    return crossings;
}

ThresholdBoundary threshold_boundary(std::span<const ThresholdCell> grid)
{
    ThresholdBoundary out;
    out.crossings = threshold_crossings(grid);
    if (out.crossings.size() < 3) {
        throw std::invalid_argument("threshold_boundary: only " +
                                    std::to_string(out.crossings.size()) +
                                    " columns cross the 50% success level");
    }
    const LogLogFit fit = fit_loglog_slope(out.crossings);
    out.slope = fit.slope;
    out.intercept = fit.intercept;
    return out;
}

} // namespace dprony
