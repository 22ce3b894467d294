#include "dprony/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace dprony {

namespace {

double value_of(const ResultRow& r, Quantity q) noexcept
{
    switch (q) {
    case Quantity::k_x:
        return r.k_x;
    case Quantity::k_alpha:
        return r.k_alpha;
    case Quantity::abs_node_err:
        return r.abs_node_err;
    case Quantity::abs_amp_err:
        return r.abs_amp_err;
    }
    return r.k_x;
}

double axis_of(const ResultRow& r, Axis axis) noexcept
{
    switch (axis) {
    case Axis::delta:
        return r.delta;
    case Axis::srf:
        return r.srf;
    case Axis::eps:
        return r.eps;
    }
    return r.delta;
}

} // namespace

double median(std::vector<double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("median: empty input");
    }
    const auto mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

Axis sweep_axis(const ResultTable& table)
{
    std::set<double> deltas;
    std::set<double> srfs;
    for (const auto& r : table.rows) {
        deltas.insert(r.delta);
        srfs.insert(r.srf);
    }
    if (deltas.size() > 1) {
        return Axis::delta;
    }
    return srfs.size() > 1 ? Axis::srf : Axis::eps;
}

std::vector<Point> cluster_points(const ResultTable& table, std::string_view method, Quantity q,
                                  Axis axis)
{
    // trial id -> (x, max over cluster nodes)
    std::map<std::int64_t, std::pair<double, double>> per_trial;
    for (const auto& r : table.rows) {
        if (r.method != method || !r.in_cluster || r.status != "success") {
            continue;
        }
        const double v = value_of(r, q);
        if (!std::isfinite(v)) {
            continue;
        }
        auto [it, inserted] = per_trial.try_emplace(r.trial_id, axis_of(r, axis), v);
        if (!inserted) {
            it->second.second = std::max(it->second.second, v);
        }
    }
    std::vector<Point> out;
    out.reserve(per_trial.size());
    for (const auto& [id, xy] : per_trial) {
        out.push_back({xy.first, xy.second});
    }
    return out;
}

std::vector<Point> singleton_points(const ResultTable& table, std::string_view method,
                                    Quantity q, Axis axis)
{
    std::vector<Point> out;
    for (const auto& r : table.rows) {
        if (r.method == method && !r.in_cluster && r.status == "success") {
            const double v = value_of(r, q);
            if (std::isfinite(v)) {
                out.push_back({axis_of(r, axis), v});
            }
        }
    }
    return out;
}

std::vector<Point> median_by_x(std::span<const Point> points)
{
    std::map<double, std::vector<double>> groups;
    for (const auto& p : points) {
        groups[p.x].push_back(p.y);
    }
    std::vector<Point> out;
    out.reserve(groups.size());
    for (auto& [x, ys] : groups) {
        out.push_back({x, median(std::move(ys))});
    }
    return out;
}

LogLogFit cluster_scaling_fit(const ResultTable& table, std::string_view method, Quantity q,
                              Axis axis)
{
    const auto points = cluster_points(table, method, q, axis);
    const auto medians = median_by_x(points);
    return fit_loglog_slope(medians);
}

std::vector<ThresholdCell> cluster_success_cells(const ResultTable& table,
                                                 std::string_view method)
{
    // trial id -> (delta, eps, all cluster nodes recovered)
    std::map<std::int64_t, std::tuple<double, double, bool>> trials;
    for (const auto& r : table.rows) {
        if (r.method != method || !r.in_cluster) {
            continue;
        }
        auto [it, inserted] = trials.try_emplace(r.trial_id, r.delta, r.eps, r.success);
        if (!inserted) {
            std::get<2>(it->second) = std::get<2>(it->second) && r.success;
        }
    }
    std::map<std::pair<double, double>, std::pair<int, int>> cells;
    for (const auto& [id, t] : trials) {
        auto& [hits, total] = cells[{std::get<0>(t), std::get<1>(t)}];
        hits += std::get<2>(t) ? 1 : 0;
        ++total;
    }
    std::vector<ThresholdCell> out;
    out.reserve(cells.size());
    for (const auto& [key, counts] : cells) {
        out.push_back({key.first, key.second,
                       static_cast<double>(counts.first) / static_cast<double>(counts.second)});
    }
    return out;
}

} // namespace dprony
