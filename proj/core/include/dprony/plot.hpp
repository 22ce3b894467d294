#ifndef DPRONY_PLOT_HPP
#define DPRONY_PLOT_HPP

#include "dprony/experiment.hpp"
#include "dprony/metrics.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dprony {

enum class PlotKind
{
    loglog_scatter,
    threshold_map,
};

std::string_view to_string(PlotKind kind) noexcept;
std::optional<PlotKind> parse_plot_kind(std::string_view text) noexcept;

/// The table cannot be drawn as the requested kind.
class PlotError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Text placed next to a fitted line, e.g. "slope = 2.013 (R^2 = 0.998)".
std::string slope_annotation(const LogLogFit& fit);

/// Standalone SVG document.
///
/// loglog-scatter: one panel per amplification factor (absolute errors when
/// the table only varies in eps), cluster maxima and singleton errors per
/// method, and the fitted slope of the cluster medians.
/// threshold-map: cluster success rate over the (delta, eps) grid of the first
/// method, with the 50% boundary drawn as a polyline of class "boundary".
std::string render_svg(const ResultTable& table, PlotKind kind);

/// Writes render_svg to `path`, creating parent directories.
void plot(const ResultTable& table, PlotKind kind, const std::filesystem::path& path);

} // namespace dprony

#endif // DPRONY_PLOT_HPP
