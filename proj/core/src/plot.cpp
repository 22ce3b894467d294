#include "dprony/plot.hpp"

#include "dprony/analysis.hpp"
#include "dprony/table_io.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

namespace dprony {

namespace {

constexpr std::array<const char*, 3> palette = {"#1f77b4", "#d62728", "#2ca02c"};

std::string fmt(const char* pattern, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string px(double v)
{
    return fmt("%.2f", v);
}

std::string escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

// Maps log10 of a positive value range onto pixels.
struct LogScale
{
    double lo = 0.0;
    double hi = 1.0;
    double p0 = 0.0;
    double p1 = 1.0;

    static LogScale fit(double vmin, double vmax, double p0, double p1)
    {
        double lo = std::floor(std::log10(vmin));
        double hi = std::ceil(std::log10(vmax));
        if (hi <= lo) {
            hi = lo + 1.0;
        }
        return {lo, hi, p0, p1};
    }

    double operator()(double v) const
    {
        return p0 + (std::log10(v) - lo) / (hi - lo) * (p1 - p0);
    }
};

struct Frame
{
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
};

void axes(std::ostringstream& svg, const Frame& f, const LogScale& sx, const LogScale& sy,
          std::string_view xlabel, std::string_view ylabel)
{
    svg << "<rect x=\"" << px(f.x) << "\" y=\"" << px(f.y) << "\" width=\"" << px(f.w)
        << "\" height=\"" << px(f.h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double e = sx.lo; e <= sx.hi + 0.5; e += 1.0) {
        const double x = sx(std::pow(10.0, e));
        svg << "<line x1=\"" << px(x) << "\" y1=\"" << px(f.y + f.h) << "\" x2=\"" << px(x)
            << "\" y2=\"" << px(f.y + f.h + 5) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(x) << "\" y=\"" << px(f.y + f.h + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">1e" << static_cast<int>(e)
            << "</text>\n";
    }
    for (double e = sy.lo; e <= sy.hi + 0.5; e += 1.0) {
        const double y = sy(std::pow(10.0, e));
        svg << "<line x1=\"" << px(f.x - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(f.x)
            << "\" y2=\"" << px(y) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px(f.x - 8) << "\" y=\"" << px(y + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">1e" << static_cast<int>(e) << "</text>\n";
    }
    svg << "<text x=\"" << px(f.x + f.w / 2) << "\" y=\"" << px(f.y + f.h + 36)
        << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
    svg << "<text x=\"" << px(f.x - 48) << "\" y=\"" << px(f.y + f.h / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 " << px(f.x - 48)
        << ' ' << px(f.y + f.h / 2) << ")\">" << escape(ylabel) << "</text>\n";
}

std::vector<std::string> methods_of(const ResultTable& table)
{
    std::vector<std::string> out;
    for (const auto& r : table.rows) {
        if (std::find(out.begin(), out.end(), r.method) == out.end()) {
            out.push_back(r.method);
        }
    }
    return out;
}

std::string_view axis_label(Axis axis)
{
    switch (axis) {
    case Axis::delta:
        return "delta";
    case Axis::srf:
        return "SRF";
    case Axis::eps:
        return "eps";
    }
    return "";
}

std::string render_loglog(const ResultTable& table)
{
    const Axis axis = sweep_axis(table);
    std::set<double> xs;
    for (const auto& r : table.rows) {
        xs.insert(axis == Axis::delta ? r.delta : axis == Axis::srf ? r.srf : r.eps);
    }
    if (xs.size() < 3) {
        throw PlotError("loglog-scatter needs a table sweeping at least 3 values of delta, SRF "
                        "or eps");
    }
    const auto methods = methods_of(table);

    struct Panel
    {
        Quantity q;
        const char* label;
    };
    const std::array<Panel, 2> panels =
        axis == Axis::eps ? std::array<Panel, 2>{{{Quantity::abs_node_err, "|x - x~|"},
                                                  {Quantity::abs_amp_err, "|alpha - alpha~|"}}}
                          : std::array<Panel, 2>{{{Quantity::k_x, "K_x"},
                                                  {Quantity::k_alpha, "K_alpha"}}};

    const double width = 960.0;
    const double height = 440.0;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    bool any_point = false;
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const Frame frame{80.0 + static_cast<double>(p) * 470.0, 30.0, 370.0, 330.0};

        std::vector<std::vector<Point>> cluster(methods.size());
        std::vector<std::vector<Point>> single(methods.size());
        double ymin = std::numeric_limits<double>::infinity();
        double ymax = 0.0;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            cluster[m] = cluster_points(table, methods[m], panels[p].q, axis);
            single[m] = singleton_points(table, methods[m], panels[p].q, axis);
            for (const auto* set : {&cluster[m], &single[m]}) {
                for (const auto& pt : *set) {
                    if (pt.y > 0.0) {
                        ymin = std::min(ymin, pt.y);
                        ymax = std::max(ymax, pt.y);
                    }
                }
            }
        }
        if (!(ymax > 0.0)) {
            ymin = 1.0;
            ymax = 10.0;
        } else {
            any_point = true;
        }
        const LogScale sx = LogScale::fit(*xs.begin(), *xs.rbegin(), frame.x, frame.x + frame.w);
        const LogScale sy = LogScale::fit(ymin, ymax, frame.y + frame.h, frame.y);
        axes(svg, frame, sx, sy, axis_label(axis), panels[p].label);

        for (std::size_t m = 0; m < methods.size(); ++m) {
            const char* color = palette[m % palette.size()];
            for (const auto& pt : single[m]) {
                if (pt.y > 0.0) {
                    svg << "<rect class=\"singleton\" x=\"" << px(sx(pt.x) - 2) << "\" y=\""
                        << px(sy(pt.y) - 2) << "\" width=\"4\" height=\"4\" fill=\"none\" "
                        << "stroke=\"" << color << "\" opacity=\"0.4\"/>\n";
                }
            }
            for (const auto& pt : cluster[m]) {
                if (pt.y > 0.0) {
                    svg << "<circle class=\"cluster\" cx=\"" << px(sx(pt.x)) << "\" cy=\""
                        << px(sy(pt.y)) << "\" r=\"2.5\" fill=\"" << color
                        << "\" opacity=\"0.5\"/>\n";
                }
            }

            std::string note = methods[m] + ": ";
            std::vector<Point> medians;
            for (const auto& pt : median_by_x(cluster[m])) {
                if (pt.y > 0.0) {
                    medians.push_back(pt);
                }
            }
            try {
                const LogLogFit fit = fit_loglog_slope(medians);
                const double x0 = medians.front().x;
                const double x1 = medians.back().x;
                const auto line_y = [&](double x) {
                    return sy(std::pow(10.0, fit.intercept + fit.slope * std::log10(x)));
                };
                svg << "<line class=\"fit\" x1=\"" << px(sx(x0)) << "\" y1=\"" << px(line_y(x0))
                    << "\" x2=\"" << px(sx(x1)) << "\" y2=\"" << px(line_y(x1)) << "\" stroke=\""
                    << color << "\" stroke-width=\"2\"/>\n";
                note += slope_annotation(fit);
            } catch (const std::invalid_argument&) {
                note += "no fit";
            }
            svg << "<text class=\"annotation\" x=\"" << px(frame.x + 8) << "\" y=\""
                << px(frame.y + 16 + 16 * static_cast<double>(m)) << "\" font-size=\"12\" fill=\""
                << color << "\">" << escape(note) << "</text>\n";
        }
    }
    if (!any_point) {
        throw PlotError("loglog-scatter: no successful trials to draw");
    }
    svg << "</svg>\n";
    return svg.str();
}

// Success rate 0 -> light, 1 -> dark blue.
std::string shade(double rate)
{
    const auto c = [&](double lo, double hi) {
        return static_cast<int>(std::lround(lo + (hi - lo) * std::clamp(rate, 0.0, 1.0)));
    };
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c(247, 8), c(251, 48), c(255, 107));
    return buf;
}

std::string render_threshold(const ResultTable& table)
{
    const auto methods = methods_of(table);
    const auto cells = cluster_success_cells(table, methods.front());
    std::set<double> deltas;
    std::set<double> epss;
    for (const auto& c : cells) {
        deltas.insert(c.delta);
        epss.insert(c.eps);
    }
    if (deltas.size() < 2 || epss.size() < 2 || !(*epss.begin() > 0.0)) {
        throw PlotError("threshold-map needs a grid with at least 2 delta and 2 positive eps "
                        "values");
    }
    const std::vector<double> dv(deltas.begin(), deltas.end());
    const std::vector<double> ev(epss.begin(), epss.end());
    // Cell edges at geometric midpoints.
    const auto edges = [](const std::vector<double>& v) {
        std::vector<double> e(v.size() + 1);
        for (std::size_t i = 1; i < v.size(); ++i) {
            e[i] = std::sqrt(v[i - 1] * v[i]);
        }
        e.front() = v.front() * v.front() / e[1];
        e.back() = v.back() * v.back() / e[v.size() - 1];
        return e;
    };
    const auto de = edges(dv);
    const auto ee = edges(ev);

    const double width = 620.0;
    const double height = 500.0;
    const Frame frame{90.0, 30.0, 420.0, 400.0};
    const LogScale sx = LogScale::fit(de.front(), de.back(), frame.x, frame.x + frame.w);
    const LogScale sy = LogScale::fit(ee.front(), ee.back(), frame.y + frame.h, frame.y);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& c : cells) {
        const auto i = static_cast<std::size_t>(
            std::lower_bound(dv.begin(), dv.end(), c.delta) - dv.begin());
        const auto j = static_cast<std::size_t>(
            std::lower_bound(ev.begin(), ev.end(), c.eps) - ev.begin());
        const double x0 = sx(de[i]);
        const double x1 = sx(de[i + 1]);
        const double y0 = sy(ee[j + 1]);
        const double y1 = sy(ee[j]);
        svg << "<rect class=\"cell\" x=\"" << px(x0) << "\" y=\"" << px(y0) << "\" width=\""
            << px(x1 - x0) << "\" height=\"" << px(y1 - y0) << "\" fill=\"" << shade(c.success_rate)
            << "\"><title>" << fmt("%.3g", c.success_rate) << "</title></rect>\n";
    }
    axes(svg, frame, sx, sy, "delta", "eps");

    const auto crossings = threshold_crossings(cells);
    svg << "<polyline class=\"boundary\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2.5\" "
        << "points=\"";
    for (std::size_t k = 0; k < crossings.size(); ++k) {
        svg << (k ? " " : "") << px(sx(crossings[k].x)) << ',' << px(sy(crossings[k].y));
    }
    svg << "\"/>\n";

    std::string note = methods.front() + ": ";
    if (crossings.size() >= 3) {
        note += slope_annotation(fit_loglog_slope(crossings));
    } else {
        note += std::to_string(crossings.size()) + " crossings";
    }
    svg << "<text class=\"annotation\" x=\"" << px(frame.x + 8) << "\" y=\"" << px(frame.y + 16)
        << "\" font-size=\"12\" fill=\"#ff7f0e\">" << escape(note) << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

} // namespace

std::string_view to_string(PlotKind kind) noexcept
{
    return kind == PlotKind::loglog_scatter ? "loglog-scatter" : "threshold-map";
}

std::optional<PlotKind> parse_plot_kind(std::string_view text) noexcept
{
    for (auto kind : {PlotKind::loglog_scatter, PlotKind::threshold_map}) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string slope_annotation(const LogLogFit& fit)
{
    return fmt("slope = %.3f", fit.slope) + fmt(" (R^2 = %.3f)", fit.r2);
}

std::string render_svg(const ResultTable& table, PlotKind kind)
{
    if (table.rows.empty()) {
        throw PlotError("cannot plot an empty table");
    }
    return kind == PlotKind::loglog_scatter ? render_loglog(table) : render_threshold(table);
}

void plot(const ResultTable& table, PlotKind kind, const std::filesystem::path& path)
{
    const std::string svg = render_svg(table, kind);
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
    }
    out << svg;
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

} // namespace dprony
