#include "dprony/analysis.hpp"
#include "dprony/plot.hpp"
#include "dprony/table_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace dprony;
namespace fs = std::filesystem;

namespace {

ResultRow sample_row(int i)
{
    ResultRow r;
    r.trial_id = i;
    r.method = "dpm";
    r.n = 3;
    r.ell = 2;
    r.delta = 1e-2 / 3;
    r.omega = 316.22776601683796;
    r.eps = 1e-7;
    r.srf = 1.0 / (r.delta * r.omega);
    r.n_lambda = 50;
    r.n_bins = 900;
    r.node_index = i % 3;
    r.in_cluster = i % 3 < 2;
    r.abs_node_err = 1.2345678901234567e-9;
    r.abs_amp_err = 0.1 + i;
    r.k_x = i == 1 ? std::nan("") : 3.5;
    r.k_alpha = 2.25;
    r.success = i != 2;
    r.status = i == 2 ? "empty-collision-set" : "success";
    r.runtime_ns = 123456789 + i;
    r.seed = 0xfedcba9876543210ULL;
    return r;
}

bool same_rows(const std::vector<ResultRow>& a, const std::vector<ResultRow>& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto x = a[i], y = b[i];
        if (std::isnan(x.k_x) && std::isnan(y.k_x))
            x.k_x = y.k_x = 0;
        if (!(x == y))
            return false;
    }
    return true;
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "dprony_unit";
    fs::create_directories(dir);
    return dir / name;
}

int count_lines(const std::string& s)
{
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST(TableIo, EmptyTableIsHeaderOnly)
{
    std::ostringstream out;
    write_csv(ResultTable{}, out);
    EXPECT_EQ(count_lines(out.str()), 1);
    EXPECT_EQ(out.str().rfind("trial_id,method,", 0), 0u);
}

TEST(TableIo, OneRowTwoLines)
{
    ResultTable t;
    t.rows = {sample_row(0)};
    std::ostringstream out;
    write_csv(t, out);
    EXPECT_EQ(count_lines(out.str()), 2);
}

TEST(TableIo, RoundTrips)
{
    ResultTable t;
    for (int i = 0; i < 4; ++i)
        t.rows.push_back(sample_row(i));
    {
        std::stringstream s;
        write_jsonl(t, s);
        EXPECT_TRUE(same_rows(read_jsonl(s).rows, t.rows));
    }
    {
        std::stringstream s;
        write_csv(t, s);
        EXPECT_TRUE(same_rows(read_csv(s).rows, t.rows));
    }
}

TEST(TableIo, EmitWritesSidecar)
{
    ResultTable t;
    t.metadata = {"{\"kind\":\"run\"}", "0.1.0", "2026-01-01T00:00:00Z"};
    t.rows = {sample_row(0), sample_row(1)};
    const auto path = scratch("emit.jsonl");
    emit(t, TableFormat::jsonl, path);
    EXPECT_TRUE(fs::exists(path.string() + ".meta.json"));
    const auto back = load_table(path);
    EXPECT_TRUE(same_rows(back.rows, t.rows));
    EXPECT_EQ(back.metadata.version, "0.1.0");
}

TEST(TableIo, MissingFileIsIoError)
{
    EXPECT_THROW(load_table(scratch("does-not-exist.csv")), IoError);
    EXPECT_FALSE(parse_format("xml").has_value());
}

TEST(Plot, EmptyTableIsError)
{
    EXPECT_THROW(render_svg(ResultTable{}, PlotKind::loglog_scatter), PlotError);
    EXPECT_THROW(plot(ResultTable{}, PlotKind::threshold_map, scratch("empty.svg")), PlotError);
}

TEST(Plot, SweepAnnotationMatchesFit)
{
    auto spec = default_spec(ExperimentKind::sweep_delta);
    spec.trials = 5;
    const auto table = run_experiment(spec);
    const auto path = scratch("sweep.svg");
    plot(table, PlotKind::loglog_scatter, path);
    ASSERT_TRUE(fs::exists(path));
    EXPECT_GT(fs::file_size(path), 0u);
    std::ifstream in(path);
    const std::string svg((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto fit = cluster_scaling_fit(table, "prony", Quantity::k_x, Axis::delta);
    EXPECT_NE(svg.find(slope_annotation(fit)), std::string::npos);
}

TEST(Plot, BoundaryHasOneVertexPerCrossing)
{
    auto spec = default_spec(ExperimentKind::threshold);
    spec.trials = 4;
    const auto table = run_experiment(spec);
    const auto svg = render_svg(table, PlotKind::threshold_map);
    const std::regex poly("<polyline class=\"boundary\"[^>]* points=\"([^\"]*)\"");
    std::smatch m;
    ASSERT_TRUE(std::regex_search(svg, m, poly));
    std::istringstream pts(m[1].str());
    std::size_t vertices = 0;
    for (std::string p; pts >> p;)
        ++vertices;
    EXPECT_EQ(vertices, threshold_crossings(cluster_success_cells(table, "prony")).size());
    EXPECT_GE(vertices, 3u);
}

TEST(Plot, SlopeAnnotationFormat)
{
    EXPECT_EQ(slope_annotation({2.0134, 0.0, 0.9981}), "slope = 2.013 (R^2 = 0.998)");
    EXPECT_EQ(parse_plot_kind("threshold-map"), PlotKind::threshold_map);
}
