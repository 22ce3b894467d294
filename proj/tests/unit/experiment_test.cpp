#include "dprony/analysis.hpp"
#include "dprony/experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace dprony;

namespace {

ExperimentSpec small_spec(Method method)
{
    ExperimentSpec spec;
    spec.kind = ExperimentKind::single_run;
    spec.methods = {method};
    spec.n = 3;
    spec.ell = 2;
    spec.deltas = {2e-2};
    spec.omegas = {method == Method::dpm ? 40.0 : 5.0};
    spec.epss = {1e-8};
    spec.trials = 1;
    spec.seed = 4;
    return spec;
}

std::vector<ResultRow> without_runtime(std::vector<ResultRow> rows)
{
    for (auto& r : rows)
        r.runtime_ns = 0;
    return rows;
}

} // namespace

TEST(Experiment, SingleRunGivesOneRowPerNode)
{
    for (auto m : {Method::prony, Method::dpm, Method::esprit}) {
        const auto table = run_experiment(small_spec(m));
        ASSERT_EQ(table.rows.size(), 3u) << to_string(m);
        int cluster = 0;
        for (const auto& r : table.rows) {
            EXPECT_EQ(r.method, to_string(m));
            EXPECT_EQ(r.status, "success") << to_string(m);
            EXPECT_TRUE(r.success);
            EXPECT_LT(r.abs_node_err, 1e-3) << to_string(m);
            cluster += r.in_cluster;
        }
        EXPECT_EQ(cluster, 2);
    }
}

TEST(Experiment, DerivedEpsAndSrf)
{
    auto spec = small_spec(Method::prony);
    spec.epss.clear();
    spec.eps_scale = 1e-2;
    const auto cells = experiment_cells(spec);
    ASSERT_EQ(cells.size(), 1u);
    EXPECT_NEAR(cells[0].eps, 1e-2 * std::pow(5.0 * 2e-2 / 5.0, 3), 1e-20);
    const auto rows = run_experiment(spec).rows;
    EXPECT_NEAR(rows[0].srf, 1.0 / (5.0 * 2e-2), 1e-12);
}

TEST(Experiment, DeterministicAndThreadIndependent)
{
    ExperimentSpec spec = default_spec(ExperimentKind::sweep_delta);
    spec.trials = 6;
    spec.deltas = {1e-2, 3e-2};
    spec.methods = {Method::prony, Method::esprit};
    spec.threads = 1;
    const auto serial = run_experiment(spec);
    spec.threads = 3;
    const auto parallel = run_experiment(spec);
    EXPECT_EQ(without_runtime(serial.rows), without_runtime(parallel.rows));
    EXPECT_EQ(serial.rows.size(), 2u * 6u * 2u * 3u);

    spec.seed += 1;
    EXPECT_NE(without_runtime(serial.rows), without_runtime(run_experiment(spec).rows));
}

TEST(Experiment, TrialSetupReproducible)
{
    const auto spec = default_spec(ExperimentKind::sweep_srf);
    const auto cells = experiment_cells(spec);
    const auto a = make_trial(spec, cells[2], 2, 7);
    const auto b = make_trial(spec, cells[2], 2, 7);
    EXPECT_EQ(a.signal.nodes(), b.signal.nodes());
    EXPECT_EQ(a.signal.amplitudes(), b.signal.amplitudes());
    EXPECT_EQ(a.noise_seed, b.noise_seed);
    const auto c = make_trial(spec, cells[2], 2, 8);
    EXPECT_NE(a.signal.amplitudes(), c.signal.amplitudes());
}

TEST(Experiment, NudgeKeepsNodesAwayFromBinEdges)
{
    ClusterConfig cfg;
    cfg.n = 3;
    cfg.ell = 3;
    cfg.delta = 1e-3;
    cfg.omega = 100.0;
    cfg.cluster_center = 0.0;
    const int bins = 3000;
    const double margin = nudge_center(cfg, bins);
    EXPECT_GT(margin, 0.4);
    const auto signal = make_clustered_signal(cfg);
    for (double x : signal.nodes()) {
        const double pos = (x + 0.5) * bins;
        EXPECT_GT(std::abs(pos - std::round(pos)), 0.4 - 1e-9);
    }
}

TEST(Experiment, ValidateRejectsBadSpecs)
{
    auto spec = small_spec(Method::prony);
    spec.ell = 4;
    EXPECT_THROW(spec.validate(), SpecError);
    spec = small_spec(Method::prony);
    spec.methods.clear();
    EXPECT_THROW(spec.validate(), SpecError);
    spec = small_spec(Method::esprit);
    spec.extended_precision = true;
    EXPECT_THROW(spec.validate(), SpecError);
    spec = small_spec(Method::prony);
    spec.trials = 0;
    EXPECT_THROW(spec.validate(), SpecError);
}

TEST(Experiment, ExtendedPrecisionPastRoundoff)
{
    auto spec = small_spec(Method::prony);
    spec.n = 3;
    spec.ell = 3;
    spec.deltas = {1e-3};
    spec.epss = {1e-22};
    spec.extended_precision = true;
    const auto rows = run_experiment(spec).rows;
    // Double samples alone would leave errors near 1e-16 / delta^4.
    for (const auto& r : rows)
        EXPECT_LT(r.abs_node_err, 1e-10);
}

TEST(Experiment, ParseNames)
{
    for (auto k : {ExperimentKind::sweep_delta, ExperimentKind::sweep_srf, ExperimentKind::threshold,
                   ExperimentKind::compare, ExperimentKind::collision_scan, ExperimentKind::single_run})
        EXPECT_EQ(parse_kind(to_string(k)), k);
    for (auto m : {Method::prony, Method::dpm, Method::esprit})
        EXPECT_EQ(parse_method(to_string(m)), m);
    EXPECT_FALSE(parse_method("music").has_value());
}

TEST(CollisionScan, Examples)
{
    const SpikeSignal pair({0.0, 0.5}, {1.0, 1.0});
    DecimationGrid grid{4.0, 1, 3, {1.0, 1.5, 2.0}};
    const auto rows = collision_scan(pair, grid);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_FALSE(rows[2].avoiding);
    EXPECT_NEAR(rows[2].delta_lambda, 0.0, 1e-12);

    // A single cluster is collision-avoiding at every grid point.
    ClusterConfig cfg;
    cfg.n = 3;
    cfg.ell = 3;
    cfg.delta = 1e-2;
    cfg.omega = 60.0;
    for (const auto& r : collision_scan(make_clustered_signal(cfg), decimation_grid(60.0, 3, 60)))
        EXPECT_TRUE(r.avoiding) << r.lambda;
}

TEST(Analysis, SweepAxisAndFit)
{
    auto spec = default_spec(ExperimentKind::sweep_delta);
    spec.trials = 10;
    const auto table = run_experiment(spec);
    EXPECT_EQ(sweep_axis(table), Axis::delta);
    const auto fit = cluster_scaling_fit(table, "prony", Quantity::k_x, Axis::delta);
    EXPECT_NEAR(fit.slope, -2.0, 0.3);
    EXPECT_EQ(median_by_x(cluster_points(table, "prony", Quantity::k_x, Axis::delta)).size(),
              spec.deltas.size());
    EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}
