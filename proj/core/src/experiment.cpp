#include "dprony/experiment.hpp"

#include "dprony/esprit.hpp"
#include "dprony/metrics.hpp"
#include "dprony/prony.hpp"
#include "dprony/prony_extended.hpp"
#include "dprony/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <thread>

#ifndef DPRONY_VERSION
#define DPRONY_VERSION "unknown"
#endif

namespace dprony {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> logspace(double lo, double hi, int count)
{
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double e = std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (count - 1);
        out[static_cast<std::size_t>(i)] = std::pow(10.0, e);
    }
    return out;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string_view noise_name(NoiseMode mode) noexcept
{
    return mode == NoiseMode::boundary ? "boundary" : "uniform-disk";
}

std::int64_t elapsed_ns(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                                start)
        .count();
}

// Salt separating the signal and noise streams of one child seed.
constexpr std::uint64_t noise_salt = 0x5851f42d4c957f2dULL;

} // namespace

std::string_view to_string(ExperimentKind kind) noexcept
{
    switch (kind) {
    case ExperimentKind::sweep_delta:
        return "sweep-delta";
    case ExperimentKind::sweep_srf:
        return "sweep-srf";
    case ExperimentKind::threshold:
        return "threshold";
    case ExperimentKind::compare:
        return "compare";
    case ExperimentKind::collision_scan:
        return "collision-scan";
    case ExperimentKind::single_run:
        return "single-run";
    }
    return "unknown";
}

std::string_view to_string(Method method) noexcept
{
    switch (method) {
    case Method::prony:
        return "prony";
    case Method::dpm:
        return "dpm";
    case Method::esprit:
        return "esprit";
    }
    return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view text) noexcept
{
    for (const auto kind :
         {ExperimentKind::sweep_delta, ExperimentKind::sweep_srf, ExperimentKind::threshold,
          ExperimentKind::compare, ExperimentKind::collision_scan, ExperimentKind::single_run}) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    if (text == "run") {
        return ExperimentKind::single_run;
    }
    return std::nullopt;
}

std::optional<Method> parse_method(std::string_view text) noexcept
{
    for (const auto m : {Method::prony, Method::dpm, Method::esprit}) {
        if (to_string(m) == text) {
            return m;
        }
    }
    return std::nullopt;
}

void ExperimentSpec::validate() const
{
    if (methods.empty()) {
        throw SpecError("at least one method is required");
    }
    if (n < 1 || ell < 1 || ell > n) {
        throw SpecError("need 1 <= ell <= n");
    }
    if (n > static_cast<int>(max_matching_size)) {
        throw SpecError("n is limited to " + std::to_string(max_matching_size));
    }
    if (trials < 1) {
        throw SpecError("trials must be >= 1");
    }
    if (deltas.empty() || omegas.empty()) {
        throw SpecError("delta and omega grids must be nonempty");
    }
    const auto positive = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
    };
    if (!positive(deltas) || !positive(omegas) || !positive(epss)) {
        throw SpecError("grid values must be positive and finite");
    }
    if (!(eps_scale > 0.0)) {
        throw SpecError("eps scale must be positive");
    }
    if (n_lambda < 0 || n_lambda == 1 || n_bins < 0 || threads < 0) {
        throw SpecError("n_lambda must be 0 or >= 2; n_bins and threads must be >= 0");
    }
    if (extended_precision &&
        std::any_of(methods.begin(), methods.end(), [](Method m) { return m != Method::prony; })) {
        throw SpecError("extended precision is only available for prony");
    }
    for (const double d : deltas) {
        if (!((ell - 1) * d < 0.8)) {
            throw SpecError("cluster of size ell does not fit for delta " + std::to_string(d));
        }
    }
}

ExperimentSpec default_spec(ExperimentKind kind)
{
    ExperimentSpec spec;
    spec.kind = kind;
    switch (kind) {
    case ExperimentKind::sweep_delta:
        spec.methods = {Method::prony};
        spec.deltas = logspace(1e-3, 1e-1, 8);
        spec.omegas = {5.0};
        spec.trials = 200;
        break;
    case ExperimentKind::sweep_srf:
        spec.methods = {Method::dpm};
        spec.deltas = {1e-4};
        spec.omegas = logspace(1e2, 1e3, 6);
        spec.n_lambda = 10;
        spec.trials = 50;
        break;
    case ExperimentKind::threshold:
        spec.methods = {Method::prony};
        spec.deltas = logspace(std::pow(10.0, -2.5), 1e-1, 7);
        spec.omegas = {5.0};
        spec.epss = logspace(1e-12, 1e-1, 23);
        spec.trials = 20;
        break;
    case ExperimentKind::compare:
        spec.methods = {Method::dpm, Method::esprit};
        spec.deltas = {std::pow(10.0, -2.8)};
        spec.omegas = {std::pow(10.0, 2.5)};
        spec.epss = logspace(std::pow(10.0, -3.5), 1e-2, 10);
        spec.n_lambda = 50;
        spec.trials = 50;
        break;
    case ExperimentKind::collision_scan:
        spec.methods = {Method::dpm};
        spec.n = 4;
        spec.ell = 2;
        spec.deltas = {5e-3};
        spec.omegas = {100.0};
        break;
    case ExperimentKind::single_run:
        break;
    }
    return spec;
}

std::vector<Cell> experiment_cells(const ExperimentSpec& spec)
{
    std::vector<Cell> cells;
    for (const double delta : spec.deltas) {
        for (const double omega : spec.omegas) {
            if (spec.epss.empty()) {
                const double scaled = omega * delta / (2 * spec.n - 1);
                cells.push_back({delta, omega, spec.eps_scale * std::pow(scaled, 2 * spec.ell - 1)});
            } else {
                for (const double eps : spec.epss) {
                    cells.push_back({delta, omega, eps});
                }
            }
        }
    }
    return cells;
}

double nudge_center(ClusterConfig& config, int n_bins)
{
    if (n_bins < 1) {
        throw std::invalid_argument("nudge_center: n_bins must be >= 1");
    }
    const double width = 1.0 / n_bins;
    const double base = config.cluster_center;
    const double span = (config.ell - 1) * config.delta;
    constexpr int steps = 64;

    double best_margin = -1.0;
    double best_center = base;
    for (int s = 0; s < steps; ++s) {
        ClusterConfig trial = config;
        trial.cluster_center = base + width * s / steps;
        if (trial.cluster_center + span > 0.5) {
            trial.cluster_center -= width;
        }
        if (trial.cluster_center < -0.5) {
            continue;
        }
        double margin = 0.5;
        try {
            const SpikeSignal signal = make_clustered_signal(trial);
            for (const double x : signal.nodes()) {
                const double pos = (x + 0.5) * n_bins;
                const double frac = pos - std::floor(pos);
                margin = std::min(margin, std::min(frac, 1.0 - frac));
            }
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (margin > best_margin) {
            best_margin = margin;
            best_center = trial.cluster_center;
        }
    }
    config.cluster_center = best_center;
    return best_margin;
}

TrialSetup make_trial(const ExperimentSpec& spec, const Cell& cell, std::size_t cell_index,
                      std::size_t trial_index)
{
    const std::uint64_t child = derive_seed(spec.seed, cell_index, trial_index);
    Rng rng(child);

    ClusterConfig config;
    config.n = spec.n;
    config.ell = spec.ell;
    config.delta = cell.delta;
    config.omega = cell.omega;
    config.seed = rng.next();
    const double span = (spec.ell - 1) * cell.delta;
    config.cluster_center = rng.uniform(-0.4, std::max(-0.4, 0.4 - span));

    const int n_bins = spec.n_bins > 0 ? spec.n_bins : default_n_bins(cell.delta);
    const bool uses_bins =
        std::find(spec.methods.begin(), spec.methods.end(), Method::dpm) != spec.methods.end();
    if (uses_bins) {
        nudge_center(config, n_bins);
    }

    SpikeSignal signal = make_clustered_signal(config);
    return TrialSetup{config, std::move(signal), cell.eps, child, mix64(child ^ noise_salt),
                      n_bins};
}

MethodRun run_method(Method method, const TrialSetup& trial, const ExperimentSpec& spec,
                     const Cell& cell)
{
    using clock = std::chrono::steady_clock;
    const int n = spec.n;
    MethodRun run;
    run.status = "success";

    switch (method) {
    case Method::prony: {
        if (spec.extended_precision) {
            const MomentSequence noise =
                add_noise(MomentSequence{1.0, std::vector<Complex>(2 * static_cast<std::size_t>(n)), 0.0},
                          trial.eps, spec.noise, trial.noise_seed);
            const auto start = clock::now();
            try {
                PronySolution sol = prony_extended(trial.signal, noise.values, n);
                run.runtime_ns = elapsed_ns(start);
                run.nodes = std::move(sol.wrapped_nodes);
                run.amplitudes = std::move(sol.amplitudes);
            } catch (const RootFindingError&) {
                run.runtime_ns = elapsed_ns(start);
                run.status = "prony-failure";
            }
            break;
        }
        const MomentSequence m = add_noise(sample_spectrum(trial.signal, 1.0, 2 * n), trial.eps,
                                           spec.noise, trial.noise_seed);
        const auto start = clock::now();
        try {
            PronySolution sol = prony(m, n);
            run.runtime_ns = elapsed_ns(start);
            run.nodes = std::move(sol.wrapped_nodes);
            run.amplitudes = std::move(sol.amplitudes);
        } catch (const RootFindingError&) {
            run.runtime_ns = elapsed_ns(start);
            run.status = "prony-failure";
        }
        break;
    }
    case Method::esprit: {
        const int m_samples = static_cast<int>(std::floor(cell.omega)) + 1;
        const MomentSequence m = add_noise(sample_spectrum(trial.signal, 1.0, m_samples),
                                           trial.eps, spec.noise, trial.noise_seed);
        const auto start = clock::now();
        try {
            EspritResult res = esprit(m.values, EspritConfig{m_samples, 0, n});
            run.runtime_ns = elapsed_ns(start);
            run.nodes = std::move(res.nodes);
            run.amplitudes = std::move(res.amplitudes);
        } catch (const RankCollapseError&) {
            run.runtime_ns = elapsed_ns(start);
            run.status = "rank-collapse";
        }
        break;
    }
    case Method::dpm: {
        run.n_lambda = spec.n_lambda > 0 ? spec.n_lambda : default_n_lambda(cell.omega);
        run.n_bins = trial.n_bins;
        const DecimationGrid grid = decimation_grid(cell.omega, n, run.n_lambda);
        std::vector<std::vector<Complex>> table;
        table.reserve(grid.lambdas.size());
        for (std::size_t i = 0; i < grid.lambdas.size(); ++i) {
            table.push_back(add_noise(sample_spectrum(trial.signal, grid.lambdas[i], 2 * n),
                                      trial.eps, spec.noise, mix64(trial.noise_seed + i))
                                .values);
        }
        const SampleProvider provider = [&](double lambda, int k) {
            const auto it = std::lower_bound(grid.lambdas.begin(), grid.lambdas.end(), lambda);
            if (it == grid.lambdas.end() || *it != lambda) {
                throw std::logic_error("dpm sample provider: lambda off the acquisition grid");
            }
            return table[static_cast<std::size_t>(it - grid.lambdas.begin())]
                        [static_cast<std::size_t>(k)];
        };
        const DpmParams params{cell.omega, n, run.n_lambda, run.n_bins, false};
        const auto start = clock::now();
        RecoveryResult res = decimated_prony(provider, params);
        run.runtime_ns = elapsed_ns(start);
        run.status = std::string(to_string(res.status));
        run.nodes = std::move(res.est_nodes);
        run.amplitudes = std::move(res.est_amplitudes);
        break;
    }
    }
    return run;
}

std::vector<ResultRow> score_trial(const TrialSetup& trial, const Cell& cell, Method method,
                                   const MethodRun& run, std::int64_t trial_id)
{
    const SpikeSignal& truth = trial.signal;
    const auto n = truth.size();
    std::vector<ResultRow> rows(n);
    const bool ok = run.status == "success" && run.nodes.size() == n;

    std::vector<int> est_of;
    NodeMatching match;
    std::vector<bool> success(n, ok);
    if (ok) {
        match = match_nodes(truth.nodes(), run.nodes);
        est_of = match.inverse();
        if (n >= 2) {
            const auto per_node = is_success(truth, run.nodes);
            for (std::size_t j = 0; j < n; ++j) {
                success[j] = per_node[j];
            }
        }
    }

    for (std::size_t j = 0; j < n; ++j) {
        ResultRow& r = rows[j];
        r.trial_id = trial_id;
        r.method = std::string(to_string(method));
        r.n = trial.config.n;
        r.ell = trial.config.ell;
        r.delta = cell.delta;
        r.omega = cell.omega;
        r.eps = cell.eps;
        r.srf = 1.0 / (cell.omega * cell.delta);
        r.n_lambda = run.n_lambda;
        r.n_bins = run.n_bins;
        r.node_index = static_cast<int>(j);
        r.in_cluster = is_cluster_node(trial.config, static_cast<int>(j));
        r.status = run.status;
        r.runtime_ns = run.runtime_ns;
        r.seed = trial.seed;
        r.success = success[j];
        if (ok) {
            const auto i = static_cast<std::size_t>(est_of[j]);
            r.abs_node_err = match.distances[i];
            r.abs_amp_err = std::abs(truth.amplitudes()[j] - run.amplitudes[i]);
        } else {
            r.abs_node_err = nan;
            r.abs_amp_err = nan;
        }
        if (cell.eps > 0.0) {
            r.k_x = cell.omega * r.abs_node_err / cell.eps;
            r.k_alpha = r.abs_amp_err / cell.eps;
        } else {
            r.k_x = nan;
            r.k_alpha = nan;
        }
    }
    return rows;
}

ResultTable run_experiment(const ExperimentSpec& spec)
{
    spec.validate();
    if (spec.kind == ExperimentKind::collision_scan) {
        throw SpecError("collision-scan produces a collision table, not a result table");
    }
    const std::vector<Cell> cells = experiment_cells(spec);
    const std::size_t trials = static_cast<std::size_t>(spec.trials);
    const std::size_t tasks = cells.size() * trials;

    std::vector<std::vector<ResultRow>> per_task(tasks);
    const auto run_task = [&](std::size_t task) {
        const std::size_t c = task / trials;
        const std::size_t t = task % trials;
        const TrialSetup setup = make_trial(spec, cells[c], c, t);
        auto& out = per_task[task];
        for (const Method method : spec.methods) {
            const MethodRun run = run_method(method, setup, spec, cells[c]);
            auto rows = score_trial(setup, cells[c], method, run, static_cast<std::int64_t>(task));
            out.insert(out.end(), rows.begin(), rows.end());
        }
    };

    unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));
    if (workers <= 1) {
        for (std::size_t task = 0; task < tasks; ++task) {
            run_task(task);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t task = next++; task < tasks; task = next++) {
                    run_task(task);
                }
            });
        }
    }

    ResultTable table;
    table.metadata = {spec_to_json(spec), std::string(library_version()), utc_timestamp()};
    for (auto& rows : per_task) {
        table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
    return table;
}

std::vector<CollisionRow> collision_scan(const SpikeSignal& signal, const DecimationGrid& grid)
{
    const auto n = static_cast<double>(signal.size());
    std::vector<CollisionRow> rows;
    rows.reserve(grid.lambdas.size());
    for (const double lambda : grid.lambdas) {
        const double sep = wrapped_separation(signal, lambda);
        rows.push_back({lambda, sep, sep > 1.0 / (n * n)});
    }
    return rows;
}

std::string spec_to_json(const ExperimentSpec& spec)
{
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    std::vector<std::string> methods;
    for (const auto m : spec.methods) {
        methods.emplace_back(to_string(m));
    }
    j["methods"] = methods;
    j["n"] = spec.n;
    j["ell"] = spec.ell;
    j["deltas"] = spec.deltas;
    j["omegas"] = spec.omegas;
    j["epss"] = spec.epss;
    j["eps_scale"] = spec.eps_scale;
    j["trials"] = spec.trials;
    j["seed"] = spec.seed;
    j["n_lambda"] = spec.n_lambda;
    j["n_bins"] = spec.n_bins;
    j["noise"] = noise_name(spec.noise);
    j["extended_precision"] = spec.extended_precision;
    return j.dump();
}

std::string_view library_version() noexcept
{
    return DPRONY_VERSION;
}

} // namespace dprony
