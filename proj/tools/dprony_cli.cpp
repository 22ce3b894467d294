// Command-line driver: one subcommand per experiment kind.

#include "dprony/analysis.hpp"
#include "dprony/decimated.hpp"
#include "dprony/experiment.hpp"
#include "dprony/plot.hpp"
#include "dprony/table_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int exit_invalid_spec = 1;
constexpr int exit_io_error = 2;

// "a,b,c" or "log:lo:hi:count".
std::vector<double> parse_grid(const std::string& text, const char* flag)
{
    std::vector<double> out;
    const auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) {
            throw dprony::SpecError(std::string(flag) + ": bad number '" + s + "'");
        }
        return v;
    };
    if (text.rfind("log:", 0) == 0) {
        std::vector<std::string> parts;
        std::size_t start = 4;
        for (std::size_t pos; (pos = text.find(':', start)) != std::string::npos; start = pos + 1) {
            parts.push_back(text.substr(start, pos - start));
        }
        parts.push_back(text.substr(start));
        if (parts.size() != 3) {
            throw dprony::SpecError(std::string(flag) + ": expected log:lo:hi:count");
        }
        const double lo = number(parts[0]);
        const double hi = number(parts[1]);
        const double count = number(parts[2]);
        if (!(lo > 0.0) || !(hi > 0.0) || count < 1 || count != std::floor(count)) {
            throw dprony::SpecError(std::string(flag) + ": bad log range");
        }
        const int k = static_cast<int>(count);
        for (int i = 0; i < k; ++i) {
            const double t = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
            out.push_back(std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo))));
        }
        return out;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = std::min(text.find(',', start), text.size());
        out.push_back(number(text.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::vector<dprony::Method> parse_methods(const std::string& text)
{
    std::vector<dprony::Method> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = std::min(text.find(',', start), text.size());
        const std::string name = text.substr(start, pos - start);
        const auto m = dprony::parse_method(name);
        if (!m) {
            throw dprony::SpecError("--method: unknown method '" + name + "'");
        }
        out.push_back(*m);
        start = pos + 1;
    }
    return out;
}

struct Options
{
    int n = 0;
    int ell = 0;
    std::string delta;
    std::string omega;
    std::string eps;
    double eps_scale = 0.0;
    int trials = 0;
    int n_lambda = 0;
    int n_bins = 0;
    std::uint64_t seed = 0;
    std::string method;
    std::string out;
    std::string format = "csv";
    std::string plot;
    int threads = 0;
    bool extended = false;
};

struct Flags
{
    CLI::Option* n;
    CLI::Option* ell;
    CLI::Option* eps_scale;
    CLI::Option* trials;
    CLI::Option* n_lambda;
    CLI::Option* n_bins;
};

Flags add_flags(CLI::App& cmd, Options& o)
{
    Flags f{};
    f.n = cmd.add_option("--n", o.n, "Number of nodes");
    f.ell = cmd.add_option("--ell", o.ell, "Cluster size");
    cmd.add_option("--delta", o.delta, "Cluster spacing grid: a,b,c or log:lo:hi:count");
    cmd.add_option("--omega", o.omega, "Bandwidth grid");
    cmd.add_option("--eps", o.eps, "Noise level grid (default: derived from delta)");
    f.eps_scale = cmd.add_option("--eps-scale", o.eps_scale, "Constant of the derived noise level");
    f.trials = cmd.add_option("--trials", o.trials, "Trials per grid cell");
    f.n_lambda = cmd.add_option("--nlambda", o.n_lambda, "Decimation grid size (0: default)");
    f.n_bins = cmd.add_option("--nbins", o.n_bins, "Histogram bins (0: default)");
    cmd.add_option("--seed", o.seed, "Master seed")->default_val(0);
    cmd.add_option("--method", o.method, "Comma-separated methods: prony, dpm, esprit");
    cmd.add_option("--out", o.out, "Output path (default: out/<kind>.<format>)");
    cmd.add_option("--format", o.format, "csv or jsonl")->default_val("csv");
    cmd.add_option("--plot", o.plot, "Also write an SVG plot to this path");
    cmd.add_option("--threads", o.threads, "Worker threads (0: all cores)")->default_val(0);
    cmd.add_flag("--extended", o.extended, "Prony in 113-bit arithmetic");
    return f;
}

dprony::ExperimentSpec build_spec(dprony::ExperimentKind kind, const Options& o, const Flags& f)
{
    dprony::ExperimentSpec spec = dprony::default_spec(kind);
    if (f.n->count()) {
        spec.n = o.n;
    }
    if (f.ell->count()) {
        spec.ell = o.ell;
    }
    if (!o.delta.empty()) {
        spec.deltas = parse_grid(o.delta, "--delta");
    }
    if (!o.omega.empty()) {
        spec.omegas = parse_grid(o.omega, "--omega");
    }
    if (!o.eps.empty()) {
        spec.epss = parse_grid(o.eps, "--eps");
    }
    if (f.eps_scale->count()) {
        spec.eps_scale = o.eps_scale;
    }
    if (f.trials->count()) {
        spec.trials = o.trials;
    }
    if (f.n_lambda->count()) {
        spec.n_lambda = o.n_lambda;
    }
    if (f.n_bins->count()) {
        spec.n_bins = o.n_bins;
    }
    if (!o.method.empty()) {
        spec.methods = parse_methods(o.method);
    }
    spec.seed = o.seed;
    spec.threads = o.threads;
    spec.extended_precision = o.extended;
    spec.validate();
    return spec;
}

int run_collision_scan(const dprony::ExperimentSpec& spec, dprony::TableFormat format,
                       const std::string& out)
{
    if (spec.n < 2) {
        throw dprony::SpecError("collision-scan needs n >= 2");
    }
    std::vector<dprony::CollisionRow> rows;
    const auto cells = dprony::experiment_cells(spec);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const int n_lambda = spec.n_lambda > 0 ? spec.n_lambda
                                               : static_cast<int>(std::ceil(cells[c].omega));
        const auto grid = dprony::decimation_grid(cells[c].omega, spec.n, n_lambda);
        for (int t = 0; t < spec.trials; ++t) {
            const auto trial = dprony::make_trial(spec, cells[c], c, static_cast<std::size_t>(t));
            const auto part = dprony::collision_scan(trial.signal, grid);
            rows.insert(rows.end(), part.begin(), part.end());
        }
    }
    dprony::emit_collision(rows, format, out);
    std::size_t avoiding = 0;
    for (const auto& r : rows) {
        avoiding += r.avoiding ? 1 : 0;
    }
    std::printf("%zu lambdas, %.1f%% collision-avoiding -> %s\n", rows.size(),
                rows.empty() ? 0.0 : 100.0 * static_cast<double>(avoiding) / rows.size(),
                out.c_str());
    return 0;
}

void print_summary(const dprony::ResultTable& table, const dprony::ExperimentSpec& spec)
{
    std::size_t ok = 0;
    for (const auto& r : table.rows) {
        ok += r.status == "success" ? 1 : 0;
    }
    std::printf("%zu rows, %zu from successful runs\n", table.rows.size(), ok);
    if (spec.kind != dprony::ExperimentKind::sweep_delta &&
        spec.kind != dprony::ExperimentKind::sweep_srf) {
        return;
    }
    const auto axis = dprony::sweep_axis(table);
    for (const auto m : spec.methods) {
        const std::string name(dprony::to_string(m));
        try {
            const auto kx = dprony::cluster_scaling_fit(table, name, dprony::Quantity::k_x, axis);
            const auto ka =
                dprony::cluster_scaling_fit(table, name, dprony::Quantity::k_alpha, axis);
            std::printf("%s: K_x %s; K_alpha %s\n", name.c_str(),
                        dprony::slope_annotation(kx).c_str(), dprony::slope_annotation(ka).c_str());
        } catch (const std::invalid_argument& e) {
            std::printf("%s: no slope fit (%s)\n", name.c_str(), e.what());
        }
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Clustered spectral super-resolution experiments"};
    app.require_subcommand(1);

    struct Sub
    {
        const char* name;
        dprony::ExperimentKind kind;
        const char* help;
    };
    const Sub subs[] = {
        {"sweep-delta", dprony::ExperimentKind::sweep_delta, "Error amplification vs delta"},
        {"sweep-srf", dprony::ExperimentKind::sweep_srf, "Error amplification vs SRF"},
        {"threshold", dprony::ExperimentKind::threshold, "Success rate over a delta x eps grid"},
        {"compare", dprony::ExperimentKind::compare, "Accuracy and runtime of several methods"},
        {"collision-scan", dprony::ExperimentKind::collision_scan,
         "Wrapped separation over the decimation grid"},
        {"run", dprony::ExperimentKind::single_run, "Single configuration"},
    };

    Options opts;
    std::vector<std::pair<CLI::App*, Flags>> commands;
    for (const auto& s : subs) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        commands.emplace_back(cmd, add_flags(*cmd, opts));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_invalid_spec;
    }

    try {
        std::size_t which = 0;
        while (!commands[which].first->parsed()) {
            ++which;
        }
        const dprony::ExperimentKind kind = subs[which].kind;
        const dprony::ExperimentSpec spec = build_spec(kind, opts, commands[which].second);

        const auto format = dprony::parse_format(opts.format);
        if (!format) {
            throw dprony::SpecError("--format must be csv or jsonl");
        }
        std::string out = opts.out;
        if (out.empty()) {
            out = "out/" + std::string(dprony::to_string(kind)) + "." + opts.format;
        }

        if (kind == dprony::ExperimentKind::collision_scan) {
            if (!opts.plot.empty()) {
                throw dprony::SpecError("--plot is not available for collision-scan");
            }
            return run_collision_scan(spec, *format, out);
        }

        const dprony::ResultTable table = dprony::run_experiment(spec);
        dprony::emit(table, *format, out);
        std::printf("wrote %s\n", out.c_str());
        print_summary(table, spec);
        if (!opts.plot.empty()) {
            const auto plot_kind = kind == dprony::ExperimentKind::threshold
                                       ? dprony::PlotKind::threshold_map
                                       : dprony::PlotKind::loglog_scatter;
            dprony::plot(table, plot_kind, opts.plot);
            std::printf("plot %s\n", opts.plot.c_str());
        }
    } catch (const dprony::IoError& e) {
        std::cerr << "dprony: " << e.what() << '\n';
        return exit_io_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "dprony: invalid spec: " << e.what() << '\n';
        return exit_invalid_spec;
    }
    return 0;
}
