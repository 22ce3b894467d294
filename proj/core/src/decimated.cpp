#include "dprony/decimated.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dprony {

DecimationGrid decimation_grid(double omega, int n, int n_lambda)
{
    if (!(omega > 0.0)) {
        throw std::invalid_argument("decimation_grid: omega must be positive");
    }
    if (n < 1) {
        throw std::invalid_argument("decimation_grid: n must be >= 1");
    }
    if (n_lambda < 2) {
        throw std::invalid_argument("decimation_grid: n_lambda must be >= 2");
    }
    const double hi = omega / (2 * n - 1);
    const double lo = 0.5 * hi;
    DecimationGrid grid{omega, n, n_lambda, {}};
    grid.lambdas.resize(static_cast<std::size_t>(n_lambda));
    for (int i = 0; i < n_lambda; ++i) {
        grid.lambdas[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n_lambda - 1);
    }
    grid.lambdas.back() = hi;
    return grid;
}

AliasedSolutionSet aliased_solutions(double lambda, std::span<const double> wrapped_nodes)
{
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("aliased_solutions: lambda must be positive");
    }
    AliasedSolutionSet out;
    out.lambda = lambda;
    out.wrapped_nodes.assign(wrapped_nodes.begin(), wrapped_nodes.end());
    out.candidates.reserve(wrapped_nodes.size() * static_cast<std::size_t>(lambda + 2.0));
    for (std::size_t j = 0; j < wrapped_nodes.size(); ++j) {
        const double y = wrapped_nodes[j];
        // One extra integer on each side absorbs rounding in the bounds.
        const auto m_lo = static_cast<long long>(std::ceil(-0.5 * lambda - y)) - 1;
        const auto m_hi = static_cast<long long>(std::floor(0.5 * lambda - y)) + 1;
        for (long long m = m_lo; m <= m_hi; ++m) {
            const double t = (y + static_cast<double>(m)) / lambda;
            if (std::abs(t) <= 0.5) {
                out.candidates.push_back({static_cast<int>(j), t});
            }
        }
    }
    return out;
}

int histogram_bin(double t, int n_bins) noexcept
{
    const auto bin = static_cast<int>(std::floor((t + 0.5) * n_bins));
    return std::clamp(bin, 0, n_bins - 1);
}

int DealiasHistogram::bin_of(double t) const noexcept
{
    return histogram_bin(t, n_bins);
}

DealiasHistogram build_histogram(std::span<const AliasedSolutionSet> all_sets, int n_bins)
{
    if (n_bins < 1) {
        throw std::invalid_argument("build_histogram: n_bins must be >= 1");
    }
    const auto nb = static_cast<std::size_t>(n_bins);
    DealiasHistogram hist;
    hist.n_bins = n_bins;
    hist.edges.resize(nb + 1);
    for (std::size_t i = 0; i <= nb; ++i) {
        hist.edges[i] = -0.5 + static_cast<double>(i) / n_bins;
    }
    hist.edges.front() = -0.5;
    hist.edges.back() = 0.5;
    hist.counts.assign(nb, 0);
    hist.contributors.assign(nb, {});

    // Last set index that touched each bin; a set contributes at most once per bin.
    std::vector<std::ptrdiff_t> last_set(nb, -1);
    for (std::size_t s = 0; s < all_sets.size(); ++s) {
        for (const auto& c : all_sets[s].candidates) {
            const auto bin = static_cast<std::size_t>(hist.bin_of(c.t));
            ++hist.counts[bin];
            if (last_set[bin] != static_cast<std::ptrdiff_t>(s)) {
                last_set[bin] = static_cast<std::ptrdiff_t>(s);
                hist.contributors[bin].push_back(all_sets[s].lambda);
            }
        }
    }
    return hist;
}

std::vector<int> top_bins(const DealiasHistogram& hist, int n)
{
    if (n < 1) {
        throw std::invalid_argument("top_bins: n must be >= 1");
    }
    std::vector<int> nonempty;
    for (int b = 0; b < hist.n_bins; ++b) {
        if (hist.counts[static_cast<std::size_t>(b)] > 0) {
            nonempty.push_back(b);
        }
    }
    if (nonempty.size() < static_cast<std::size_t>(n)) {
        throw DealiasingError("top_bins: only " + std::to_string(nonempty.size()) +
                              " nonempty bins, need " + std::to_string(n));
    }
    const auto ranks_before = [&](int a, int b) {
        const auto ca = hist.counts[static_cast<std::size_t>(a)];
        const auto cb = hist.counts[static_cast<std::size_t>(b)];
        if (ca != cb) {
            return ca > cb;
        }
        const auto ka = hist.contributor_count(a);
        const auto kb = hist.contributor_count(b);
        if (ka != kb) {
            return ka > kb;
        }
        return a < b;
    };
    std::partial_sort(nonempty.begin(), nonempty.begin() + n, nonempty.end(), ranks_before);
    nonempty.resize(static_cast<std::size_t>(n));
    return nonempty;
}

std::vector<double> collision_set(std::span<const AliasedSolutionSet> all_sets,
                                  std::span<const int> bins, const DealiasHistogram& hist)
{
    std::vector<double> out;
    std::vector<char> hit(bins.size());
    for (const auto& set : all_sets) {
        std::fill(hit.begin(), hit.end(), char{0});
        for (const auto& c : set.candidates) {
            const int bin = hist.bin_of(c.t);
            for (std::size_t k = 0; k < bins.size(); ++k) {
                if (bins[k] == bin) {
                    hit[k] = 1;
                }
            }
        }
        if (std::all_of(hit.begin(), hit.end(), [](char h) { return h != 0; })) {
            out.push_back(set.lambda);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string_view to_string(RecoveryStatus status) noexcept
{
    switch (status) {
    case RecoveryStatus::success:
        return "success";
    case RecoveryStatus::empty_collision_set:
        return "empty-collision-set";
    case RecoveryStatus::prony_failure:
        return "prony-failure";
    }
    return "unknown";
}

int default_n_lambda(double omega)
{
    return std::max(10, static_cast<int>(std::ceil(omega)));
}

int default_n_bins(double delta)
{
    if (!(delta > 0.0)) {
        throw std::invalid_argument("default_n_bins: delta must be positive");
    }
    return static_cast<int>(std::ceil(3.0 / delta));
}

RecoveryResult decimated_prony(const SampleProvider& sample_provider, const DpmParams& params)
{
    if (!sample_provider) {
        throw std::invalid_argument("decimated_prony: empty sample provider");
    }
    if (params.n_bins < 1) {
        throw std::invalid_argument("decimated_prony: n_bins must be >= 1");
    }
    const int n = params.n;
    const int n_lambda = params.n_lambda > 0 ? params.n_lambda : default_n_lambda(params.omega);
    const DecimationGrid grid = decimation_grid(params.omega, n, n_lambda);

    RecoveryResult result;
    if (params.keep_diagnostics) {
        result.per_lambda_diagnostics.emplace();
        result.per_lambda_diagnostics->reserve(grid.lambdas.size());
    }

    // One Prony solve and one alias set per grid point.
    std::vector<AliasedSolutionSet> sets;
    std::vector<std::vector<Complex>> set_moments;
    sets.reserve(grid.lambdas.size());
    set_moments.reserve(grid.lambdas.size());
    std::vector<Complex> moments(static_cast<std::size_t>(2 * n));
    for (const double lambda : grid.lambdas) {
        for (int k = 0; k < 2 * n; ++k) {
            moments[static_cast<std::size_t>(k)] = sample_provider(lambda, k);
        }
        LambdaDiagnostics diag;
        diag.lambda = lambda;
        try {
            const PronySolution sol = prony(std::span<const Complex>(moments), n);
            sets.push_back(aliased_solutions(lambda, sol.wrapped_nodes));
            set_moments.emplace_back(moments.begin(), moments.begin() + n);
            diag.prony_ok = true;
            diag.wrapped_nodes = sol.wrapped_nodes;
            diag.hankel_residual = sol.hankel_residual;
            diag.vandermonde_residual = sol.vandermonde_residual;
            diag.candidate_count = sets.back().candidates.size();
        } catch (const RootFindingError&) {
            diag.prony_ok = false;
        }
        if (result.per_lambda_diagnostics) {
            result.per_lambda_diagnostics->push_back(std::move(diag));
        }
    }
    if (sets.empty()) {
        result.status = RecoveryStatus::prony_failure;
        return result;
    }

    // Histogram of the union and its n largest bins.
    const DealiasHistogram hist = build_histogram(sets, params.n_bins);
    try {
        result.selected_bins = top_bins(hist, n);
    } catch (const DealiasingError&) {
        result.status = RecoveryStatus::empty_collision_set;
        return result;
    }

    // Collision set and the largest lambda in it.
    const std::vector<double> lambda_set = collision_set(sets, result.selected_bins, hist);
    result.collision_set_size = lambda_set.size();
    if (lambda_set.empty()) {
        result.status = RecoveryStatus::empty_collision_set;
        return result;
    }
    result.lambda_star = lambda_set.back();
    const auto star = static_cast<std::size_t>(
        std::find_if(sets.begin(), sets.end(),
                     [&](const AliasedSolutionSet& s) { return s.lambda == result.lambda_star; }) -
        sets.begin());

    // One candidate of X_{lambda*} per selected bin. Ties go to the
    // candidate nearest the mean of everything that landed in the bin.
    const auto& bins = result.selected_bins;
    std::vector<double> bin_sum(bins.size(), 0.0);
    std::vector<std::int64_t> bin_count(bins.size(), 0);
    for (const auto& set : sets) {
        for (const auto& c : set.candidates) {
            const int bin = hist.bin_of(c.t);
            for (std::size_t k = 0; k < bins.size(); ++k) {
                if (bins[k] == bin) {
                    bin_sum[k] += c.t;
                    ++bin_count[k];
                }
            }
        }
    }
    std::vector<double> nodes(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const double mean = bin_sum[k] / static_cast<double>(bin_count[k]);
        double best_gap = std::numeric_limits<double>::infinity();
        for (const auto& c : sets[star].candidates) {
            if (hist.bin_of(c.t) == bins[k] && std::abs(c.t - mean) < best_gap) {
                best_gap = std::abs(c.t - mean);
                nodes[k] = c.t;
            }
        }
    }
    std::sort(nodes.begin(), nodes.end());
    if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
        result.status = RecoveryStatus::empty_collision_set;
        return result;
    }

    // Amplitudes from the first n samples at lambda*.
    std::vector<Complex> roots(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double turns = nodes[k] * result.lambda_star;
        roots[k] = std::polar(1.0, 2.0 * std::numbers::pi * (turns - std::round(turns)));
    }
    const VectorXc amps = solve_vandermonde_ls(roots, set_moments[star]);

    result.est_nodes = std::move(nodes);
    result.est_amplitudes.assign(amps.data(), amps.data() + amps.size());
    result.status = RecoveryStatus::success;
    return result;
}

double wrapped_separation(const SpikeSignal& signal, double lambda)
{
    const auto& x = signal.nodes();
    if (x.size() < 2) {
        throw std::invalid_argument("wrapped_separation: need at least two nodes");
    }
    double best = std::numbers::pi;
    for (std::size_t k = 0; k < x.size(); ++k) {
        for (std::size_t s = k + 1; s < x.size(); ++s) {
            const double turns = lambda * (x[k] - x[s]);
            const double angle = 2.0 * std::numbers::pi * std::abs(turns - std::round(turns));
            best = std::min(best, angle);
        }
    }
    return best;
}

} // namespace dprony
