#include "dprony/signal.hpp"

#include "dprony/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dprony {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Maps any real onto [-1/2, 1/2).
double wrap_half(double x) noexcept
{
    double y = x - std::floor(x + 0.5);
    if (y >= 0.5) {
        y -= 1.0;
    }
    return y;
}

} // namespace

double Rng::log_uniform(double lo, double hi) noexcept
{
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

SpikeSignal::SpikeSignal(std::vector<double> nodes, std::vector<Complex> amplitudes)
    : nodes_(std::move(nodes)), amplitudes_(std::move(amplitudes))
{
    if (nodes_.empty()) {
        throw std::invalid_argument("SpikeSignal: at least one node is required");
    }
    if (nodes_.size() != amplitudes_.size()) {
        throw std::invalid_argument("SpikeSignal: nodes and amplitudes differ in length");
    }
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        if (!(nodes_[k] >= -0.5 && nodes_[k] <= 0.5)) {
            throw std::invalid_argument("SpikeSignal: node " + std::to_string(nodes_[k]) +
                                        " outside [-1/2, 1/2]");
        }
        if (amplitudes_[k] == Complex{}) {
            throw std::invalid_argument("SpikeSignal: zero amplitude at index " +
                                        std::to_string(k));
        }
        for (std::size_t s = 0; s < k; ++s) {
            if (circular_distance(nodes_[s], nodes_[k]) <= 0.0) {
                throw std::invalid_argument("SpikeSignal: coincident nodes");
            }
        }
    }
}

SpikeSignal SpikeSignal::scaled(Complex c) const
{
    std::vector<Complex> amps(amplitudes_);
    for (auto& a : amps) {
        a *= c;
    }
    return SpikeSignal(nodes_, std::move(amps));
}

double circular_distance(double a, double b) noexcept
{
    const double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

double min_separation(const SpikeSignal& signal)
{
    const auto& x = signal.nodes();
    if (x.size() < 2) {
        throw std::invalid_argument("min_separation: need at least two nodes");
    }
    double best = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        for (std::size_t s = k + 1; s < x.size(); ++s) {
            best = std::min(best, circular_distance(x[k], x[s]));
        }
    }
    return best;
}

Complex evaluate_spectrum(const SpikeSignal& signal, double omega) noexcept
{
    Complex acc{};
    const auto& x = signal.nodes();
    const auto& a = signal.amplitudes();
    for (std::size_t j = 0; j < x.size(); ++j) {
        // Reduce the phase modulo one turn before scaling by 2 pi.
        const double turns = x[j] * omega;
        acc += a[j] * std::polar(1.0, two_pi * (turns - std::round(turns)));
    }
    return acc;
}

MomentSequence sample_spectrum(const SpikeSignal& signal, double lambda, int count)
{
    if (count < 1) {
        throw std::invalid_argument("sample_spectrum: count must be >= 1");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("sample_spectrum: lambda must be positive");
    }
    MomentSequence out;
    out.lambda = lambda;
    out.eps = 0.0;
    out.values.resize(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        out.values[static_cast<std::size_t>(k)] = evaluate_spectrum(signal, lambda * k);
    }
    return out;
}

Complex noise_sample(double eps, NoiseMode mode, double u1, double u2) noexcept
{
    const double phase = two_pi * u1;
    const double radius = mode == NoiseMode::boundary ? eps : eps * std::sqrt(u2);
    return std::polar(radius, phase);
}

MomentSequence add_noise(const MomentSequence& moments, double eps, NoiseMode mode,
                         std::uint64_t rng_seed)
{
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("add_noise: eps must be >= 0");
    }
    MomentSequence out = moments;
    out.eps = eps;
    if (eps == 0.0) {
        return out;
    }
    Rng rng(rng_seed);
    for (auto& v : out.values) {
        const double u1 = rng.uniform01();
        const double u2 = rng.uniform01();
        v += noise_sample(eps, mode, u1, u2);
    }
    return out;
}

SpikeSignal make_clustered_signal(const ClusterConfig& config)
{
    const int n = config.n;
    const int ell = config.ell;
    if (n < 1 || ell < 1 || ell > n) {
        throw std::invalid_argument("make_clustered_signal: need 1 <= ell <= n");
    }
    if (!(config.delta > 0.0) || !(config.omega > 0.0)) {
        throw std::invalid_argument("make_clustered_signal: delta and omega must be positive");
    }
    const auto [amp_lo, amp_hi] = config.amp_magnitude_range;
    if (!(amp_lo > 0.0) || !(amp_hi >= amp_lo)) {
        throw std::invalid_argument("make_clustered_signal: invalid amplitude range");
    }
    const double span = (ell - 1) * config.delta;
    if (!(span < 1.0)) {
        throw std::invalid_argument("make_clustered_signal: cluster does not fit in the domain");
    }
    const double first = config.cluster_center;
    const double last = first + span;
    if (first < -0.5 || last > 0.5) {
        throw std::invalid_argument("make_clustered_signal: cluster leaves [-1/2, 1/2]");
    }

    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < ell; ++j) {
        nodes.push_back(first + j * config.delta);
    }

    const int singletons = n - ell;
    if (singletons > 0) {
        const double free_arc = 1.0 - span;
        const double step = free_arc / (singletons + 1);
        if (step < 2.0 / config.omega) {
            throw std::invalid_argument(
                "make_clustered_signal: singletons cannot be placed 2/omega apart");
        }
        for (int s = 1; s <= singletons; ++s) {
            nodes.push_back(wrap_half(last + s * step));
        }
    }

    Rng rng(config.seed);
    std::vector<Complex> amps;
    amps.reserve(nodes.size());
    for (int k = 0; k < n; ++k) {
        const double mag = rng.uniform(amp_lo, amp_hi);
        const double phase = two_pi * rng.uniform01();
        amps.push_back(std::polar(mag, phase));
    }
    return SpikeSignal(std::move(nodes), std::move(amps));
}

} // namespace dprony
