#ifndef DPRONY_SIGNAL_HPP
#define DPRONY_SIGNAL_HPP

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace dprony {

using Complex = std::complex<double>;

///
/// Finite impulse train f(x) = sum_k alpha_k delta(x - x_k) with nodes on
/// [-1/2, 1/2]. The constructor validates the invariants and throws
/// std::invalid_argument when any of them is violated.
///
class SpikeSignal
{
public:
    SpikeSignal(std::vector<double> nodes, std::vector<Complex> amplitudes);

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<Complex>& amplitudes() const noexcept { return amplitudes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    /// Returns a copy whose amplitudes are multiplied by `c` (c != 0).
    SpikeSignal scaled(Complex c) const;

private:
    std::vector<double> nodes_;
    std::vector<Complex> amplitudes_;
};

///
/// Layout of a single-cluster configuration: `ell` nodes spaced `delta`
/// apart starting at `cluster_center`, and `n - ell` singletons on the rest
/// of the circle. Singletons are equispaced on the free arc, which keeps
/// every one of them at least 2/omega from all other nodes when the layout
/// fits.
///
struct ClusterConfig
{
    int n = 3;
    int ell = 2;
    double delta = 1e-2;
    double omega = 5.0;
    double cluster_center = 0.0;
    std::pair<double, double> amp_magnitude_range{1.0 / 3.0, 1.0};
    std::uint64_t seed = 0;

    double srf() const noexcept { return 1.0 / (omega * delta); }
};

/// Spectral samples g(lambda k), k = 0, 1, ..., with noise bound eps.
struct MomentSequence
{
    double lambda = 1.0;
    std::vector<Complex> values;
    double eps = 0.0;
};

enum class NoiseMode
{
    boundary,     ///< |e_k| = eps, uniform phase
    uniform_disk, ///< e_k uniform over the disk |e| <= eps
};

/// min(|a - b|, 1 - |a - b|): distance of e^{2 pi j a} and e^{2 pi j b}
/// measured along the periodized interval.
double circular_distance(double a, double b) noexcept;

/// Minimum pairwise circular distance. Requires at least two nodes.
double min_separation(const SpikeSignal& signal);

/// Exact g(omega) = sum_j alpha_j exp(2 pi j x_j omega).
Complex evaluate_spectrum(const SpikeSignal& signal, double omega) noexcept;

/// Noiseless samples g(lambda k) for k = 0 .. count-1.
MomentSequence sample_spectrum(const SpikeSignal& signal, double lambda, int count);

/// Adds bounded noise with max modulus eps. Deterministic in `rng_seed`.
MomentSequence add_noise(const MomentSequence& moments, double eps, NoiseMode mode,
                         std::uint64_t rng_seed);

/// Draws one noise value for the given mode; `u1`, `u2` are uniform in [0, 1).
Complex noise_sample(double eps, NoiseMode mode, double u1, double u2) noexcept;

SpikeSignal make_clustered_signal(const ClusterConfig& config);

/// Cluster node indices are 0 .. ell-1 in signals built by make_clustered_signal.
inline bool is_cluster_node(const ClusterConfig& config, int index) noexcept
{
    return index < config.ell;
}

} // namespace dprony

#endif // DPRONY_SIGNAL_HPP
