#include "dprony/esprit.hpp"
#include "dprony/metrics.hpp"
#include "dprony/prony.hpp"
#include "dprony/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <numbers>

using namespace dprony;

namespace {

SpikeSignal random_signal(int n, double min_sep, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<double> x;
    while (static_cast<int>(x.size()) < n) {
        const double c = rng.uniform(-0.5, 0.5);
        if (std::all_of(x.begin(), x.end(),
                        [&](double y) { return circular_distance(c, y) >= min_sep; }))
            x.push_back(c);
    }
    std::vector<Complex> a;
    for (int k = 0; k < n; ++k)
        a.push_back(std::polar(rng.uniform(0.5, 1.0), rng.uniform(0.0, 2 * std::numbers::pi)));
    return SpikeSignal(x, a);
}

double max_distance(std::span<const double> a, std::span<const double> b)
{
    const auto m = match_nodes(a, b);
    return *std::max_element(m.distances.begin(), m.distances.end());
}

} // namespace

TEST(Esprit, SingleNode)
{
    const SpikeSignal s({0.25}, {Complex(2.0)});
    const auto r = esprit(sample_spectrum(s, 1.0, 8).values, {8, 0, 1});
    ASSERT_EQ(r.nodes.size(), 1u);
    EXPECT_NEAR(r.nodes[0], 0.25, 1e-10);
    EXPECT_NEAR(std::abs(r.amplitudes[0] - 2.0), 0.0, 1e-9);
}

TEST(Esprit, SymmetricPairMatchesProny)
{
    const SpikeSignal s({-0.125, 0.125}, {Complex(1.0), Complex(1.0)});
    const auto m = sample_spectrum(s, 1.0, 8).values;
    const auto r = esprit(m, {8, 0, 2});
    const auto p = prony(m, 2);
    EXPECT_NEAR(r.nodes[0], -0.125, 1e-8);
    EXPECT_NEAR(r.nodes[1], 0.125, 1e-8);
    EXPECT_LT(max_distance(r.nodes, p.wrapped_nodes), 1e-8);
}

TEST(Esprit, RandomSignalExact)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = random_signal(3, 0.05, seed);
        const auto r = esprit(sample_spectrum(s, 1.0, 32).values, {32, 0, 3});
        EXPECT_LT(max_distance(s.nodes(), r.nodes), 1e-8) << seed;
    }
}

TEST(Esprit, AgreesWithPronyOnNoiselessData)
{
    for (int n = 1; n <= 5; ++n)
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto s = random_signal(n, 0.05, 500 + 10 * n + seed);
            const auto m = sample_spectrum(s, 1.0, 4 * n + 8).values;
            const auto r = esprit(m, {4 * n + 8, 0, n});
            const auto p = prony(m, n);
            ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(n));
            EXPECT_TRUE(std::is_sorted(r.nodes.begin(), r.nodes.end()));
            for (double x : r.nodes) {
                EXPECT_GT(x, -0.5);
                EXPECT_LE(x, 0.5);
            }
            EXPECT_LT(max_distance(r.nodes, p.wrapped_nodes), 1e-7) << n << ' ' << seed;
        }
}

TEST(Esprit, RankCollapse)
{
    const SpikeSignal s({0.1}, {Complex(1.0)});
    EXPECT_THROW(esprit(sample_spectrum(s, 1.0, 16).values, {16, 0, 3}), RankCollapseError);
}

TEST(Esprit, RejectsBadConfig)
{
    const std::vector<Complex> m(8, 1.0);
    EXPECT_THROW(esprit(m, {8, 7, 3}), std::invalid_argument);
    EXPECT_THROW(esprit(m, {16, 0, 2}), std::invalid_argument);
}

TEST(EspritTiming, AtLeastCubicInSampleCount)
{
    const auto s = random_signal(3, 0.05, 9);
    auto median_seconds = [&](int m_samples) {
        const auto m = sample_spectrum(s, 1.0, m_samples).values;
        std::vector<double> t;
        for (int rep = 0; rep < 5; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            const auto r = esprit(m, {m_samples, 0, 3});
            t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
            EXPECT_EQ(r.nodes.size(), 3u);
        }
        std::nth_element(t.begin(), t.begin() + 2, t.end());
        return t[2];
    };
    double previous = median_seconds(64);
    for (int m_samples : {128, 256, 512}) {
        const double current = median_seconds(m_samples);
        EXPECT_GE(current / previous, 6.0) << m_samples;
        previous = current;
    }
}

TEST(Esprit, MinimalSampleCount)
{
    // M = 2n: floor(M/2) = n would leave the shift equation underdetermined.
    const auto s = random_signal(3, 0.1, 41);
    const auto r = esprit(sample_spectrum(s, 1.0, 6).values, {6, 0, 3});
    EXPECT_LT(max_distance(s.nodes(), r.nodes), 1e-8);
    const std::vector<Complex> m(6, 1.0);
    EXPECT_THROW(esprit(m, {6, 3, 3}), std::invalid_argument);
}
