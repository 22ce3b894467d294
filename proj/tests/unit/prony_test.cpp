#include "dprony/metrics.hpp"
#include "dprony/prony.hpp"
#include "dprony/prony_extended.hpp"
#include "dprony/random.hpp"
#include "dprony/signal.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace dprony;

namespace {

const double r2 = std::numbers::sqrt2;
const std::vector<Complex> pair_moments{2.0, r2, 0.0, -r2};

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

// Residual of the best amplitude fit for fixed nodes.
double projected_residual(const std::vector<double>& x, const std::vector<Complex>& m)
{
    MatrixXc v(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(x.size()));
    for (Eigen::Index i = 0; i < v.rows(); ++i)
        for (Eigen::Index j = 0; j < v.cols(); ++j)
            v(i, j) = std::polar(1.0, 2 * std::numbers::pi * x[j] * static_cast<double>(i));
    const VectorXc rhs = Eigen::Map<const VectorXc>(m.data(), v.rows());
    const VectorXc a = v.colPivHouseholderQr().solve(rhs);
    return (v * a - rhs).norm();
}

// Nonlinear least squares over node positions: coarse grid around the
// truth, then pattern search with halving step.
std::vector<double> nls_fit(std::vector<double> x, const std::vector<Complex>& m, double span)
{
    const int grid = 41;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double best = projected_residual(x, m), arg = x[j];
        const double centre = x[j];
        for (int g = 0; g < grid; ++g) {
            x[j] = centre - span + 2 * span * g / (grid - 1);
            const double r = projected_residual(x, m);
            if (r < best) {
                best = r;
                arg = x[j];
            }
        }
        x[j] = arg;
    }
    double best = projected_residual(x, m);
    for (double step = span / grid; step > 1e-15;) {
        bool moved = false;
        for (std::size_t j = 0; j < x.size(); ++j)
            for (double s : {step, -step}) {
                auto y = x;
                y[j] += s;
                const double r = projected_residual(y, m);
                if (r < best) {
                    best = r;
                    x = y;
                    moved = true;
                }
            }
        if (!moved)
            step /= 2;
    }
    return x;
}

double max_node_error(const SpikeSignal& truth, const std::vector<double>& est)
{
    const auto match = match_nodes(truth.nodes(), est);
    return *std::max_element(match.distances.begin(), match.distances.end());
}

} // namespace

TEST(BuildHankel, Examples)
{
    const std::vector<Complex> m1{5.0, 1.0};
    const auto h1 = build_hankel(m1, 1);
    ASSERT_EQ(h1.rows(), 1);
    EXPECT_EQ(h1(0, 0), Complex(5.0));

    const auto h2 = build_hankel(pair_moments, 2);
    EXPECT_EQ(h2(0, 0), Complex(2.0));
    EXPECT_EQ(h2(0, 1), Complex(r2));
    EXPECT_EQ(h2(1, 0), Complex(r2));
    EXPECT_EQ(h2(1, 1), Complex(0.0));

    const auto s = random_signal(4, 0.05, 11);
    const auto h = build_hankel(sample_spectrum(s, 1.0, 8).values, 4);
    EXPECT_EQ((h - h.transpose()).norm(), 0.0);
    EXPECT_THROW(build_hankel(m1, 2), std::invalid_argument);
}

TEST(PronyPolynomial, Examples)
{
    const std::vector<Complex> m{2.0, Complex(0, 2)};
    const auto q1 = prony_polynomial_coeffs(m, 1);
    EXPECT_NEAR(std::abs(q1(0) - Complex(0, -1)), 0.0, 1e-15);

    const auto q2 = prony_polynomial_coeffs(pair_moments, 2);
    EXPECT_NEAR(std::abs(q2(0) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(q2(1) + r2), 0.0, 1e-14);
}

TEST(PronyPolynomial, ResidualOracle)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = random_signal(3, 0.05, seed);
        const auto m = sample_spectrum(s, 1.0, 6).values;
        const auto q = prony_polynomial_coeffs(m, 3);
        const auto h = build_hankel(m, 3);
        const VectorXc rhs = Eigen::Map<const VectorXc>(m.data() + 3, 3);
        EXPECT_LE((h * q + rhs).norm(), 1e-10 * Eigen::Map<const VectorXc>(m.data(), 6).norm());
    }
}

TEST(PolynomialRoots, Quadratics)
{
    auto sorted_by_arg = [](std::vector<Complex> r) {
        std::sort(r.begin(), r.end(),
                  [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });
        return r;
    };
    const std::vector<Complex> c1{1.0, 0.0};
    const auto r1 = sorted_by_arg(polynomial_roots(c1));
    EXPECT_NEAR(std::abs(r1[0] - Complex(0, -1)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(r1[1] - Complex(0, 1)), 0.0, 1e-14);

    const std::vector<Complex> c2{1.0, -r2};
    const auto r = sorted_by_arg(polynomial_roots(c2));
    EXPECT_NEAR(std::abs(r[0] - std::polar(1.0, -std::numbers::pi / 4)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(r[1] - std::polar(1.0, std::numbers::pi / 4)), 0.0, 1e-14);
}

TEST(PolynomialRoots, RandomCubicResidual)
{
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
        std::vector<Complex> c;
        for (int j = 0; j < 3; ++j)
            c.emplace_back(rng.uniform(-2, 2), rng.uniform(-2, 2));
        const auto roots = polynomial_roots(c);
        ASSERT_EQ(roots.size(), 3u);
        for (const auto& r : roots)
            EXPECT_LT(std::abs(evaluate_monic(c, r)), 1e-10);
    }
}

TEST(Vandermonde, Examples)
{
    const std::vector<Complex> root{Complex(0, 1)};
    const std::vector<Complex> rhs1{2.0};
    EXPECT_NEAR(std::abs(solve_vandermonde_ls(root, rhs1)(0) - 2.0), 0.0, 1e-15);

    const std::vector<Complex> roots{std::polar(1.0, std::numbers::pi / 4),
                                     std::polar(1.0, -std::numbers::pi / 4)};
    const std::vector<Complex> rhs{2.0, r2};
    const auto a = solve_vandermonde_ls(roots, rhs);
    EXPECT_NEAR(std::abs(a(0) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(a(1) - 1.0), 0.0, 1e-14);
}

TEST(Vandermonde, ForwardMultiplyOracle)
{
    Rng rng(17);
    for (int t = 0; t < 50; ++t) {
        const auto s = random_signal(4, 0.08, 100 + t);
        std::vector<Complex> roots;
        for (double x : s.nodes())
            roots.push_back(std::polar(1.0, 2 * std::numbers::pi * x));
        std::vector<Complex> rhs(4, 0.0);
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k)
                rhs[i] += s.amplitudes()[k] * std::pow(roots[k], i);
        const auto a = solve_vandermonde_ls(roots, rhs);
        for (int k = 0; k < 4; ++k)
            EXPECT_NEAR(std::abs(a(k) - s.amplitudes()[k]), 0.0, 1e-10);
    }
}

TEST(Prony, SingleNode)
{
    const std::vector<Complex> m{2.0, Complex(0, 2)};
    const auto sol = prony(m, 1);
    EXPECT_NEAR(sol.wrapped_nodes[0], 0.25, 1e-15);
    EXPECT_NEAR(std::abs(sol.amplitudes[0] - 2.0), 0.0, 1e-14);
}

TEST(Prony, SymmetricPair)
{
    const auto sol = prony(pair_moments, 2);
    EXPECT_NEAR(sol.wrapped_nodes[0], -0.125, 1e-14);
    EXPECT_NEAR(sol.wrapped_nodes[1], 0.125, 1e-14);
    for (const auto& a : sol.amplitudes)
        EXPECT_NEAR(std::abs(a - 1.0), 0.0, 1e-13);
}

TEST(Prony, NoiselessRandomSignals)
{
    for (int n = 1; n <= 5; ++n)
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto s = random_signal(n, 0.05, 1000 * n + seed);
            const auto sol = prony(sample_spectrum(s, 1.0, 2 * n), n);
            EXPECT_LT(max_node_error(s, sol.wrapped_nodes), 1e-9) << n << ' ' << seed;
        }
}

TEST(Prony, NoisyClusterMatchesNonlinearFit)
{
    ClusterConfig cfg;
    cfg.n = 3;
    cfg.ell = 2;
    cfg.omega = 5.0;
    cfg.delta = 1e-2;
    const double eps = 1e-8;
    const double bound = 100.0 * std::pow(cfg.delta, 2 - 2 * cfg.ell) * eps;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        cfg.seed = seed;
        const auto s = make_clustered_signal(cfg);
        // lambda = 1: the 2n samples fill [0, omega] for n = 3.
        const auto m = add_noise(sample_spectrum(s, 1.0, 6), eps, NoiseMode::boundary, seed).values;
        const auto sol = prony(m, 3);
        const double prony_err = max_node_error(s, sol.wrapped_nodes);
        const auto fit = nls_fit(s.nodes(), m, 20 * bound);
        const double fit_err = max_node_error(s, fit);
        EXPECT_LE(prony_err, bound) << seed;
        EXPECT_LE(fit_err, bound) << seed;
        // Square system: a consistent fit is exact, so both must agree closely.
        EXPECT_LT(max_node_error(SpikeSignal(fit, s.amplitudes()), sol.wrapped_nodes),
                  0.1 * bound)
            << seed;
    }
}

TEST(PronyExtended, AgreesWithDoubleAtModerateNoise)
{
    const auto s = random_signal(3, 0.1, 77);
    std::vector<Complex> noise(6);
    for (int k = 0; k < 6; ++k)
        noise[k] = noise_sample(1e-6, NoiseMode::boundary, 0.1 * k, 0.0);
    auto m = sample_spectrum(s, 1.0, 6).values;
    for (int k = 0; k < 6; ++k)
        m[k] += noise[k];
    const auto a = prony(m, 3);
    const auto b = prony_extended(s, noise, 3);
    for (int j = 0; j < 3; ++j)
        EXPECT_NEAR(a.wrapped_nodes[j], b.wrapped_nodes[j], 1e-9);
}

TEST(PronyExtended, ResolvesBelowDoubleRoundoff)
{
    ClusterConfig cfg;
    cfg.n = 3;
    cfg.ell = 3;
    cfg.omega = 5.0;
    cfg.delta = 1e-3;
    const auto s = make_clustered_signal(cfg);
    const std::vector<Complex> noise(6, 0.0);
    const auto sol = prony_extended(s, noise, 3);
    EXPECT_LT(max_node_error(s, sol.wrapped_nodes), 1e-14);
}
