#include "dprony/prony.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <numeric>
#include <string>

namespace dprony {

namespace {

void require_samples(std::span<const Complex> moments, int n, const char* who)
{
    if (n < 1) {
        throw std::invalid_argument(std::string(who) + ": n must be >= 1");
    }
    if (moments.size() < static_cast<std::size_t>(2 * n)) {
        throw std::invalid_argument(std::string(who) + ": need " + std::to_string(2 * n) +
                                    " samples, got " + std::to_string(moments.size()));
    }
}

// q'(z) for the monic polynomial.
Complex evaluate_monic_derivative(std::span<const Complex> c, Complex z) noexcept
{
    const auto n = static_cast<int>(c.size());
    Complex acc = static_cast<double>(n);
    for (int j = n - 1; j >= 1; --j) {
        acc = acc * z + static_cast<double>(j) * c[static_cast<std::size_t>(j)];
    }
    return acc;
}

// V(i, k) = roots[k]^i for i < rows.
MatrixXc vandermonde(std::span<const Complex> roots, Eigen::Index rows)
{
    const auto cols = static_cast<Eigen::Index>(roots.size());
    MatrixXc v(rows, cols);
    for (Eigen::Index k = 0; k < cols; ++k) {
        Complex power = 1.0;
        for (Eigen::Index i = 0; i < rows; ++i) {
            v(i, k) = power;
            power *= roots[static_cast<std::size_t>(k)];
        }
    }
    return v;
}

} // namespace

MatrixXc build_hankel(std::span<const Complex> moments, int n)
{
    require_samples(moments, n, "build_hankel");
    MatrixXc h(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            h(i, j) = moments[static_cast<std::size_t>(i + j)];
        }
    }
    return h;
}

VectorXc min_norm_solve(const MatrixXc& a, const VectorXc& b)
{
    Eigen::CompleteOrthogonalDecomposition<MatrixXc> cod;
    cod.setThreshold(rank_tolerance);
    cod.compute(a);
    return cod.solve(b);
}

VectorXc prony_polynomial_coeffs(std::span<const Complex> moments, int n)
{
    const MatrixXc h = build_hankel(moments, n);
    VectorXc rhs(n);
    for (int k = 0; k < n; ++k) {
        rhs(k) = -moments[static_cast<std::size_t>(n + k)];
    }
    return min_norm_solve(h, rhs);
}

Complex evaluate_monic(std::span<const Complex> c, Complex z) noexcept
{
    Complex acc = 1.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> monic_coeffs)
{
    const auto n = static_cast<int>(monic_coeffs.size());
    if (n < 1) {
        throw std::invalid_argument("polynomial_roots: degree must be >= 1");
    }
    if (n == 1) {
        return {-monic_coeffs[0]};
    }

    //     (0  0  ...  0 -q[0]  )
    //     (1  0  ...  0 -q[1]  )
    // C = (0  1  ...  0 -q[2]  )
    //     (.. .. ...  .. ..    )
    //     (0  0  ...  1 -q[n-1])
    MatrixXc companion = MatrixXc::Zero(n, n);
    companion.diagonal(-1).setOnes();
    for (int j = 0; j < n; ++j) {
        companion(j, n - 1) = -monic_coeffs[static_cast<std::size_t>(j)];
    }

    Eigen::ComplexEigenSolver<MatrixXc> solver(companion, /*computeEigenvectors=*/false);
    const VectorXc& eig = solver.eigenvalues();
    std::vector<Complex> roots(eig.data(), eig.data() + eig.size());
    if (solver.info() != Eigen::Success) {
        throw RootFindingError("polynomial_roots: companion eigenvalue iteration did not converge",
                               std::move(roots));
    }

    for (auto& r : roots) {
        const Complex value = evaluate_monic(monic_coeffs, r);
        const Complex slope = evaluate_monic_derivative(monic_coeffs, r);
        if (slope == Complex{} || !std::isfinite(std::abs(slope))) {
            continue;
        }
        const Complex polished = r - value / slope;
        if (std::abs(evaluate_monic(monic_coeffs, polished)) < std::abs(value)) {
            r = polished;
        }
    }
    return roots;
}

VectorXc solve_vandermonde_ls(std::span<const Complex> roots, std::span<const Complex> rhs)
{
    const auto cols = static_cast<Eigen::Index>(roots.size());
    const auto rows = static_cast<Eigen::Index>(rhs.size());
    if (cols < 1 || rows < 1) {
        throw std::invalid_argument("solve_vandermonde_ls: empty system");
    }
    const MatrixXc v = vandermonde(roots, rows);
    const VectorXc b = Eigen::Map<const VectorXc>(rhs.data(), rows);
    return min_norm_solve(v, b);
}

double wrapped_node(Complex z) noexcept
{
    double y = std::arg(z) / (2.0 * std::numbers::pi);
    if (y <= -0.5) {
        y = 0.5;
    }
    return y;
}

PronySolution prony(std::span<const Complex> moments, int n)
{
    require_samples(moments, n, "prony");
    if (moments.size() > static_cast<std::size_t>(2 * n)) {
        std::clog << "prony: using the first " << 2 * n << " of " << moments.size()
                  << " samples\n";
        moments = moments.first(static_cast<std::size_t>(2 * n));
    }

    const VectorXc q = prony_polynomial_coeffs(moments, n);
    const std::span<const Complex> coeffs(q.data(), static_cast<std::size_t>(q.size()));

    PronySolution out;
    {
        const MatrixXc h = build_hankel(moments, n);
        const auto tail = Eigen::Map<const VectorXc>(moments.data() + n, n);
        out.hankel_residual = (h * q + tail).norm();
    }

    std::vector<Complex> roots = polynomial_roots(coeffs);
    const auto head = moments.first(static_cast<std::size_t>(n));
    const VectorXc amps = solve_vandermonde_ls(roots, head);
    out.vandermonde_residual =
        (vandermonde(roots, n) * amps - Eigen::Map<const VectorXc>(head.data(), n)).norm();

    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> nodes(roots.size());
    std::transform(roots.begin(), roots.end(), nodes.begin(), wrapped_node);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });

    out.roots.reserve(order.size());
    out.wrapped_nodes.reserve(order.size());
    out.amplitudes.reserve(order.size());
    for (const auto k : order) {
        out.roots.push_back(roots[k]);
        out.wrapped_nodes.push_back(nodes[k]);
        out.amplitudes.push_back(amps(static_cast<Eigen::Index>(k)));
    }
    return out;
}

} // namespace dprony
