#include "dprony/esprit.hpp"

#include "dprony/prony.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <numeric>
#include <string>

namespace dprony {

EspritResult esprit(std::span<const Complex> moments, const EspritConfig& config)
{
    const int m = config.m_samples > 0 ? config.m_samples : static_cast<int>(moments.size());
    const int n = config.n;
    const int rows = config.hankel_rows > 0 ? config.hankel_rows : std::max(m / 2, n + 1);
    if (n < 1) {
        throw std::invalid_argument("esprit: model order must be >= 1");
    }
    if (static_cast<std::size_t>(m) > moments.size()) {
        throw std::invalid_argument("esprit: fewer samples than m_samples");
    }
    if (m < 2 * n) {
        throw std::invalid_argument("esprit: need at least 2n samples");
    }
    // L = n leaves the shift equation with n-1 rows for n unknowns.
    if (rows < n + 1 || rows > m - n + 1) {
        throw std::invalid_argument("esprit: hankel_rows must satisfy n < L <= M-n+1, got " +
                                    std::to_string(rows));
    }
    const int cols = m - rows + 1;

    MatrixXc hankel(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            hankel(i, j) = moments[static_cast<std::size_t>(i + j)];
        }
    }

    Eigen::BDCSVD<MatrixXc> svd(hankel, Eigen::ComputeThinU);
    const auto& sigma = svd.singularValues();
    if (sigma.size() < n || !(sigma(n - 1) > rank_tolerance * sigma(0))) {
        throw RankCollapseError("esprit: Hankel matrix has numerical rank below " +
                                std::to_string(n));
    }

    const MatrixXc signal_space = svd.matrixU().leftCols(n);
    const MatrixXc upper = signal_space.topRows(rows - 1);
    const MatrixXc lower = signal_space.bottomRows(rows - 1);
    const MatrixXc psi = upper.completeOrthogonalDecomposition().solve(lower);

    Eigen::ComplexEigenSolver<MatrixXc> eig(psi, /*computeEigenvectors=*/false);
    if (eig.info() != Eigen::Success) {
        throw RankCollapseError("esprit: eigenvalue iteration did not converge");
    }

    std::vector<Complex> roots(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const Complex psi_k = eig.eigenvalues()(k);
        roots[static_cast<std::size_t>(k)] = psi_k / std::abs(psi_k);
    }
    std::vector<double> nodes(roots.size());
    std::transform(roots.begin(), roots.end(), nodes.begin(), wrapped_node);

    std::vector<std::size_t> order(roots.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });

    EspritResult out;
    std::vector<Complex> sorted_roots;
    for (const auto k : order) {
        out.nodes.push_back(nodes[k]);
        sorted_roots.push_back(roots[k]);
    }
    const VectorXc amps =
        solve_vandermonde_ls(sorted_roots, moments.first(static_cast<std::size_t>(m)));
    out.amplitudes.assign(amps.data(), amps.data() + amps.size());
    return out;
}

} // namespace dprony
