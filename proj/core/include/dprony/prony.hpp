#ifndef DPRONY_PRONY_HPP
#define DPRONY_PRONY_HPP

#include "dprony/signal.hpp"

#include <Eigen/Core>

#include <span>
#include <stdexcept>
#include <vector>

namespace dprony {

using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

/// Relative rank tolerance used by every least-squares solve in the library.
inline constexpr double rank_tolerance = 1e-12;

///
/// Thrown when the companion eigenvalue iteration does not converge. Carries
/// whatever eigenvalue estimates were available at the time of failure.
///
class RootFindingError : public std::runtime_error
{
public:
    RootFindingError(const std::string& what, std::vector<Complex> best)
        : std::runtime_error(what), best_iterates_(std::move(best))
    {
    }
    const std::vector<Complex>& best_iterates() const noexcept { return best_iterates_; }

private:
    std::vector<Complex> best_iterates_;
};

struct PronySolution
{
    std::vector<Complex> roots;
    std::vector<double> wrapped_nodes; ///< Arg(root)/(2 pi) in (-1/2, 1/2], ascending
    std::vector<Complex> amplitudes;
    double hankel_residual = 0.0;      ///< ||H q + m_{n..2n-1}||_2
    double vandermonde_residual = 0.0; ///< ||V alpha - m_{0..n-1}||_2
};

/// H(i, j) = m_{i+j}, 0 <= i, j < n. Requires at least 2n samples.
MatrixXc build_hankel(std::span<const Complex> moments, int n);

/// Minimum-norm least-squares solution of H q = -(m_n, ..., m_{2n-1}).
VectorXc prony_polynomial_coeffs(std::span<const Complex> moments, int n);

/// Minimum-norm least-squares solution of A x = b with relative rank
/// tolerance `rank_tolerance`.
VectorXc min_norm_solve(const MatrixXc& a, const VectorXc& b);

///
/// Roots of the monic polynomial z^n + sum_{j<n} coeffs[j] z^j.
///
/// Eigenvalues of the companion matrix, followed by one Newton step per root
/// that is kept only when it lowers |q(r)|.
///
std::vector<Complex> polynomial_roots(std::span<const Complex> monic_coeffs);

/// q(z) for the monic polynomial with lower coefficients `monic_coeffs`.
Complex evaluate_monic(std::span<const Complex> monic_coeffs, Complex z) noexcept;

/// argmin ||V a - rhs||_2 with V(i, k) = roots[k]^i, i = 0 .. rhs.size()-1.
VectorXc solve_vandermonde_ls(std::span<const Complex> roots, std::span<const Complex> rhs);

/// Arg(z)/(2 pi) mapped to (-1/2, 1/2].
double wrapped_node(Complex z) noexcept;

/// Classical Prony method on the first 2n samples of `moments`.
PronySolution prony(std::span<const Complex> moments, int n);

inline PronySolution prony(const MomentSequence& moments, int n)
{
    return prony(std::span<const Complex>(moments.values), n);
}

} // namespace dprony

#endif // DPRONY_PRONY_HPP
