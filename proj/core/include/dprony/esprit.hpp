#ifndef DPRONY_ESPRIT_HPP
#define DPRONY_ESPRIT_HPP

#include "dprony/signal.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace dprony {

struct EspritConfig
{
    int m_samples = 0;   ///< M: samples g(0), ..., g(M-1)
    int hankel_rows = 0; ///< L; 0 selects max(floor(M/2), n+1)
    int n = 0;           ///< model order
};

struct EspritResult
{
    std::vector<double> nodes; ///< ascending, in (-1/2, 1/2]
    std::vector<Complex> amplitudes;
};

class RankCollapseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

///
/// Least-squares ESPRIT on integer-frequency samples.
///
/// Builds the L x (M-L+1) Hankel matrix of the samples, keeps the n leading
/// left singular vectors U, solves U[0:L-1] Psi = U[1:L] in least squares
/// and reads the nodes off the eigenvalues of Psi. Amplitudes come from a
/// Vandermonde least-squares fit to all M samples.
///
/// Throws RankCollapseError when the Hankel matrix has numerical rank < n.
///
EspritResult esprit(std::span<const Complex> moments, const EspritConfig& config);

} // namespace dprony

#endif // DPRONY_ESPRIT_HPP
