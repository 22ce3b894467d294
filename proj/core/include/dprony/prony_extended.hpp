#ifndef DPRONY_PRONY_EXTENDED_HPP
#define DPRONY_PRONY_EXTENDED_HPP

#include "dprony/prony.hpp"

#include <span>

namespace dprony {

///
/// Classical Prony on the samples m_k = sum_j alpha_j e^{2 pi i x_j k} + noise[k],
/// k = 0 .. 2n-1, evaluated and solved in 113-bit floating point.
///
/// For noise levels below double roundoff, where the double pipeline only
/// sees its own rounding errors. The Hankel and Vandermonde systems are
/// square and solved by complete pivoting; roots start from the double
/// companion eigenvalues and are refined by Aberth iteration. Results are
/// rounded to double. Throws RootFindingError when a system is singular or
/// the refinement does not converge.
///
PronySolution prony_extended(const SpikeSignal& signal, std::span<const Complex> noise, int n);

} // namespace dprony

#endif // DPRONY_PRONY_EXTENDED_HPP
