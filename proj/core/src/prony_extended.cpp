#include "dprony/prony_extended.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace dprony {

namespace {

using Real = boost::multiprecision::cpp_bin_float_quad;
using Cplx = boost::multiprecision::cpp_complex_quad;
using Matrix = std::vector<std::vector<Cplx>>;

constexpr int max_aberth_iterations = 200;

Complex to_double(const Cplx& z)
{
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// Solves the square system a x = b by Gaussian elimination with complete
// pivoting. Throws on an exactly zero pivot.
std::vector<Cplx> solve_square(Matrix a, std::vector<Cplx> b)
{
    const std::size_t n = b.size();
    std::vector<std::size_t> col(n);
    std::iota(col.begin(), col.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pr = k;
        std::size_t pc = k;
        Real best = -1;
        for (std::size_t i = k; i < n; ++i) {
            for (std::size_t j = k; j < n; ++j) {
                const Real mag = abs(a[i][j]);
                if (mag > best) {
                    best = mag;
                    pr = i;
                    pc = j;
                }
            }
        }
        if (best == 0) {
            throw RootFindingError("prony_extended: singular system", {});
        }
        std::swap(a[k], a[pr]);
        std::swap(b[k], b[pr]);
        if (pc != k) {
            for (auto& row : a) {
                std::swap(row[k], row[pc]);
            }
            std::swap(col[k], col[pc]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Cplx f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    std::vector<Cplx> y(n);
    for (std::size_t k = n; k-- > 0;) {
        Cplx acc = b[k];
        for (std::size_t j = k + 1; j < n; ++j) {
            acc -= a[k][j] * y[j];
        }
        y[k] = acc / a[k][k];
    }
    std::vector<Cplx> x(n);
    for (std::size_t k = 0; k < n; ++k) {
        x[col[k]] = y[k];
    }
    return x;
}

// Simultaneous refinement of all roots of the monic polynomial with lower
// coefficients c. Stops once the relative steps fall below `tight`, or stall
// below `loose` (clustered roots cannot be resolved to working precision).
void aberth(const std::vector<Cplx>& c, std::vector<Cplx>& z)
{
    const std::size_t n = z.size();
    const Real tight = Real(1e-30);
    const Real loose = Real(1e-17);
    Real previous = Real(1);
    for (int it = 0; it < max_aberth_iterations; ++it) {
        Real largest = 0;
        for (std::size_t k = 0; k < n; ++k) {
            Cplx p = 1;
            Cplx dp = 0;
            for (std::size_t j = n; j-- > 0;) {
                dp = dp * z[k] + p;
                p = p * z[k] + c[j];
            }
            if (p == Cplx(0)) {
                continue;
            }
            const Cplx ratio = p / dp;
            Cplx repulsion = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != k) {
                    repulsion += Cplx(1) / (z[k] - z[j]);
                }
            }
            const Cplx step = ratio / (Cplx(1) - ratio * repulsion);
            z[k] -= step;
            largest = std::max(largest, Real(abs(step) / std::max(Real(1), Real(abs(z[k])))));
        }
        if (largest < tight || (largest < loose && largest >= previous / 2)) {
            return;
        }
        previous = largest;
    }
    if (previous < loose) {
        return;
    }
    std::vector<Complex> best(n);
    std::transform(z.begin(), z.end(), best.begin(), to_double);
    throw RootFindingError("prony_extended: root refinement did not converge", std::move(best));
}

} // namespace

PronySolution prony_extended(const SpikeSignal& signal, std::span<const Complex> noise, int n)
{
    if (n < 1) {
        throw std::invalid_argument("prony_extended: n must be >= 1");
    }
    const auto count = static_cast<std::size_t>(2 * n);
    if (noise.size() != count) {
        throw std::invalid_argument("prony_extended: need " + std::to_string(count) +
                                    " noise values, got " + std::to_string(noise.size()));
    }
    const auto un = static_cast<std::size_t>(n);

    const Real two_pi = 2 * boost::math::constants::pi<Real>();
    std::vector<Cplx> m(count);
    for (std::size_t k = 0; k < count; ++k) {
        Cplx acc(Real(noise[k].real()), Real(noise[k].imag()));
        for (std::size_t j = 0; j < signal.size(); ++j) {
            const Complex a = signal.amplitudes()[j];
            Real phase = Real(signal.nodes()[j]) * Real(k);
            phase -= floor(phase);
            acc += Cplx(Real(a.real()), Real(a.imag())) * polar(Real(1), two_pi * phase);
        }
        m[k] = acc;
    }

    Matrix h(un, std::vector<Cplx>(un));
    std::vector<Cplx> rhs(un);
    for (std::size_t i = 0; i < un; ++i) {
        for (std::size_t j = 0; j < un; ++j) {
            h[i][j] = m[i + j];
        }
        rhs[i] = -m[un + i];
    }
    const std::vector<Cplx> q = solve_square(h, rhs);

    PronySolution out;
    {
        Real sq = 0;
        for (std::size_t i = 0; i < un; ++i) {
            Cplx r = -rhs[i];
            for (std::size_t j = 0; j < un; ++j) {
                r += h[i][j] * q[j];
            }
            sq += norm(r);
        }
        out.hankel_residual = static_cast<double>(sqrt(sq));
    }

    std::vector<Complex> q_double(un);
    std::transform(q.begin(), q.end(), q_double.begin(), to_double);
    const std::vector<Complex> start = polynomial_roots(q_double);
    std::vector<Cplx> z(un);
    for (std::size_t k = 0; k < un; ++k) {
        z[k] = Cplx(Real(start[k].real()), Real(start[k].imag()));
    }
    aberth(q, z);

    Matrix v(un, std::vector<Cplx>(un));
    for (std::size_t k = 0; k < un; ++k) {
        Cplx power = 1;
        for (std::size_t i = 0; i < un; ++i) {
            v[i][k] = power;
            power *= z[k];
        }
    }
    const std::vector<Cplx> head(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(un));
    const std::vector<Cplx> amps = solve_square(v, head);
    {
        Real sq = 0;
        for (std::size_t i = 0; i < un; ++i) {
            Cplx r = -head[i];
            for (std::size_t k = 0; k < un; ++k) {
                r += v[i][k] * amps[k];
            }
            sq += norm(r);
        }
        out.vandermonde_residual = static_cast<double>(sqrt(sq));
    }

    std::vector<double> nodes(un);
    for (std::size_t k = 0; k < un; ++k) {
        Real y = arg(z[k]) / two_pi;
        if (y <= Real(-0.5)) {
            y = Real(0.5);
        }
        nodes[k] = static_cast<double>(y);
    }
    std::vector<std::size_t> order(un);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
    for (const auto k : order) {
        out.roots.push_back(to_double(z[k]));
        out.wrapped_nodes.push_back(nodes[k]);
        out.amplitudes.push_back(to_double(amps[k]));
    }
    return out;
}

} // namespace dprony
