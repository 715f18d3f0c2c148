#ifndef QSPT_DRESSED_HPP
#define QSPT_DRESSED_HPP

// Adiabatic dressed states of the driven Lambda atom.
//
// After eliminating the excited level the doublet amplitudes (A1, A2) obey
// i dA/dtau = M A with
//
//     M = [ |xi1|^2/det1        xi1 xi2* / det2      ]
//         [ xi2 xi1* / det1     1 + |xi2|^2 / det2   ]
//
// tr M = p and det M = q. The matrix is not Hermitian, so the two dressed
// vectors are normalized individually but are not mutually orthogonal.

#include <qspt/atomic.hpp>
#include <qspt/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace qspt {

using complex = std::complex<double>;

struct CouplingParams {
    double p = 1.0;
    double q = 0.0;
};

inline CouplingParams coupling_params(const ScaledProblem& sp)
{
    if (sp.det1 == 0.0 || sp.det2 == 0.0)
        throw Error(ErrorCode::ZeroDetuning, "detuning is zero");
    const double s1 = std::norm(sp.xi1) / sp.det1;
    const double s2 = std::norm(sp.xi2) / sp.det2;
    return {1.0 + s1 + s2, s1};
}

struct CharacteristicValues {
    double lambda1 = 1.0; ///< + root
    double lambda2 = 0.0; ///< - root
};

inline CharacteristicValues characteristic_values(double p, double q)
{
    double disc = p * p - 4.0 * q;
    if (disc < 0.0) {
        // tolerate round-off at an exact double root
        if (disc < -8.0 * std::numeric_limits<double>::epsilon() * std::max(p * p, std::abs(4.0 * q)))
            throw Error(ErrorCode::ComplexRoots, "p^2 - 4q < 0");
        disc = 0.0;
    }
    const double s = std::sqrt(disc);
    // The larger-magnitude root is formed without cancellation and the other
    // one from the product of roots.
    if (p >= 0.0) {
        const double l1 = 0.5 * (p + s);
        return {l1, l1 != 0.0 ? q / l1 : 0.0};
    }
    const double l2 = 0.5 * (p - s);
    return {l2 != 0.0 ? q / l2 : 0.0, l2};
}

struct AmplitudePair {
    complex a1;
    complex a2;
};

/// Normalized stationary vector for the characteristic value lambda, phased
/// so that A2 is real and non-negative. When one arm is uncoupled the bare
/// state closest to lambda is returned.
inline AmplitudePair dressed_amplitudes(const ScaledProblem& sp, double lambda, double q)
{
    if (sp.det1 == 0.0 || sp.det2 == 0.0)
        throw Error(ErrorCode::ZeroDetuning, "detuning is zero");
    const complex c12 = sp.xi1 * std::conj(sp.xi2) / sp.det2;
    const complex c21 = sp.xi2 * std::conj(sp.xi1) / sp.det1;
    const double diag2 = 1.0 + std::norm(sp.xi2) / sp.det2;

    const double gap_q = lambda - q;
    const double gap_2 = lambda - diag2;
    if (c12 == 0.0 || c21 == 0.0) {
        if (std::abs(gap_q) <= std::abs(gap_2))
            return {1.0, 0.0};
        return {0.0, 1.0};
    }
    if (std::max(std::abs(gap_q), std::abs(gap_2)) < 1e-14 * (1.0 + std::abs(lambda)))
        throw Error(ErrorCode::DegenerateBranch, "lambda coincides with both diagonal entries");

    // A1/A2 from whichever row of (M - lambda) is better conditioned; the
    // first row reproduces xi2* xi1 / (det2 (lambda - q)).
    const complex ratio = std::abs(gap_q) >= std::abs(gap_2) ? c12 / gap_q : gap_2 / c21;
    const double n = std::hypot(1.0, std::abs(ratio));
    return {ratio / n, 1.0 / n};
}

/// || (M - lambda) A ||_2, the residual of the stationary doublet equations.
inline double stationary_residual(const ScaledProblem& sp, double lambda, const AmplitudePair& a)
{
    const complex m11 = std::norm(sp.xi1) / sp.det1;
    const complex m12 = sp.xi1 * std::conj(sp.xi2) / sp.det2;
    const complex m21 = sp.xi2 * std::conj(sp.xi1) / sp.det1;
    const complex m22 = 1.0 + std::norm(sp.xi2) / sp.det2;
    const complex r1 = (m11 - lambda) * a.a1 + m12 * a.a2;
    const complex r2 = m21 * a.a1 + (m22 - lambda) * a.a2;
    return std::sqrt(std::norm(r1) + std::norm(r2));
}

struct ExcitedAmplitude {
    complex value;
    /// false when |b|^2 > 0.1, i.e. adiabatic elimination is no longer justified
    bool within_validity = true;
};

/// Excited-state amplitude slaved to the doublet amplitudes at scaled time
/// t, given the A1, A2 at that time.
inline ExcitedAmplitude excited_amplitude(const ScaledProblem& sp, complex A1, complex A2, double t_scaled)
{
    if (sp.det1 == 0.0 || sp.det2 == 0.0)
        throw Error(ErrorCode::ZeroDetuning, "detuning is zero");
    // a2 = A2 exp(i tau); both terms then carry exp(-i det1 tau) because
    // det2 - 1 = det1.
    const complex arm1 = -std::conj(sp.xi1) * std::exp(complex(0.0, -sp.det1 * t_scaled)) * A1 / sp.det1;
    const complex arm2 = -std::conj(sp.xi2) * std::exp(complex(0.0, -sp.det2 * t_scaled))
                         * (A2 * std::exp(complex(0.0, t_scaled))) / sp.det2;
    const complex b = arm1 + arm2;
    return {b, std::norm(b) <= 0.1};
}

struct DressedPair {
    double lambda1 = 1.0;
    double lambda2 = 0.0;
    complex a1_l1, a2_l1;
    complex a1_l2, a2_l2;
    complex b_l1, b_l2;
    double p = 1.0;
    double q = 0.0;
    complex bracket;
    bool within_validity = true;

    /// lambda2 - lambda1 with the + root in lambda1; close to -1 for weak fields.
    double gap() const noexcept { return lambda2 - lambda1; }
};

/// A2(l1) A1(l2) - A1(l1) A2(l2).
inline complex superposition_bracket(const DressedPair& dp)
{
    return dp.a2_l1 * dp.a1_l2 - dp.a1_l1 * dp.a2_l2;
}

inline DressedPair dress(const ScaledProblem& sp)
{
    DressedPair dp;
    const auto [p, q] = coupling_params(sp);
    dp.p = p;
    dp.q = q;
    const auto [l1, l2] = characteristic_values(p, q);
    dp.lambda1 = l1;
    dp.lambda2 = l2;
    const auto v1 = dressed_amplitudes(sp, l1, q);
    const auto v2 = dressed_amplitudes(sp, l2, q);
    dp.a1_l1 = v1.a1;
    dp.a2_l1 = v1.a2;
    dp.a1_l2 = v2.a1;
    dp.a2_l2 = v2.a2;
    const auto b1 = excited_amplitude(sp, v1.a1, v1.a2, 0.0);
    const auto b2 = excited_amplitude(sp, v2.a1, v2.a2, 0.0);
    dp.b_l1 = b1.value;
    dp.b_l2 = b2.value;
    dp.within_validity = b1.within_validity && b2.within_validity;
    dp.bracket = superposition_bracket(dp);
    return dp;
}

} // namespace qspt

#endif
