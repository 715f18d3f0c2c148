#ifndef QSPT_PROPAGATION_HPP
#define QSPT_PROPAGATION_HPP

// Intensity propagation through the coherently prepared medium.
//
// In the retarded frame (zeta = delta0 z / c, tau = delta0 (t - z/c)) the
// intensity obeys, column by column in tau,
//
//     d|eta|^2 / dzeta = 2 Re[ g exp(-i (l2 - l1)(zeta + tau)) ] |eta|^2
//
// with the complex gain coefficient
//
//     g = i K (1/det2 - 1/det1) (w1 alpha* beta + w2 alpha_bar* beta_bar) [A2, A1],
//     K = 2 pi rho omega d1 d2 / (hbar delta0^2).
//
// The closed form follows by integrating in zeta with l1, l2 and the bracket
// frozen at the input front.

#include <qspt/atomic.hpp>
#include <qspt/dressed.hpp>
#include <qspt/error.hpp>
#include <qspt/ode.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qspt {

struct MediumScenario {
    AtomSpecies species;
    double density = 0.0;       ///< atoms / cm^3
    double temperature = 0.0;   ///< K
    double length_scaled = 0.0; ///< delta0 z_max / c
    complex alpha{1.0, 0.0};
    complex beta{0.0, 0.0};
    complex alpha_bar{1.0, 0.0};
    complex beta_bar{0.0, 0.0};
    double carrier_omega = 0.0; ///< rad/s
    complex input_eta{0.0, 0.0};
    ScaleOptions scale;

    void validate() const
    {
        species.validate();
        if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
            throw Error(ErrorCode::InvalidScenario, "|alpha|^2 + |beta|^2 must be 1");
        if (std::abs(std::norm(alpha_bar) + std::norm(beta_bar) - 1.0) > 1e-12)
            throw Error(ErrorCode::InvalidScenario, "|alpha_bar|^2 + |beta_bar|^2 must be 1");
        if (density < 0.0 || std::isnan(density))
            throw Error(ErrorCode::InvalidScenario, "density must be >= 0");
        if (temperature < 0.0 || std::isnan(temperature))
            throw Error(ErrorCode::InvalidScenario, "temperature must be >= 0");
        if (length_scaled < 0.0 || std::isnan(length_scaled))
            throw Error(ErrorCode::InvalidScenario, "length must be >= 0");
    }

    ScaledProblem scaled(complex eta) const
    {
        return scale_for_eta(species, eta, carrier_omega, scale);
    }

    ScaledProblem scaled() const { return scaled(input_eta); }

    /// Dressed pair of the input front.
    DressedPair front_pair() const { return dress(scaled()); }
};

enum class PropagationMode { analytic, numeric_linear, numeric_nonlinear };

inline std::string_view to_string(PropagationMode m) noexcept
{
    switch (m) {
    case PropagationMode::analytic: return "analytic";
    case PropagationMode::numeric_linear: return "numeric_linear";
    case PropagationMode::numeric_nonlinear: return "numeric_nonlinear";
    }
    return "unknown";
}

inline PropagationMode parse_propagation_mode(std::string_view s)
{
    if (s == "analytic")
        return PropagationMode::analytic;
    if (s == "numeric_linear" || s == "linear")
        return PropagationMode::numeric_linear;
    if (s == "numeric_nonlinear" || s == "nonlinear")
        return PropagationMode::numeric_nonlinear;
    throw Error(ErrorCode::ConfigError, "unknown propagation mode '" + std::string(s) + "'");
}

struct IntensityField {
    std::vector<double> zeta_grid;
    std::vector<double> tau_grid;
    std::vector<double> values; ///< row-major, values[iz * tau_grid.size() + it]
    PropagationMode mode = PropagationMode::analytic;

    double at(std::size_t iz, std::size_t it) const { return values[iz * tau_grid.size() + it]; }
    double& at(std::size_t iz, std::size_t it) { return values[iz * tau_grid.size() + it]; }

    std::vector<double> trace_at(std::size_t iz) const
    {
        const auto n = tau_grid.size();
        return {values.begin() + static_cast<std::ptrdiff_t>(iz * n),
                values.begin() + static_cast<std::ptrdiff_t>((iz + 1) * n)};
    }
};

// ---------------------------------------------------------------------------
// Coefficients

/// w1 alpha* beta + w2 alpha_bar* beta_bar.
inline complex channel_coherence(const MediumScenario& ms)
{
    const auto w = thermal_weights(ms.species.delta0, ms.temperature);
    return w.lower * std::conj(ms.alpha) * ms.beta + w.upper * std::conj(ms.alpha_bar) * ms.beta_bar;
}

/// K = 2 pi rho omega d1 d2 / (hbar delta0^2), dimensionless.
inline double gain_prefactor(const MediumScenario& ms)
{
    const auto& s = ms.species;
    return cgs::two_pi * ms.density * ms.carrier_omega * s.d1 * s.d2 / (cgs::hbar * s.delta0 * s.delta0);
}

/// Coefficient of exp(-i (l2 - l1)(zeta + tau)) in the intensity equation,
/// for explicit detunings (used to probe configurations that no species can
/// produce, such as det1 = det2).
inline complex gain_coefficient(const MediumScenario& ms, const ScaledProblem& sp, const DressedPair& dp)
{
    if (sp.det1 == 0.0 || sp.det2 == 0.0)
        throw Error(ErrorCode::ZeroDetuning, "detuning is zero");
    const double detuning_factor = 1.0 / sp.det2 - 1.0 / sp.det1;
    return complex(0.0, 1.0) * gain_prefactor(ms) * detuning_factor * channel_coherence(ms) * dp.bracket;
}

inline complex gain_coefficient(const MediumScenario& ms, const DressedPair& dp)
{
    return gain_coefficient(ms, ms.scaled(), dp);
}

// ---------------------------------------------------------------------------
// Closed forms

/// ln(|eta(zeta, tau)|^2 / |eta(0, tau)|^2) for frozen dressed parameters,
/// tau retarded:  2 Re[ (g / i) (1 - exp(-i D zeta)) exp(-i D tau) / D ],
/// D = l2 - l1.
inline double log_gain_exponent(complex g, double gap, double zeta, double tau)
{
    if (zeta == 0.0)
        return 0.0;
    const complex i(0.0, 1.0);
    const complex window = gap != 0.0 ? (1.0 - std::exp(-i * gap * zeta)) / gap : i * zeta;
    return 2.0 * std::real(-i * g * window * std::exp(-i * gap * tau));
}

/// |eta(zeta, tau)|^2 for an input front of intensity `front_intensity`, tau
/// retarded. Exact for the frozen-parameter (weak-field) equation.
inline double analytic_intensity(const MediumScenario& ms, const DressedPair& dp, double zeta, double tau,
                                 double front_intensity)
{
    if (zeta == 0.0)
        return front_intensity;
    const complex g = gain_coefficient(ms, dp);
    return front_intensity * std::exp(log_gain_exponent(g, dp.gap(), zeta, tau));
}

inline double analytic_intensity(const MediumScenario& ms, const DressedPair& dp, double zeta, double tau)
{
    return analytic_intensity(ms, dp, zeta, tau, std::norm(ms.input_eta));
}

/// Tolerance on the phase conditions of radiation-prepared superpositions.
inline constexpr double phase_condition_tolerance = 1e-12;

/// Radiation-prepared superpositions: alpha and beta_bar real, beta and
/// alpha_bar imaginary.
inline bool radiation_prepared(const MediumScenario& ms, double tol = phase_condition_tolerance)
{
    return std::abs(ms.alpha.imag()) <= tol && std::abs(ms.beta.real()) <= tol
           && std::abs(ms.alpha_bar.real()) <= tol && std::abs(ms.beta_bar.imag()) <= tol;
}

/// The exponent of the relative intensity for radiation-prepared media, in
/// the sine form, with tau_lab = delta0 t (lab time, tau_lab = tau + zeta):
///
///   i X (sin(D (tau_lab - zeta)) - sin(D tau_lab)),
///   X = 2 K (1/det2 - 1/det1) S [A2, A1] / D,  S = -(w1 alpha* beta + w2 alpha_bar* beta_bar).
///
/// Returned complex so that the reality of the exponent can be checked.
inline complex radiation_prepared_exponent(const MediumScenario& ms, const DressedPair& dp, double zeta,
                                           double tau_lab)
{
    if (!radiation_prepared(ms))
        throw Error(ErrorCode::PhaseConventionViolation,
                    "expected real alpha, beta_bar and imaginary beta, alpha_bar");
    const ScaledProblem sp = ms.scaled();
    const double gap = dp.gap();
    const double detuning_factor = 1.0 / sp.det2 - 1.0 / sp.det1;
    const complex s = -channel_coherence(ms);
    const complex x = 2.0 * gain_prefactor(ms) * detuning_factor * s * dp.bracket / gap;
    const double wave = std::sin(gap * (tau_lab - zeta)) - std::sin(gap * tau_lab);
    return complex(0.0, 1.0) * x * wave;
}

/// |eta(z, t)|^2 / |eta(0, t)|^2 for radiation-prepared media, lab time.
inline double relative_intensity_radiation_prepared(const MediumScenario& ms, const DressedPair& dp,
                                                    double zeta, double tau_lab)
{
    if (zeta == 0.0) {
        if (!radiation_prepared(ms))
            throw Error(ErrorCode::PhaseConventionViolation,
                        "expected real alpha, beta_bar and imaginary beta, alpha_bar");
        return 1.0;
    }
    return std::exp(radiation_prepared_exponent(ms, dp, zeta, tau_lab).real());
}

// ---------------------------------------------------------------------------
// Right-hand side and integration

/// d|eta|^2/dzeta at (zeta, tau) for the given dressed parameters.
inline double intensity_derivative(complex g, double gap, double zeta, double tau, double intensity)
{
    if (intensity == 0.0)
        return 0.0;
    const complex phase = std::exp(complex(0.0, -gap * (zeta + tau)));
    return 2.0 * std::real(g * phase) * intensity;
}

inline double intensity_derivative(const MediumScenario& ms, const DressedPair& dp, double zeta, double tau,
                                   double intensity)
{
    if (intensity < 0.0)
        throw Error(ErrorCode::NonPositiveInput, "intensity must be >= 0");
    return intensity_derivative(gain_coefficient(ms, dp), dp.gap(), zeta, tau, intensity);
}

struct PropagationGrid {
    std::vector<double> zeta;
    std::vector<double> tau;

    static PropagationGrid uniform(double zeta_max, std::size_t zeta_points, double tau_start, double tau_span,
                                   std::size_t tau_points)
    {
        if (zeta_points < 2 || tau_points < 2)
            throw Error(ErrorCode::GridError, "grids need at least two points");
        if (!(zeta_max > 0.0) || !(tau_span > 0.0))
            throw Error(ErrorCode::GridError, "grid spans must be positive");
        PropagationGrid g;
        g.zeta.resize(zeta_points);
        g.tau.resize(tau_points);
        for (std::size_t i = 0; i < zeta_points; ++i)
            g.zeta[i] = zeta_max * static_cast<double>(i) / static_cast<double>(zeta_points - 1);
        for (std::size_t i = 0; i < tau_points; ++i)
            g.tau[i] = tau_start + tau_span * static_cast<double>(i) / static_cast<double>(tau_points - 1);
        return g;
    }

    void validate() const
    {
        if (zeta.empty() || tau.empty())
            throw Error(ErrorCode::GridError, "empty grid");
        if (zeta.front() != 0.0)
            throw Error(ErrorCode::GridError, "zeta grid must start at the medium entrance (0)");
        for (std::size_t i = 1; i < zeta.size(); ++i)
            if (!(zeta[i] > zeta[i - 1]))
                throw Error(ErrorCode::GridError, "zeta grid must be strictly increasing");
        for (std::size_t i = 1; i < tau.size(); ++i)
            if (!(tau[i] > tau[i - 1]))
                throw Error(ErrorCode::GridError, "tau grid must be strictly increasing");
    }
};

struct PropagationOptions {
    ode::Options integrator{};
    /// Optional |eta(0, tau)|^2 per tau sample; constant |input_eta|^2 when empty.
    std::vector<double> front;
};

namespace detail {
inline std::vector<double> front_profile(const MediumScenario& ms, const PropagationGrid& grid,
                                         const PropagationOptions& opt)
{
    if (opt.front.empty())
        return std::vector<double>(grid.tau.size(), std::norm(ms.input_eta));
    if (opt.front.size() != grid.tau.size())
        throw Error(ErrorCode::GridError, "front profile size does not match the tau grid");
    for (double v : opt.front)
        if (!(v >= 0.0))
            throw Error(ErrorCode::NonPositiveInput, "front intensity must be >= 0");
    return opt.front;
}

inline complex front_phase(const MediumScenario& ms)
{
    const double a = std::abs(ms.input_eta);
    return a > 0.0 ? ms.input_eta / a : complex(1.0, 0.0);
}
} // namespace detail

/// Closed-form field on the grid with dressed parameters taken from each
/// column's input intensity.
inline IntensityField propagate_analytic(const MediumScenario& ms, const PropagationGrid& grid,
                                         const PropagationOptions& opt = {})
{
    ms.validate();
    grid.validate();
    const auto front = detail::front_profile(ms, grid, opt);
    const complex phase = detail::front_phase(ms);
    IntensityField field{grid.zeta, grid.tau, std::vector<double>(grid.zeta.size() * grid.tau.size()),
                         PropagationMode::analytic};
    const auto nt = grid.tau.size();
    for (std::size_t it = 0; it < nt; ++it) {
        const ScaledProblem sp = ms.scaled(phase * std::sqrt(front[it]));
        const DressedPair dp = dress(sp);
        const complex g = gain_coefficient(ms, sp, dp);
        for (std::size_t iz = 0; iz < grid.zeta.size(); ++iz)
            field.at(iz, it) = iz == 0 ? front[it]
                                       : front[it] * std::exp(log_gain_exponent(g, dp.gap(), grid.zeta[iz],
                                                                                grid.tau[it]));
    }
    return field;
}

/// Integrates the intensity equation in zeta for every tau column with an
/// adaptive Dormand-Prince pair. Linear mode freezes the dressed parameters
/// at the input front; nonlinear mode re-dresses the atom from the local
/// intensity at every right-hand-side evaluation.
inline IntensityField propagate_numeric(const MediumScenario& ms, const PropagationGrid& grid,
                                        PropagationMode mode, const PropagationOptions& opt = {})
{
    if (mode == PropagationMode::analytic)
        return propagate_analytic(ms, grid, opt);
    ms.validate();
    grid.validate();
    const auto front = detail::front_profile(ms, grid, opt);
    const complex phase = detail::front_phase(ms);
    const ScaledProblem base = ms.scaled();
    IntensityField field{grid.zeta, grid.tau, std::vector<double>(grid.zeta.size() * grid.tau.size()), mode};
    const auto nt = grid.tau.size();

    for (std::size_t it = 0; it < nt; ++it) {
        const double tau = grid.tau[it];
        std::vector<double> column;
        if (front[it] == 0.0 || grid.zeta.size() == 1) {
            column.assign(grid.zeta.size(), front[it]);
        } else if (mode == PropagationMode::numeric_linear) {
            const ScaledProblem sp = base.with_eta(phase * std::sqrt(front[it]));
            const DressedPair dp = dress(sp);
            const complex g = gain_coefficient(ms, sp, dp);
            const double gap = dp.gap();
            column = ode::integrate(
                [&](double zeta, double y) { return intensity_derivative(g, gap, zeta, tau, y); }, front[it],
                grid.zeta, opt.integrator);
        } else {
            column = ode::integrate(
                [&](double zeta, double y) {
                    if (!(y > 0.0))
                        return 0.0;
                    const ScaledProblem sp = base.with_eta(phase * std::sqrt(y));
                    const DressedPair dp = dress(sp);
                    return intensity_derivative(gain_coefficient(ms, sp, dp), dp.gap(), zeta, tau, y);
                },
                front[it], grid.zeta, opt.integrator);
        }
        for (std::size_t iz = 0; iz < grid.zeta.size(); ++iz) {
            double v = column[iz];
            if (v < 0.0) {
                if (v < -1e-12 * front[it])
                    throw Error(ErrorCode::IntegrationFailure, "intensity became negative");
                v = 0.0;
            }
            field.at(iz, it) = v;
        }
        field.at(0, it) = front[it];
    }
    return field;
}

} // namespace qspt

#endif
