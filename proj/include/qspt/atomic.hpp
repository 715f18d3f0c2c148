#ifndef QSPT_ATOMIC_HPP
#define QSPT_ATOMIC_HPP

// Atomic species data, hyperfine dipole prefactors, oscillator strengths and
// the reduction of physical parameters to the dimensionless doublet problem.
//
// Electromagnetic quantities are CGS-Gaussian throughout: dipole moments in
// statC cm, field amplitudes in statV/cm, densities in cm^-3.

#include <qspt/constants.hpp>
#include <qspt/error.hpp>
#include <qspt/keyvalue.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <utility>

namespace qspt {

/// How quoted frequencies (MHz values, multiples of the splitting) are read.
enum class FrequencyConvention { cyclic, angular };

inline std::string_view to_string(FrequencyConvention c) noexcept
{
    return c == FrequencyConvention::cyclic ? "cyclic" : "angular";
}

inline FrequencyConvention parse_frequency_convention(std::string_view s)
{
    if (s == "cyclic")
        return FrequencyConvention::cyclic;
    if (s == "angular")
        return FrequencyConvention::angular;
    throw Error(ErrorCode::ConfigError,
                "frequency_convention must be 'cyclic' or 'angular', got '" + std::string(s) + "'");
}

/// Converts a quoted frequency in MHz to rad/s.
inline double mhz_to_rad_per_s(double mhz, FrequencyConvention c) noexcept
{
    const double hz = mhz * 1.0e6;
    return c == FrequencyConvention::cyclic ? cgs::two_pi * hz : hz;
}

// ---------------------------------------------------------------------------
// Angular momentum

/// Projection-dependent prefactor of the circular component d_- between
/// hyperfine sublevels, |F_from, M_from> -> |F_to, M_from - 1>, times the
/// reduced element. The three branches F_to = F_from, F_from + 1, F_from - 1
/// are evaluated as written in the standard table for d_-:
///
///   <F,M-1|d-|F,M>     = sqrt((F-M+1)(F+M) / (F(F+1)(2F+1)))   <F|d|F>
///   <F,M-1|d-|F-1,M>   = sqrt((F-M+1)(F-M) / (F(2F-1)(2F+1)))  <F|d|F-1>
///   <F-1,M-1|d-|F,M>   = sqrt((F+M+1)(F+M) / (F(2F-1)(2F+1)))  <F-1|d|F>
inline double dipole_minus(int F_to, int M_to, int F_from, int M_from, double reduced)
{
    if (F_to < 0 || F_from < 0)
        throw Error(ErrorCode::SelectionRuleViolation, "negative total angular momentum");
    if (M_to != M_from - 1)
        throw Error(ErrorCode::SelectionRuleViolation, "d- requires M_to = M_from - 1");
    if (std::abs(M_from) > F_from || std::abs(M_to) > F_to)
        throw Error(ErrorCode::SelectionRuleViolation, "projection exceeds total angular momentum");

    const int delta = F_to - F_from;
    double num = 0.0;
    double den = 0.0;
    if (delta == 0) {
        const double F = F_from;
        const double M = M_from;
        if (F_from == 0)
            throw Error(ErrorCode::SelectionRuleViolation, "F = 0 -> F = 0 is forbidden");
        num = (F - M + 1.0) * (F + M);
        den = F * (F + 1.0) * (2.0 * F + 1.0);
    } else if (delta == 1) {
        const double F = F_to;
        const double M = M_from;
        num = (F - M + 1.0) * (F - M);
        den = F * (2.0 * F - 1.0) * (2.0 * F + 1.0);
    } else if (delta == -1) {
        const double F = F_from;
        const double M = M_from;
        num = (F + M + 1.0) * (F + M);
        den = F * (2.0 * F - 1.0) * (2.0 * F + 1.0);
    } else {
        throw Error(ErrorCode::UnsupportedBranch, "|F_to - F_from| > 1");
    }
    return std::sqrt(num / den) * reduced;
}

/// Circular component d_+, |F_from, M_from> -> |F_to, M_from + 1>, obtained
/// from d_- by conjugation. With a real reduced element the two coincide.
inline double dipole_plus(int F_to, int M_to, int F_from, int M_from, double reduced)
{
    if (M_to != M_from + 1)
        throw Error(ErrorCode::SelectionRuleViolation, "d+ requires M_to = M_from + 1");
    return dipole_minus(F_from, M_from, F_to, M_to, reduced);
}

/// sqrt(3 hbar e^2 (2F+1) f / (2 m omega)), statC cm.
inline double reduced_dipole_from_oscillator_strength(double f, double omega_transition, int F)
{
    if (!(f > 0.0) || !(omega_transition > 0.0))
        throw Error(ErrorCode::NonPositiveInput, "oscillator strength and frequency must be positive");
    if (F < 0)
        throw Error(ErrorCode::NonPositiveInput, "F must be non-negative");
    using namespace cgs;
    return std::sqrt(3.0 * hbar * electron_charge * electron_charge * (2.0 * F + 1.0) * f
                     / (2.0 * electron_mass * omega_transition));
}

/// Inverse of reduced_dipole_from_oscillator_strength.
inline double oscillator_strength_from_reduced_dipole(double d, double omega_transition, int F)
{
    if (!(d > 0.0) || !(omega_transition > 0.0))
        throw Error(ErrorCode::NonPositiveInput, "dipole and frequency must be positive");
    using namespace cgs;
    return 2.0 * electron_mass * omega_transition * d * d
           / (3.0 * hbar * electron_charge * electron_charge * (2.0 * F + 1.0));
}

// ---------------------------------------------------------------------------
// Thermal populations

struct ThermalWeights {
    double lower = 1.0;
    double upper = 0.0;
};

/// Boltzmann split between the two channels formed from the lower and the
/// upper doublet level. T = 0 gives (1, 0); infinite T gives (1/2, 1/2).
inline ThermalWeights thermal_weights(double delta0, double temperature)
{
    if (temperature < 0.0 || std::isnan(temperature))
        throw Error(ErrorCode::NonPositiveInput, "temperature must be >= 0");
    if (temperature == 0.0)
        return {1.0, 0.0};
    if (std::isinf(temperature))
        return {0.5, 0.5};
    const double x = cgs::hbar * delta0 / (cgs::boltzmann * temperature);
    const double e = std::exp(-std::abs(x));
    const double big = 1.0 / (1.0 + e);
    const double small = e / (1.0 + e);
    return x >= 0.0 ? ThermalWeights{big, small} : ThermalWeights{small, big};
}

// ---------------------------------------------------------------------------
// Species

/// Which magnetic sublevels the circularly polarized (sigma+) wave couples.
/// Both doublet levels are taken at their M and driven to the excited
/// hyperfine level excited_F, M + 1.
struct SublevelSelection {
    int excited_F = 2;
    int M_lower = 0;
    int M_upper = 0;
};

struct AtomSpecies {
    std::string label;
    double delta0 = 0.0; ///< doublet splitting, rad/s
    double omega1 = 0.0; ///< lower doublet level -> excited, rad/s
    double omega2 = 0.0; ///< upper doublet level -> excited, rad/s
    double d1 = 0.0;     ///< statC cm
    double d2 = 0.0;     ///< statC cm
    std::optional<double> f1;
    std::optional<double> f2;
    int ground_F_lower = 0;
    int ground_F_upper = 0;

    void validate() const
    {
        if (!(delta0 > 0.0))
            throw Error(ErrorCode::NonPositiveSplitting, "delta0 must be positive");
        if (!(omega1 > 0.0) || !(omega2 > 0.0))
            throw Error(ErrorCode::InvalidSpecies, "transition frequencies must be positive");
        if (std::abs((omega1 - omega2) - delta0) > 1e-6 * delta0)
            throw Error(ErrorCode::InvalidSpecies, "omega1 - omega2 must equal delta0");
        if (!(d1 > 0.0) || !(d2 > 0.0))
            throw Error(ErrorCode::InvalidSpecies, "dipole moments must be positive");
        if (ground_F_lower < 0 || ground_F_upper < 0)
            throw Error(ErrorCode::InvalidSpecies, "F quantum numbers must be >= 0");
    }
};

/// Builds a species from per-arm oscillator strengths: reduced elements from
/// the oscillator-strength relation, then the sigma+ sublevel prefactor.
inline AtomSpecies species_from_oscillator_strengths(std::string label, double delta0,
                                                     double omega1, double omega2, double f1,
                                                     double f2, int F_lower, int F_upper,
                                                     const SublevelSelection& sel = {})
{
    if (!(delta0 > 0.0))
        throw Error(ErrorCode::NonPositiveSplitting, "delta0 must be positive");
    AtomSpecies s;
    s.label = std::move(label);
    s.delta0 = delta0;
    s.omega1 = omega1;
    s.omega2 = omega2;
    s.f1 = f1;
    s.f2 = f2;
    s.ground_F_lower = F_lower;
    s.ground_F_upper = F_upper;
    const double r1 = reduced_dipole_from_oscillator_strength(f1, omega1, F_lower);
    const double r2 = reduced_dipole_from_oscillator_strength(f2, omega2, F_upper);
    s.d1 = dipole_plus(sel.excited_F, sel.M_lower + 1, F_lower, sel.M_lower, r1);
    s.d2 = dipole_plus(sel.excited_F, sel.M_upper + 1, F_upper, sel.M_upper, r2);
    s.validate();
    return s;
}

namespace sodium {
inline constexpr double splitting_mhz = 1771.6;
inline constexpr double omega1_over_delta0 = 287351.0;
inline constexpr double omega2_over_delta0 = 287350.0;
/// Total 3S1/2 - 3P1/2 oscillator strength.
inline constexpr double f_d1 = 0.32;
/// Hyperfine fractions of f_d1 into F' = 2 for I = 3/2, J = J' = 1/2.
inline constexpr double fraction_F1_to_F2 = 5.0 / 6.0;
inline constexpr double fraction_F2_to_F2 = 1.0 / 2.0;
} // namespace sodium

/// 23Na 3S1/2 (F = 1, 2) - 3P1/2, excited hyperfine structure collapsed.
inline AtomSpecies sodium_preset(FrequencyConvention conv = FrequencyConvention::cyclic,
                                 const SublevelSelection& sel = {})
{
    const double delta0 = mhz_to_rad_per_s(sodium::splitting_mhz, conv);
    return species_from_oscillator_strengths(
        "Na-23 3S1/2-3P1/2", delta0, sodium::omega1_over_delta0 * delta0,
        sodium::omega2_over_delta0 * delta0, sodium::f_d1 * sodium::fraction_F1_to_F2,
        sodium::f_d1 * sodium::fraction_F2_to_F2, 1, 2, sel);
}

/// Reads a species from a key-value file. Recognized keys: label, delta0_mhz,
/// omega1_over_delta0, omega2_over_delta0, f1, f2, F_lower, F_upper and the
/// optional excited_F, M_lower, M_upper.
inline AtomSpecies species_from_keyvalue(const KeyValueFile& kv, FrequencyConvention conv)
{
    SublevelSelection sel;
    sel.excited_F = static_cast<int>(kv.get_int("excited_F").value_or(sel.excited_F));
    sel.M_lower = static_cast<int>(kv.get_int("M_lower").value_or(sel.M_lower));
    sel.M_upper = static_cast<int>(kv.get_int("M_upper").value_or(sel.M_upper));
    const std::string label = kv.get_string("label").value_or("custom");
    const double mhz = kv.require(kv.get_double("delta0_mhz"), "delta0_mhz");
    const double r1 = kv.require(kv.get_double("omega1_over_delta0"), "omega1_over_delta0");
    const double r2 = kv.require(kv.get_double("omega2_over_delta0"), "omega2_over_delta0");
    const double f1 = kv.require(kv.get_double("f1"), "f1");
    const double f2 = kv.require(kv.get_double("f2"), "f2");
    const auto Fl = kv.require(kv.get_int("F_lower"), "F_lower");
    const auto Fu = kv.require(kv.get_int("F_upper"), "F_upper");
    for (const auto& k : kv.unused_keys())
        kv.fail(kv.line_of(k), "unknown species key '" + k + "'");
    const double delta0 = mhz_to_rad_per_s(mhz, conv);
    try {
        return species_from_oscillator_strengths(label, delta0, r1 * delta0, r2 * delta0, f1, f2,
                                                 static_cast<int>(Fl), static_cast<int>(Fu), sel);
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, kv.source() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Dimensionless problem

struct ScaleOptions {
    /// Minimum |detuning| in units of delta0 for adiabatic elimination.
    double adiabaticity_floor = 5.0;
};

struct ScaledProblem {
    double det1 = 0.0;                 ///< (omega - omega1) / delta0
    double det2 = 0.0;                 ///< (omega - omega2) / delta0
    std::complex<double> xi1;          ///< d1 E0 / (hbar delta0)
    std::complex<double> xi2;          ///< d2 E0 / (hbar delta0)
    std::complex<double> eta;          ///< 2 d1 d2 E0 / ((d1 + d2) hbar delta0)
    double omega_scaled = 0.0;         ///< carrier / delta0
    double arm_ratio = 1.0;            ///< d1 / d2

    /// Same detunings and arms, different field strength.
    ScaledProblem with_eta(std::complex<double> new_eta) const
    {
        ScaledProblem sp = *this;
        sp.eta = new_eta;
        sp.xi1 = new_eta * (0.5 * (1.0 + arm_ratio));
        sp.xi2 = new_eta * (0.5 * (1.0 + arm_ratio) / arm_ratio);
        return sp;
    }
};

namespace detail {
inline ScaledProblem scaled_detunings(const AtomSpecies& species, double carrier_omega,
                                      const ScaleOptions& opts)
{
    if (!(species.delta0 > 0.0))
        throw Error(ErrorCode::NonPositiveSplitting, "delta0 must be positive");
    ScaledProblem sp;
    sp.det1 = (carrier_omega - species.omega1) / species.delta0;
    sp.det2 = (carrier_omega - species.omega2) / species.delta0;
    sp.omega_scaled = carrier_omega / species.delta0;
    sp.arm_ratio = species.d1 / species.d2;
    if (!(std::abs(sp.det1) > opts.adiabaticity_floor) || !(std::abs(sp.det2) > opts.adiabaticity_floor))
        throw Error(ErrorCode::DetuningTooSmall,
                    "carrier within " + std::to_string(opts.adiabaticity_floor)
                        + " delta0 of a transition");
    return sp;
}
} // namespace detail

/// Reduces a physical field amplitude E0 (statV/cm, possibly complex) and
/// carrier (rad/s) to the dimensionless doublet problem.
inline ScaledProblem scale_parameters(const AtomSpecies& species, std::complex<double> field_amplitude,
                                      double carrier_omega, const ScaleOptions& opts = {})
{
    ScaledProblem sp = detail::scaled_detunings(species, carrier_omega, opts);
    const double unit = cgs::hbar * species.delta0;
    sp.xi1 = field_amplitude * (species.d1 / unit);
    sp.xi2 = field_amplitude * (species.d2 / unit);
    sp.eta = field_amplitude * (2.0 * species.d1 * species.d2 / ((species.d1 + species.d2) * unit));
    return sp;
}

/// As scale_parameters, but parametrized by the dimensionless amplitude eta.
inline ScaledProblem scale_for_eta(const AtomSpecies& species, std::complex<double> eta,
                                   double carrier_omega, const ScaleOptions& opts = {})
{
    return detail::scaled_detunings(species, carrier_omega, opts).with_eta(eta);
}

/// Field amplitude in statV/cm corresponding to eta for this species.
inline std::complex<double> field_for_eta(const AtomSpecies& species, std::complex<double> eta)
{
    return eta * ((species.d1 + species.d2) * cgs::hbar * species.delta0
                  / (2.0 * species.d1 * species.d2));
}

inline std::complex<double> field_from_si(std::complex<double> volts_per_metre)
{
    return volts_per_metre / cgs::statvolt_per_cm_in_si;
}

} // namespace qspt

#endif
