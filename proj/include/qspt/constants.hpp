#ifndef QSPT_CONSTANTS_HPP
#define QSPT_CONSTANTS_HPP

#include <numbers>

// CODATA 2018, CGS-Gaussian.
namespace qspt::cgs {

inline constexpr double hbar = 1.054571817e-27;            // erg s
inline constexpr double electron_charge = 4.803204712570263e-10; // statC
inline constexpr double electron_mass = 9.1093837015e-28;  // g
inline constexpr double boltzmann = 1.380649e-16;          // erg / K
inline constexpr double speed_of_light = 2.99792458e10;    // cm / s

/// 1 statV/cm expressed in V/m.
inline constexpr double statvolt_per_cm_in_si = 2.99792458e4;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

} // namespace qspt::cgs

#endif
