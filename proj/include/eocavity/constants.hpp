#pragma once

namespace eocavity {

// CODATA values, fixed. All formulas are SI; frequencies cross module
// boundaries as ordinary Hz and are converted to angular form only where a
// formula is physically angular (photon energies, occupations, wave vectors).
struct PhysicalConstants {
    double c;     // speed of light, m/s
    double hbar;  // reduced Planck constant, J*s
    double k_B;   // Boltzmann constant, J/K
    double eps0;  // vacuum permittivity, F/m
};

inline constexpr PhysicalConstants constants{
    299792458.0,
    1.054571817e-34,
    1.380649e-23,
    8.8541878128e-12,
};

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double to_angular(double f_hz) { return two_pi * f_hz; }
inline constexpr double to_ordinary(double w_rad) { return w_rad / two_pi; }

}  // namespace eocavity
