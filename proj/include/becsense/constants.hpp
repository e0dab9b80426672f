#pragma once
// constants.hpp — SI physical constants and Rb-87 atomic data.
//
// Single source of truth for every physical number in the library. All
// computation is SI throughout; frequencies are *angular* (rad/s) unless a
// name explicitly says otherwise. Unit conversions (GHz, mT, um, ...) happen
// only at the configuration boundary, never inside the physics.
//
// Provenance (CODATA 2018 unless noted):
//   hbar         1.054571817e-34  J s      CODATA 2018 (exact, derived from h)
//   mu0          1.25663706212e-6 H/m      CODATA 2018
//   eps0         8.8541878128e-12 F/m      CODATA 2018
//   c_light      299792458        m/s      SI definition (exact)
//   mu_bohr      9.2740100783e-24 J/T      CODATA 2018
//   g_grav       9.80665          m/s^2    standard gravity (exact)
//   mass_rb87    86.909180531 u            AME2020, times u = 1.66053906660e-27 kg
//   a_scatt      5.4e-9           m        Rb-87 interspecies scattering length
//   hf_splitting 2*pi*6.8347e9    rad/s    Rb-87 5^2S_1/2 hyperfine splitting
//                                          (rounded value used by the model)

#include <cmath>
#include <stdexcept>

namespace becsense {

inline constexpr double pi = 3.14159265358979323846;

struct PhysicalConstants {
    double hbar = 1.054571817e-34;         // reduced Planck constant [J s]
    double mu0 = 1.25663706212e-6;         // vacuum permeability [H/m]
    double eps0 = 8.8541878128e-12;        // vacuum permittivity [F/m]
    double c_light = 299792458.0;          // speed of light [m/s]
    double mu_bohr = 9.2740100783e-24;     // Bohr magneton [J/T]
    double g_grav = 9.80665;               // gravitational acceleration [m/s^2]
    double mass_rb87 = 86.909180531 * 1.66053906660e-27;  // Rb-87 mass [kg]
    double a_scatt = 5.4e-9;               // s-wave scattering length [m]
    double hf_splitting = 2.0 * pi * 6.8347e9;  // hyperfine splitting [rad/s]
};

inline constexpr PhysicalConstants constants{};

/// Zeeman splitting of adjacent m_F sublevels in an offset field:
/// omega_0 = mu_B * B_offs / (2 hbar).  Linear in the field.
inline double zeeman_splitting(double b_offset_tesla) {
    if (b_offset_tesla < 0.0)
        throw std::domain_error("zeeman_splitting: offset field must be >= 0");
    return constants.mu_bohr * b_offset_tesla / (2.0 * constants.hbar);
}

}  // namespace becsense
