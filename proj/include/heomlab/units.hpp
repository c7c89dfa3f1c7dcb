// units.hpp — internal unit system: hbar = 1, energies in cm^-1, times in fs

#pragma once

namespace heomlab::units {

// speed of light in cm/fs
inline constexpr double c_cm_fs = 2.99792458e-5;

// angular frequency per wavenumber: omega[rad/fs] = wn_to_angfs * E[cm^-1]
inline constexpr double wn_to_angfs = 2.0 * 3.14159265358979323846 * c_cm_fs;

inline constexpr double ev_to_wn = 8065.544;       // 1 eV in cm^-1
inline constexpr double kB_300K_wn = 208.52;       // k_B * 300 K in cm^-1
inline constexpr double c_cm_s = 2.99792458e10;    // speed of light in cm/s

// k_B * T in cm^-1 for T in kelvin
inline constexpr double kT_wn(double temperature_K) {
    return kB_300K_wn * temperature_K / 300.0;
}

// inverse temperature in 1/cm^-1 (beta * E dimensionless for E in cm^-1)
inline constexpr double beta_wn(double temperature_K) {
    return 1.0 / kT_wn(temperature_K);
}

// rate conversion: k[s^-1] = rate_wn_to_per_s * k[cm^-1]
inline constexpr double rate_wn_to_per_s = 2.0 * 3.14159265358979323846 * c_cm_s;

}  // namespace heomlab::units
