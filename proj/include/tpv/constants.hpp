#pragma once

namespace tpv::phys {
inline constexpr double h = 6.62607015e-34;      // J s
inline constexpr double c = 2.99792458e8;        // m/s
inline constexpr double k_B = 1.380649e-23;      // J/K
inline constexpr double q = 1.602176634e-19;     // C
inline constexpr double sigma = 5.670374419e-8;  // W m^-2 K^-4
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double zero_celsius = 273.15;

// hc/q in eV um
inline constexpr double hc_eV_um = h * c / q * 1e6;

inline constexpr double to_kelvin(double celsius) { return celsius + zero_celsius; }
inline constexpr double to_celsius(double kelvin) { return kelvin - zero_celsius; }

inline constexpr double J_per_kWh = 3.6e6;
}
