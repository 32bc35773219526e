#pragma once

namespace otk::constants {

inline constexpr double k_boltzmann = 1.380649e-23;      // J/K
inline constexpr double k_boltzmann_ev = 8.617333262e-5; // eV/K
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double avogadro = 6.02214076e23;        // 1/mol
inline constexpr double pi = 3.14159265358979323846;

// Thermal voltage k_B*T/e in volts.
[[nodiscard]] inline constexpr double thermal_voltage(double temperature_k) {
    return k_boltzmann_ev * temperature_k;
}

}  // namespace otk::constants
