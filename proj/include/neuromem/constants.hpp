#pragma once

// Unit system used throughout the circuit-side code:
//   volts, microseconds, kilo-ohms, nanofarads, milliamps.
// kOhm * nF = us and V / kOhm = mA, so all circuit quantities stay near unity.
namespace neuromem::constants {

// Boltzmann constant [eV/K]
inline constexpr double k_boltzmann_eV = 8.617333262e-5;

// WKB decay constant sqrt(2*m_e*q)/hbar expressed per nm and sqrt(eV):
// kappa [1/nm] = wkb_decay * sqrt(E [eV])
inline constexpr double wkb_decay_per_nm = 5.12317;

// hbar / k_B [ps*K]; used by the coherence-length formula with D in nm^2/ps
inline constexpr double hbar_over_kB_psK = 7.63823;

}  // namespace neuromem::constants
