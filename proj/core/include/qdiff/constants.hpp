#pragma once

// CODATA-2018 values. Pinned so that rounded literature numbers can be
// compared against with explicit tolerances.

namespace qdiff::constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double boltzmann = 1.380649e-23;     // J / K
inline constexpr double avogadro = 6.02214076e23;     // 1 / mol
inline constexpr double angstrom = 1e-10;             // m

namespace mass {
inline constexpr double electron = 9.1093837015e-31;  // kg
inline constexpr double muon = 1.883531627e-28;
// Hydrogen is taken as the bare proton.
inline constexpr double hydrogen = 1.67262192e-27;
inline constexpr double deuterium = 3.3435838e-27;
inline constexpr double tritium = 5.0073567e-27;
}  // namespace mass

}  // namespace qdiff::constants
