#pragma once

// CODATA 2018 values, SI.
namespace esta::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

}  // namespace esta::constants
