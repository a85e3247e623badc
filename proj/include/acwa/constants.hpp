#pragma once

// Physical constants and unit conversion factors used across the library.
// Everything is SI internally; conversions happen only at the edges
// (scenario parsing, CSV/report formatting).

namespace acwa {

inline constexpr double PI = 3.141592653589793238462643383279502884;

// Standard gravity [m/s^2].
inline constexpr double GRAVITY = 9.80665;

// Pressure: pascals per psi.
inline constexpr double PA_PER_PSI = 6894.757;

// Length: metres per inch.
inline constexpr double M_PER_INCH = 0.0254;

// Volume: litres per US gallon (exact by definition).
inline constexpr double L_PER_GAL = 3.785411784;

// Volume: US gallons per cubic metre (display rounding used by flow reports).
inline constexpr double GAL_PER_M3 = 264.172;

// Ion product of water at 25 C [mol^2/L^2].
inline constexpr double KW = 1e-14;

// Molar mass of NaOH [g/mol]; converts mg/L of dosed base to mol/L.
inline constexpr double NAOH_G_PER_MOL = 40.0;

// Specific heat of water [J/(kg K)] for the pipe-wall heat exchange kernel.
inline constexpr double WATER_CP = 4186.0;

// Seconds per day; first-order quality rates are configured in 1/day.
inline constexpr double SECONDS_PER_DAY = 86400.0;

// Flow regime thresholds on Reynolds number.
inline constexpr double RE_LAMINAR_MAX = 2300.0;
inline constexpr double RE_TURBULENT_MIN = 4000.0;

}  // namespace acwa
