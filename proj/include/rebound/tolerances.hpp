#pragma once

// Numerical tolerances shared by all modules. Dimensions handled here are
// small (total Hilbert space dimension <= 64), so double precision
// eigendecompositions comfortably resolve these.

namespace rebound::tol {

inline constexpr double herm = 1e-9;
inline constexpr double trace = 1e-9;
inline constexpr double psd = 1e-9;
inline constexpr double eig = 1e-10;
inline constexpr double eig_zero = 1e-12;
inline constexpr double support = 1e-9;
inline constexpr double num = 1e-8;
inline constexpr double unitary = 1e-9;

inline constexpr double cptp = 1e-8;
inline constexpr double simulation = 1e-7;
inline constexpr double probability = 1e-10;

inline constexpr double covariance = 1e-8;

inline constexpr double type2_zero = 1e-14;

inline constexpr double povm = 1e-8;
inline constexpr double zero_error = 1e-9;

} // namespace rebound::tol
