#pragma once

#include <cmath>
#include <numbers>

namespace drw {

inline constexpr double kSpeedOfLight = 299792458.0;     // m/s
inline constexpr double kEpsilon0 = 8.8541878128e-12;    // F/m
inline constexpr double kMu0 = 1.0 / (kEpsilon0 * kSpeedOfLight * kSpeedOfLight);
inline constexpr double kEta0 = kMu0 * kSpeedOfLight;    // ~376.73 ohm
inline constexpr double kPi = std::numbers::pi;

// 20 / ln(10): nepers to decibels for field quantities.
inline constexpr double kNeperToDb = 8.685889638;

inline double wavenumber(double f) { return 2.0 * kPi * f / kSpeedOfLight; }
inline double angular_frequency(double f) { return 2.0 * kPi * f; }

inline constexpr double um(double v) { return v * 1e-6; }
inline constexpr double GHz(double v) { return v * 1e9; }

}  // namespace drw
