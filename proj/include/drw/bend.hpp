#pragma once

#include <vector>

#include "drw/fdfd.hpp"

namespace drw {

// Which core dimension lies in the plane of the bend.
enum class BendPlane { A, B };

const char* to_string(BendPlane p);

struct BendSpec {
  double radius;                 // to the guide centreline, m
  double angle = kHalfPi;        // rad
  BendPlane plane = BendPlane::A;

  static constexpr double kHalfPi = 1.5707963267948966;

  // Throws InvalidArgument unless radius exceeds half the in-plane dimension
  // and 0 < angle <= 2 pi.
  void validate(const CrossSection& cs) const;
};

// Straight grid of `cs` at f with the conformal factor (1 + s/R)^2 applied,
// s measured from the centreline toward the outside of the bend.
Grid2D bend_equivalent_profile(const CrossSection& cs, const BendSpec& bend, double f,
                               const SolverSettings& s = {});

struct BendModeResult {
  ModeSolution bend;      // selected mode of the equivalent profile
  ModeSolution straight;  // straight fundamental on the same grid layout
  double overlap = 0.0;   // |<straight|bend>| for unit-power modes
};

// The equivalent-profile mode that continues the straight fundamental: the
// guided mode (among `candidates`) with the largest overlap with it. In tight
// bends the highest-neff mode of the profile is often a cladding-side mode.
BendModeResult bend_fundamental(const CrossSection& cs, const BendSpec& bend, double f,
                                const SolverSettings& s = {}, int candidates = 8);

struct BendLoss {
  double total_db = 0.0;       // per bend, excess over a straight guide of equal arc length
  double junction_db = 0.0;    // one junction
  double differential_db = 0.0;
  bool suspicious_negative = false;  // total < -0.05 dB
};

// Core tan delta from `cs`; modes are solved on lossless materials.
BendLoss bend_loss(const CrossSection& cs, const BendSpec& bend, double f,
                   const SolverSettings& s = {});

struct ModeConversion {
  std::vector<double> fractions;  // |<straight_i|bend_1>|^2, i = 0 is the fundamental
  double into_higher = 0.0;       // sum of fractions i >= 1
  double unaccounted = 0.0;       // 1 - sum of all fractions
};

ModeConversion bend_mode_conversion(const CrossSection& cs, const BendSpec& bend, double f,
                                    int n_modes, const SolverSettings& s = {});

}  // namespace drw
