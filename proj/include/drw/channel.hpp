#pragma once

#include <vector>

#include "drw/fdfd.hpp"
#include "drw/sparams.hpp"

namespace drw {

// Dielectric attenuation (Np/m) of a mode solved on lossless materials, with
// the loss tangents taken from `cs` (core tan delta for every core region,
// cladding tan delta for region 0). A bent grid's conformal factor scales the
// lossy permittivity the same way it scales the real part.
double dielectric_attenuation(const ModeSolution& ms, const CrossSection& cs, double f);

// Attenuation per unit loss tangent for each region, such that
// alpha = sum_r eps_r tan_delta_r * coefficient[r].
std::vector<double> attenuation_coefficients(const ModeSolution& ms, double f);

struct LossTable {
  std::vector<double> frequencies;        // Hz
  std::vector<double> tan_deltas;         // ascending
  std::vector<std::vector<double>> db_per_mm;  // [tan_delta][frequency]

  double entry(std::size_t t, std::size_t f) const { return db_per_mm[t][f]; }
};

struct ChannelSettings {
  SolverSettings solver{};
  int workers = 1;
};

// Core loss tangents are applied to the lossless version of `cs`; the
// cladding keeps its own tan delta.
LossTable loss_table(const CrossSection& cs, const std::vector<double>& f_list,
                     std::vector<double> tan_deltas, const ChannelSettings& s = {});

struct DispersionProfile {
  std::vector<double> frequencies;
  std::vector<double> beta;          // rad/m
  std::vector<double> group_index;   // c dbeta/domega
  std::vector<double> beta2;         // d^2 beta / d omega^2, s^2/m
  std::vector<bool> one_sided;       // true at the two endpoints
};

// Derivatives of beta(f) on an arbitrary increasing grid: three-point
// central stencils inside, three-point one-sided stencils at the ends.
// Needs at least 5 points (InsufficientGrid).
DispersionProfile differentiate_beta(const std::vector<double>& f, const std::vector<double>& beta);

// `mode_index` selects the guided mode by descending neff (0 = fundamental).
// All frequencies share one grid refined for the top of the band.
DispersionProfile dispersion_profile(const CrossSection& cs, const FrequencyGrid& fg,
                                     int mode_index = 0, const ChannelSettings& s = {});

// Ideally launched straight guide: S21 = S12 = exp(-(alpha + j beta) L).
SParameterSet straight_channel(double length, const FrequencyGrid& fg,
                               const std::vector<double>& beta, const std::vector<double>& alpha);

// Solves the fundamental at each frequency; core tan delta from `cs`.
SParameterSet straight_channel(double length, const CrossSection& cs, const FrequencyGrid& fg,
                               const ChannelSettings& s = {});

// Fundamental mode of `cs` at f on its own grid.
ModeSolution fundamental_mode(const CrossSection& cs, double f, const SolverSettings& s = {});

}  // namespace drw
