#pragma once

#include <vector>

#include "drw/fdfd.hpp"

namespace drw {

// Two identical guides side by side along x, edge-to-edge gap d.
struct ParallelPair {
  CrossSection cs;
  double d;  // m
  double L;  // coupled length, m

  void validate() const;
};

inline constexpr int kMinGapCells = 8;
inline constexpr double kCrosstalkFloorDb = -120.0;

// Composite grid of the pair at f. Throws GridTooCoarse if the gap holds
// fewer than kMinGapCells cells.
Grid2D pair_grid(const ParallelPair& pair, double f, const SolverSettings& s = {});

struct Supermodes {
  ModeSolution even;  // higher neff, mirror-symmetric (vector sense)
  ModeSolution odd;
  double isolated_beta = 0.0;  // same-layout single-guide fundamental
  int parity_even = 0;  // mirror_parity of each; +1 / -1 expected
  int parity_odd = 0;
  double parity_error_even = 0.0;  // relative residual of the mirror test
  double parity_error_odd = 0.0;
};

// Mirror parity about x = 0 in the vector sense: +1 when
// Ex(-x) = -Ex(x) and Ey(-x) = Ey(x), -1 for the opposite signs.
// `residual` receives the relative mismatch of the best-fitting parity.
int mirror_parity(const ModeSolution& ms, double* residual = nullptr);

// Solves the composite pair and returns the supermode pair that continues
// the isolated fundamental (the two highest-neff modes of the pair whose
// dominant field matches it).
Supermodes supermode_split(const ParallelPair& pair, double f, const SolverSettings& s = {});

// (beta_even - beta_odd) / 2, rad/m.
double coupling_coefficient(const ParallelPair& pair, double f, const SolverSettings& s = {});

// Coupled-mode estimate from isolated modes:
// omega eps0 / 4 * integral (eps - eps_clad) E1* . E2 over the second core.
double overlap_coupling_coefficient(const ParallelPair& pair, double f,
                                    const SolverSettings& s = {});

struct CrosstalkPoint {
  double f = 0.0;
  double kappa = 0.0;
  double beta = 0.0;          // isolated guide
  double fext_db = 0.0;       // coupled power at the far end of the victim
  double through_db = 0.0;    // power left in the aggressor
  double next_bound_db = 0.0; // contradirectional upper bound, not a prediction
};

// Lossless synchronous coupler closed forms, floored at kCrosstalkFloorDb.
double fext_db(double kappa, double L);
double through_db(double kappa, double L);
double next_bound_db(double kappa, double beta);

std::vector<CrosstalkPoint> crosstalk_sweep(const ParallelPair& pair,
                                            const std::vector<double>& freqs,
                                            const SolverSettings& s = {}, int workers = 1);

// Default edge-to-edge separations, m.
std::vector<double> default_separations();

}  // namespace drw
