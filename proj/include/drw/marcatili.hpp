#pragma once

#include "drw/geometry.hpp"

namespace drw {

// Boundary character of a pair of walls for the dominant field.
// TE_like: dominant E tangential to the wall; TM_like: normal to it.
enum class WallType { TE_like, TM_like };

// Dominant transverse E along x (Ex_pq) or along y (Ey_pq).
enum class MarcatiliFamily { Ex, Ey };

struct TransverseRoot {
  double k_t;    // rad/m
  double gamma;  // 1/m
};

// Root of  k_t w = p pi - 2 atan(eta k_t / gamma(k_t)),
// gamma(k_t) = sqrt(k0^2 (eps1 - eps2) - k_t^2), eta = 1 (TE_like) or eps2/eps1.
// Bracketed bisection followed by a Newton polish. Throws BelowCutoff.
TransverseRoot solve_transverse(double w, double k0, double eps1, double eps2, int p,
                                WallType wall);

// Residual of the transverse equation, relative to p*pi.
double transverse_residual(double k_t, double w, double k0, double eps1, double eps2, int p,
                           WallType wall);

struct MarcatiliMode {
  MarcatiliFamily family;
  int p;
  int q;
  double kx;
  double ky;
  double gamma_x;
  double gamma_y;
  double beta;
  double neff;
  double f;
  // Geometry needed to evaluate the field profile.
  double a;
  double b;
  double eps_core;
  double eps_clad;

  WallType x_wall() const { return family == MarcatiliFamily::Ey ? WallType::TE_like : WallType::TM_like; }
  WallType y_wall() const { return family == MarcatiliFamily::Ey ? WallType::TM_like : WallType::TE_like; }
};

MarcatiliMode solve_marcatili(const CrossSection& cs, double f, MarcatiliFamily family, int p,
                              int q);

// Dominant transverse E at (x, y), peak-normalised. Separable: the corner
// regions carry the product of the two exponential tails. Across TM_like
// walls the outside amplitude carries the eps1/eps2 jump of normal E.
double marcatili_field_at(const MarcatiliMode& mode, double x, double y);

// Guided (p, q) modes of both families at f, sorted by descending neff.
std::vector<MarcatiliMode> marcatili_guided_modes(const CrossSection& cs, double f);

}  // namespace drw
