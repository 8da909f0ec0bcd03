#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "drw/geometry.hpp"

namespace drw {

enum class ModeLabel { TEM, TE, TM, LSE, LSM, HEM };

const char* to_string(ModeLabel l);

struct ModeClass {
  ModeLabel label = ModeLabel::HEM;
  double rho_x = 0.0;    // sum|Ex|^2 / sum(|Ex|^2 + |Ey|^2)
  double sigma_x = 0.0;  // same ratio for H
  double ez_fraction = 0.0;  // sum|Ez|^2 / sum|E|^2
  double hz_fraction = 0.0;  // sum|Hz|^2 / sum|H|^2
};

// Six components on the staggered grid, each nx*ny, indexed Grid2D::index.
struct ModeFields {
  std::vector<std::complex<double>> ex, ey, ez, hx, hy, hz;

  const std::vector<std::complex<double>>& get(Component c) const;
  std::vector<std::complex<double>>& get(Component c);
};

struct ModeSolution {
  double f = 0.0;
  std::complex<double> beta;  // rad/m, Im <= 0 for decay
  double neff = 0.0;          // Re(beta) / k0
  ModeFields fields;
  double power = 0.0;  // axial Poynting flux after normalisation, W
  ModeClass mode_class;
  std::shared_ptr<const Grid2D> grid;
};

struct SolverSettings {
  int cells_per_wavelength = 20;
  double theta = 0.02;  // classification threshold
  double shift_fraction = 0.99;
  int extra_eigenpairs = 4;  // solved beyond n_modes to stabilise ordering
  GridOptions grid{};
};

// Operator over the active transverse-E unknowns (Ex, Ey), eigenvalue beta^2.
struct Eigenproblem {
  Eigen::SparseMatrix<double> op;
  std::vector<int> ex_unknown;  // grid index -> unknown index, -1 on PEC
  std::vector<int> ey_unknown;
  int n_ex = 0;
  double k0 = 0.0;
};

Eigenproblem assemble_eigenproblem(const Grid2D& grid, double f);

// Guided modes of a prepared grid (neff above the cladding index), descending
// neff; ties broken by rho_x descending.
std::vector<ModeSolution> solve_modes_on_grid(std::shared_ptr<const Grid2D> grid, double f,
                                              int n_modes, const SolverSettings& s = {});

std::vector<ModeSolution> solve_modes(const CrossSection& cs, double f, int n_modes,
                                      const SolverSettings& s = {});

ModeClass classify_mode(const ModeSolution& ms, double theta = 0.02);

// (1/4) integral (E1 x H2* + E2* x H1) . z dA. Requires the same grid layout
// and frequency; throws IncompatibleGrids otherwise.
std::complex<double> mode_overlap(const ModeSolution& m1, const ModeSolution& m2);

// Overlap of modes living on different grids. Each half of the symmetric form
// is evaluated on the grid that owns the E field, with the other mode's H
// (continuous for mu = 1) bilinearly resampled.
std::complex<double> mode_overlap_resampled(const ModeSolution& m1, const ModeSolution& m2);

// Bilinear interpolation of one staggered component at (x, y); zero outside.
std::complex<double> interpolate_component(const Grid2D& g,
                                           const std::vector<std::complex<double>>& data,
                                           Component c, double x, double y);

// Axial flux 0.5 Re integral (E x H*) . z dA.
double axial_power(const ModeSolution& ms);

// Integral of w |E|^2 with the per-cell weight averaged onto each E sample
// like the permittivity. `with_bend` applies the grid's conformal factor.
double electric_energy_integral(const ModeSolution& ms, const std::vector<double>& weight_per_cell,
                                bool with_bend = false);

// Power-weighted centroid of |E|^2 along x and y.
std::pair<double, double> field_centroid(const ModeSolution& ms);

}  // namespace drw
