#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "drw/material.hpp"

namespace drw {

// Rectangular core (a along x, b along y) embedded in an unbounded cladding.
class CrossSection {
 public:
  CrossSection(double a, double b, Material core, Material clad);

  double a() const { return a_; }
  double b() const { return b_; }
  const Material& core() const { return core_; }
  const Material& clad() const { return clad_; }

  CrossSection with_dims(double a, double b) const { return {a, b, core_, clad_}; }
  CrossSection with_core(const Material& core) const { return {a_, b_, core, clad_}; }
  CrossSection with_tan_delta(double core_tan_delta) const {
    return {a_, b_, core_.with_tan_delta(core_tan_delta), clad_};
  }

  bool operator==(const CrossSection&) const = default;

 private:
  double a_;
  double b_;
  Material core_;
  Material clad_;
};

// The 160 x 80 um channel, eps 1000 in eps 12.
CrossSection reference_cross_section(double core_tan_delta = 0.0);

enum class Axis { X, Y };

// Yee sample locations inside one cell (i, j):
//   Ex (i+1/2, j)  Ey (i, j+1/2)  Ez (i, j)
//   Hx (i, j+1/2)  Hy (i+1/2, j)  Hz (i+1/2, j+1/2)
enum class Component { Ex, Ey, Ez, Hx, Hy, Hz };

struct GridOptions {
  int cells_per_wavelength = 20;
  double f_min = 0.0;  // padding frequency; 0 means use f_max
  double pad_decay_lengths = 5.0;
  std::size_t max_cells = 2'000'000;
};

// Conformal bend transform applied when sampling permittivity:
// eps_eq = eps * (1 + s/R)^2 with s the coordinate along `axis`.
struct BendTransform {
  double radius;
  Axis axis = Axis::X;

  double factor(double s) const {
    const double g = 1.0 + s / radius;
    return g > 0.0 ? g * g : 0.0;
  }
};

struct CoreRect {
  double x_center;
  double y_center;
  double a;
  double b;
};

// Uniform staggered grid over [x0, x0 + nx*dx] x [y0, y0 + ny*dy] with a PEC
// outer wall. Coordinates are centred on the guide (or guide pair).
class Grid2D {
 public:
  Grid2D(int nx, int ny, double dx, double dy, double x0, double y0,
         std::vector<std::complex<double>> eps, std::vector<std::uint8_t> region,
         std::vector<Material> region_materials, std::optional<BendTransform> bend = {});

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double cell_area() const { return dx_ * dy_; }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

  // Cell permittivity without the bend factor.
  std::complex<double> eps_cell(int i, int j) const { return eps_[index(i, j)]; }
  std::uint8_t region(int i, int j) const { return region_[index(i, j)]; }
  const std::vector<std::complex<double>>& eps_map() const { return eps_; }
  const std::vector<std::uint8_t>& region_map() const { return region_; }
  const std::vector<Material>& region_materials() const { return region_materials_; }
  const std::optional<BendTransform>& bend() const { return bend_; }

  // Physical coordinates of a Yee sample.
  double x_of(Component c, int i) const;
  double y_of(Component c, int j) const;

  // Permittivity at a Yee E-sample: arithmetic mean of the cells touching the
  // sample, times the bend factor if present. Cells outside the domain are
  // ignored (they only matter for masked PEC samples).
  std::complex<double> sample_eps(Component c, int i, int j) const;

  // Same averaging applied to an arbitrary per-cell quantity.
  double sample_cell_average(const std::vector<double>& per_cell, Component c, int i,
                             int j) const;

  double max_eps() const;
  double min_eps() const;

  Grid2D with_bend(const BendTransform& bend) const;

  // Same layout (cell counts, spacing, origin); permittivity may differ.
  bool same_layout(const Grid2D& other) const;

  bool operator==(const Grid2D&) const = default;

 private:
  int nx_;
  int ny_;
  double dx_;
  double dy_;
  double x0_;
  double y0_;
  std::vector<std::complex<double>> eps_;
  std::vector<std::uint8_t> region_;
  std::vector<Material> region_materials_;
  std::optional<BendTransform> bend_;
};

// Wavelength inside a medium of permittivity eps.
double medium_wavelength(double f, double eps);

// k0 * sqrt(eps_core - eps_clad): upper bound on the cladding decay rate.
double cladding_decay_rate(const CrossSection& cs, double f);

// Single guide centred on the origin. Core edges lie on cell edges; spacing is
// reduced to the nearest divisor of a and b; padding >= pad_decay_lengths
// cladding decay lengths at f_min.
Grid2D build_grid(const CrossSection& cs, double f_max, int cells_per_wavelength = 20,
                  const GridOptions& opts = {});
Grid2D build_grid(const CrossSection& cs, double f_max, const GridOptions& opts);

// Several identical-material cores on one grid. `min_gap_cells` cells are
// guaranteed between horizontally adjacent cores.
Grid2D build_multi_core_grid(const std::vector<CoreRect>& cores, const Material& core,
                             const Material& clad, double f_max, const GridOptions& opts,
                             int min_gap_cells = 0);

// Cores re-drawn on an existing layout (same cell counts, spacing, origin).
// Cells partly covered by a core get the area-weighted permittivity; a cell
// belongs to the core region when at least half of it is covered.
Grid2D rasterize_cores(const Grid2D& layout, const std::vector<CoreRect>& cores,
                       const Material& core, const Material& clad);

// Core fraction of a cell, recovered from its permittivity.
double core_fill(const Grid2D& g, int i, int j);

// Slab of width a along x, uniform along y (core fills the full height, no y
// padding). `ny` cells of height `height`.
Grid2D build_slab_grid(double a, const Material& core, const Material& clad, double f,
                       double dx_max, double height, int ny, double pad_decay_lengths = 5.0);

// Homogeneous box, used for operator sanity checks.
Grid2D build_uniform_grid(int nx, int ny, double dx, double dy, const Material& m);

class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::vector<double> hz);
  static FrequencyGrid linspace(double start, double stop, int points);
  static FrequencyGrid default_band();  // 80-160 GHz, 5 GHz step

  const std::vector<double>& values() const { return hz_; }
  std::size_t size() const { return hz_.size(); }
  double operator[](std::size_t i) const { return hz_[i]; }
  double front() const { return hz_.front(); }
  double back() const { return hz_.back(); }

  bool operator==(const FrequencyGrid&) const = default;

 private:
  std::vector<double> hz_;
};

}  // namespace drw
