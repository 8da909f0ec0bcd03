#include "drw/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drw/constants.hpp"
#include "drw/error.hpp"

namespace drw {

namespace {

bool near_integer(double v, double tol = 1e-6) { return std::abs(v - std::round(v)) < tol; }

int cells_for(double length, double dx_target) {
  return std::max(1, static_cast<int>(std::ceil(length / dx_target - 1e-9)));
}

// Largest spacing <= dx_target that puts every edge on a cell boundary.
double commensurate_spacing(std::vector<double> edges, double dx_target) {
  std::sort(edges.begin(), edges.end());
  const double span = edges.back() - edges.front();
  const int n0 = cells_for(span, dx_target);
  for (int n = n0; n <= 64 * n0; ++n) {
    const double dx = span / n;
    bool ok = true;
    for (double e : edges) {
      if (!near_integer((e - edges.front()) / dx)) {
        ok = false;
        break;
      }
    }
    if (ok) return dx;
  }
  throw Error(ErrorCode::InvalidArgument,
              "core edges are not commensurate with any spacing below " +
                  std::to_string(dx_target) + " m");
}

void check_cap(std::size_t cells, const GridOptions& opts) {
  if (cells > opts.max_cells)
    throw Error(ErrorCode::GridTooLarge, std::to_string(cells) + " cells exceeds cap of " +
                                             std::to_string(opts.max_cells));
}

}  // namespace

CrossSection::CrossSection(double a, double b, Material core, Material clad)
    : a_(a), b_(b), core_(std::move(core)), clad_(std::move(clad)) {
  if (!(a > 0.0) || !(b > 0.0))
    throw Error(ErrorCode::InvalidArgument, "cross-section dimensions must be positive");
  if (!(core_.eps_r() > clad_.eps_r()))
    throw Error(ErrorCode::InvalidArgument,
                "core permittivity must exceed cladding permittivity (guiding condition)");
}

CrossSection reference_cross_section(double core_tan_delta) {
  const auto cat = material_catalog();
  return {um(160), um(80), cat.lookup("rod-core-lossless").with_tan_delta(core_tan_delta),
          cat.lookup("rod-clad")};
}

Grid2D::Grid2D(int nx, int ny, double dx, double dy, double x0, double y0,
               std::vector<std::complex<double>> eps, std::vector<std::uint8_t> region,
               std::vector<Material> region_materials, std::optional<BendTransform> bend)
    : nx_(nx), ny_(ny), dx_(dx), dy_(dy), x0_(x0), y0_(y0), eps_(std::move(eps)),
      region_(std::move(region)), region_materials_(std::move(region_materials)), bend_(bend) {
  if (nx < 2 || ny < 1 || !(dx > 0) || !(dy > 0))
    throw Error(ErrorCode::InvalidArgument, "degenerate grid");
  if (eps_.size() != size() || region_.size() != size())
    throw Error(ErrorCode::InvalidArgument, "grid map size mismatch");
  for (auto r : region_)
    if (r >= region_materials_.size())
      throw Error(ErrorCode::InvalidArgument, "grid region without material");
}

double Grid2D::x_of(Component c, int i) const {
  switch (c) {
    case Component::Ex:
    case Component::Hy:
    case Component::Hz:
      return x0_ + (i + 0.5) * dx_;
    default:
      return x0_ + i * dx_;
  }
}

double Grid2D::y_of(Component c, int j) const {
  switch (c) {
    case Component::Ey:
    case Component::Hx:
    case Component::Hz:
      return y0_ + (j + 0.5) * dy_;
    default:
      return y0_ + j * dy_;
  }
}

namespace {

// Cells whose closure contains the Yee sample (i, j) of component c.
template <typename F>
void for_each_touching_cell(const Grid2D& g, Component c, int i, int j, F&& fn) {
  int i_lo = i, i_hi = i, j_lo = j, j_hi = j;
  switch (c) {
    case Component::Ex:
    case Component::Hy:
      j_lo = j - 1;
      break;
    case Component::Ey:
    case Component::Hx:
      i_lo = i - 1;
      break;
    case Component::Ez:
      i_lo = i - 1;
      j_lo = j - 1;
      break;
    case Component::Hz:
      break;
  }
  for (int jj = j_lo; jj <= j_hi; ++jj)
    for (int ii = i_lo; ii <= i_hi; ++ii)
      if (ii >= 0 && ii < g.nx() && jj >= 0 && jj < g.ny()) fn(ii, jj);
}

}  // namespace

std::complex<double> Grid2D::sample_eps(Component c, int i, int j) const {
  std::complex<double> sum = 0.0;
  int n = 0;
  for_each_touching_cell(*this, c, i, j, [&](int ii, int jj) {
    sum += eps_cell(ii, jj);
    ++n;
  });
  auto e = n ? sum / static_cast<double>(n) : std::complex<double>(1.0);
  if (bend_) {
    const double s = bend_->axis == Axis::X ? x_of(c, i) : y_of(c, j);
    e *= bend_->factor(s);
  }
  return e;
}

double Grid2D::sample_cell_average(const std::vector<double>& per_cell, Component c, int i,
                                   int j) const {
  double sum = 0.0;
  int n = 0;
  for_each_touching_cell(*this, c, i, j, [&](int ii, int jj) {
    sum += per_cell[index(ii, jj)];
    ++n;
  });
  return n ? sum / n : 0.0;
}

double Grid2D::max_eps() const {
  double m = 0.0;
  for (auto e : eps_) m = std::max(m, e.real());
  return m;
}

double Grid2D::min_eps() const {
  double m = eps_.empty() ? 0.0 : eps_.front().real();
  for (auto e : eps_) m = std::min(m, e.real());
  return m;
}

Grid2D Grid2D::with_bend(const BendTransform& bend) const {
  if (!(bend.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "bend radius must be > 0");
  Grid2D g = *this;
  g.bend_ = bend;
  return g;
}

bool Grid2D::same_layout(const Grid2D& o) const {
  return nx_ == o.nx_ && ny_ == o.ny_ && dx_ == o.dx_ && dy_ == o.dy_ && x0_ == o.x0_ &&
         y0_ == o.y0_;
}

double medium_wavelength(double f, double eps) { return kSpeedOfLight / (f * std::sqrt(eps)); }

double cladding_decay_rate(const CrossSection& cs, double f) {
  return wavenumber(f) * std::sqrt(cs.core().eps_r() - cs.clad().eps_r());
}

Grid2D build_grid(const CrossSection& cs, double f_max, int cells_per_wavelength,
                  const GridOptions& opts) {
  GridOptions o = opts;
  o.cells_per_wavelength = cells_per_wavelength;
  return build_multi_core_grid({CoreRect{0.0, 0.0, cs.a(), cs.b()}}, cs.core(), cs.clad(), f_max,
                               o);
}

Grid2D build_grid(const CrossSection& cs, double f_max, const GridOptions& opts) {
  return build_grid(cs, f_max, opts.cells_per_wavelength, opts);
}

Grid2D build_multi_core_grid(const std::vector<CoreRect>& cores, const Material& core,
                             const Material& clad, double f_max, const GridOptions& opts,
                             int min_gap_cells) {
  if (cores.empty()) throw Error(ErrorCode::InvalidArgument, "no cores");
  if (opts.cells_per_wavelength < 20)
    throw Error(ErrorCode::InvalidArgument, "cells_per_wavelength must be >= 20");
  if (!(f_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "f_max must be > 0");
  if (!(core.eps_r() > clad.eps_r()))
    throw Error(ErrorCode::InvalidArgument, "core permittivity must exceed cladding");

  const double lambda = medium_wavelength(f_max, core.eps_r());
  double dx_t = lambda / opts.cells_per_wavelength;
  double dy_t = dx_t;

  std::vector<double> xe, ye;
  for (const auto& c : cores) {
    if (!(c.a > 0) || !(c.b > 0)) throw Error(ErrorCode::InvalidArgument, "core size");
    xe.push_back(c.x_center - c.a / 2);
    xe.push_back(c.x_center + c.a / 2);
    ye.push_back(c.y_center - c.b / 2);
    ye.push_back(c.y_center + c.b / 2);
  }
  if (min_gap_cells > 0 && cores.size() > 1) {
    double gap = INFINITY;
    for (std::size_t p = 0; p < cores.size(); ++p)
      for (std::size_t q = 0; q < cores.size(); ++q) {
        if (p == q) continue;
        const double g = (cores[q].x_center - cores[q].a / 2) - (cores[p].x_center + cores[p].a / 2);
        if (g > 0) gap = std::min(gap, g);
      }
    if (std::isfinite(gap)) dx_t = std::min(dx_t, gap / min_gap_cells);
  }
  const double dx = commensurate_spacing(xe, dx_t);
  const double dy = commensurate_spacing(ye, dy_t);

  const double f_pad = opts.f_min > 0.0 ? opts.f_min : f_max;
  const double gamma = wavenumber(f_pad) * std::sqrt(core.eps_r() - clad.eps_r());
  const double pad = opts.pad_decay_lengths / gamma;
  const int px = cells_for(pad, dx);
  const int py = cells_for(pad, dy);

  const double xmin = *std::min_element(xe.begin(), xe.end());
  const double xmax = *std::max_element(xe.begin(), xe.end());
  const double ymin = *std::min_element(ye.begin(), ye.end());
  const double ymax = *std::max_element(ye.begin(), ye.end());
  const int nx = static_cast<int>(std::lround((xmax - xmin) / dx)) + 2 * px;
  const int ny = static_cast<int>(std::lround((ymax - ymin) / dy)) + 2 * py;
  check_cap(static_cast<std::size_t>(nx) * ny, opts);

  const double x0 = xmin - px * dx;
  const double y0 = ymin - py * dy;
  const auto eps_core = complex_permittivity(core, f_max);
  const auto eps_clad = complex_permittivity(clad, f_max);

  std::vector<std::complex<double>> eps(static_cast<std::size_t>(nx) * ny, eps_clad);
  std::vector<std::uint8_t> region(eps.size(), 0);
  std::vector<Material> mats{clad};
  for (const auto& c : cores) {
    mats.push_back(core);
    const auto id = static_cast<std::uint8_t>(mats.size() - 1);
    const int i0 = static_cast<int>(std::lround((c.x_center - c.a / 2 - x0) / dx));
    const int i1 = static_cast<int>(std::lround((c.x_center + c.a / 2 - x0) / dx));
    const int j0 = static_cast<int>(std::lround((c.y_center - c.b / 2 - y0) / dy));
    const int j1 = static_cast<int>(std::lround((c.y_center + c.b / 2 - y0) / dy));
    for (int j = j0; j < j1; ++j)
      for (int i = i0; i < i1; ++i) {
        const auto k = static_cast<std::size_t>(j) * nx + i;
        eps[k] = eps_core;
        region[k] = id;
      }
  }
  return Grid2D(nx, ny, dx, dy, x0, y0, std::move(eps), std::move(region), std::move(mats));
}

Grid2D rasterize_cores(const Grid2D& layout, const std::vector<CoreRect>& cores,
                       const Material& core, const Material& clad) {
  if (!(core.eps_r() > clad.eps_r()))
    throw Error(ErrorCode::InvalidArgument, "core permittivity must exceed cladding");
  const int nx = layout.nx(), ny = layout.ny();
  const double dx = layout.dx(), dy = layout.dy();
  const auto eps_core = complex_permittivity(core, 0.0);
  const auto eps_clad = complex_permittivity(clad, 0.0);
  std::vector<double> fill(layout.size(), 0.0);
  std::vector<std::uint8_t> region(layout.size(), 0);
  std::vector<Material> mats{clad};
  auto overlap_1d = [](double lo, double hi, double c0, double c1) {
    return std::max(0.0, std::min(hi, c1) - std::max(lo, c0));
  };
  for (const auto& c : cores) {
    if (!(c.a > 0) || !(c.b > 0)) throw Error(ErrorCode::InvalidArgument, "core size");
    mats.push_back(core);
    const auto id = static_cast<std::uint8_t>(mats.size() - 1);
    for (int j = 0; j < ny; ++j) {
      const double y = layout.y0() + j * dy;
      const double fy = overlap_1d(y, y + dy, c.y_center - c.b / 2, c.y_center + c.b / 2) / dy;
      if (fy == 0.0) continue;
      for (int i = 0; i < nx; ++i) {
        const double x = layout.x0() + i * dx;
        const double fx = overlap_1d(x, x + dx, c.x_center - c.a / 2, c.x_center + c.a / 2) / dx;
        if (fx == 0.0) continue;
        const auto k = layout.index(i, j);
        fill[k] = std::min(1.0, fill[k] + fx * fy);
        if (fill[k] >= 0.5) region[k] = id;
      }
    }
  }
  std::vector<std::complex<double>> eps(layout.size());
  for (std::size_t k = 0; k < eps.size(); ++k) eps[k] = eps_clad + fill[k] * (eps_core - eps_clad);
  return Grid2D(nx, ny, dx, dy, layout.x0(), layout.y0(), std::move(eps), std::move(region),
                std::move(mats), layout.bend());
}

double core_fill(const Grid2D& g, int i, int j) {
  const auto& m = g.region_materials();
  if (m.size() < 2) return 0.0;
  const double e2 = m.front().eps_r();
  const double e1 = m[1].eps_r();
  return std::clamp((g.eps_cell(i, j).real() - e2) / (e1 - e2), 0.0, 1.0);
}

Grid2D build_slab_grid(double a, const Material& core, const Material& clad, double f,
                       double dx_max, double height, int ny, double pad_decay_lengths) {
  if (!(a > 0) || !(dx_max > 0) || !(height > 0) || ny < 1)
    throw Error(ErrorCode::InvalidArgument, "slab grid parameters");
  const int nc = cells_for(a, dx_max);
  const double dx = a / nc;
  const double gamma = wavenumber(f) * std::sqrt(core.eps_r() - clad.eps_r());
  const int px = cells_for(pad_decay_lengths / gamma, dx);
  const int nx = nc + 2 * px;
  const double dy = height / ny;
  const auto eps_core = complex_permittivity(core, f);
  const auto eps_clad = complex_permittivity(clad, f);
  std::vector<std::complex<double>> eps(static_cast<std::size_t>(nx) * ny, eps_clad);
  std::vector<std::uint8_t> region(eps.size(), 0);
  for (int j = 0; j < ny; ++j)
    for (int i = px; i < px + nc; ++i) {
      eps[static_cast<std::size_t>(j) * nx + i] = eps_core;
      region[static_cast<std::size_t>(j) * nx + i] = 1;
    }
  return Grid2D(nx, ny, dx, dy, -a / 2 - px * dx, -height / 2, std::move(eps), std::move(region),
                {clad, core});
}

Grid2D build_uniform_grid(int nx, int ny, double dx, double dy, const Material& m) {
  std::vector<std::complex<double>> eps(static_cast<std::size_t>(nx) * ny,
                                        complex_permittivity(m, 0.0));
  std::vector<std::uint8_t> region(eps.size(), 0);
  return Grid2D(nx, ny, dx, dy, -nx * dx / 2, -ny * dy / 2, std::move(eps), std::move(region), {m});
}

FrequencyGrid::FrequencyGrid(std::vector<double> hz) : hz_(std::move(hz)) {
  if (hz_.empty()) throw Error(ErrorCode::InvalidArgument, "empty frequency grid");
  for (std::size_t i = 0; i < hz_.size(); ++i) {
    if (!(hz_[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "frequencies must be > 0");
    if (i > 0 && !(hz_[i] > hz_[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "frequencies must be strictly increasing");
  }
}

FrequencyGrid FrequencyGrid::linspace(double start, double stop, int points) {
  if (points < 1) throw Error(ErrorCode::InvalidArgument, "need at least one frequency point");
  if (points == 1) return FrequencyGrid({start});
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = start + (stop - start) * i / (points - 1);
  return FrequencyGrid(std::move(v));
}

FrequencyGrid FrequencyGrid::default_band() { return linspace(GHz(80), GHz(160), 17); }

}  // namespace drw
