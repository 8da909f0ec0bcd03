#include "drw/fdfd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drw/constants.hpp"
#include "drw/eigensolver.hpp"
#include "drw/error.hpp"

namespace drw {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;
using cplx = std::complex<double>;

// Forward differences E-sample -> H-sample, zero beyond the far wall.
SpMat forward_diff(const Grid2D& g, Axis axis) {
  const int nx = g.nx(), ny = g.ny();
  const double h = axis == Axis::X ? g.dx() : g.dy();
  std::vector<Trip> t;
  t.reserve(2 * g.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const auto r = static_cast<int>(g.index(i, j));
      t.emplace_back(r, r, -1.0 / h);
      if (axis == Axis::X && i + 1 < nx) t.emplace_back(r, static_cast<int>(g.index(i + 1, j)), 1.0 / h);
      if (axis == Axis::Y && j + 1 < ny) t.emplace_back(r, static_cast<int>(g.index(i, j + 1)), 1.0 / h);
    }
  SpMat m(static_cast<int>(g.size()), static_cast<int>(g.size()));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SpMat diag(const std::vector<double>& d) {
  SpMat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  std::vector<Trip> t;
  t.reserve(d.size());
  for (std::size_t k = 0; k < d.size(); ++k)
    if (d[k] != 0.0) t.emplace_back(static_cast<int>(k), static_cast<int>(k), d[k]);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

struct Operators {
  SpMat ux, uy, vx, vy;
  std::vector<double> eps_x, eps_y, eps_z_inv;
  std::vector<bool> ex_active, ey_active;
};

Operators build_operators(const Grid2D& g) {
  Operators o;
  o.ux = forward_diff(g, Axis::X);
  o.uy = forward_diff(g, Axis::Y);
  o.vx = -SpMat(o.ux.transpose());
  o.vy = -SpMat(o.uy.transpose());
  const std::size_t n = g.size();
  o.eps_x.resize(n);
  o.eps_y.resize(n);
  o.eps_z_inv.resize(n);
  o.ex_active.resize(n);
  o.ey_active.resize(n);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const auto k = g.index(i, j);
      o.eps_x[k] = g.sample_eps(Component::Ex, i, j).real();
      o.eps_y[k] = g.sample_eps(Component::Ey, i, j).real();
      // Tangential E vanishes on the PEC wall at x = x0 and y = y0; the far
      // walls sit one sample beyond the array and are zero implicitly.
      o.ex_active[k] = j >= 1;
      o.ey_active[k] = i >= 1;
      const bool ez_active = i >= 1 && j >= 1;
      const double ez = g.sample_eps(Component::Ez, i, j).real();
      o.eps_z_inv[k] = ez_active && ez > 0.0 ? 1.0 / ez : 0.0;
    }
  return o;
}

void check_sampling(const Grid2D& g, double f) {
  const double lambda = medium_wavelength(f, g.max_eps());
  const double limit = lambda / 20.0 * (1.0 + 1e-9);
  if (g.dx() > limit || g.dy() > limit)
    throw Error(ErrorCode::GridTooCoarse,
                "cell size exceeds lambda_core/20 = " + std::to_string(lambda / 20.0) + " m");
}

}  // namespace

const char* to_string(ModeLabel l) {
  switch (l) {
    case ModeLabel::TEM: return "TEM";
    case ModeLabel::TE: return "TE";
    case ModeLabel::TM: return "TM";
    case ModeLabel::LSE: return "LSE";
    case ModeLabel::LSM: return "LSM";
    case ModeLabel::HEM: return "HEM";
  }
  return "?";
}

const std::vector<cplx>& ModeFields::get(Component c) const {
  return const_cast<ModeFields*>(this)->get(c);
}

std::vector<cplx>& ModeFields::get(Component c) {
  switch (c) {
    case Component::Ex: return ex;
    case Component::Ey: return ey;
    case Component::Ez: return ez;
    case Component::Hx: return hx;
    case Component::Hy: return hy;
    case Component::Hz: return hz;
  }
  return ex;
}

Eigenproblem assemble_eigenproblem(const Grid2D& g, double f) {
  if (!(f > 0.0)) throw Error(ErrorCode::InvalidArgument, "frequency must be > 0");
  check_sampling(g, f);
  const Operators o = build_operators(g);
  const double k0 = wavenumber(f);
  const double k02 = k0 * k0;

  const SpMat ex_eps = diag(o.eps_x);
  const SpMat ey_eps = diag(o.eps_y);
  const SpMat ez_inv = diag(o.eps_z_inv);

  // beta^2 Ex = k0^2 eps_x Ex - Vy(Ux Ey - Uy Ex) + Ux eps_z^-1 (Vx eps_x Ex + Vy eps_y Ey)
  // beta^2 Ey = k0^2 eps_y Ey + Vx(Ux Ey - Uy Ex) + Uy eps_z^-1 (Vx eps_x Ex + Vy eps_y Ey)
  const SpMat div_x = SpMat(ez_inv * o.vx) * ex_eps;
  const SpMat div_y = SpMat(ez_inv * o.vy) * ey_eps;
  const SpMat pxx = k02 * ex_eps + SpMat(o.vy * o.uy) + SpMat(o.ux * div_x);
  const SpMat pxy = -SpMat(o.vy * o.ux) + SpMat(o.ux * div_y);
  const SpMat pyx = -SpMat(o.vx * o.uy) + SpMat(o.uy * div_x);
  const SpMat pyy = k02 * ey_eps + SpMat(o.vx * o.ux) + SpMat(o.uy * div_y);

  Eigenproblem ep;
  ep.k0 = k0;
  const std::size_t n = g.size();
  ep.ex_unknown.assign(n, -1);
  ep.ey_unknown.assign(n, -1);
  int next = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (o.ex_active[k]) ep.ex_unknown[k] = next++;
  ep.n_ex = next;
  for (std::size_t k = 0; k < n; ++k)
    if (o.ey_active[k]) ep.ey_unknown[k] = next++;

  std::vector<Trip> t;
  t.reserve(pxx.nonZeros() + pxy.nonZeros() + pyx.nonZeros() + pyy.nonZeros());
  auto scatter = [&](const SpMat& blk, const std::vector<int>& rows, const std::vector<int>& cols) {
    for (int c = 0; c < blk.outerSize(); ++c)
      for (SpMat::InnerIterator it(blk, c); it; ++it) {
        const int r = rows[it.row()];
        const int cc = cols[it.col()];
        if (r >= 0 && cc >= 0 && it.value() != 0.0) t.emplace_back(r, cc, it.value());
      }
  };
  scatter(pxx, ep.ex_unknown, ep.ex_unknown);
  scatter(pxy, ep.ex_unknown, ep.ey_unknown);
  scatter(pyx, ep.ey_unknown, ep.ex_unknown);
  scatter(pyy, ep.ey_unknown, ep.ey_unknown);
  ep.op.resize(next, next);
  ep.op.setFromTriplets(t.begin(), t.end());
  ep.op.makeCompressed();
  return ep;
}

namespace {

// Rebuilds all six components from the transverse E eigenvector and
// normalises to 1 W of axial flux.
ModeSolution reconstruct(std::shared_ptr<const Grid2D> gp, double f, cplx beta2,
                         const Eigen::VectorXcd& vec, const Eigenproblem& ep, const Operators& o) {
  const Grid2D& g = *gp;
  const std::size_t n = g.size();
  const double k0 = ep.k0;
  const cplx beta = [&] {
    cplx b = std::sqrt(beta2);
    if (b.real() < 0) b = -b;
    return b;
  }();

  Eigen::VectorXcd ex = Eigen::VectorXcd::Zero(n), ey = Eigen::VectorXcd::Zero(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (ep.ex_unknown[k] >= 0) ex[k] = vec[ep.ex_unknown[k]];
    if (ep.ey_unknown[k] >= 0) ey[k] = vec[ep.ey_unknown[k]];
  }
  // Fix the global phase: largest transverse sample real and positive.
  {
    Eigen::Index ix, iy;
    const double mx = ex.cwiseAbs().maxCoeff(&ix);
    const double my = ey.cwiseAbs().maxCoeff(&iy);
    const cplx ref = mx >= my ? ex[ix] : ey[iy];
    const cplx rot = std::conj(ref) / std::abs(ref);
    ex *= rot;
    ey *= rot;
  }

  Eigen::VectorXcd eps_x_ex(n), eps_y_ey(n);
  for (std::size_t k = 0; k < n; ++k) {
    eps_x_ex[k] = o.eps_x[k] * ex[k];
    eps_y_ey[k] = o.eps_y[k] * ey[k];
  }
  const Eigen::VectorXcd curl = o.ux * ey - o.uy * ex;  // at Hz samples
  const Eigen::VectorXcd div = o.vx * eps_x_ex + o.vy * eps_y_ey;
  const cplx j(0.0, 1.0);

  ModeSolution ms;
  ms.f = f;
  ms.beta = beta;
  ms.neff = beta.real() / k0;
  ms.grid = gp;
  auto& F = ms.fields;
  F.ex.resize(n);
  F.ey.resize(n);
  F.ez.resize(n);
  F.hx.resize(n);
  F.hy.resize(n);
  F.hz.resize(n);
  const Eigen::VectorXcd vy_curl = o.vy * curl;
  const Eigen::VectorXcd vx_curl = o.vx * curl;
  for (std::size_t k = 0; k < n; ++k) {
    F.ex[k] = ex[k];
    F.ey[k] = ey[k];
    F.ez[k] = -j / beta * o.eps_z_inv[k] * div[k];
    // eta0 H, then scaled to H
    const cplx hz = (j / k0) * curl[k];
    const cplx hy = (k0 / beta) * eps_x_ex[k] - vy_curl[k] / (k0 * beta);
    const cplx hx = -(k0 / beta) * eps_y_ey[k] - vx_curl[k] / (k0 * beta);
    F.hz[k] = hz / kEta0;
    F.hy[k] = hy / kEta0;
    F.hx[k] = hx / kEta0;
  }
  // Normal H vanishes on the PEC walls at the origin side.
  for (int jj = 0; jj < g.ny(); ++jj) F.hx[g.index(0, jj)] = 0.0;
  for (int ii = 0; ii < g.nx(); ++ii) F.hy[g.index(ii, 0)] = 0.0;

  ms.power = 1.0;
  const double p = axial_power(ms);
  if (!(p > 0.0)) throw Error(ErrorCode::Solver, "mode carries no forward power");
  const double s = 1.0 / std::sqrt(p);
  for (auto* comp : {&F.ex, &F.ey, &F.ez, &F.hx, &F.hy, &F.hz})
    for (auto& v : *comp) v *= s;
  ms.power = axial_power(ms);
  return ms;
}

}  // namespace

double axial_power(const ModeSolution& ms) {
  const auto& F = ms.fields;
  double sum = 0.0;
  for (std::size_t k = 0; k < F.ex.size(); ++k)
    sum += (F.ex[k] * std::conj(F.hy[k]) - F.ey[k] * std::conj(F.hx[k])).real();
  return 0.5 * sum * ms.grid->cell_area();
}

std::vector<ModeSolution> solve_modes_on_grid(std::shared_ptr<const Grid2D> gp, double f,
                                              int n_modes, const SolverSettings& s) {
  if (n_modes < 1) throw Error(ErrorCode::InvalidArgument, "n_modes must be >= 1");
  const Grid2D& g = *gp;
  const Eigenproblem ep = assemble_eigenproblem(g, f);
  const Operators o = build_operators(g);

  double eps_top = 0.0;
  for (double e : o.eps_x) eps_top = std::max(eps_top, e);
  for (double e : o.eps_y) eps_top = std::max(eps_top, e);
  const double k02 = ep.k0 * ep.k0;
  const double sigma = k02 * s.shift_fraction * eps_top;

  const auto pairs = shift_invert_eigs(ep.op, sigma, n_modes + s.extra_eigenpairs);
  const double eps_clad = g.region_materials().front().eps_r();

  std::vector<ModeSolution> out;
  for (const auto& pr : pairs) {
    const double b2 = pr.value.real();
    if (std::abs(pr.value.imag()) > 1e-6 * std::abs(b2)) continue;  // not a lossless guided pair
    if (!(b2 > k02 * eps_clad)) continue;
    ModeSolution ms = reconstruct(gp, f, cplx(b2, 0.0), pr.vector, ep, o);
    ms.mode_class = classify_mode(ms, s.theta);
    out.push_back(std::move(ms));
  }
  if (out.empty())
    throw Error(ErrorCode::NoGuidedMode, "no guided mode at " + std::to_string(f) + " Hz");
  std::stable_sort(out.begin(), out.end(), [](const ModeSolution& l, const ModeSolution& r) {
    if (std::abs(l.neff - r.neff) > 1e-9 * std::max(l.neff, r.neff)) return l.neff > r.neff;
    return l.mode_class.rho_x > r.mode_class.rho_x;
  });
  if (static_cast<int>(out.size()) > n_modes) out.resize(n_modes);
  return out;
}

std::vector<ModeSolution> solve_modes(const CrossSection& cs, double f, int n_modes,
                                      const SolverSettings& s) {
  GridOptions go = s.grid;
  go.cells_per_wavelength = s.cells_per_wavelength;
  auto grid = std::make_shared<const Grid2D>(build_grid(cs, f, go));
  return solve_modes_on_grid(grid, f, n_modes, s);
}

ModeClass classify_mode(const ModeSolution& ms, double theta) {
  const auto& F = ms.fields;
  auto energy = [](const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return s;
  };
  const double ex = energy(F.ex), ey = energy(F.ey), ez = energy(F.ez);
  const double hx = energy(F.hx), hy = energy(F.hy), hz = energy(F.hz);
  ModeClass c;
  c.rho_x = ex + ey > 0 ? ex / (ex + ey) : 0.0;
  c.sigma_x = hx + hy > 0 ? hx / (hx + hy) : 0.0;
  c.ez_fraction = ex + ey + ez > 0 ? ez / (ex + ey + ez) : 0.0;
  c.hz_fraction = hx + hy + hz > 0 ? hz / (hx + hy + hz) : 0.0;

  const bool has_ez = c.ez_fraction >= theta;
  const bool has_hz = c.hz_fraction >= theta;
  if (!has_ez && !has_hz)
    c.label = ModeLabel::TEM;
  else if (!has_ez)
    c.label = ModeLabel::TE;
  else if (!has_hz)
    c.label = ModeLabel::TM;
  else if (std::min(c.rho_x, 1.0 - c.rho_x) < theta)
    c.label = ModeLabel::LSE;
  else if (std::min(c.sigma_x, 1.0 - c.sigma_x) < theta)
    c.label = ModeLabel::LSM;
  else
    c.label = ModeLabel::HEM;
  return c;
}

std::complex<double> mode_overlap(const ModeSolution& m1, const ModeSolution& m2) {
  if (!m1.grid || !m2.grid || !m1.grid->same_layout(*m2.grid) || m1.f != m2.f)
    throw Error(ErrorCode::IncompatibleGrids, "overlap needs modes on one grid and frequency");
  const auto& a = m1.fields;
  const auto& b = m2.fields;
  cplx sum = 0.0;
  for (std::size_t k = 0; k < a.ex.size(); ++k) {
    sum += a.ex[k] * std::conj(b.hy[k]) - a.ey[k] * std::conj(b.hx[k]);
    sum += std::conj(b.ex[k]) * a.hy[k] - std::conj(b.ey[k]) * a.hx[k];
  }
  return 0.25 * sum * m1.grid->cell_area();
}

std::complex<double> interpolate_component(const Grid2D& g, const std::vector<cplx>& data,
                                           Component c, double x, double y) {
  // Fractional sample index along each axis.
  const double sx = (x - g.x_of(c, 0)) / g.dx();
  const double sy = (y - g.y_of(c, 0)) / g.dy();
  const int i0 = static_cast<int>(std::floor(sx));
  const int j0 = static_cast<int>(std::floor(sy));
  const double tx = sx - i0;
  const double ty = sy - j0;
  auto at = [&](int i, int j) -> cplx {
    if (i < 0 || j < 0 || i >= g.nx() || j >= g.ny()) return 0.0;
    return data[g.index(i, j)];
  };
  cplx v = 0.0;
  if (tx != 1.0 && ty != 1.0) v += (1 - tx) * (1 - ty) * at(i0, j0);
  if (tx != 0.0 && ty != 1.0) v += tx * (1 - ty) * at(i0 + 1, j0);
  if (tx != 1.0 && ty != 0.0) v += (1 - tx) * ty * at(i0, j0 + 1);
  if (tx != 0.0 && ty != 0.0) v += tx * ty * at(i0 + 1, j0 + 1);
  return v;
}

std::complex<double> mode_overlap_resampled(const ModeSolution& m1, const ModeSolution& m2) {
  if (m1.f != m2.f) throw Error(ErrorCode::IncompatibleGrids, "overlap needs one frequency");
  if (m1.grid->same_layout(*m2.grid)) return mode_overlap(m1, m2);

  // Half 1: E1 native, H2 resampled onto E1's samples.
  auto half = [](const ModeSolution& e_owner, const ModeSolution& h_owner, bool conj_e) {
    const Grid2D& g = *e_owner.grid;
    const Grid2D& gh = *h_owner.grid;
    const auto& E = e_owner.fields;
    const auto& H = h_owner.fields;
    cplx sum = 0.0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const auto k = g.index(i, j);
        // Ex and Hy share a sample; Ey and Hx share a sample.
        const cplx hy = interpolate_component(gh, H.hy, Component::Hy, g.x_of(Component::Ex, i),
                                              g.y_of(Component::Ex, j));
        const cplx hx = interpolate_component(gh, H.hx, Component::Hx, g.x_of(Component::Ey, i),
                                              g.y_of(Component::Ey, j));
        if (conj_e)
          sum += std::conj(E.ex[k]) * hy - std::conj(E.ey[k]) * hx;
        else
          sum += E.ex[k] * std::conj(hy) - E.ey[k] * std::conj(hx);
      }
    return sum * g.cell_area();
  };
  return 0.25 * (half(m1, m2, false) + half(m2, m1, true));
}

double electric_energy_integral(const ModeSolution& ms, const std::vector<double>& w,
                                bool with_bend) {
  const Grid2D& g = *ms.grid;
  const auto& F = ms.fields;
  const bool bend = with_bend && g.bend().has_value();
  auto weight = [&](Component c, int i, int j) {
    double v = g.sample_cell_average(w, c, i, j);
    if (bend) v *= g.bend()->factor(g.bend()->axis == Axis::X ? g.x_of(c, i) : g.y_of(c, j));
    return v;
  };
  double sum = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const auto k = g.index(i, j);
      sum += weight(Component::Ex, i, j) * std::norm(F.ex[k]);
      sum += weight(Component::Ey, i, j) * std::norm(F.ey[k]);
      sum += weight(Component::Ez, i, j) * std::norm(F.ez[k]);
    }
  return sum * g.cell_area();
}

std::pair<double, double> field_centroid(const ModeSolution& ms) {
  const Grid2D& g = *ms.grid;
  const auto& F = ms.fields;
  double sx = 0, sy = 0, s = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const auto k = g.index(i, j);
      for (auto c : {Component::Ex, Component::Ey, Component::Ez}) {
        const double e = std::norm(F.get(c)[k]);
        sx += e * g.x_of(c, i);
        sy += e * g.y_of(c, j);
        s += e;
      }
    }
  return {sx / s, sy / s};
}

}  // namespace drw
