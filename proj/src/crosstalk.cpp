#include "drw/crosstalk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drw/constants.hpp"
#include "drw/error.hpp"
#include "drw/parallel.hpp"

namespace drw {

using cplx = std::complex<double>;

void ParallelPair::validate() const {
  if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, "separation d must be > 0");
  if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "coupled length L must be > 0");
}

namespace {

CrossSection lossless(const CrossSection& cs) {
  return {cs.a(), cs.b(), cs.core().with_tan_delta(0.0), cs.clad().with_tan_delta(0.0)};
}

// Copy of a composite grid with only core `keep` (region id) left in place.
Grid2D single_core(const Grid2D& g, int keep) {
  auto eps = g.eps_map();
  auto region = g.region_map();
  const auto clad = complex_permittivity(g.region_materials().front(), 0.0);
  for (std::size_t k = 0; k < eps.size(); ++k)
    if (region[k] != 0 && region[k] != keep) {
      eps[k] = clad;
      region[k] = 0;
    }
  return {g.nx(), g.ny(), g.dx(), g.dy(), g.x0(), g.y0(), std::move(eps), std::move(region),
          g.region_materials()};
}

bool same_polarisation(const ModeSolution& m, const ModeSolution& ref) {
  return (m.mode_class.rho_x > 0.5) == (ref.mode_class.rho_x > 0.5);
}

}  // namespace

Grid2D pair_grid(const ParallelPair& pair, double f, const SolverSettings& s) {
  pair.validate();
  const auto cs = lossless(pair.cs);
  const double xc = 0.5 * (pair.d + cs.a());
  GridOptions go = s.grid;
  go.cells_per_wavelength = s.cells_per_wavelength;
  Grid2D g = build_multi_core_grid({{-xc, 0.0, cs.a(), cs.b()}, {xc, 0.0, cs.a(), cs.b()}},
                                   cs.core(), cs.clad(), f, go, kMinGapCells);
  const int gap_cells = static_cast<int>(std::lround(pair.d / g.dx()));
  if (gap_cells < kMinGapCells)
    throw Error(ErrorCode::GridTooCoarse, "gap of " + std::to_string(pair.d * 1e6) + " um holds " +
                                              std::to_string(gap_cells) + " cells, need " +
                                              std::to_string(kMinGapCells));
  return g;
}

int mirror_parity(const ModeSolution& ms, double* residual) {
  const Grid2D& g = *ms.grid;
  if (std::abs(g.x0() + 0.5 * g.nx() * g.dx()) > 1e-6 * g.dx())
    throw Error(ErrorCode::InvalidArgument, "parity test needs a grid symmetric about x = 0");
  const auto& F = ms.fields;
  double plus = 0.0, minus = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const auto k = g.index(i, j);
      const cplx ex_m = F.ex[g.index(g.nx() - 1 - i, j)];
      plus += std::norm(F.ex[k] + ex_m);
      minus += std::norm(F.ex[k] - ex_m);
      if (i > 0) {
        const cplx ey_m = F.ey[g.index(g.nx() - i, j)];
        plus += std::norm(F.ey[k] - ey_m);
        minus += std::norm(F.ey[k] + ey_m);
      }
    }
  if (residual) *residual = std::min(plus, minus) / (plus + minus);
  return plus <= minus ? 1 : -1;
}

Supermodes supermode_split(const ParallelPair& pair, double f, const SolverSettings& s) {
  auto g = std::make_shared<const Grid2D>(pair_grid(pair, f, s));
  auto g1 = std::make_shared<const Grid2D>(single_core(*g, 1));
  const auto iso = solve_modes_on_grid(g1, f, 1, s).front();

  const auto modes = solve_modes_on_grid(g, f, 6, s);
  std::vector<const ModeSolution*> pick;
  for (const auto& m : modes)
    if (same_polarisation(m, iso) && pick.size() < 2) pick.push_back(&m);
  if (pick.size() < 2)
    throw Error(ErrorCode::NoGuidedMode, "pair supports fewer than two supermodes of the "
                                         "fundamental's polarisation");
  Supermodes sm{*pick[0], *pick[1], iso.beta.real()};
  sm.parity_even = mirror_parity(sm.even, &sm.parity_error_even);
  sm.parity_odd = mirror_parity(sm.odd, &sm.parity_error_odd);
  return sm;
}

double coupling_coefficient(const ParallelPair& pair, double f, const SolverSettings& s) {
  const auto sm = supermode_split(pair, f, s);
  return 0.5 * (sm.even.beta.real() - sm.odd.beta.real());
}

double overlap_coupling_coefficient(const ParallelPair& pair, double f, const SolverSettings& s) {
  const Grid2D g = pair_grid(pair, f, s);
  auto g1 = std::make_shared<const Grid2D>(single_core(g, 1));
  auto g2 = std::make_shared<const Grid2D>(single_core(g, 2));
  const auto m1 = solve_modes_on_grid(g1, f, 1, s).front();
  const auto m2 = solve_modes_on_grid(g2, f, 1, s).front();

  const double eps_clad = g.region_materials().front().eps_r();
  std::vector<double> delta(g.size(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.region_map()[k] == 2) delta[k] = g.eps_map()[k].real() - eps_clad;

  cplx sum = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const auto k = g.index(i, j);
      for (auto c : {Component::Ex, Component::Ey, Component::Ez}) {
        const double w = g.sample_cell_average(delta, c, i, j);
        if (w != 0.0) sum += w * std::conj(m1.fields.get(c)[k]) * m2.fields.get(c)[k];
      }
    }
  return angular_frequency(f) * kEpsilon0 / 4.0 * std::abs(sum) * g.cell_area() /
         std::sqrt(m1.power * m2.power);
}

double fext_db(double kappa, double L) {
  const double p = std::pow(std::sin(kappa * L), 2);
  return p > 0.0 ? std::max(kCrosstalkFloorDb, 10.0 * std::log10(p)) : kCrosstalkFloorDb;
}

double through_db(double kappa, double L) {
  const double p = std::pow(std::cos(kappa * L), 2);
  return p > 0.0 ? std::max(kCrosstalkFloorDb, 10.0 * std::log10(p)) : kCrosstalkFloorDb;
}

double next_bound_db(double kappa, double beta) {
  const double p = std::pow(kappa / (2.0 * beta), 2);
  return p > 0.0 ? std::max(kCrosstalkFloorDb, 10.0 * std::log10(p)) : kCrosstalkFloorDb;
}

std::vector<CrosstalkPoint> crosstalk_sweep(const ParallelPair& pair,
                                            const std::vector<double>& freqs,
                                            const SolverSettings& s, int workers) {
  pair.validate();
  std::vector<CrosstalkPoint> out(freqs.size());
  parallel_for(freqs.size(), workers, [&](std::size_t k) {
    const auto sm = supermode_split(pair, freqs[k], s);
    CrosstalkPoint& p = out[k];
    p.f = freqs[k];
    p.kappa = 0.5 * (sm.even.beta.real() - sm.odd.beta.real());
    p.beta = sm.isolated_beta;
    p.fext_db = fext_db(p.kappa, pair.L);
    p.through_db = through_db(p.kappa, pair.L);
    p.next_bound_db = next_bound_db(p.kappa, p.beta);
  });
  return out;
}

std::vector<double> default_separations() {
  return {um(10), um(20), um(40), um(60), um(80), um(100)};
}

}  // namespace drw
