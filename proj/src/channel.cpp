#include "drw/channel.hpp"

#include <algorithm>
#include <cmath>

#include "drw/constants.hpp"
#include "drw/error.hpp"
#include "drw/parallel.hpp"

namespace drw {

namespace {

CrossSection lossless(const CrossSection& cs) {
  return {cs.a(), cs.b(), cs.core().with_tan_delta(0.0), cs.clad().with_tan_delta(0.0)};
}

// Lossy weight of each cell attributed to one region: a partly filled cell
// splits between its core region and the cladding.
std::vector<double> region_weight(const Grid2D& g, int region) {
  const auto& mats = g.region_materials();
  std::vector<double> w(g.size(), 0.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const int r = g.region(i, j);
      const double fill = core_fill(g, i, j);
      const int core_r = r != 0 ? r : 1;
      double v = 0.0;
      if (region == 0) v = (1.0 - fill) * mats[0].eps_r();
      if (region == core_r && region != 0) v = fill * mats[region].eps_r();
      w[g.index(i, j)] = v;
    }
  return w;
}

}  // namespace

std::vector<double> attenuation_coefficients(const ModeSolution& ms, double f) {
  const Grid2D& g = *ms.grid;
  const double scale = angular_frequency(f) * kEpsilon0 / 4.0 / ms.power;
  std::vector<double> out;
  for (std::size_t r = 0; r < g.region_materials().size(); ++r) {
    const auto w = region_weight(g, static_cast<int>(r));
    // weight already carries eps_r, so divide it back out per region
    const double eps = g.region_materials()[r].eps_r();
    out.push_back(scale * electric_energy_integral(ms, w, true) / eps);
  }
  return out;
}

double dielectric_attenuation(const ModeSolution& ms, const CrossSection& cs, double f) {
  const auto coef = attenuation_coefficients(ms, f);
  double alpha = 0.0;
  for (std::size_t r = 0; r < coef.size(); ++r) {
    const Material& m = r == 0 ? cs.clad() : cs.core();
    alpha += m.eps_r() * m.tan_delta() * coef[r];
  }
  return alpha;
}

ModeSolution fundamental_mode(const CrossSection& cs, double f, const SolverSettings& s) {
  auto modes = solve_modes(lossless(cs), f, 1, s);
  return std::move(modes.front());
}

LossTable loss_table(const CrossSection& cs, const std::vector<double>& f_list,
                     std::vector<double> tan_deltas, const ChannelSettings& s) {
  if (f_list.empty() || tan_deltas.empty())
    throw Error(ErrorCode::InvalidArgument, "loss table needs frequencies and loss tangents");
  std::sort(tan_deltas.begin(), tan_deltas.end());
  LossTable t;
  t.frequencies = f_list;
  t.tan_deltas = tan_deltas;
  t.db_per_mm.assign(tan_deltas.size(), std::vector<double>(f_list.size(), 0.0));
  parallel_for(f_list.size(), s.workers, [&](std::size_t k) {
    const auto ms = fundamental_mode(cs, f_list[k], s.solver);
    for (std::size_t ti = 0; ti < tan_deltas.size(); ++ti) {
      const double alpha = dielectric_attenuation(ms, cs.with_tan_delta(tan_deltas[ti]), f_list[k]);
      t.db_per_mm[ti][k] = kNeperToDb * alpha * 1e-3;
    }
  });
  return t;
}

DispersionProfile differentiate_beta(const std::vector<double>& f, const std::vector<double>& beta) {
  const std::size_t n = f.size();
  if (n < 5 || beta.size() != n)
    throw Error(ErrorCode::InsufficientGrid, "dispersion needs at least 5 frequency points");
  DispersionProfile p;
  p.frequencies = f;
  p.beta = beta;
  p.group_index.resize(n);
  p.beta2.resize(n);
  p.one_sided.assign(n, false);
  p.one_sided.front() = p.one_sided.back() = true;

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = angular_frequency(f[i]);

  // Lagrange weights of the quadratic through points (i0, i0+1, i0+2),
  // first and second derivative evaluated at w[at].
  auto derivs = [&](std::size_t i0, std::size_t at) {
    const double x0 = w[i0], x1 = w[i0 + 1], x2 = w[i0 + 2], x = w[at];
    const double d0 = (x0 - x1) * (x0 - x2), d1 = (x1 - x0) * (x1 - x2), d2 = (x2 - x0) * (x2 - x1);
    const double y0 = beta[i0] / d0, y1 = beta[i0 + 1] / d1, y2 = beta[i0 + 2] / d2;
    const double first = y0 * (2 * x - x1 - x2) + y1 * (2 * x - x0 - x2) + y2 * (2 * x - x0 - x1);
    const double second = 2.0 * (y0 + y1 + y2);
    return std::pair{first, second};
  };
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t i0 = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
    const auto [d1, d2] = derivs(i0, i);
    p.group_index[i] = kSpeedOfLight * d1;
    p.beta2[i] = d2;
  }
  return p;
}

DispersionProfile dispersion_profile(const CrossSection& cs, const FrequencyGrid& fg,
                                     int mode_index, const ChannelSettings& s) {
  if (fg.size() < 5)
    throw Error(ErrorCode::InsufficientGrid, "dispersion needs at least 5 frequency points");
  if (mode_index < 0) throw Error(ErrorCode::InvalidArgument, "mode index must be >= 0");
  GridOptions go = s.solver.grid;
  go.cells_per_wavelength = s.solver.cells_per_wavelength;
  go.f_min = fg.front();
  auto grid = std::make_shared<const Grid2D>(build_grid(lossless(cs), fg.back(), go));
  std::vector<double> beta(fg.size());
  parallel_for(fg.size(), s.workers, [&](std::size_t k) {
    auto modes = solve_modes_on_grid(grid, fg[k], mode_index + 1, s.solver);
    if (static_cast<int>(modes.size()) <= mode_index)
      throw Error(ErrorCode::NoGuidedMode, "selected mode is not guided at " +
                                               std::to_string(fg[k] * 1e-9) + " GHz");
    beta[k] = modes[mode_index].beta.real();
  });
  return differentiate_beta(fg.values(), beta);
}

SParameterSet straight_channel(double length, const FrequencyGrid& fg,
                               const std::vector<double>& beta, const std::vector<double>& alpha) {
  if (!(length >= 0.0)) throw Error(ErrorCode::InvalidArgument, "length must be >= 0");
  if (beta.size() != fg.size() || alpha.size() != fg.size())
    throw Error(ErrorCode::InvalidArgument, "one beta and alpha per frequency required");
  std::vector<Eigen::MatrixXcd> mats;
  for (std::size_t k = 0; k < fg.size(); ++k) {
    const std::complex<double> t =
        length == 0.0 ? 1.0 : std::exp(-std::complex<double>(alpha[k], beta[k]) * length);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = m(1, 0) = t;
    mats.push_back(m);
  }
  return {fg, std::move(mats)};
}

SParameterSet straight_channel(double length, const CrossSection& cs, const FrequencyGrid& fg,
                               const ChannelSettings& s) {
  std::vector<double> beta(fg.size()), alpha(fg.size());
  parallel_for(fg.size(), s.workers, [&](std::size_t k) {
    const auto ms = fundamental_mode(cs, fg[k], s.solver);
    beta[k] = ms.beta.real();
    alpha[k] = dielectric_attenuation(ms, cs, fg[k]);
  });
  return straight_channel(length, fg, beta, alpha);
}

}  // namespace drw
