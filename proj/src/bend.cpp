#include "drw/bend.hpp"

#include <cmath>
#include <string>

#include "drw/channel.hpp"
#include "drw/constants.hpp"
#include "drw/error.hpp"

namespace drw {

const char* to_string(BendPlane p) { return p == BendPlane::A ? "a" : "b"; }

void BendSpec::validate(const CrossSection& cs) const {
  const double half = 0.5 * (plane == BendPlane::A ? cs.a() : cs.b());
  if (!(radius > half))
    throw Error(ErrorCode::InvalidArgument,
                "bend radius " + std::to_string(radius * 1e6) + " um must exceed " +
                    std::to_string(half * 1e6) + " um (half the in-plane dimension)");
  if (!(angle > 0.0 && angle <= 2.0 * kPi))
    throw Error(ErrorCode::InvalidArgument, "bend angle must lie in (0, 2 pi]");
}

namespace {

CrossSection lossless(const CrossSection& cs) {
  return {cs.a(), cs.b(), cs.core().with_tan_delta(0.0), cs.clad().with_tan_delta(0.0)};
}

Grid2D straight_grid(const CrossSection& cs, double f, const SolverSettings& s) {
  GridOptions go = s.grid;
  go.cells_per_wavelength = s.cells_per_wavelength;
  return build_grid(lossless(cs), f, go);
}

}  // namespace

Grid2D bend_equivalent_profile(const CrossSection& cs, const BendSpec& bend, double f,
                               const SolverSettings& s) {
  bend.validate(cs);
  const Axis axis = bend.plane == BendPlane::A ? Axis::X : Axis::Y;
  return straight_grid(cs, f, s).with_bend(BendTransform{bend.radius, axis});
}

BendModeResult bend_fundamental(const CrossSection& cs, const BendSpec& bend, double f,
                                const SolverSettings& s, int candidates) {
  bend.validate(cs);
  const Axis axis = bend.plane == BendPlane::A ? Axis::X : Axis::Y;
  auto sg = std::make_shared<const Grid2D>(straight_grid(cs, f, s));
  auto bg = std::make_shared<const Grid2D>(sg->with_bend(BendTransform{bend.radius, axis}));
  auto straight = solve_modes_on_grid(sg, f, 1, s);
  auto modes = solve_modes_on_grid(bg, f, candidates, s);

  std::size_t best = 0;
  double best_ov = -1.0;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const double ov = std::abs(mode_overlap(straight.front(), modes[k]));
    if (ov > best_ov) {
      best_ov = ov;
      best = k;
    }
  }
  return {std::move(modes[best]), std::move(straight.front()), best_ov};
}

BendLoss bend_loss(const CrossSection& cs, const BendSpec& bend, double f, const SolverSettings& s) {
  const auto r = bend_fundamental(cs, bend, f, s);
  BendLoss out;
  out.junction_db = -10.0 * std::log10(r.overlap * r.overlap);
  const double da = dielectric_attenuation(r.bend, cs, f) - dielectric_attenuation(r.straight, cs, f);
  out.differential_db = kNeperToDb * da * bend.angle * bend.radius;
  out.total_db = 2.0 * out.junction_db + out.differential_db;
  out.suspicious_negative = out.total_db < -0.05;
  return out;
}

ModeConversion bend_mode_conversion(const CrossSection& cs, const BendSpec& bend, double f,
                                    int n_modes, const SolverSettings& s) {
  if (n_modes < 2) throw Error(ErrorCode::InvalidArgument, "n_modes must be >= 2");
  const auto r = bend_fundamental(cs, bend, f, s);
  const auto straight = solve_modes_on_grid(r.straight.grid, f, n_modes, s);
  ModeConversion mc;
  double total = 0.0;
  for (const auto& m : straight) {
    const double p = std::norm(mode_overlap(m, r.bend));
    mc.fractions.push_back(p);
    total += p;
  }
  mc.into_higher = total - mc.fractions.front();
  mc.unaccounted = 1.0 - total;
  return mc;
}

}  // namespace drw
