#include "drw/marcatili.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "drw/constants.hpp"
#include "drw/error.hpp"

namespace drw {

namespace {

double eta_of(WallType wall, double eps1, double eps2) {
  return wall == WallType::TE_like ? 1.0 : eps2 / eps1;
}

// F(k) = k w - p pi + 2 atan(eta k / gamma(k)); increasing in k.
double transverse_fn(double k, double w, double v2, double eta, int p) {
  const double g = std::sqrt(std::max(0.0, v2 - k * k));
  return k * w - p * kPi + 2.0 * std::atan2(eta * k, g);
}

}  // namespace

double transverse_residual(double k_t, double w, double k0, double eps1, double eps2, int p,
                           WallType wall) {
  const double v2 = k0 * k0 * (eps1 - eps2);
  return std::abs(transverse_fn(k_t, w, v2, eta_of(wall, eps1, eps2), p)) / (p * kPi);
}

TransverseRoot solve_transverse(double w, double k0, double eps1, double eps2, int p,
                                WallType wall) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "mode index must be >= 1");
  const double v2 = k0 * k0 * (eps1 - eps2);
  if (!(v2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "k0^2 (eps1 - eps2) must be > 0");
  const double v = std::sqrt(v2);
  const double eta = eta_of(wall, eps1, eps2);

  double lo = (p - 1) * kPi / w;
  double hi = std::min(p * kPi / w, v);
  if (!(hi > lo) || transverse_fn(hi, w, v2, eta, p) <= 0.0)
    throw Error(ErrorCode::BelowCutoff, "no transverse root for index " + std::to_string(p));

  // Bisection to 1e-12 relative: never skips the root next to cutoff.
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (transverse_fn(mid, w, v2, eta, p) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  double k = 0.5 * (lo + hi);

  // Newton polish, kept inside the bracket.
  for (int it = 0; it < 4; ++it) {
    const double g = std::sqrt(std::max(0.0, v2 - k * k));
    if (g <= 0.0) break;
    // d/dk atan(eta k / g) with dg/dk = -k/g
    const double u = eta * k / g;
    const double du = eta / g + eta * k * k / (g * g * g);
    const double dF = w + 2.0 * du / (1.0 + u * u);
    const double step = transverse_fn(k, w, v2, eta, p) / dF;
    const double next = k - step;
    if (!(next > lo - 1e-9 * hi && next < hi + 1e-9 * hi)) break;
    k = next;
    if (std::abs(step) < 1e-16 * k) break;
  }
  return {k, std::sqrt(std::max(0.0, v2 - k * k))};
}

MarcatiliMode solve_marcatili(const CrossSection& cs, double f, MarcatiliFamily family, int p,
                              int q) {
  if (!(f > 0.0)) throw Error(ErrorCode::InvalidArgument, "frequency must be > 0");
  const double k0 = wavenumber(f);
  const double e1 = cs.core().eps_r();
  const double e2 = cs.clad().eps_r();

  MarcatiliMode m{};
  m.family = family;
  m.p = p;
  m.q = q;
  m.f = f;
  m.a = cs.a();
  m.b = cs.b();
  m.eps_core = e1;
  m.eps_clad = e2;
  const auto rx = solve_transverse(cs.a(), k0, e1, e2, p, m.x_wall());
  const auto ry = solve_transverse(cs.b(), k0, e1, e2, q, m.y_wall());
  m.kx = rx.k_t;
  m.ky = ry.k_t;
  m.gamma_x = rx.gamma;
  m.gamma_y = ry.gamma;
  const double beta2 = k0 * k0 * e1 - m.kx * m.kx - m.ky * m.ky;
  if (!(beta2 > k0 * k0 * e2 + 1e-6 * k0 * k0))
    throw Error(ErrorCode::BelowCutoff, "mode (" + std::to_string(p) + "," + std::to_string(q) +
                                            ") is not guided at " + std::to_string(f) + " Hz");
  m.beta = std::sqrt(beta2);
  m.neff = m.beta / k0;
  return m;
}

namespace {

// One separable factor: cos/sin inside, exponential tail outside.
double profile_1d(double s, double width, double k, double gamma, int index, double jump) {
  const double half = width / 2;
  auto inside = [&](double t) { return index % 2 == 1 ? std::cos(k * t) : std::sin(k * t); };
  if (std::abs(s) <= half) return inside(s);
  const double edge = s > 0 ? half : -half;
  return jump * inside(edge) * std::exp(-gamma * (std::abs(s) - half));
}

}  // namespace

double marcatili_field_at(const MarcatiliMode& m, double x, double y) {
  const double jx = m.x_wall() == WallType::TM_like ? m.eps_core / m.eps_clad : 1.0;
  const double jy = m.y_wall() == WallType::TM_like ? m.eps_core / m.eps_clad : 1.0;
  return profile_1d(x, m.a, m.kx, m.gamma_x, m.p, jx) * profile_1d(y, m.b, m.ky, m.gamma_y, m.q, jy);
}

std::vector<MarcatiliMode> marcatili_guided_modes(const CrossSection& cs, double f) {
  std::vector<MarcatiliMode> out;
  for (auto fam : {MarcatiliFamily::Ex, MarcatiliFamily::Ey}) {
    for (int p = 1;; ++p) {
      bool any = false;
      for (int q = 1;; ++q) {
        try {
          out.push_back(solve_marcatili(cs, f, fam, p, q));
          any = true;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::BelowCutoff) throw;
          break;
        }
      }
      if (!any) break;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const MarcatiliMode& l, const MarcatiliMode& r) { return l.neff > r.neff; });
  return out;
}

}  // namespace drw
