#include "drw/taper.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "drw/channel.hpp"
#include "drw/constants.hpp"
#include "drw/error.hpp"
#include "drw/marcatili.hpp"
#include "drw/parallel.hpp"

namespace drw {

using cplx = std::complex<double>;

namespace {

CrossSection lossless(const CrossSection& cs) {
  return {cs.a(), cs.b(), cs.core().with_tan_delta(0.0), cs.clad().with_tan_delta(0.0)};
}

bool same_materials(const CrossSection& l, const CrossSection& r) {
  return l.core().eps_r() == r.core().eps_r() && l.clad().eps_r() == r.clad().eps_r();
}

// Non-strict monotonicity of one dimension along the section list.
bool monotone(const std::vector<double>& v) {
  bool up = true, down = true;
  for (std::size_t k = 1; k < v.size(); ++k) {
    up = up && v[k] >= v[k - 1];
    down = down && v[k] <= v[k - 1];
  }
  return up || down;
}

using ModeSet = std::shared_ptr<const std::vector<ModeSolution>>;

// All sections of a profile share the layout of the largest one, so every
// junction overlap is evaluated on a single grid.
std::shared_ptr<const Grid2D> common_layout(const std::vector<CrossSection>& secs, double f,
                                            const SolverSettings& s) {
  double a = 0.0, b = 0.0;
  for (const auto& cs : secs) {
    a = std::max(a, cs.a());
    b = std::max(b, cs.b());
  }
  GridOptions go = s.grid;
  go.cells_per_wavelength = s.cells_per_wavelength;
  return std::make_shared<const Grid2D>(build_grid(lossless(secs.front().with_dims(a, b)), f, go));
}

ModeSet solve_section(const CrossSection& cs, const Grid2D& layout, double f, int n_modes,
                      const SolverSettings& s) {
  const auto c = lossless(cs);
  auto g = std::make_shared<const Grid2D>(
      rasterize_cores(layout, {CoreRect{0.0, 0.0, c.a(), c.b()}}, c.core(), c.clad()));
  return std::make_shared<const std::vector<ModeSolution>>(solve_modes_on_grid(g, f, n_modes, s));
}

// One mode set per section; consecutive equal sections share the same set so
// their junction is the exact identity.
std::vector<ModeSet> solve_sections(const std::vector<CrossSection>& secs, double f, int n_modes,
                                    const SolverSettings& s) {
  const auto layout = common_layout(secs, f, s);
  std::vector<ModeSet> out;
  for (std::size_t k = 0; k < secs.size(); ++k) {
    if (k > 0 && lossless(secs[k]) == lossless(secs[k - 1]))
      out.push_back(out.back());
    else
      out.push_back(solve_section(secs[k], *layout, f, n_modes, s));
  }
  return out;
}

cplx overlap(const ModeSolution& l, const ModeSolution& r) {
  if (l.grid->same_layout(*r.grid)) return mode_overlap(l, r);
  return mode_overlap_resampled(l, r);
}

Eigen::MatrixXcd propagation(const std::vector<ModeSolution>& modes, const CrossSection& cs,
                             double length, double f) {
  const int n = static_cast<int>(modes.size());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    cplx t = 1.0;
    if (length > 0.0) {
      const double alpha = dielectric_attenuation(modes[k], cs, f);
      t = std::exp(-cplx(alpha, modes[k].beta.real()) * length);
    }
    p(k, n + k) = p(n + k, k) = t;
  }
  return p;
}

}  // namespace

TaperProfile::TaperProfile(CrossSection in, CrossSection out, std::vector<TaperSegment> segments)
    : in_(std::move(in)), out_(std::move(out)), segments_(std::move(segments)) {
  std::vector<double> a{in_.a()}, b{in_.b()};
  for (const auto& sg : segments_) {
    if (!(sg.length >= 0.0))
      throw Error(ErrorCode::InvalidArgument, "segment length must be >= 0");
    if (!same_materials(sg.cs, in_))
      throw Error(ErrorCode::TaperInfeasible, "taper sections must share materials");
    a.push_back(sg.cs.a());
    b.push_back(sg.cs.b());
  }
  if (!same_materials(in_, out_))
    throw Error(ErrorCode::TaperInfeasible, "taper ports must share materials");
  a.push_back(out_.a());
  b.push_back(out_.b());
  if (!monotone(a) || !monotone(b))
    throw Error(ErrorCode::InvalidArgument, "taper dimensions must vary monotonically");
}

double TaperProfile::total_length() const {
  double l = 0.0;
  for (const auto& sg : segments_) l += sg.length;
  return l;
}

std::vector<CrossSection> TaperProfile::sections() const {
  std::vector<CrossSection> out{in_};
  for (const auto& sg : segments_) out.push_back(sg.cs);
  out.push_back(out_);
  return out;
}

TaperProfile TaperProfile::with_tan_delta(double td) const {
  std::vector<TaperSegment> segs;
  for (const auto& sg : segments_) segs.push_back({sg.length, sg.cs.with_tan_delta(td)});
  return {in_.with_tan_delta(td), out_.with_tan_delta(td), std::move(segs)};
}

TaperProfile make_linear_taper(const CrossSection& cs_in, const CrossSection& cs_out,
                               double length, int n_segments, std::optional<double> f_check) {
  if (n_segments < 2) throw Error(ErrorCode::InvalidArgument, "n_segments must be >= 2");
  if (!(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "taper length must be > 0");
  if (!same_materials(cs_in, cs_out))
    throw Error(ErrorCode::TaperInfeasible, "taper endpoints must share materials");
  std::vector<TaperSegment> segs;
  for (int k = 0; k < n_segments; ++k) {
    const double t = (k + 0.5) / n_segments;
    const double a = cs_in.a() + t * (cs_out.a() - cs_in.a());
    const double b = cs_in.b() + t * (cs_out.b() - cs_in.b());
    segs.push_back({length / n_segments, cs_in.with_dims(a, b)});
  }
  TaperProfile p(cs_in, cs_out, std::move(segs));
  if (f_check) {
    for (const auto& cs : p.sections()) {
      try {
        solve_marcatili(cs, *f_check, MarcatiliFamily::Ex, 1, 1);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BelowCutoff) throw;
        throw Error(ErrorCode::TaperInfeasible,
                    "section " + std::to_string(cs.a() * 1e6) + " x " + std::to_string(cs.b() * 1e6) +
                        " um guides no mode at " + std::to_string(*f_check * 1e-9) + " GHz");
      }
    }
  }
  return p;
}

CrossSection default_launch(const CrossSection& channel, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "launch scale must be > 0");
  return channel.with_dims(channel.a() * scale, channel.b() * scale);
}

Junction junction_from_modes(const std::vector<ModeSolution>& left,
                             const std::vector<ModeSolution>& right) {
  if (left.empty() || right.empty())
    throw Error(ErrorCode::NoGuidedMode, "junction needs a guided mode on both sides");
  const int nl = static_cast<int>(left.size());
  const int nr = static_cast<int>(right.size());
  Junction j;
  j.n_left = nl;
  j.n_right = nr;
  j.overlap.resize(nl, nr);
  for (int p = 0; p < nl; ++p)
    for (int q = 0; q < nr; ++q) {
      const cplx o = &left == &right && p == q ? cplx(1.0)
                                               : overlap(left[p], right[q]) /
                                                     std::sqrt(left[p].power * right[q].power);
      j.overlap(p, q) = o.real();
      j.max_imag_overlap = std::max(j.max_imag_overlap, std::abs(o.imag()));
    }
  for (int p = 0; p < nl; ++p) j.truncated_left.push_back(1.0 - j.overlap.row(p).squaredNorm());
  for (int q = 0; q < nr; ++q) j.truncated_right.push_back(1.0 - j.overlap.col(q).squaredNorm());

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j.overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  const auto& sv = svd.singularValues();
  const int m = static_cast<int>(sv.size());

  // Channels without a partner (index >= m) reflect fully.
  Eigen::VectorXd rl = Eigen::VectorXd::Ones(nl), rr = Eigen::VectorXd::Ones(nr);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(nr, nl);
  for (int k = 0; k < m; ++k) {
    const double s2 = sv(k) * sv(k);
    rl(k) = rr(k) = (1.0 - s2) / (1.0 + s2);
    t(k, k) = 2.0 * sv(k) / (1.0 + s2);
  }
  Eigen::MatrixXd s(nl + nr, nl + nr);
  s.topLeftCorner(nl, nl) = u * rl.asDiagonal() * u.transpose();
  s.bottomRightCorner(nr, nr) = -(v * rr.asDiagonal() * v.transpose());
  s.bottomLeftCorner(nr, nl) = v * t * u.transpose();
  s.topRightCorner(nl, nr) = s.bottomLeftCorner(nr, nl).transpose();
  j.s = s.cast<cplx>();
  return j;
}

Junction junction_scattering(const CrossSection& left, const CrossSection& right, double f,
                             int n_modes, const SolverSettings& s) {
  if (n_modes < 1) throw Error(ErrorCode::InvalidArgument, "n_modes must be >= 1");
  const auto secs = solve_sections({left, right}, f, n_modes, s);
  return junction_from_modes(*secs[0], *secs[1]);
}

TaperResult cascade(const TaperProfile& profile, const FrequencyGrid& fg, int n_modes,
                    const SolverSettings& s, int workers) {
  if (n_modes < 1) throw Error(ErrorCode::InvalidArgument, "n_modes must be >= 1");
  const auto secs = profile.sections();
  std::vector<Eigen::MatrixXcd> full(fg.size());
  std::vector<Eigen::MatrixXcd> fund(fg.size());
  std::vector<int> n_in(fg.size());
  std::vector<double> trunc(fg.size());

  parallel_for(fg.size(), workers, [&](std::size_t k) {
    const double f = fg[k];
    const auto modes = solve_sections(secs, f, n_modes, s);
    double worst = 0.0;
    auto junction = [&](std::size_t i) {
      const Junction j = junction_from_modes(*modes[i], *modes[i + 1]);
      for (double v : j.truncated_left) worst = std::max(worst, v);
      for (double v : j.truncated_right) worst = std::max(worst, v);
      return j.s;
    };
    const int nin = static_cast<int>(modes.front()->size());
    Eigen::MatrixXcd acc = junction(0);
    for (std::size_t i = 1; i + 1 < secs.size(); ++i) {
      acc = star_product(acc, nin, propagation(*modes[i], secs[i], profile.segments()[i - 1].length, f));
      acc = star_product(acc, nin, junction(i));
    }
    Eigen::MatrixXcd f2(2, 2);
    f2 << acc(0, 0), acc(0, nin), acc(nin, 0), acc(nin, nin);
    full[k] = std::move(acc);
    fund[k] = f2;
    n_in[k] = nin;
    trunc[k] = worst;
  });
  return {SParameterSet(fg, std::move(fund)), std::move(full), std::move(n_in), std::move(trunc)};
}

double adiabaticity(const TaperProfile& profile, double f, const SolverSettings& s) {
  const auto secs = profile.sections();
  const auto modes = solve_sections(secs, f, 1, s);
  std::vector<double> len{0.0};
  for (const auto& sg : profile.segments()) len.push_back(sg.length);
  len.push_back(0.0);

  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < secs.size(); ++i) {
    if (modes[i] == modes[i + 1]) continue;
    const auto& l = modes[i]->front();
    const auto& r = modes[i + 1]->front();
    const double o = std::abs(overlap(l, r)) / std::sqrt(l.power * r.power);
    const double mismatch = std::max(0.0, 1.0 - o * o);
    const double span = 0.5 * (len[i] + len[i + 1]);
    if (mismatch == 0.0) continue;
    worst = std::max(worst, span > 0.0 ? mismatch / span : INFINITY);
  }
  return worst;
}

SParameterSet attenuator(const FrequencyGrid& fg, const std::vector<double>& loss_db) {
  if (loss_db.size() != fg.size())
    throw Error(ErrorCode::InvalidArgument, "one loss value per frequency required");
  std::vector<Eigen::MatrixXcd> mats;
  for (double l : loss_db) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = m(1, 0) = std::pow(10.0, -std::max(0.0, l) / 20.0);
    mats.push_back(m);
  }
  return {fg, std::move(mats)};
}

SParameterSet end_to_end_link(const TaperProfile& taper_in, double straight_length,
                              const std::vector<BendSpec>& bends, const TaperProfile& taper_out,
                              const FrequencyGrid& fg, double core_tan_delta,
                              const SolverSettings& s, int n_modes, int workers) {
  if (!(lossless(taper_in.out()) == lossless(taper_out.in())))
    throw Error(ErrorCode::InvalidArgument, "tapers must meet the same channel cross-section");
  const auto tin = taper_in.with_tan_delta(core_tan_delta);
  const auto tout = taper_out.with_tan_delta(core_tan_delta);
  const CrossSection channel = tin.out();

  ChannelSettings cs_set{s, workers};
  SParameterSet link = cascade(tin, fg, n_modes, s, workers).fundamental;
  link = drw::cascade(link, straight_channel(straight_length, channel, fg, cs_set));
  for (const auto& b : bends) {
    b.validate(channel);
    std::vector<double> loss(fg.size());
    parallel_for(fg.size(), workers,
                 [&](std::size_t k) { loss[k] = bend_loss(channel, b, fg[k], s).total_db; });
    link = drw::cascade(link, attenuator(fg, loss));
  }
  return drw::cascade(link, cascade(tout, fg, n_modes, s, workers).fundamental);
}

}  // namespace drw
