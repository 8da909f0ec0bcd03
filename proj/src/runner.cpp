#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>

#include <json.hpp>

#include "drw/bend.hpp"
#include "drw/channel.hpp"
#include "drw/constants.hpp"
#include "drw/crosstalk.hpp"
#include "drw/error.hpp"
#include "drw/export.hpp"
#include "drw/format.hpp"
#include "drw/parallel.hpp"
#include "drw/scenario.hpp"
#include "drw/taper.hpp"

#ifndef DRW_VERSION
#define DRW_VERSION "0.0.0"
#endif

namespace drw {

const char* tool_version() { return DRW_VERSION; }

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string fmt(double v) { return format_double(v); }

class Run {
 public:
  Run(const ScenarioConfig& c, const RunOptions& o)
      : c_(c), o_(o), dir_(o.out_dir ? *o.out_dir : fs::path(c.output_directory)) {
    m_.config_hash = config_hash(c);
    m_.tool_version = tool_version();
    m_.out_dir = dir_;
  }

  // Runs `fn` as a named stage; errors come back with the stage attached.
  template <class Fn>
  void stage(const std::string& name, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const Error& e) {
      std::string msg = e.what();
      const std::string prefix = std::string(to_string(e.code())) + ": ";
      if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
      throw Error(e.code(), "stage '" + name + "': " + msg);
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m_.timings.push_back({name, dt});
  }

  void write(const std::string& rel, const std::string& text) {
    write_text_file(dir_ / rel, text);
    m_.artifacts.push_back({rel, fs::file_size(dir_ / rel)});
  }

  void touchstone(const std::string& rel, const SParameterSet& sp) {
    write(rel, touchstone_text(sp, {"drwsim " + m_.tool_version, "run " + m_.config_hash,
                                    "scenario " + std::string(to_string(c_.scenario))}));
  }

  void progress(const std::string& line) {
    if (o_.quiet) return;
    std::lock_guard<std::mutex> lock(io_);
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
  }

  RunManifest finish() {
    json settings = {{"cells_per_wavelength", c_.cells_per_wavelength},
                     {"n_modes", c_.n_modes},
                     {"theta", c_.theta},
                     {"shift_fraction", SolverSettings{}.shift_fraction},
                     {"extra_eigenpairs", SolverSettings{}.extra_eigenpairs},
                     {"workers", o_.workers}};
    m_.settings_json = settings.dump();
    write_text_file(dir_ / "manifest.json", m_.to_json(o_.seed_metadata));
    return m_;
  }

  const ScenarioConfig& c_;
  const RunOptions& o_;
  fs::path dir_;
  RunManifest m_;
  std::mutex io_;
};

std::string tag(const Quantity& q) { return q.text(); }

void run_modes(Run& r) {
  const auto& c = r.c_;
  const auto cs = c.cross_section();
  const auto freqs = c.sweep_si();
  std::vector<std::vector<ModeSolution>> sols(freqs.size());
  r.stage("solve", [&] {
    parallel_for(freqs.size(), r.o_.workers, [&](std::size_t k) {
      sols[k] = solve_modes(cs.with_tan_delta(0.0), freqs[k], c.n_modes, c.solver());
      r.progress("[modes " + tag(c.sweep_values[k]) + "] " + std::to_string(sols[k].size()) +
                 " guided modes");
    });
  });
  r.stage("export", [&] {
    for (std::size_t k = 0; k < freqs.size(); ++k) {
      std::string csv = "mode,neff,beta_rad_per_m,label,rho_x,sigma_x,ez_fraction,hz_fraction,alpha_db_per_mm\n";
      for (std::size_t m = 0; m < sols[k].size(); ++m) {
        const auto& ms = sols[k][m];
        const auto& mc = ms.mode_class;
        csv += std::to_string(m) + "," + fmt(ms.neff) + "," + fmt(ms.beta.real()) + "," +
               to_string(mc.label) + "," + fmt(mc.rho_x) + "," + fmt(mc.sigma_x) + "," +
               fmt(mc.ez_fraction) + "," + fmt(mc.hz_fraction) + "," +
               fmt(kNeperToDb * 1e-3 * dielectric_attenuation(ms, cs, freqs[k])) + "\n";
        r.write("field_" + tag(c.sweep_values[k]) + "_mode" + std::to_string(m) + ".csv",
                field_csv_text(ms));
      }
      r.write("modes_" + tag(c.sweep_values[k]) + ".csv", csv);
    }
  });
}

struct Fundamentals {
  std::vector<double> beta, alpha;
};

Fundamentals solve_fundamentals(Run& r, const CrossSection& cs, const FrequencyGrid& band) {
  Fundamentals f{std::vector<double>(band.size()), std::vector<double>(band.size())};
  parallel_for(band.size(), r.o_.workers, [&](std::size_t k) {
    const auto ms = fundamental_mode(cs, band[k], r.c_.solver());
    f.beta[k] = ms.beta.real();
    f.alpha[k] = dielectric_attenuation(ms, cs, band[k]);
    r.progress("[fundamental " + fmt(band[k] * 1e-9) + " GHz] neff " + fmt(ms.neff));
  });
  return f;
}

void run_straight(Run& r) {
  const auto& c = r.c_;
  const auto cs = c.cross_section();
  const auto band = c.band();
  Fundamentals fu;
  r.stage("solve", [&] { fu = solve_fundamentals(r, cs, band); });
  r.stage("export", [&] {
    std::string csv = "length_m,f_GHz,s21_db,s21_phase_rad,alpha_db_per_mm,neff\n";
    for (std::size_t q = 0; q < c.sweep_values.size(); ++q) {
      const double L = c.sweep_values[q].si();
      const auto sp = straight_channel(L, band, fu.beta, fu.alpha);
      r.touchstone("straight_" + tag(c.sweep_values[q]) + ".s2p", sp);
      for (std::size_t k = 0; k < band.size(); ++k)
        csv += fmt(L) + "," + fmt(band[k] * 1e-9) + "," + fmt(to_db(sp.s(2, 1, k))) + "," +
               fmt(std::arg(sp.s(2, 1, k))) + "," + fmt(kNeperToDb * 1e-3 * fu.alpha[k]) + "," +
               fmt(fu.beta[k] / wavenumber(band[k])) + "\n";
    }
    r.write("straight.csv", csv);
  });
  if (band.size() >= 5) {
    r.stage("dispersion", [&] {
      const auto d = dispersion_profile(cs, band, 0, {c.solver(), r.o_.workers});
      std::string csv = "f_GHz,beta_rad_per_m,group_index,beta2_s2_per_m,one_sided\n";
      for (std::size_t k = 0; k < band.size(); ++k)
        csv += fmt(band[k] * 1e-9) + "," + fmt(d.beta[k]) + "," + fmt(d.group_index[k]) + "," +
               fmt(d.beta2[k]) + "," + (d.one_sided[k] ? "1" : "0") + "\n";
      r.write("dispersion.csv", csv);
    });
  }
}

void run_loss_table(Run& r) {
  const auto& c = r.c_;
  const auto band = c.band();
  LossTable t;
  r.stage("solve", [&] {
    t = loss_table(c.cross_section(), band.values(), c.sweep_si(), {c.solver(), r.o_.workers});
  });
  r.stage("export", [&] {
    std::string csv = "tan_delta";
    for (double f : t.frequencies) csv += "," + fmt(f * 1e-9) + "GHz";
    csv += "\n";
    for (std::size_t i = 0; i < t.tan_deltas.size(); ++i) {
      csv += fmt(t.tan_deltas[i]);
      for (double v : t.db_per_mm[i]) csv += "," + fmt(v);
      csv += "\n";
    }
    r.write("loss_table.csv", csv);
  });
}

void run_bend_sweep(Run& r) {
  const auto& c = r.c_;
  const auto cs = c.cross_section();
  const auto band = c.band();
  const auto& radii = c.sweep_values;
  const std::size_t nr = radii.size(), nf = band.size();
  std::vector<BendLoss> loss(nr * nf);
  std::vector<ModeConversion> conv(nr * nf);
  std::vector<bool> valid(nr, true);
  for (std::size_t i = 0; i < nr; ++i) {
    try {
      BendSpec{radii[i].si(), c.bend_angle_deg * kPi / 180.0, c.bend_plane}.validate(cs);
    } catch (const Error&) {
      valid[i] = false;
      r.progress("[bend " + tag(radii[i]) + "] skipped: radius inside the guide");
    }
  }
  r.stage("solve", [&] {
    parallel_for(nr * nf, r.o_.workers, [&](std::size_t p) {
      const std::size_t i = p / nf, k = p % nf;
      if (!valid[i]) return;
      const BendSpec b{radii[i].si(), c.bend_angle_deg * kPi / 180.0, c.bend_plane};
      loss[p] = bend_loss(cs, b, band[k], c.solver());
      conv[p] = bend_mode_conversion(cs, b, band[k], std::max(2, c.n_modes), c.solver());
      r.progress("[bend " + tag(radii[i]) + " " + fmt(band[k] * 1e-9) + " GHz] " +
                 fmt(loss[p].total_db) + " dB");
    });
  });
  r.stage("export", [&] {
    std::string csv = "radius_um";
    for (double f : band.values()) csv += "," + fmt(f * 1e-9) + "GHz";
    csv += ",status\n";
    std::string cc = "radius_um,f_GHz,fundamental,into_higher,unaccounted,junction_db,differential_db\n";
    for (std::size_t i = 0; i < nr; ++i) {
      const std::string rad = fmt(radii[i].si() * 1e6);
      csv += rad;
      for (std::size_t k = 0; k < nf; ++k) {
        const auto& l = loss[i * nf + k];
        csv += "," + (valid[i] ? fmt(l.total_db) : std::string("nan"));
        if (!valid[i]) continue;
        const auto& m = conv[i * nf + k];
        cc += rad + "," + fmt(band[k] * 1e-9) + "," + fmt(m.fractions.front()) + "," +
              fmt(m.into_higher) + "," + fmt(m.unaccounted) + "," + fmt(l.junction_db) + "," +
              fmt(l.differential_db) + "\n";
      }
      csv += valid[i] ? ",ok\n" : ",invalid-radius\n";
    }
    r.write("bend_loss.csv", csv);
    r.write("bend_conversion.csv", cc);
  });
}

void run_crosstalk(Run& r) {
  const auto& c = r.c_;
  const auto cs = c.cross_section();
  const auto band = c.band();
  const auto& ds = c.sweep_values;
  const std::size_t nd = ds.size(), nf = band.size();
  std::vector<CrosstalkPoint> pts(nd * nf);
  r.stage("solve", [&] {
    parallel_for(nd * nf, r.o_.workers, [&](std::size_t p) {
      const std::size_t i = p / nf, k = p % nf;
      const ParallelPair pair{cs, ds[i].si(), c.length.si()};
      pts[p] = crosstalk_sweep(pair, {band[k]}, c.solver(), 1).front();
      r.progress("[crosstalk " + tag(ds[i]) + " " + fmt(band[k] * 1e-9) + " GHz] FEXT " +
                 fmt(pts[p].fext_db) + " dB");
    });
  });
  r.stage("export", [&] {
    std::string csv = "d_um,f_GHz,kappa_per_m,fext_db,through_db,next_bound_db\n";
    for (std::size_t p = 0; p < pts.size(); ++p) {
      const auto& q = pts[p];
      csv += fmt(ds[p / nf].si() * 1e6) + "," + fmt(q.f * 1e-9) + "," + fmt(q.kappa) + "," +
             fmt(q.fext_db) + "," + fmt(q.through_db) + "," + fmt(q.next_bound_db) + "\n";
    }
    r.write("crosstalk.csv", csv);
  });
}

CrossSection launch_of(const ScenarioConfig& c, const CrossSection& cs) {
  const auto d = default_launch(cs);
  return cs.with_dims(c.launch_a ? c.launch_a->si() : d.a(), c.launch_b ? c.launch_b->si() : d.b());
}

void run_taper(Run& r) {
  const auto& c = r.c_;
  const auto cs = c.cross_section();
  const auto launch = launch_of(c, cs);
  const auto band = c.band();
  std::vector<TaperResult> res;
  r.stage("solve", [&] {
    for (const auto& q : c.sweep_values) {
      const auto p = make_linear_taper(launch, cs, q.si(), c.taper_segments);
      res.push_back(cascade(p, band, c.taper_modes, c.solver(), r.o_.workers));
      r.progress("[taper " + tag(q) + "] done");
    }
  });
  r.stage("export", [&] {
    std::string csv = "taper_length_m,f_GHz,s11_db,s21_db,max_truncated\n";
    for (std::size_t i = 0; i < res.size(); ++i) {
      const auto& sp = res[i].fundamental;
      r.touchstone("taper_" + tag(c.sweep_values[i]) + ".s2p", sp);
      for (std::size_t k = 0; k < band.size(); ++k)
        csv += fmt(c.sweep_values[i].si()) + "," + fmt(band[k] * 1e-9) + "," +
               fmt(to_db(sp.s(1, 1, k))) + "," + fmt(to_db(sp.s(2, 1, k))) + "," +
               fmt(res[i].max_truncated[k]) + "\n";
    }
    r.write("taper.csv", csv);
  });
}

void run_link(Run& r) {
  const auto& c = r.c_;
  const auto cs = c.cross_section();
  const auto launch = launch_of(c, cs);
  const auto band = c.band();
  SParameterSet tin = SParameterSet::identity(band), tout = tin;
  Fundamentals fu;
  std::vector<SParameterSet> bends;
  r.stage("tapers", [&] {
    tin = cascade(make_linear_taper(launch, cs, c.taper_length.si(), c.taper_segments), band,
                  c.taper_modes, c.solver(), r.o_.workers).fundamental;
    tout = cascade(make_linear_taper(cs, launch, c.taper_length.si(), c.taper_segments), band,
                   c.taper_modes, c.solver(), r.o_.workers).fundamental;
  });
  r.stage("channel", [&] { fu = solve_fundamentals(r, cs, band); });
  r.stage("bends", [&] {
    for (const auto& q : c.link_bend_radii) {
      const BendSpec b{q.si(), c.bend_angle_deg * kPi / 180.0, c.bend_plane};
      b.validate(cs);
      std::vector<double> loss(band.size());
      parallel_for(band.size(), r.o_.workers,
                   [&](std::size_t k) { loss[k] = bend_loss(cs, b, band[k], c.solver()).total_db; });
      bends.push_back(attenuator(band, loss));
    }
  });
  r.stage("export", [&] {
    std::string csv = "length_m,f_GHz,s11_db,s21_db\n";
    for (const auto& q : c.sweep_values) {
      SParameterSet link = cascade(tin, straight_channel(q.si(), band, fu.beta, fu.alpha));
      for (const auto& b : bends) link = cascade(link, b);
      link = cascade(link, tout);
      r.touchstone("link_" + tag(q) + ".s2p", link);
      for (std::size_t k = 0; k < band.size(); ++k)
        csv += fmt(q.si()) + "," + fmt(band[k] * 1e-9) + "," + fmt(to_db(link.s(1, 1, k))) + "," +
               fmt(to_db(link.s(2, 1, k))) + "\n";
    }
    r.write("link.csv", csv);
  });
}

}  // namespace

std::string RunManifest::to_json(bool seed_metadata) const {
  json j;
  j["tool_version"] = tool_version;
  j["config_hash"] = config_hash;
  j["settings"] = json::parse(settings_json.empty() ? "{}" : settings_json);
  json arts = json::array();
  for (const auto& a : artifacts) arts.push_back({{"path", a.path}, {"bytes", a.bytes}});
  j["artifacts"] = arts;
  json tim = json::array();
  for (const auto& t : timings) tim.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  j["timings"] = tim;
  if (seed_metadata)
    j["seed_metadata"] = {{"eigensolver_start_vector", "mt19937_64, seed 0x5eed"},
                          {"artifacts_depend_on_workers", false}};
  return j.dump(2) + "\n";
}

RunManifest run_scenario(const ScenarioConfig& c, const RunOptions& o) {
  Run r(c, o);
  r.stage("config", [&] { r.write("config.json", serialize_config(c)); });
  switch (c.scenario) {
    case ScenarioKind::Modes: run_modes(r); break;
    case ScenarioKind::Straight: run_straight(r); break;
    case ScenarioKind::LossTable: run_loss_table(r); break;
    case ScenarioKind::BendSweep: run_bend_sweep(r); break;
    case ScenarioKind::CrosstalkSweep: run_crosstalk(r); break;
    case ScenarioKind::Taper: run_taper(r); break;
    case ScenarioKind::Link: run_link(r); break;
  }
  return r.finish();
}

}  // namespace drw
