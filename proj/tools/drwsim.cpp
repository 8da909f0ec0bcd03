// drwsim: scenario runner for rectangular dielectric rod waveguide channels.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drw/error.hpp"
#include "drw/export.hpp"
#include "drw/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

bool is_config_error(drw::ErrorCode c) {
  using drw::ErrorCode;
  return c == ErrorCode::UnknownKey || c == ErrorCode::MissingUnit ||
         c == ErrorCode::UnsupportedSchemaVersion || c == ErrorCode::InvalidArgument ||
         c == ErrorCode::NotFound;
}

// Values for the sweep shorthand when none are given on the command line.
nlohmann::json default_values(drw::ScenarioKind k) {
  using drw::ScenarioKind;
  switch (k) {
    case ScenarioKind::Modes: return {"110GHz"};
    case ScenarioKind::Straight: return {"3cm"};
    case ScenarioKind::LossTable: return {0.0, 0.0005, 0.002};
    case ScenarioKind::BendSweep: return {"25um", "50um", "100um", "200um", "400um", "1000um"};
    case ScenarioKind::CrosstalkSweep: return {"10um", "20um", "40um", "60um", "80um", "100um"};
    case ScenarioKind::Taper: return {"2mm"};
    case ScenarioKind::Link: return {"3cm"};
  }
  return {};
}

// Numbers stay numbers (loss tangents); anything else is a unit string.
nlohmann::json value_json(const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  return v;
}

int run(const drw::ScenarioConfig& cfg, const drw::RunOptions& opts) {
  try {
    const auto m = drw::run_scenario(cfg, opts);
    if (!opts.quiet)
      std::printf("wrote %zu artifacts to %s (run %s)\n", m.artifacts.size(),
                  m.out_dir.string().c_str(), m.config_hash.c_str());
    return 0;
  } catch (const drw::Error& e) {
    std::fprintf(stderr, "drwsim: %s\n", e.what());
    return is_config_error(e.code()) ? kExitConfig : kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "drwsim: %s\n", e.what());
    return kExitSolver;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mode, loss, bend, crosstalk and taper analysis of dielectric rod waveguides"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(drw::tool_version()));

  drw::RunOptions opts;
  std::string out_dir;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario described by a JSON config");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "Scenario config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides the config)");

  auto* modes_cmd = app.add_subcommand("modes", "Solve guided modes of one cross-section");
  std::string a = "160um", b = "80um", freq = "110GHz", core = "rod-core-lossless",
              clad = "rod-clad";
  int n_modes = 3;
  modes_cmd->add_option("--a", a, "Core width with unit")->capture_default_str();
  modes_cmd->add_option("--b", b, "Core height with unit")->capture_default_str();
  modes_cmd->add_option("--f", freq, "Frequency in GHz, e.g. 110GHz")->capture_default_str();
  modes_cmd->add_option("--n", n_modes, "Number of modes")->capture_default_str();
  modes_cmd->add_option("--core", core, "Core material (catalog name)")->capture_default_str();
  modes_cmd->add_option("--clad", clad, "Cladding material (catalog name)")->capture_default_str();
  modes_cmd->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario on the default channel");
  std::string scenario;
  std::vector<std::string> values;
  std::string band_start = "80GHz", band_stop = "160GHz", length;
  int points = 17;
  double tan_delta = -1.0;
  sweep_cmd->add_option("scenario", scenario,
                        "modes, straight, loss-table, bend-sweep, crosstalk-sweep, taper or link")
      ->required();
  sweep_cmd->add_option("--values", values, "Sweep values with units");
  sweep_cmd->add_option("--band-start", band_start)->capture_default_str();
  sweep_cmd->add_option("--band-stop", band_stop)->capture_default_str();
  sweep_cmd->add_option("--points", points)->capture_default_str();
  sweep_cmd->add_option("--length", length, "Channel or coupled length with unit");
  sweep_cmd->add_option("--tan-delta", tan_delta, "Core loss tangent");
  sweep_cmd->add_option("--out", out_dir, "Output directory")->required();

  for (auto* cmd : {run_cmd, modes_cmd, sweep_cmd}) {
    cmd->add_option("--workers", opts.workers, "Worker threads")->capture_default_str();
    cmd->add_flag("--seed-metadata", opts.seed_metadata,
                  "Record solver seed and determinism details in the manifest");
    cmd->add_flag("--quiet", opts.quiet, "No progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  if (opts.workers < 1) opts.workers = 1;
  if (!out_dir.empty()) opts.out_dir = out_dir;

  drw::ScenarioConfig cfg;
  try {
    if (run_cmd->parsed()) {
      cfg = drw::parse_config(drw::read_text_file(config_path));
    } else if (modes_cmd->parsed()) {
      nlohmann::json j = {{"schema_version", drw::kSchemaVersion},
                          {"scenario", "modes"},
                          {"geometry", {{"a", a}, {"b", b}}},
                          {"materials", {{"core", core}, {"clad", clad}}},
                          {"sweep", {{"variable", "frequency"}, {"values", {freq}}}},
                          {"solver", {{"n_modes", n_modes}}}};
      cfg = drw::parse_config(j.dump());
    } else {
      const auto kind = drw::scenario_from_string(scenario);
      nlohmann::json vals = nlohmann::json::array();
      for (const auto& v : values) vals.push_back(value_json(v));
      if (vals.empty()) vals = default_values(kind);
      nlohmann::json j = {{"schema_version", drw::kSchemaVersion},
                          {"scenario", scenario},
                          {"band", {{"start", band_start}, {"stop", band_stop}, {"points", points}}},
                          {"sweep", {{"variable", drw::sweep_variable_for(kind)}, {"values", vals}}}};
      nlohmann::json channel = nlohmann::json::object();
      if (!length.empty())
        channel["length"] = length;
      else if (kind == drw::ScenarioKind::CrosstalkSweep)
        channel["length"] = "1mm";
      if (tan_delta >= 0.0)
        channel["tan_delta"] = tan_delta;
      else if (kind == drw::ScenarioKind::BendSweep || kind == drw::ScenarioKind::Straight)
        channel["tan_delta"] = 0.002;
      if (!channel.empty()) j["channel"] = channel;
      cfg = drw::parse_config(j.dump());
    }
  } catch (const drw::Error& e) {
    std::fprintf(stderr, "drwsim: %s\n", e.what());
    return kExitConfig;
  }
  return run(cfg, opts);
}
