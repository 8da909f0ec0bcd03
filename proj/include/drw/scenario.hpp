#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "drw/bend.hpp"
#include "drw/fdfd.hpp"

namespace drw {

inline constexpr int kSchemaVersion = 1;

enum class ScenarioKind { Modes, Straight, LossTable, BendSweep, CrosstalkSweep, Taper, Link };

const char* to_string(ScenarioKind k);
ScenarioKind scenario_from_string(const std::string& s);  // throws InvalidArgument

// A number with the unit it was written in; SI value derived on demand so a
// config serialises back to exactly the text value it was read from.
struct Quantity {
  double value = 0.0;
  std::string unit;  // "um", "mm", "cm", "m", "GHz", or "" for dimensionless

  double si() const;
  std::string text() const;
  bool operator==(const Quantity&) const = default;

  static Quantity length_um(double v) { return {v, "um"}; }
  static Quantity ghz(double v) { return {v, "GHz"}; }
};

struct MaterialSpec {
  std::string catalog;  // non-empty: builtin catalog name
  std::string name;     // inline definition otherwise
  double eps_r = 0.0;
  double tan_delta = 0.0;

  Material resolve() const;
  bool operator==(const MaterialSpec&) const = default;

  static MaterialSpec from_catalog(std::string name) {
    MaterialSpec m;
    m.catalog = std::move(name);
    return m;
  }
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  ScenarioKind scenario = ScenarioKind::Modes;
  Quantity a = Quantity::length_um(160);
  Quantity b = Quantity::length_um(80);
  MaterialSpec core = MaterialSpec::from_catalog("rod-core-lossless");
  MaterialSpec clad = MaterialSpec::from_catalog("rod-clad");
  Quantity band_start = Quantity::ghz(80);
  Quantity band_stop = Quantity::ghz(160);
  int band_points = 17;
  std::string sweep_variable;
  std::vector<Quantity> sweep_values;
  int cells_per_wavelength = 20;
  int n_modes = 3;
  double theta = 0.02;
  // Scenario parameters; each scenario reads the ones it needs.
  Quantity length = {3.0, "cm"};          // straight / link channel, crosstalk L
  double tan_delta = 0.0;                 // core loss tangent
  BendPlane bend_plane = BendPlane::A;
  double bend_angle_deg = 90.0;
  int taper_segments = 64;
  int taper_modes = 5;
  Quantity taper_length = {2.0, "mm"};
  std::optional<Quantity> launch_a;  // default: sqrt(3) x a
  std::optional<Quantity> launch_b;
  std::vector<Quantity> link_bend_radii;  // bends inserted in the link scenario
  std::string output_directory = "out";

  bool operator==(const ScenarioConfig&) const = default;

  CrossSection cross_section() const;  // with the core tan delta applied
  FrequencyGrid band() const;
  SolverSettings solver() const;
  std::vector<double> sweep_si() const;
};

// The sweep variable each scenario accepts.
const char* sweep_variable_for(ScenarioKind k);

// Strict: unknown keys -> UnknownKey, lengths without um/mm/cm (or m) and
// frequencies without GHz -> MissingUnit, other schema versions ->
// UnsupportedSchemaVersion. Messages carry the JSON path of the offending key.
ScenarioConfig parse_config(const std::string& text);
std::string serialize_config(const ScenarioConfig& c);

// Hash of the canonical serialisation.
std::string config_hash(const ScenarioConfig& c);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides output.directory
  int workers = 1;
  bool seed_metadata = false;  // add solver seed / determinism details to the manifest
  bool quiet = false;
};

struct Artifact {
  std::string path;  // relative to the output directory
  std::uintmax_t bytes = 0;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunManifest {
  std::string config_hash;
  std::string tool_version;
  std::filesystem::path out_dir;
  std::vector<Artifact> artifacts;
  std::vector<StageTiming> timings;
  std::string settings_json;

  std::string to_json(bool seed_metadata) const;
};

// Runs the pipeline for the scenario, writes artifacts and manifest.json.
// Failures are rethrown as Error with the stage name prefixed.
RunManifest run_scenario(const ScenarioConfig& c, const RunOptions& o = {});

const char* tool_version();

}  // namespace drw
