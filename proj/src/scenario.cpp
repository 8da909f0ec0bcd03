#include "drw/scenario.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include <json.hpp>

#include "drw/constants.hpp"
#include "drw/error.hpp"
#include "drw/format.hpp"

namespace drw {

using json = nlohmann::ordered_json;

namespace {

struct KindName {
  ScenarioKind kind;
  const char* name;
  const char* sweep;
};

constexpr KindName kKinds[] = {
    {ScenarioKind::Modes, "modes", "frequency"},
    {ScenarioKind::Straight, "straight", "length"},
    {ScenarioKind::LossTable, "loss-table", "tan_delta"},
    {ScenarioKind::BendSweep, "bend-sweep", "radius"},
    {ScenarioKind::CrosstalkSweep, "crosstalk-sweep", "separation"},
    {ScenarioKind::Taper, "taper", "taper_length"},
    {ScenarioKind::Link, "link", "length"},
};

enum class Dim { Length, Frequency, None };

Dim sweep_dim(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Modes: return Dim::Frequency;
    case ScenarioKind::LossTable: return Dim::None;
    default: return Dim::Length;
  }
}

double unit_scale(const std::string& u) {
  if (u == "um") return 1e-6;
  if (u == "mm") return 1e-3;
  if (u == "cm") return 1e-2;
  if (u == "m") return 1.0;
  if (u == "GHz") return 1e9;
  if (u.empty()) return 1.0;
  throw Error(ErrorCode::InvalidArgument, "unknown unit '" + u + "'");
}

// Walks one JSON object, handing out keys and remembering which were used.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw Error(ErrorCode::InvalidArgument, "expected an object at " + where());
  }

  bool has(const std::string& k) {
    allowed_.insert(k);
    return j_.contains(k);
  }
  const json& get(const std::string& k) {
    if (!has(k)) throw Error(ErrorCode::InvalidArgument, "missing key at " + key_path(k));
    return j_.at(k);
  }
  std::string key_path(const std::string& k) const { return path_ + "/" + k; }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!allowed_.count(k))
        throw Error(ErrorCode::UnknownKey, "unknown key at " + key_path(k));
  }

 private:
  std::string where() const { return path_.empty() ? "/" : path_; }
  const json& j_;
  std::string path_;
  std::set<std::string> allowed_;
};

Quantity parse_quantity(const json& v, const std::string& path, Dim dim) {
  const char* need = dim == Dim::Frequency ? "a frequency unit (GHz)" : "a length unit (um, mm, cm)";
  if (dim == Dim::None) {
    if (!v.is_number()) throw Error(ErrorCode::InvalidArgument, "expected a number at " + path);
    return {v.get<double>(), ""};
  }
  if (v.is_number()) throw Error(ErrorCode::MissingUnit, "value at " + path + " needs " + need);
  if (!v.is_string()) throw Error(ErrorCode::InvalidArgument, "expected a string at " + path);
  const std::string s = v.get<std::string>();
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr == s.data())
    throw Error(ErrorCode::InvalidArgument, "bad number '" + s + "' at " + path);
  std::string unit(r.ptr, s.data() + s.size());
  while (!unit.empty() && unit.front() == ' ') unit.erase(unit.begin());
  if (unit.empty()) throw Error(ErrorCode::MissingUnit, "value at " + path + " needs " + need);
  const bool ok = dim == Dim::Frequency ? unit == "GHz"
                                        : (unit == "um" || unit == "mm" || unit == "cm" || unit == "m");
  if (!ok)
    throw Error(ErrorCode::MissingUnit, "value '" + s + "' at " + path + " needs " + need);
  return {x, unit};
}

json quantity_json(const Quantity& q) {
  if (q.unit.empty()) return q.value;
  return q.text();
}

template <class T>
T get_as(const json& v, const std::string& path) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidArgument, "wrong type at " + path);
  }
}

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw Error(ErrorCode::InvalidArgument, "expected an integer at " + path);
  return v.get<int>();
}

MaterialSpec parse_material(const json& v, const std::string& path) {
  MaterialSpec m;
  if (v.is_string()) {
    m.catalog = v.get<std::string>();
    if (!material_catalog().contains(m.catalog))
      throw Error(ErrorCode::NotFound, "unknown material '" + m.catalog + "' at " + path);
    return m;
  }
  Reader r(v, path);
  m.name = get_as<std::string>(r.get("name"), r.key_path("name"));
  m.eps_r = get_as<double>(r.get("eps_r"), r.key_path("eps_r"));
  if (r.has("tan_delta")) m.tan_delta = get_as<double>(r.get("tan_delta"), r.key_path("tan_delta"));
  r.finish();
  m.resolve();  // validates
  return m;
}

json material_json(const MaterialSpec& m) {
  if (!m.catalog.empty()) return m.catalog;
  json j;
  j["name"] = m.name;
  j["eps_r"] = m.eps_r;
  j["tan_delta"] = m.tan_delta;
  return j;
}

}  // namespace

const char* to_string(ScenarioKind k) {
  for (const auto& e : kKinds)
    if (e.kind == k) return e.name;
  return "?";
}

ScenarioKind scenario_from_string(const std::string& s) {
  for (const auto& e : kKinds)
    if (s == e.name) return e.kind;
  throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + s + "'");
}

const char* sweep_variable_for(ScenarioKind k) {
  for (const auto& e : kKinds)
    if (e.kind == k) return e.sweep;
  return "?";
}

double Quantity::si() const { return value * unit_scale(unit); }

std::string Quantity::text() const { return format_double(value) + unit; }

Material MaterialSpec::resolve() const {
  if (!catalog.empty()) return material_catalog().lookup(catalog);
  return Material(name, eps_r, tan_delta);
}

CrossSection ScenarioConfig::cross_section() const {
  const Material c = core.resolve();
  return CrossSection(a.si(), b.si(), tan_delta > 0.0 ? c.with_tan_delta(tan_delta) : c,
                      clad.resolve());
}

FrequencyGrid ScenarioConfig::band() const {
  if (band_points == 1) return FrequencyGrid({band_start.si()});
  return FrequencyGrid::linspace(band_start.si(), band_stop.si(), band_points);
}

SolverSettings ScenarioConfig::solver() const {
  SolverSettings s;
  s.cells_per_wavelength = cells_per_wavelength;
  s.theta = theta;
  return s;
}

std::vector<double> ScenarioConfig::sweep_si() const {
  std::vector<double> v;
  for (const auto& q : sweep_values) v.push_back(q.si());
  return v;
}

ScenarioConfig parse_config(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::InvalidArgument, "empty configuration");
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("configuration is not valid JSON: ") + e.what());
  }
  ScenarioConfig c;
  Reader r(root, "");

  const int version = get_int(r.get("schema_version"), "/schema_version");
  if (version != kSchemaVersion)
    throw Error(ErrorCode::UnsupportedSchemaVersion,
                "schema_version " + std::to_string(version) + " at /schema_version (supported: " +
                    std::to_string(kSchemaVersion) + ")");
  c.schema_version = version;
  c.scenario = scenario_from_string(get_as<std::string>(r.get("scenario"), "/scenario"));

  if (r.has("geometry")) {
    Reader g(root.at("geometry"), "/geometry");
    if (g.has("a")) c.a = parse_quantity(g.get("a"), "/geometry/a", Dim::Length);
    if (g.has("b")) c.b = parse_quantity(g.get("b"), "/geometry/b", Dim::Length);
    g.finish();
  }
  if (r.has("materials")) {
    Reader m(root.at("materials"), "/materials");
    if (m.has("core")) c.core = parse_material(m.get("core"), "/materials/core");
    if (m.has("clad")) c.clad = parse_material(m.get("clad"), "/materials/clad");
    m.finish();
  }
  if (r.has("band")) {
    Reader b(root.at("band"), "/band");
    if (b.has("start")) c.band_start = parse_quantity(b.get("start"), "/band/start", Dim::Frequency);
    if (b.has("stop")) c.band_stop = parse_quantity(b.get("stop"), "/band/stop", Dim::Frequency);
    if (b.has("points")) c.band_points = get_int(b.get("points"), "/band/points");
    b.finish();
  }
  {
    Reader s(r.get("sweep"), "/sweep");
    c.sweep_variable = get_as<std::string>(s.get("variable"), "/sweep/variable");
    const std::string expected = sweep_variable_for(c.scenario);
    if (c.sweep_variable != expected)
      throw Error(ErrorCode::InvalidArgument, "scenario '" + std::string(to_string(c.scenario)) +
                                                  "' sweeps '" + expected + "', got '" +
                                                  c.sweep_variable + "' at /sweep/variable");
    const json& vals = s.get("values");
    if (!vals.is_array() || vals.empty())
      throw Error(ErrorCode::InvalidArgument, "expected a non-empty array at /sweep/values");
    for (std::size_t k = 0; k < vals.size(); ++k)
      c.sweep_values.push_back(
          parse_quantity(vals[k], "/sweep/values/" + std::to_string(k), sweep_dim(c.scenario)));
    s.finish();
  }
  if (r.has("solver")) {
    Reader s(root.at("solver"), "/solver");
    if (s.has("cells_per_wavelength"))
      c.cells_per_wavelength = get_int(s.get("cells_per_wavelength"), "/solver/cells_per_wavelength");
    if (s.has("n_modes")) c.n_modes = get_int(s.get("n_modes"), "/solver/n_modes");
    if (s.has("theta")) c.theta = get_as<double>(s.get("theta"), "/solver/theta");
    s.finish();
  }
  if (r.has("channel")) {
    Reader s(root.at("channel"), "/channel");
    if (s.has("length")) c.length = parse_quantity(s.get("length"), "/channel/length", Dim::Length);
    if (s.has("tan_delta")) c.tan_delta = get_as<double>(s.get("tan_delta"), "/channel/tan_delta");
    s.finish();
  }
  if (r.has("bend")) {
    Reader s(root.at("bend"), "/bend");
    if (s.has("plane")) {
      const auto p = get_as<std::string>(s.get("plane"), "/bend/plane");
      if (p != "a" && p != "b")
        throw Error(ErrorCode::InvalidArgument, "bend plane must be 'a' or 'b' at /bend/plane");
      c.bend_plane = p == "a" ? BendPlane::A : BendPlane::B;
    }
    if (s.has("angle_deg")) c.bend_angle_deg = get_as<double>(s.get("angle_deg"), "/bend/angle_deg");
    if (s.has("link_radii")) {
      const json& v = s.get("link_radii");
      if (!v.is_array()) throw Error(ErrorCode::InvalidArgument, "expected an array at /bend/link_radii");
      for (std::size_t k = 0; k < v.size(); ++k)
        c.link_bend_radii.push_back(
            parse_quantity(v[k], "/bend/link_radii/" + std::to_string(k), Dim::Length));
    }
    s.finish();
  }
  if (r.has("taper")) {
    Reader s(root.at("taper"), "/taper");
    if (s.has("length")) c.taper_length = parse_quantity(s.get("length"), "/taper/length", Dim::Length);
    if (s.has("segments")) c.taper_segments = get_int(s.get("segments"), "/taper/segments");
    if (s.has("n_modes")) c.taper_modes = get_int(s.get("n_modes"), "/taper/n_modes");
    if (s.has("launch_a")) c.launch_a = parse_quantity(s.get("launch_a"), "/taper/launch_a", Dim::Length);
    if (s.has("launch_b")) c.launch_b = parse_quantity(s.get("launch_b"), "/taper/launch_b", Dim::Length);
    s.finish();
  }
  if (r.has("output")) {
    Reader s(root.at("output"), "/output");
    if (s.has("directory"))
      c.output_directory = get_as<std::string>(s.get("directory"), "/output/directory");
    s.finish();
  }
  r.finish();

  if (c.band_points < 1) throw Error(ErrorCode::InvalidArgument, "band points must be >= 1 at /band/points");
  if (c.n_modes < 1) throw Error(ErrorCode::InvalidArgument, "n_modes must be >= 1 at /solver/n_modes");
  if (c.cells_per_wavelength < 20)
    throw Error(ErrorCode::InvalidArgument, "cells_per_wavelength must be >= 20 at /solver/cells_per_wavelength");
  c.cross_section();  // validates geometry and materials
  c.band();
  return c;
}

std::string serialize_config(const ScenarioConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["scenario"] = to_string(c.scenario);
  j["geometry"] = {{"a", c.a.text()}, {"b", c.b.text()}};
  j["materials"] = {{"core", material_json(c.core)}, {"clad", material_json(c.clad)}};
  j["band"] = {{"start", c.band_start.text()}, {"stop", c.band_stop.text()}, {"points", c.band_points}};
  json vals = json::array();
  for (const auto& q : c.sweep_values) vals.push_back(quantity_json(q));
  j["sweep"] = {{"variable", c.sweep_variable}, {"values", vals}};
  j["solver"] = {{"cells_per_wavelength", c.cells_per_wavelength},
                 {"n_modes", c.n_modes},
                 {"theta", c.theta}};
  j["channel"] = {{"length", c.length.text()}, {"tan_delta", c.tan_delta}};
  json radii = json::array();
  for (const auto& q : c.link_bend_radii) radii.push_back(q.text());
  j["bend"] = {{"plane", to_string(c.bend_plane)}, {"angle_deg", c.bend_angle_deg}, {"link_radii", radii}};
  json t = {{"length", c.taper_length.text()},
            {"segments", c.taper_segments},
            {"n_modes", c.taper_modes}};
  if (c.launch_a) t["launch_a"] = c.launch_a->text();
  if (c.launch_b) t["launch_b"] = c.launch_b->text();
  j["taper"] = t;
  j["output"] = {{"directory", c.output_directory}};
  return j.dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& c) { return fnv1a_hex(serialize_config(c)); }

}  // namespace drw
