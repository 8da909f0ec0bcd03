#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "drw/error.hpp"
#include "drw/export.hpp"
#include "drw/scenario.hpp"

namespace drw {
namespace {

namespace fs = std::filesystem;

const char* kMinimal = R"({
  "schema_version": 1,
  "scenario": "loss-table",
  "band": {"start": "90GHz", "stop": "150GHz", "points": 3},
  "sweep": {"variable": "tan_delta", "values": [0.0, 0.002]}
})";

ErrorCode parse_code(const std::string& text, std::string* what = nullptr) {
  try {
    (void)parse_config(text);
  } catch (const Error& e) {
    if (what) *what = e.what();
    return e.code();
  }
  return ErrorCode::Solver;  // sentinel: accepted
}

std::string with(const std::string& key_path, nlohmann::json value) {
  auto j = nlohmann::json::parse(kMinimal);
  j[nlohmann::json::json_pointer(key_path)] = value;
  return j.dump();
}

std::string patched(const nlohmann::json& patch) {
  auto j = nlohmann::json::parse(kMinimal);
  j.merge_patch(patch);
  return j.dump();
}

fs::path scratch_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("drw_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Config, DefaultsAndUnits) {
  const auto c = parse_config(kMinimal);
  EXPECT_EQ(c.scenario, ScenarioKind::LossTable);
  EXPECT_DOUBLE_EQ(c.a.si(), 160e-6);
  EXPECT_DOUBLE_EQ(c.b.si(), 80e-6);
  EXPECT_EQ(c.band().size(), 3u);
  EXPECT_DOUBLE_EQ(c.band()[1], 120e9);
  EXPECT_EQ(c.sweep_si(), (std::vector<double>{0.0, 0.002}));
  EXPECT_DOUBLE_EQ(c.length.si(), 0.03);
  EXPECT_EQ(c.cross_section().core().eps_r(), 1000.0);
  const auto mm = parse_config(with("/geometry", {{"a", "0.16mm"}, {"b", "0.008cm"}}));
  EXPECT_NEAR(mm.a.si(), 160e-6, 1e-18);
  EXPECT_NEAR(mm.b.si(), 80e-6, 1e-18);
}

TEST(Config, StrictErrors) {
  std::string what;
  EXPECT_EQ(parse_code(with("/colour", "red"), &what), ErrorCode::UnknownKey);
  EXPECT_NE(what.find("/colour"), std::string::npos);
  EXPECT_EQ(parse_code(with("/geometry/c", "1um"), &what), ErrorCode::UnknownKey);
  EXPECT_NE(what.find("/geometry/c"), std::string::npos);
  EXPECT_EQ(parse_code(with("/geometry/a", 160), &what), ErrorCode::MissingUnit);
  EXPECT_NE(what.find("/geometry/a"), std::string::npos);
  EXPECT_EQ(parse_code(with("/geometry/a", "160"), nullptr), ErrorCode::MissingUnit);
  EXPECT_EQ(parse_code(with("/band/start", "90um"), nullptr), ErrorCode::MissingUnit);
  EXPECT_EQ(parse_code(with("/schema_version", 2), nullptr), ErrorCode::UnsupportedSchemaVersion);
  EXPECT_EQ(parse_code(with("/materials/core", "unobtainium"), nullptr), ErrorCode::NotFound);
  EXPECT_EQ(parse_code(with("/scenario", "teleport"), nullptr), ErrorCode::InvalidArgument);
  EXPECT_EQ(parse_code(with("/sweep/variable", "radius"), nullptr), ErrorCode::InvalidArgument);
  EXPECT_EQ(parse_code("{not json", nullptr), ErrorCode::InvalidArgument);
  EXPECT_EQ(parse_code(with("/materials/core", {{"name", "x"}, {"eps_r", 5.0}, {"tan_delta", 0.0}}),
                       nullptr),
            ErrorCode::InvalidArgument);  // core must exceed the cladding
}

TEST(Config, InlineMaterial) {
  const auto c = parse_config(
      with("/materials/core", {{"name", "alumina-ish"}, {"eps_r", 400.0}, {"tan_delta", 1e-4}}));
  EXPECT_EQ(c.cross_section().core().eps_r(), 400.0);
  EXPECT_EQ(c.cross_section().core().tan_delta(), 1e-4);
}

TEST(Config, SerialiseRoundTripAndHash) {
  auto c = parse_config(with("/taper", {{"length", "2.5mm"}, {"launch_a", "300um"}}));
  c.link_bend_radii = {Quantity::length_um(400)};
  const auto text = serialize_config(c);
  const auto back = parse_config(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(serialize_config(back), text);
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
  auto d = c;
  d.tan_delta = 0.001;
  EXPECT_NE(config_hash(d), config_hash(c));
}

TEST(Runner, LossTableArtifactsAndManifest) {
  auto c = parse_config(kMinimal);
  RunOptions o;
  o.out_dir = scratch_dir("loss");
  o.quiet = true;
  o.seed_metadata = true;
  const auto m = run_scenario(c, o);
  EXPECT_EQ(m.config_hash, config_hash(c));
  ASSERT_FALSE(m.artifacts.empty());
  for (const auto& a : m.artifacts) {
    ASSERT_TRUE(fs::exists(*o.out_dir / a.path)) << a.path;
    EXPECT_EQ(fs::file_size(*o.out_dir / a.path), a.bytes);
  }
  EXPECT_EQ(parse_config(read_text_file(*o.out_dir / "config.json")), c);
  const auto manifest = nlohmann::json::parse(read_text_file(*o.out_dir / "manifest.json"));
  EXPECT_EQ(manifest.at("config_hash"), m.config_hash);
  EXPECT_TRUE(manifest.dump().find("seed") != std::string::npos);
  const auto table = read_text_file(*o.out_dir / "loss_table.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
  fs::remove_all(*o.out_dir);
}

TEST(Runner, ArtifactsIndependentOfWorkers) {
  const auto c = parse_config(patched({{"scenario", "straight"},
                                      {"sweep", {{"variable", "length"}, {"values", {"1cm"}}}},
                                      {"channel", {{"tan_delta", 0.002}}}}));
  RunOptions one, three;
  one.out_dir = scratch_dir("w1");
  three.out_dir = scratch_dir("w3");
  one.quiet = three.quiet = true;
  three.workers = 3;
  const auto m1 = run_scenario(c, one);
  const auto m3 = run_scenario(c, three);
  ASSERT_EQ(m1.artifacts.size(), m3.artifacts.size());
  for (std::size_t i = 0; i < m1.artifacts.size(); ++i) {
    EXPECT_EQ(m1.artifacts[i].path, m3.artifacts[i].path);
    EXPECT_EQ(read_text_file(*one.out_dir / m1.artifacts[i].path),
              read_text_file(*three.out_dir / m3.artifacts[i].path));
  }
  const auto sp = read_touchstone(*one.out_dir / "straight_1.0cm.s2p");
  EXPECT_EQ(sp.size(), 3u);
  EXPECT_LT(sp.passivity_violation(), 1e-9);
  fs::remove_all(*one.out_dir);
  fs::remove_all(*three.out_dir);
}

TEST(Runner, BendSweepMarksInvalidRadii) {
  const auto c = parse_config(
      patched({{"scenario", "bend-sweep"},
               {"band", {{"points", 1}}},
               {"sweep", {{"variable", "radius"}, {"values", {"50um", "400um"}}}}}));
  RunOptions o;
  o.out_dir = scratch_dir("bend");
  o.quiet = true;
  run_scenario(c, o);
  const auto csv = read_text_file(*o.out_dir / "bend_loss.csv");
  EXPECT_NE(csv.find("invalid-radius"), std::string::npos);
  EXPECT_NE(csv.find(",ok"), std::string::npos);
  fs::remove_all(*o.out_dir);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DRWSIM_EXE) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli");
  fs::create_directories(dir);
  write_text_file(dir / "bad.json", with("/colour", "red"));
  write_text_file(dir / "unit.json", with("/geometry/a", 160));
  write_text_file(dir / "good.json", kMinimal);
  EXPECT_EQ(run_cli("--help"), 0);
  EXPECT_EQ(run_cli("run --config " + (dir / "bad.json").string() + " --out " + (dir / "o").string()), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "unit.json").string() + " --out " + (dir / "o").string()), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.json").string() + " --out " + (dir / "o").string()), 2);
  EXPECT_EQ(run_cli("run --bogus-flag"), 2);
  EXPECT_EQ(run_cli("run --quiet --config " + (dir / "good.json").string() + " --out " + (dir / "o").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "manifest.json"));
  EXPECT_EQ(run_cli("modes --quiet --f 110GHz --out " + (dir / "m").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "m" / "modes_110.0GHz.csv"));
  // A guide far below cutoff is a solver failure, not a config error.
  EXPECT_EQ(run_cli("modes --quiet --a 2um --b 1um --f 1GHz --out " + (dir / "x").string()), 3);
  fs::remove_all(dir);
}

TEST(Cli, ShippedConfigsParse) {
  for (const auto& e : fs::directory_iterator(DRW_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    EXPECT_NO_THROW((void)parse_config(read_text_file(e.path()))) << e.path();
  }
}

}  // namespace
}  // namespace drw
