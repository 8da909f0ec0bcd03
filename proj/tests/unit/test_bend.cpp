#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "drw/bend.hpp"
#include "drw/constants.hpp"
#include "drw/error.hpp"

namespace drw {
namespace {

TEST(BendSpec, Validation) {
  const auto cs = reference_cross_section();
  auto code = [&](BendSpec b) {
    try {
      b.validate(cs);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Solver;  // sentinel: accepted
  };
  EXPECT_EQ(code({um(80), BendSpec::kHalfPi, BendPlane::A}), ErrorCode::InvalidArgument);
  EXPECT_EQ(code({um(81), BendSpec::kHalfPi, BendPlane::A}), ErrorCode::Solver);
  EXPECT_EQ(code({um(50), BendSpec::kHalfPi, BendPlane::B}), ErrorCode::Solver);
  EXPECT_EQ(code({um(25), BendSpec::kHalfPi, BendPlane::B}), ErrorCode::InvalidArgument);
  EXPECT_EQ(code({um(200), 0.0, BendPlane::A}), ErrorCode::InvalidArgument);
  EXPECT_EQ(code({um(200), 7.0, BendPlane::A}), ErrorCode::InvalidArgument);
  EXPECT_EQ(code({um(200), 2 * kPi, BendPlane::A}), ErrorCode::Solver);
}

TEST(Bend, EquivalentProfileCarriesConformalFactor) {
  const auto cs = reference_cross_section();
  const BendSpec b{um(300)};
  const auto g = bend_equivalent_profile(cs, b, GHz(100));
  ASSERT_TRUE(g.bend().has_value());
  EXPECT_EQ(g.bend()->axis, Axis::X);
  EXPECT_DOUBLE_EQ(g.bend()->radius, um(300));
  const auto gb = bend_equivalent_profile(cs, {um(300), BendSpec::kHalfPi, BendPlane::B}, GHz(100));
  EXPECT_EQ(gb.bend()->axis, Axis::Y);
}

TEST(Bend, FieldShiftsOutward) {
  const auto cs = reference_cross_section();
  const auto r = bend_fundamental(cs, {um(300)}, GHz(100));
  const auto [cx, cy] = field_centroid(r.bend);
  const auto [sx, sy] = field_centroid(r.straight);
  EXPECT_GT(cx, sx);
  EXPECT_NEAR(cy, sy, r.bend.grid->dy());
  EXPECT_GT(r.overlap, 0.0);
  EXPECT_LE(r.overlap, 1.0 + 1e-9);
}

TEST(Bend, LossDecreasesWithRadiusAndVanishesWhenGentle) {
  const auto cs = reference_cross_section(0.002);
  double prev = 1e9;
  for (double r : {100.0, 200.0, 400.0, 1000.0}) {
    const auto l = bend_loss(cs, {um(r)}, GHz(100));
    EXPECT_LT(l.total_db, prev);
    EXPECT_NEAR(l.total_db, 2 * l.junction_db + l.differential_db, 1e-12);
    EXPECT_FALSE(l.suspicious_negative);
    prev = l.total_db;
  }
  const auto gentle = bend_loss(cs, {0.05}, GHz(100));
  EXPECT_LT(std::abs(gentle.junction_db), 1e-3);
}

TEST(Bend, LosslessHasNoDifferentialTerm) {
  const auto l = bend_loss(reference_cross_section(), {um(200)}, GHz(100));
  EXPECT_EQ(l.differential_db, 0.0);
  EXPECT_GT(l.junction_db, 0.0);
}

TEST(Bend, ConversionBookkeeping) {
  const auto mc = bend_mode_conversion(reference_cross_section(), {um(200)}, GHz(100), 4);
  ASSERT_FALSE(mc.fractions.empty());
  for (double x : mc.fractions) EXPECT_GE(x, 0.0);
  const double higher = std::accumulate(mc.fractions.begin() + 1, mc.fractions.end(), 0.0);
  EXPECT_NEAR(mc.into_higher, higher, 1e-15);
  EXPECT_NEAR(mc.fractions[0] + mc.into_higher + mc.unaccounted, 1.0, 1e-12);
  EXPECT_GT(mc.into_higher, 0.0);
}

}  // namespace
}  // namespace drw
