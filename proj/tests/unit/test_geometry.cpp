#include <cmath>

#include <gtest/gtest.h>

#include "drw/constants.hpp"
#include "drw/error.hpp"
#include "drw/geometry.hpp"
#include "drw/material.hpp"

namespace drw {
namespace {

TEST(Material, CatalogLookup) {
  const auto cat = material_catalog();
  EXPECT_EQ(cat.lookup("rod-clad").eps_r(), 12.0);
  EXPECT_EQ(cat.lookup("rod-core-lossless").tan_delta(), 0.0);
  EXPECT_EQ(cat.lookup("rod-core-worst").tan_delta(), 0.002);
  try {
    (void)cat.lookup("unobtainium");
    FAIL() << "expected NotFound";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFound);
  }
}

TEST(Material, ComplexPermittivity) {
  const Material m("m", 1000.0, 0.002);
  const auto eps = complex_permittivity(m, GHz(100));
  EXPECT_DOUBLE_EQ(eps.real(), 1000.0);
  EXPECT_DOUBLE_EQ(eps.imag(), -2.0);
  EXPECT_EQ(m.with_tan_delta(0.0).tan_delta(), 0.0);
}

TEST(Grid, CoreEdgesOnCellEdgesAndSampling) {
  const auto cs = reference_cross_section();
  const double f = GHz(110);
  const auto g = build_grid(cs, f);
  EXPECT_LE(g.dx(), medium_wavelength(f, 1000.0) / 20 * (1 + 1e-12));
  EXPECT_LE(g.dy(), medium_wavelength(f, 1000.0) / 20 * (1 + 1e-12));
  const double ca = cs.a() / g.dx();
  const double cb = cs.b() / g.dy();
  EXPECT_NEAR(ca, std::round(ca), 1e-9);
  EXPECT_NEAR(cb, std::round(cb), 1e-9);

  // Core cells are exactly those whose centre lies inside the rectangle.
  int core_cells = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double x = g.x0() + (i + 0.5) * g.dx();
      const double y = g.y0() + (j + 0.5) * g.dy();
      const bool inside = std::abs(x) < cs.a() / 2 && std::abs(y) < cs.b() / 2;
      EXPECT_EQ(g.region(i, j) == 1, inside);
      core_cells += inside;
    }
  EXPECT_EQ(core_cells, static_cast<int>(std::lround(ca * cb)));

  // Padding of at least five cladding decay lengths on every side.
  const double pad = 5.0 / cladding_decay_rate(cs, f);
  EXPECT_GE(-g.x0() - cs.a() / 2, pad * (1 - 1e-12));
  EXPECT_GE(-g.y0() - cs.b() / 2, pad * (1 - 1e-12));
}

TEST(Grid, RejectsCoarseAndHugeGrids) {
  const auto cs = reference_cross_section();
  EXPECT_THROW((void)build_grid(cs, GHz(110), 10), Error);
  GridOptions o;
  o.max_cells = 1000;
  try {
    (void)build_grid(cs, GHz(110), o);
    FAIL() << "expected GridTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridTooLarge);
  }
}

TEST(Grid, SampleEpsAveragesAdjacentCells) {
  const auto cs = reference_cross_section();
  const auto g = build_grid(cs, GHz(110));
  // Ex sample on the left core wall row sits between a core and a cladding
  // cell only for Ey; Ex at (i+1/2, j) touches cells (i, j-1) and (i, j).
  const int i = g.nx() / 2;
  int j_edge = 0;
  while (g.region(i, j_edge) == 0) ++j_edge;
  const auto e = g.sample_eps(Component::Ex, i, j_edge);
  EXPECT_NEAR(e.real(), (1000.0 + 12.0) / 2, 1e-9);
  EXPECT_NEAR(g.sample_eps(Component::Ex, i, j_edge + 1).real(), 1000.0, 1e-9);
}

TEST(Grid, BendFactorScalesSamples) {
  const auto cs = reference_cross_section();
  const auto g = build_grid(cs, GHz(110));
  const BendTransform bt{um(300)};
  const auto gb = g.with_bend(bt);
  const int i = g.nx() / 2 + 3;
  const int j = g.ny() / 2;
  const double x = gb.x_of(Component::Ey, i);
  EXPECT_NEAR(gb.sample_eps(Component::Ey, i, j).real(),
              g.sample_eps(Component::Ey, i, j).real() * bt.factor(x), 1e-9);
  EXPECT_TRUE(g.same_layout(gb));
}

TEST(Grid, RasterizedCoreFill) {
  const auto cs = reference_cross_section();
  const auto layout = build_grid(cs, GHz(110));
  // Shift a narrower core by a third of a cell: partial cells on the edges.
  const CoreRect r{layout.dx() / 3, 0.0, cs.a() / 2, cs.b() / 2};
  const auto g = rasterize_cores(layout, {r}, cs.core(), cs.clad());
  EXPECT_TRUE(g.same_layout(layout));
  double area = 0.0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const double fill = core_fill(g, i, j);
      EXPECT_GE(fill, -1e-12);
      EXPECT_LE(fill, 1 + 1e-12);
      EXPECT_EQ(g.region(i, j) == 1, fill >= 0.5);
      area += fill * g.cell_area();
    }
  EXPECT_NEAR(area, r.a * r.b, 1e-9 * r.a * r.b);
}

TEST(FrequencyGrid, Linspace) {
  const auto fg = FrequencyGrid::default_band();
  EXPECT_EQ(fg.size(), 17u);
  EXPECT_DOUBLE_EQ(fg.front(), GHz(80));
  EXPECT_DOUBLE_EQ(fg.back(), GHz(160));
  EXPECT_THROW(FrequencyGrid({GHz(100), GHz(90)}), Error);
  EXPECT_THROW(FrequencyGrid(std::vector<double>{}), Error);
}

}  // namespace
}  // namespace drw
