#include <cmath>

#include <gtest/gtest.h>

#include "drw/channel.hpp"
#include "drw/constants.hpp"
#include "drw/error.hpp"
#include "drw/sparams.hpp"

namespace drw {
namespace {

TEST(Dispersion, AnalyticLinearBeta) {
  // beta = sqrt(eps) omega / c: group index sqrt(eps), no curvature.
  std::vector<double> f, beta;
  for (double g = 80; g <= 160; g += 7.5) {
    f.push_back(GHz(g));
    beta.push_back(std::sqrt(12.0) * 2 * kPi * GHz(g) / kSpeedOfLight);
  }
  const auto p = differentiate_beta(f, beta);
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_NEAR(p.group_index[i], std::sqrt(12.0), 1e-9);
    EXPECT_NEAR(p.beta2[i], 0.0, 1e-30);
  }
  EXPECT_TRUE(p.one_sided.front());
  EXPECT_TRUE(p.one_sided.back());
  EXPECT_FALSE(p.one_sided[1]);
}

TEST(Dispersion, QuadraticBetaOnUnevenGrid) {
  // Three-point stencils are exact for quadratics, even on uneven spacing.
  const std::vector<double> f{GHz(80), GHz(85), GHz(95), GHz(100), GHz(120), GHz(130)};
  const double c2 = 3e-21;
  std::vector<double> beta;
  for (double x : f) {
    const double w = 2 * kPi * x;
    beta.push_back(100.0 + 2e-7 * w + c2 * w * w);
  }
  const auto p = differentiate_beta(f, beta);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = 2 * kPi * f[i];
    EXPECT_NEAR(p.group_index[i], kSpeedOfLight * (2e-7 + 2 * c2 * w), 1e-6);
    EXPECT_NEAR(p.beta2[i], 2 * c2, 1e-6 * 2 * c2);
  }
}

TEST(Dispersion, NeedsFivePoints) {
  try {
    (void)differentiate_beta({1e9, 2e9, 3e9, 4e9}, {1, 2, 3, 4});
    FAIL() << "expected InsufficientGrid";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientGrid);
  }
}

TEST(Dispersion, SolvedProfileIsPhysical) {
  const auto fg = FrequencyGrid::linspace(GHz(90), GHz(130), 5);
  const auto p = dispersion_profile(reference_cross_section(), fg);
  for (std::size_t i = 0; i < fg.size(); ++i) {
    const double neff = p.beta[i] / wavenumber(fg[i]);
    // Guided, index-guided dispersion: group index above the phase index.
    EXPECT_GT(p.group_index[i], neff);
    EXPECT_LT(p.group_index[i], 2 * std::sqrt(1000.0));
    if (i > 0) {
      EXPECT_GT(p.beta[i], p.beta[i - 1]);
    }
  }
}

TEST(Straight, ZeroLengthIsIdentityThru) {
  const FrequencyGrid fg({GHz(100), GHz(110)});
  const auto sp = straight_channel(0.0, fg, {2000.0, 2100.0}, {5.0, 6.0});
  for (std::size_t k = 0; k < fg.size(); ++k) {
    EXPECT_EQ(sp.s(2, 1, k), std::complex<double>(1.0, 0.0));
    EXPECT_EQ(sp.s(1, 1, k), std::complex<double>(0.0, 0.0));
  }
}

TEST(Straight, PhaseAndAttenuation) {
  const FrequencyGrid fg({GHz(100)});
  const double L = 0.01, beta = 60000.0, alpha = 40.0;
  const auto sp = straight_channel(L, fg, {beta}, {alpha});
  EXPECT_NEAR(to_db(sp.s(2, 1, 0)), -kNeperToDb * alpha * L, 1e-9);
  const auto expected = std::exp(std::complex<double>(-alpha * L, -beta * L));
  EXPECT_NEAR(std::abs(sp.s(2, 1, 0) - expected), 0.0, 1e-12);
  EXPECT_EQ(sp.s(1, 2, 0), sp.s(2, 1, 0));
}

TEST(Straight, LossScalesWithLength) {
  const auto cs = reference_cross_section(0.002);
  const FrequencyGrid fg({GHz(100)});
  const double l1 = to_db(straight_channel(0.01, cs, fg).s(2, 1, 0));
  const double l3 = to_db(straight_channel(0.03, cs, fg).s(2, 1, 0));
  EXPECT_NEAR(l3, 3 * l1, 1e-9 * std::abs(l3));
  EXPECT_LT(l1, 0.0);
}

TEST(LossTable, MonotoneInTanDeltaAndFrequency) {
  const auto t = loss_table(reference_cross_section(), {GHz(90), GHz(110), GHz(150)},
                            {0.002, 0.0, 0.0005});
  ASSERT_EQ(t.tan_deltas, (std::vector<double>{0.0, 0.0005, 0.002}));
  for (std::size_t f = 0; f < 3; ++f) {
    EXPECT_EQ(t.entry(0, f), 0.0);
    EXPECT_LT(t.entry(1, f), t.entry(2, f));
    EXPECT_NEAR(t.entry(2, f), 4 * t.entry(1, f), 1e-9 * t.entry(2, f));
    if (f > 0) {
      EXPECT_GT(t.entry(2, f), t.entry(2, f - 1));
    }
  }
}

TEST(LossTable, WorkersDoNotChangeResults) {
  ChannelSettings one, four;
  four.workers = 4;
  const std::vector<double> f{GHz(90), GHz(100), GHz(110), GHz(120)};
  EXPECT_EQ(loss_table(reference_cross_section(), f, {0.002}, one).db_per_mm,
            loss_table(reference_cross_section(), f, {0.002}, four).db_per_mm);
}

}  // namespace
}  // namespace drw
