#include <cmath>

#include <gtest/gtest.h>

#include "drw/constants.hpp"
#include "drw/error.hpp"
#include "drw/taper.hpp"

namespace drw {
namespace {

const CrossSection kChannel = reference_cross_section();

TEST(TaperProfile, TwoSegmentsAtQuarterPoints) {
  const auto in = kChannel.with_dims(um(240), um(120));
  const auto p = make_linear_taper(in, kChannel, 1e-3, 2);
  ASSERT_EQ(p.segments().size(), 2u);
  EXPECT_DOUBLE_EQ(p.segments()[0].length, 0.5e-3);
  EXPECT_NEAR(p.segments()[0].cs.a(), um(220), 1e-15);
  EXPECT_NEAR(p.segments()[1].cs.a(), um(180), 1e-15);
  EXPECT_NEAR(p.segments()[1].cs.b(), um(90), 1e-15);
  EXPECT_DOUBLE_EQ(p.total_length(), 1e-3);
  const auto secs = p.sections();
  ASSERT_EQ(secs.size(), 4u);
  EXPECT_EQ(secs.front(), in);
  EXPECT_EQ(secs.back(), kChannel);
}

TEST(TaperProfile, MonotoneAndDegenerate) {
  const auto p = make_linear_taper(default_launch(kChannel), kChannel, 2e-3, 16);
  for (std::size_t i = 1; i < p.segments().size(); ++i)
    EXPECT_LT(p.segments()[i].cs.a(), p.segments()[i - 1].cs.a());
  const auto same = make_linear_taper(kChannel, kChannel, 1e-3, 5);
  for (const auto& s : same.segments()) EXPECT_EQ(s.cs, kChannel);
  EXPECT_NEAR(default_launch(kChannel).a() * default_launch(kChannel).b(),
              3 * kChannel.a() * kChannel.b(), 1e-20);
}

TEST(TaperProfile, Rejections) {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Solver;
  };
  const Material other("other", 500.0, 0.0);
  EXPECT_EQ(code([&] { make_linear_taper(kChannel.with_core(other), kChannel, 1e-3, 4); }),
            ErrorCode::TaperInfeasible);
  EXPECT_EQ(code([&] { make_linear_taper(kChannel, kChannel, 1e-3, 1); }),
            ErrorCode::InvalidArgument);
  // Non-monotone staircase.
  EXPECT_NE(code([&] {
              TaperProfile(kChannel, kChannel.with_dims(um(200), um(100)),
                           {{1e-4, kChannel.with_dims(um(300), um(150))}});
            }),
            ErrorCode::Solver);
  // Output too small to guide at the check frequency.
  EXPECT_EQ(code([&] {
              make_linear_taper(kChannel, kChannel.with_dims(um(2), um(1)), 1e-3, 4, GHz(20));
            }),
            ErrorCode::TaperInfeasible);
}

TEST(Junction, SameModesAreTransparent) {
  const auto m = solve_modes(kChannel, GHz(110), 3);
  const auto j = junction_from_modes(m, m);
  const int n = j.n_left;
  EXPECT_LT(j.s.topLeftCorner(n, n).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((j.s.topRightCorner(n, n) - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(Junction, LosslessReciprocalAndSingleModeFormula) {
  const auto j = junction_scattering(default_launch(kChannel), kChannel, GHz(110), 4);
  const auto& s = j.s;
  const auto n = s.rows();
  EXPECT_LT((s - s.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((s.adjoint() * s - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);

  const auto j1 = junction_scattering(default_launch(kChannel), kChannel, GHz(110), 1);
  const double o = std::abs(j1.overlap(0, 0));
  EXPECT_NEAR(std::abs(j1.s(0, 0)), (1 - o * o) / (1 + o * o), 1e-12);
  EXPECT_NEAR(std::abs(j1.s(1, 0)), 2 * o / (1 + o * o), 1e-12);
}

TEST(Junction, MismatchGrowsWithStep) {
  double prev = 0.0;
  for (double scale : {1.1, 1.4, 2.0}) {
    const auto j = junction_scattering(kChannel.with_dims(scale * kChannel.a(), scale * kChannel.b()),
                                       kChannel, GHz(110), 1);
    const double r = std::abs(j.s(0, 0));
    EXPECT_GT(r, prev);
    prev = r;
  }
}

TEST(Taper, UniformProfileIsPurePropagation) {
  const auto p = make_linear_taper(kChannel, kChannel, 1e-3, 4);
  const FrequencyGrid fg({GHz(110)});
  const auto r = cascade(p, fg, 2);
  const double beta = solve_modes(kChannel, GHz(110), 1)[0].beta.real();
  EXPECT_LT(std::abs(r.fundamental.s(1, 1, 0)), 1e-12);
  EXPECT_NEAR(std::abs(r.fundamental.s(2, 1, 0)), 1.0, 1e-12);
  const auto expected = std::exp(std::complex<double>(0, -beta * 1e-3));
  EXPECT_LT(std::abs(r.fundamental.s(2, 1, 0) - expected), 1e-6);
}

TEST(Taper, AbruptProfileEqualsSingleJunction) {
  const auto in = default_launch(kChannel);
  const TaperProfile butt(in, kChannel, {});
  const FrequencyGrid fg({GHz(110)});
  const auto r = cascade(butt, fg, 3);
  const auto j = junction_scattering(in, kChannel, GHz(110), 3);
  const int nl = j.n_left;
  EXPECT_NEAR(std::abs(r.fundamental.s(1, 1, 0)), std::abs(j.s(0, 0)), 1e-9);
  EXPECT_NEAR(std::abs(r.fundamental.s(2, 1, 0)), std::abs(j.s(nl, 0)), 1e-9);
}

TEST(Taper, LongerTaperReflectsLess) {
  const FrequencyGrid fg({GHz(110)});
  const auto in = default_launch(kChannel);
  const auto abrupt = cascade(TaperProfile(in, kChannel, {}), fg, 3);
  const auto smooth = cascade(make_linear_taper(in, kChannel, 2e-3, 24), fg, 3, {}, 2);
  EXPECT_LT(std::abs(smooth.fundamental.s(1, 1, 0)), std::abs(abrupt.fundamental.s(1, 1, 0)));
  EXPECT_GT(std::abs(smooth.fundamental.s(2, 1, 0)), std::abs(abrupt.fundamental.s(2, 1, 0)));
  EXPECT_LT(smooth.fundamental.passivity_violation(), 1e-9);
  EXPECT_LT(smooth.fundamental.reciprocity_violation(), 1e-9);
}

TEST(Taper, AdiabaticityHalvesWhenLengthDoubles) {
  // Same staircase, segments twice as long: the step mismatch is unchanged
  // and the metric divides by the segment length.
  const auto in = default_launch(kChannel);
  const double a1 = adiabaticity(make_linear_taper(in, kChannel, 1e-3, 8), GHz(110));
  const double a2 = adiabaticity(make_linear_taper(in, kChannel, 2e-3, 8), GHz(110));
  EXPECT_GT(a1, 0.0);
  EXPECT_NEAR(a2 / a1, 0.5, 1e-6);
}

TEST(Taper, Attenuator) {
  const FrequencyGrid fg({GHz(90), GHz(100)});
  const auto a = attenuator(fg, {6.0, -1.0});
  EXPECT_NEAR(to_db(a.s(2, 1, 0)), -6.0, 1e-12);
  EXPECT_EQ(a.s(2, 1, 1), std::complex<double>(1.0, 0.0));
  EXPECT_EQ(a.s(1, 1, 0), std::complex<double>(0.0, 0.0));
}

TEST(Taper, LinkComposesPieces) {
  const FrequencyGrid fg({GHz(110)});
  const auto in = make_linear_taper(default_launch(kChannel), kChannel, 1e-3, 6);
  const auto out = make_linear_taper(kChannel, default_launch(kChannel), 1e-3, 6);
  const auto link = end_to_end_link(in, 0.01, {BendSpec{um(400)}}, out, fg, 0.002, {}, 3);
  const auto straight = end_to_end_link(in, 0.01, {}, out, fg, 0.002, {}, 3);
  EXPECT_LT(to_db(link.s(2, 1, 0)), to_db(straight.s(2, 1, 0)));
  EXPECT_LT(link.passivity_violation(), 1e-9);
  EXPECT_LT(link.reciprocity_violation(), 1e-9);
}

}  // namespace
}  // namespace drw
