#include <gtest/gtest.h>

#include "support.hpp"

using namespace arisopt;
using arisopt::testing::combined_channel;

TEST(Scenario, DimensionsMatchConfig) {
  RandomSource rng(3);
  const ScenarioRealization s = draw(table1_config(3, 7, 5), rng);
  EXPECT_EQ(s.h.size(), 3);
  EXPECT_EQ(s.f.size(), 7);
  EXPECT_EQ(s.g.rows(), 7);
  EXPECT_EQ(s.g.cols(), 3);
  EXPECT_EQ(s.h_j.size(), 5);
  EXPECT_EQ(s.G_j.rows(), 7);
  EXPECT_EQ(s.G_j.cols(), 5);
  EXPECT_EQ(s.dims().K, 3);
  EXPECT_EQ(s.dims().N, 7);
  EXPECT_EQ(s.dims().M, 5);
}

TEST(Scenario, SameSeedSameRealization) {
  RandomSource a(42), b(42), c(43);
  const ScenarioRealization x = draw(table1_config(2, 8, 3), a);
  const ScenarioRealization y = draw(table1_config(2, 8, 3), b);
  const ScenarioRealization z = draw(table1_config(2, 8, 3), c);
  EXPECT_EQ(x.h, y.h);
  EXPECT_EQ(x.f, y.f);
  EXPECT_EQ(x.g, y.g);
  EXPECT_EQ(x.h_j, y.h_j);
  EXPECT_EQ(x.G_j, y.G_j);
  EXPECT_NE(x.f, z.f);
}

TEST(Scenario, MeanMagnitudesMatchTable) {
  // 1e5 draws of |h_1| and 1e5 entries of G_j.
  RandomSource rng(7);
  const ScenarioConfig small = table1_config(1, 1, 1);
  double sum_h = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) sum_h += std::abs(draw_fixed_gain(small, rng).h(0));
  EXPECT_NEAR(sum_h / draws / 5.0, 1.0, 0.02);

  const ScenarioRealization wide = draw_fixed_gain(table1_config(1, 1000, 100), rng);
  EXPECT_NEAR(wide.G_j.cwiseAbs().mean() / 0.2, 1.0, 0.02);
  EXPECT_NEAR(wide.f.cwiseAbs().mean() / 2.0, 1.0, 0.05);
}

TEST(Scenario, ZeroGainGivesZeroChannel) {
  ScenarioConfig c = table1_config(2, 4, 2);
  std::get<FixedGains>(c.gains).G_j = 0.0;
  RandomSource rng(1);
  const ScenarioRealization s = draw(c, rng);
  EXPECT_TRUE(s.G_j.isZero(0.0));
  EXPECT_FALSE(s.f.isZero(0.0));
}

TEST(Scenario, GeometricScaleFollowsPathLoss) {
  const ScenarioConfig c = table2_config(3, 20000, 1, 10.0);
  const double d = std::sqrt(10.0 * 10.0 + 65.0 * 65.0);
  const double expected = std::sqrt(3e5 / (d * d));
  EXPECT_DOUBLE_EQ(path_amplitude(3e5, d, 2.0), expected);
  RandomSource rng(5);
  const ScenarioRealization s = draw_geometric(c, rng);
  EXPECT_NEAR(s.f.cwiseAbs().mean() / expected, 1.0, 0.02);
}

TEST(Scenario, GeometricZeroK0) {
  ScenarioConfig c = table2_config(2, 4, 2, 50.0);
  std::get<Geometry>(c.gains).K0 = 0.0;
  RandomSource rng(1);
  const ScenarioRealization s = draw(c, rng);
  EXPECT_TRUE(s.h.isZero(0.0));
  EXPECT_TRUE(s.f.isZero(0.0));
  EXPECT_TRUE(s.g.isZero(0.0));
  EXPECT_TRUE(s.h_j.isZero(0.0));
  EXPECT_TRUE(s.G_j.isZero(0.0));
}

TEST(Scenario, CoincidentNodesRejected) {
  ScenarioConfig c = table2_config(2, 4, 2, 50.0);
  std::get<Geometry>(c.gains).aris = std::get<Geometry>(c.gains).bs;
  RandomSource rng(1);
  try {
    draw(c, rng);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(Scenario, AmplitudeDecreasesWithDistance) {
  double prev = path_amplitude(3e5, 1.0, 2.0);
  for (double d = 2.0; d < 500.0; d *= 1.3) {
    const double a = path_amplitude(3e5, d, 2.0);
    EXPECT_LT(a, prev);
    prev = a;
  }
}

TEST(Scenario, ConfigValidation) {
  ScenarioConfig c = table1_config(2, 4, 2);
  c.targets = {5.0};
  EXPECT_THROW(c.validate(), Error);
  c = table1_config(2, 4, 2);
  c.beta_max = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c = table1_config(2, 4, 2);
  c.noise_power = 0.0;
  EXPECT_THROW(c.validate(), Error);
  c = table1_config(2, 4, 2);
  c.targets[1] = -1.0;
  EXPECT_THROW(c.validate(), Error);
  c = table1_config(2, 4, 2);
  c.dims.N = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Scenario, ReceivedTermsSurfaceOff) {
  const ScenarioRealization s = arisopt::testing::table1_draw(3, 6, 2, 9);
  const VectorXd p = VectorXd::LinSpaced(3, 0.5, 1.5);
  const VectorXd terms = received_signal_power_terms(s, VectorXcd::Zero(6), p);
  for (Index k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(terms(k), p(k) * std::norm(s.h(k)));
}

TEST(Scenario, ReceivedTermsScalarCase) {
  ScenarioRealization s;
  s.h = VectorXcd::Ones(1);
  s.f = VectorXcd::Ones(1);
  s.g = MatrixXcd::Ones(1, 1);
  s.h_j = VectorXcd::Zero(1);
  s.G_j = MatrixXcd::Zero(1, 1);
  s.targets = VectorXd::Ones(1);
  EXPECT_DOUBLE_EQ(received_signal_power_terms(s, VectorXcd::Ones(1), VectorXd::Ones(1))(0), 4.0);
}

TEST(Scenario, ReceivedTermsMatchExpansion) {
  const ScenarioRealization s = arisopt::testing::table1_draw(3, 9, 2, 11);
  RandomSource rng(12);
  const RISResponse r = arisopt::testing::random_response(9, rng);
  const VectorXd p = VectorXd::LinSpaced(3, 0.1, 2.0);
  const VectorXd terms = received_signal_power_terms(s, r.phi, p);
  for (Index k = 0; k < 3; ++k)
    EXPECT_NEAR(terms(k), p(k) * std::norm(combined_channel(s, r.phi, k)), 1e-12 * (1.0 + terms(k)));
}

TEST(Rng, DerivedSeedsAreStable) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {2}), derive_seed(2, {2}));
  RandomSource a(derive_seed(9, {0})), b(derive_seed(9, {0}));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.engine()(), b.engine()());
}
