#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bhlab/errors.hpp"
#include "bhlab/thresholds.hpp"

using namespace bhlab;

TEST(Thresholds, AsymptoticAtEToTheE) {
  const long double x = std::exp(std::numbers::e_v<long double>);
  const auto th = thresholds(static_cast<double>(x), ThresholdProfile::asymptotic());
  const long double t_oracle = std::exp(std::pow(std::numbers::e_v<long double>, 2.0L / 3));
  const long double E_oracle = std::exp(-std::cbrt(std::numbers::e_v<long double>));
  EXPECT_NEAR(th.t, static_cast<double>(t_oracle), 1e-12);
  EXPECT_NEAR(th.t, 7.01278, 1e-5);
  EXPECT_NEAR(th.E, static_cast<double>(E_oracle), 1e-13);
  EXPECT_NEAR(th.E, 0.247681, 1e-6);
  EXPECT_NEAR(th.z, static_cast<double>(std::pow(x, std::exp(-std::numbers::egamma_v<long double>))),
              1e-12);
}

TEST(Thresholds, PowerOfGamma) {
  const double z = ThresholdProfile::desk().z(1e6);
  const long double oracle = std::pow(10.0L, 6.0L * std::exp(-std::numbers::egamma_v<long double>));
  EXPECT_NEAR(z, static_cast<double>(oracle), 1e-9);
  EXPECT_NEAR(z, 2337.5, 0.1);
  EXPECT_EQ(ThresholdProfile::asymptotic().z(1e6), z);
}

TEST(Thresholds, DeskT) {
  const auto desk = ThresholdProfile::desk();
  for (double n : {10.0, 1e3, 1e6, 1e12}) {
    const long double L = std::log(static_cast<long double>(n));
    EXPECT_NEAR(desk.t(n), static_cast<double>(std::exp(std::pow(L, 2.0L / 3))), 1e-9 * desk.t(n));
    if (n >= 1e3) {
      EXPECT_LT(desk.t(n), desk.z(n));
    }
  }
}

TEST(Thresholds, DomainBelowE) {
  EXPECT_THROW(thresholds(2.7, ThresholdProfile::desk()), DomainError);
  EXPECT_THROW(thresholds(std::numbers::e, ThresholdProfile::desk()), DomainError);
  EXPECT_THROW(error_scale(1.0), DomainError);
  EXPECT_NO_THROW(thresholds(2.72, ThresholdProfile::desk()));
}

TEST(Thresholds, ErrorScaleDecreases) {
  double prev = 1;
  for (double x = 10; x < 1e300; x *= 1e10) {
    const double e = error_scale(x);
    EXPECT_GT(e, 0);
    EXPECT_LT(e, prev);
    prev = e;
  }
}

TEST(Profile, Validation) {
  EXPECT_NO_THROW(ThresholdProfile::desk().validate());
  EXPECT_NO_THROW(ThresholdProfile::asymptotic().validate());
  EXPECT_NO_THROW(ThresholdProfile::fixed(1, 50).validate());
  EXPECT_THROW(ThresholdProfile::fixed(50, 50).validate(), ProfileInvalid);
  EXPECT_THROW(ThresholdProfile::fixed(0.5, 50).validate(), ProfileInvalid);
  auto p = ThresholdProfile::desk();
  p.t_param = 1.0;
  EXPECT_THROW(p.validate(), ProfileInvalid);
  p = ThresholdProfile::desk();
  p.z_param = 1.5;
  EXPECT_THROW(p.validate(), ProfileInvalid);
}

TEST(Profile, Ordering) {
  const auto desk = ThresholdProfile::desk();
  const auto from = desk.ordered_from(10, 1000000);
  ASSERT_TRUE(from.has_value());
  // (log n)^(2/3) < e^-gamma log n  iff  log n > e^(3 gamma)
  EXPECT_NEAR(static_cast<double>(*from), std::exp(std::exp(3 * std::numbers::egamma)), 1.0);
  EXPECT_LT(desk.t(*from), desk.z(*from));
  EXPECT_GE(desk.t(*from - 1), desk.z(*from - 1));
  EXPECT_NO_THROW(desk.require_ordered(1000, 1000000));
  EXPECT_THROW(desk.require_ordered(10, 1000000), ProfileInvalid);
  // the asymptotic thresholds cross only far beyond any desk-scale range
  const auto asym = ThresholdProfile::asymptotic();
  EXPECT_FALSE(asym.ordered_from(1000, 1000000).has_value());
  EXPECT_THROW(asym.require_ordered(1000, 1000000), ProfileInvalid);
  const auto fixed = ThresholdProfile::fixed(10, 100);
  EXPECT_EQ(fixed.ordered_from(3, 10), std::optional<std::uint64_t>(3));

  ThresholdProfile mixed;
  ThresholdProfile::parse_t("fixed:50", mixed);
  ThresholdProfile::parse_z("pow:0.5", mixed);
  // t < z iff sqrt(n) > 50 iff n > 2500
  EXPECT_EQ(mixed.ordered_from(100, 10000), std::optional<std::uint64_t>(2501));
  EXPECT_THROW(mixed.require_ordered(100, 10000), ProfileInvalid);
  EXPECT_NO_THROW(mixed.require_ordered(2501, 10000));
}

TEST(Profile, TextRoundTrip) {
  for (const auto& prof : {ThresholdProfile::desk(), ThresholdProfile::asymptotic(),
                           ThresholdProfile::fixed(3, 97.5)}) {
    ThresholdProfile back;
    ThresholdProfile::parse_t(prof.t_text(), back);
    ThresholdProfile::parse_z(prof.z_text(), back);
    EXPECT_EQ(back, prof) << prof.t_text() << " " << prof.z_text();
  }
  ThresholdProfile p;
  EXPECT_THROW(ThresholdProfile::parse_t("paper", p), ProfileInvalid);
  EXPECT_THROW(ThresholdProfile::parse_t("exp_pow:x", p), ProfileInvalid);
  EXPECT_THROW(ThresholdProfile::parse_z("pow:0.5junk", p), ProfileInvalid);
  EXPECT_THROW(ThresholdProfile::parse_z("fixed", p), ProfileInvalid);
}

TEST(Theta, MatchesDirectProduct) {
  const ThetaTable table(100000);
  EXPECT_EQ(table(1.5), 1.0);
  EXPECT_EQ(table(2), 0.5);
  EXPECT_DOUBLE_EQ(table(7), 0.5 * 2 / 3 * 4 / 5 * 6 / 7);
  long double acc = 1;
  for (std::uint64_t n = 2; n <= 100000; ++n) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= n && prime; ++d) prime = n % d != 0;
    if (prime) acc *= 1.0L - 1.0L / n;
  }
  EXPECT_NEAR(table(100000), static_cast<double>(acc), 1e-13);
  // Mertens: Theta_z ~ e^-gamma / log z
  EXPECT_NEAR(table(100000) * std::log(100000.0) * std::exp(std::numbers::egamma), 1.0, 1e-3);
}
