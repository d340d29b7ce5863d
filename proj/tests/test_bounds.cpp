#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "twistkit/bounds.hpp"

using namespace twistkit;
using Catch::Approx;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_CASE("slope length lower bound") {
  CHECK(slope_length_lower(0) == Approx(0.5).margin(1e-12));
  CHECK(slope_length_lower(7) == Approx(7.0178344238090995).margin(1e-9));
  CHECK(std::abs(slope_length_lower(7) - 7.0178) < 5e-4);
  CHECK(slope_length_lower(7) > kTwoPi);
  CHECK(slope_length_lower(6) == Approx(6.0207972893961479).margin(1e-9));
  CHECK(slope_length_lower(6) > 6.0);
  CHECK(slope_length_lower(6) < kTwoPi);
  CHECK(slope_length_lower(5) == Approx(5.0249378105604450).margin(1e-9));
  CHECK(slope_length_lower(5) < 6.0);
  CHECK_THROWS_AS(slope_length_lower(-1), NegativeCount);

  for (long long c = 0; c < 64; ++c)
    CHECK(slope_length_lower(c + 1) > slope_length_lower(c));
}

TEST_CASE("filling certificates at the 6 and 7 thresholds") {
  CHECK(certify_filling(5) == Certificate::None);
  CHECK(certify_filling(6) == Certificate::SixTheorem);
  CHECK(certify_filling(7) == Certificate::SixTheoremAnd2Pi);
  CHECK(certify_filling(100) == Certificate::SixTheoremAnd2Pi);
  CHECK(certify_filling(0) == Certificate::None);
  CHECK(to_string(certify_filling(6)) == "SixTheorem");
}

TEST_CASE("volume retention factor") {
  CHECK(retention(7) == Approx(0.0883767436452012).margin(1e-12));
  CHECK(retention(8) == Approx(0.2393982255062842).margin(1e-12));
  CHECK_THROWS_AS(retention(6), RetentionUndefined);  // 6.0208 < 2*pi
  CHECK_THROWS_AS(retention(5), RetentionUndefined);
  CHECK_THROWS_AS(retention(0), RetentionUndefined);

  // strictly increasing and below 1 on the certified range
  double prev = retention(7);
  for (long long c = 8; c <= 100; ++c) {
    const double r = retention(c);
    CHECK(r > prev);
    CHECK(r < 1.0);
    prev = r;
  }
  CHECK(retention(100) > retention(7));
}

TEST_CASE("volume lower bounds") {
  const auto& paper = paper_constants();
  const auto& precise = precise_constants();

  SECTION("link in a solid torus") {
    const Bound b = volume_lower_solid_torus(3, paper);
    CHECK(b.value == Approx(21.98316).margin(1e-9));
    CHECK(b.profile == "paper");
    CHECK_FALSE(b.vacuous);
    CHECK(b.formula.find("t_i=3") != std::string::npos);
    CHECK(volume_lower_solid_torus(0, paper).vacuous);
    CHECK_THROWS_AS(volume_lower_solid_torus(-1, paper), NegativeCount);
  }

  SECTION("augmented link in the 3-sphere") {
    CHECK(volume_lower_s3(1, paper).value == 0.0);
    CHECK(volume_lower_s3(1, paper).vacuous);
    CHECK(volume_lower_s3(3, paper).value == Approx(2.0 * 3.66386 * 2).margin(1e-9));
    CHECK(volume_lower_s3(3, precise).value == Approx(14.6554495068).margin(1e-9));
    CHECK(volume_lower_s3(0, paper).value == 0.0);
    CHECK_THROWS_AS(volume_lower_s3(-2, paper), NegativeCount);
  }

  SECTION("volume surviving twisting") {
    const Bound b = volume_lower_after_twisting(1, 7, paper);
    CHECK(b.value == Approx(0.6476000319438134).margin(1e-12));
    CHECK(b.value >= 0.64756);  // dominates the published per-region coefficient
    CHECK_THROWS_AS(volume_lower_after_twisting(1, 6, paper), RetentionUndefined);
    CHECK_THROWS_AS(volume_lower_after_twisting(-1, 7, paper), NegativeCount);
    CHECK(volume_lower_after_twisting(0, 7, paper).vacuous);
  }
}

TEST_CASE("Gromov norm lower bound for the augmented link") {
  const auto& paper = paper_constants();
  const Bound b = gromov_lower_link(5, 1, paper);
  CHECK(b.value == Approx(22.3107090840).margin(1e-9));
  CHECK(std::abs(b.value - 22.3107) <= 1e-3);
  CHECK(gromov_lower_link(3, 0, paper).value == Approx(14.8738060560).margin(1e-9));
  CHECK(std::abs(gromov_lower_link(3, 0, paper).value - 14.8738) <= 1e-3);
  CHECK(gromov_lower_link(1, 0, paper).value == 0.0);
  CHECK(gromov_lower_link(1, 0, paper).vacuous);
  CHECK_THROWS_AS(gromov_lower_link(-1, 0, paper), NegativeCount);
  CHECK_THROWS_AS(gromov_lower_link(5, -1, paper), NegativeCount);

  // monotone: non-decreasing in t, non-increasing in t0
  for (long long t = 1; t <= 10; ++t)
    for (long long t0 = 0; t0 <= t; ++t0) {
      CHECK(gromov_lower_link(t + 1, t0, paper).value >= gromov_lower_link(t, t0, paper).value);
      CHECK(gromov_lower_link(t, t0 + 1, paper).value <= gromov_lower_link(t, t0, paper).value);
    }
}

TEST_CASE("Gromov norm lower bound for the twisted knot") {
  const auto& paper = paper_constants();
  const auto& precise = precise_constants();

  CHECK(gromov_lower_knot(4, 7, paper).value == Approx(1.97163).margin(1e-9));
  CHECK(gromov_lower_knot(1, 7, paper).value == 0.0);
  CHECK(gromov_lower_knot(1, 7, paper).vacuous);
  CHECK_THROWS_AS(gromov_lower_knot(4, 6, paper), InsufficientTwisting);
  CHECK_THROWS_AS(gromov_lower_knot(-1, 7, paper), NegativeCount);

  // published coefficient reproduced to 5 decimals: round(0.64756*1.0149, 5)
  CHECK(std::llround(0.64756 * 1.0149 * 100000.0) == 65721);
  const double coeff = gromov_lower_knot(2, 7, paper).value;  // t-1 = 1
  CHECK(coeff == Approx(0.65721).margin(1e-12));

  // precise profile recomputes the product and dominates the rounded one
  CHECK(gromov_lower_knot(2, 7, precise).value == Approx(0.6572766431004222).margin(1e-8));
  for (long long t = 1; t <= 10; ++t)
    for (long long c = 7; c <= 30; ++c)
      CHECK(gromov_lower_knot(t, c, precise).value >= gromov_lower_knot(t, c, paper).value - 1e-12);
}

TEST_CASE("constants profiles") {
  CHECK(paper_constants().v3 == 1.0149);
  CHECK(paper_constants().v8 == 3.66386);
  CHECK(precise_constants().v3 == Approx(1.0149416064).margin(1e-12));
  CHECK(precise_constants().v8 == Approx(3.6638623767).margin(1e-12));
  CHECK(constants_profile("paper").name == "paper");
  CHECK(constants_profile("precise").name == "precise");
  CHECK_THROWS_AS(constants_profile("loose"), Error);
}
