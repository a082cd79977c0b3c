#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cra/metrics.hpp"

using namespace cra;

TEST_CASE("maxcut upper bound formula") {
  CHECK(maxcutUpperBound(4) == doctest::Approx(1.7632).epsilon(1e-12));
  CHECK(maxcutUpperBound(16) == doctest::Approx(5.5264).epsilon(1e-12));
  CHECK(maxcutUpperBound(1) == doctest::Approx(0.6316).epsilon(1e-12));
  CHECK_THROWS_AS(maxcutUpperBound(0), std::invalid_argument);
}

TEST_CASE("mis asymptotic densities") {
  auto [rhoMax, rhoAlg] = misAsymptoticDensity(100);
  CHECK(rhoAlg == doctest::Approx(std::log(100.0) / 100.0).epsilon(1e-12));
  CHECK(rhoAlg == doctest::Approx(0.04605).epsilon(1e-3));
  CHECK(rhoMax == doctest::Approx(2.0 * rhoAlg).epsilon(1e-15));

  // d = ceil(e^2) = 8 near the e^2 landmark; check the exact expression instead
  auto [m7, a7] = misAsymptoticDensity(7);
  CHECK(a7 == doctest::Approx(std::log(7.0) / 7.0));
  CHECK_THROWS_AS(misAsymptoticDensity(1), std::invalid_argument);
}

TEST_CASE("gset best-known table") {
  auto g14 = gsetBestKnown("G14");
  REQUIRE(g14.has_value());
  CHECK(*g14 == doctest::Approx(3064.0));
  CHECK(gsetBestKnown("G49").value() == doctest::Approx(6000.0));
  CHECK_FALSE(gsetBestKnown("G9999").has_value());
}

TEST_CASE("approximation ratio handles missing references") {
  CHECK(approximationRatio(90.0, 100.0).value() == doctest::Approx(0.9));
  CHECK_FALSE(approximationRatio(90.0, std::nullopt).has_value());
  CHECK_FALSE(approximationRatio(90.0, 0.0).has_value());
}
