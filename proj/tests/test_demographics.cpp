#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "dmm/common.hpp"
#include "dmm/demographics.hpp"
#include "helpers.hpp"

using testutil::demo;

TEST_SUITE("demographics") {

TEST_CASE("normalize divides by the sum") {
  auto v = dmm::normalize_demographics({2.0, 1.0, 1.0, 0.0});
  REQUIRE(v.has_value());
  CHECK((*v)[0] == doctest::Approx(0.5));
  CHECK((*v)[1] == doctest::Approx(0.25));
  CHECK((*v)[3] == 0.0);
  CHECK(v->valid());
}

TEST_CASE("normalize keeps an already normalized vector") {
  auto v = dmm::normalize_demographics({0.7, 0.1, 0.1, 0.1});
  REQUIRE(v.has_value());
  CHECK((*v)[0] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("mass below one half is unusable") {
  CHECK_FALSE(dmm::normalize_demographics({0.1, 0.1, 0.1, 0.1}).has_value());
  CHECK_FALSE(dmm::normalize_demographics({0.0, 0.0, 0.0, 0.0}).has_value());
  // boundary: exactly 0.5 passes
  CHECK(dmm::normalize_demographics({0.5, 0.0, 0.0, 0.0}).has_value());
}

TEST_CASE("negative or non-finite components are input errors") {
  CHECK_THROWS_AS((void)dmm::normalize_demographics({-0.1, 0.5, 0.3, 0.3}), dmm::input_error);
  double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((void)dmm::normalize_demographics({nan, 0.5, 0.3, 0.3}), dmm::input_error);
  double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)dmm::normalize_demographics({inf, 0.5, 0.3, 0.3}), dmm::input_error);
}

TEST_CASE("user prior is the plain average of message vectors") {
  // (0.2,0.8,0,0) and (0.6,0.4,0,0) average to (0.4,0.6,0,0)
  std::vector<dmm::DemographicVector> msgs = {demo(0.2, 0.8, 0, 0), demo(0.6, 0.4, 0, 0)};
  auto prior = dmm::user_prior(msgs);
  CHECK(prior[0] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(prior[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(prior[2] == 0.0);
  CHECK(prior[3] == 0.0);
}

TEST_CASE("user prior of identical vectors is that vector") {
  std::vector<dmm::DemographicVector> msgs(5, demo(0.1, 0.2, 0.3, 0.4));
  auto prior = dmm::user_prior(msgs);
  for (int k = 0; k < 4; k++) CHECK(prior[k] == doctest::Approx(msgs[0][k]).epsilon(1e-15));
}

TEST_CASE("valid rejects off-simplex vectors") {
  CHECK_FALSE(demo(0.5, 0.2, 0.1, 0.1).valid());
  CHECK_FALSE(demo(-0.1, 0.5, 0.3, 0.3).valid());
  CHECK(demo(0.25, 0.25, 0.25, 0.25).valid());
}

}  // TEST_SUITE
