#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "dmm/rng.hpp"

using dmm::Rng;

TEST_SUITE("rng") {

TEST_CASE("same seed gives the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; i++) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; i++) same += a.next_u64() == b.next_u64();
  CHECK(same == 0);
}

TEST_CASE("next_double stays in [0,1)") {
  Rng rng(7);
  for (int i = 0; i < 100000; i++) {
    double x = rng.next_double();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("next_below covers the range without bias artifacts") {
  Rng rng(9);
  std::array<int, 7> counts{};
  for (int i = 0; i < 70000; i++) counts[rng.next_below(7)]++;
  for (int c : counts) {
    CHECK(c > 9000);
    CHECK(c < 11000);
  }
}

TEST_CASE("categorical respects zero weights and normalization") {
  Rng rng(11);
  double weights[4] = {0.0, 2.0, 0.0, 6.0};
  std::array<int, 4> counts{};
  const int n = 80000;
  for (int i = 0; i < n; i++) counts[rng.categorical(weights, 4)]++;
  CHECK(counts[0] == 0);
  CHECK(counts[2] == 0);
  double frac1 = static_cast<double>(counts[1]) / n;
  CHECK(frac1 == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("categorical with a single positive weight is deterministic") {
  Rng rng(3);
  double weights[3] = {0.0, 0.0, 1.5};
  for (int i = 0; i < 100; i++) CHECK(rng.categorical(weights, 3) == 2);
}

TEST_CASE("dirichlet samples live on the simplex") {
  Rng rng(5);
  double alpha[4] = {2.0, 0.5, 1.0, 3.0};
  double out[4];
  for (int i = 0; i < 200; i++) {
    rng.dirichlet(alpha, 4, out);
    double sum = 0;
    for (double v : out) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dirichlet zero component stays exactly zero") {
  Rng rng(6);
  double alpha[4] = {1.0, 0.0, 2.0, 0.0};
  double out[4];
  for (int i = 0; i < 50; i++) {
    rng.dirichlet(alpha, 4, out);
    CHECK(out[1] == 0.0);
    CHECK(out[3] == 0.0);
  }
}

TEST_CASE("dirichlet mean tracks the concentration") {
  Rng rng(8);
  double alpha[3] = {8.0, 1.0, 1.0};
  double out[3];
  double mean0 = 0;
  const int n = 20000;
  for (int i = 0; i < n; i++) {
    rng.dirichlet(alpha, 3, out);
    mean0 += out[0];
  }
  CHECK(mean0 / n == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("gamma moments match for small and large shapes") {
  Rng rng(13);
  for (double shape : {0.3, 1.0, 4.5}) {
    double sum = 0;
    const int n = 60000;
    for (int i = 0; i < n; i++) sum += rng.gamma(shape);
    CHECK(sum / n == doctest::Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("derive_seed separates streams") {
  CHECK(dmm::derive_seed(1, 2, 3) != dmm::derive_seed(1, 3, 2));
  CHECK(dmm::derive_seed(1, 0, 0) != dmm::derive_seed(2, 0, 0));
  CHECK(dmm::derive_seed(5, 1, 0) != dmm::derive_seed(5, 2, 0));
  Rng a(dmm::derive_seed(5, 1, 0)), b(dmm::derive_seed(5, 1, 0));
  CHECK(a.next_u64() == b.next_u64());
}

}  // TEST_SUITE
