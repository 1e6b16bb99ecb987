#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "fdnc/mathcore.hpp"

using namespace fdnc;

namespace {

// Simpson quadrature of the standard normal density over [-12, a]; serves as
// an implementation-independent oracle for normal_cdf.
double cdf_by_quadrature(double a) {
  const double lo = -12.0;
  const int n = 40000;  // even
  const double h = (a - lo) / n;
  auto density = [](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
  };
  double acc = density(lo) + density(a);
  for (int i = 1; i < n; ++i) acc += density(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

double quantile_by_bisection(double p) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("mathcore") {

TEST_CASE("decibel conversions") {
  CHECK(db_to_linear(0.0) == doctest::Approx(1.0));
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(db_to_linear(-3.0) == doctest::Approx(0.501187233627));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
  CHECK(linear_to_db(db_to_linear(-61.34)) == doctest::Approx(-61.34));
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3));
  CHECK(dbm_to_watts(-94.0) == doctest::Approx(3.98107170553e-13));
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
}

TEST_CASE("normal cdf against quadrature oracle") {
  for (double a : {-2.0, -1.0, -0.25, 0.0, 0.5, 1.7, 3.0}) {
    CHECK(normal_cdf(a) == doctest::Approx(cdf_by_quadrature(a)).epsilon(1e-10));
  }
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  // interquartile points
  CHECK(normal_cdf(-0.6745) == doctest::Approx(0.25).epsilon(2e-4));
  CHECK(normal_cdf(0.6745) == doctest::Approx(0.75).epsilon(2e-4));
}

TEST_CASE("normal quantile fixed points and bisection oracle") {
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(inverse_normal_cdf(0.25) - (-0.6745)) < 1e-4);
  CHECK(std::abs(inverse_normal_cdf(0.75) - (+0.6745)) < 1e-4);
  for (double p : {0.01, 0.3, 0.62, 0.977, 0.9999}) {
    CHECK(inverse_normal_cdf(p) ==
          doctest::Approx(quantile_by_bisection(p)).epsilon(1e-9));
  }
}

TEST_CASE("normal quantile round trip") {
  for (double x = -6.0; x <= 6.0; x += 0.125) {
    CHECK(std::abs(inverse_normal_cdf(normal_cdf(x)) - x) < 1e-8);
  }
}

TEST_CASE("normal quantile domain") {
  CHECK_THROWS_AS((void)inverse_normal_cdf(0.0), std::domain_error);
  CHECK_THROWS_AS((void)inverse_normal_cdf(1.0), std::domain_error);
  CHECK_THROWS_AS((void)inverse_normal_cdf(-0.1), std::domain_error);
  CHECK_THROWS_AS((void)inverse_normal_cdf(1.5), std::domain_error);
  // extreme but valid inputs stay finite
  CHECK(std::isfinite(inverse_normal_cdf(1e-300)));
  CHECK(std::isfinite(inverse_normal_cdf(1.0 - 1e-16)));
}

TEST_CASE("seed mixing separates nearby keys") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = 0; b < 8; ++b) seen.insert(mix_seed(a, b));
  CHECK(seen.size() == 64);
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("stream determinism and independence") {
  RandomStream a(42, 7), b(42, 7), c(42, 8);
  bool diverged = false;
  for (int i = 0; i < 64; ++i) {
    double va = a.uniform01();
    CHECK(va == b.uniform01());
    if (va != c.uniform01()) diverged = true;
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  CHECK(diverged);
}

TEST_CASE("uniform range and sample moments") {
  RandomStream s(3, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double v = s.uniform(2.0, 5.0);
    CHECK(v >= 2.0);
    CHECK(v < 5.0);
    sum += v;
  }
  CHECK(sum / n == doctest::Approx(3.5).epsilon(2e-3));
}

TEST_CASE("complex gaussian moments") {
  RandomStream s(11, 5);
  const int n = 200000;
  Complex mean = 0.0;
  double power = 0.0;
  for (int i = 0; i < n; ++i) {
    Complex z = s.complex_gaussian(2.5);
    mean += z;
    power += std::norm(z);
  }
  mean /= double(n);
  CHECK(std::abs(mean) < 0.01);
  CHECK(power / n == doctest::Approx(2.5).epsilon(0.01));

  ComplexVec v = sample_complex_gaussian(s, 0.5, 4096);
  CHECK(v.size() == 4096);
  CHECK(v.squaredNorm() / 4096 == doctest::Approx(0.5).epsilon(0.05));
}

}  // TEST_SUITE
