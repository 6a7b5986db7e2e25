#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "slsolver/specfun.hpp"
#include "test_util.hpp"

using sl::eta0;
using sl::expm_tracefree;
using sl::Mat2;
using sl::xi;

namespace {
constexpr double kPi = std::numbers::pi;

// independent truncated power series, 14 terms
double xi_series(double Z) {
  double term = 1.0, sum = 1.0;
  for (int n = 1; n <= 30; ++n) {
    term *= Z / ((2.0 * n - 1.0) * (2.0 * n));
    sum += term;
  }
  return sum;
}

double eta0_series(double Z) {
  double term = 1.0, sum = 1.0;
  for (int n = 1; n <= 30; ++n) {
    term *= Z / ((2.0 * n) * (2.0 * n + 1.0));
    sum += term;
  }
  return sum;
}
}  // namespace

TEST_CASE("xi landmark values") {
  CHECK(xi(0.0) == 1.0);
  CHECK(xi(-kPi * kPi) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(xi(1.0) == doctest::Approx(xi_series(1.0)).epsilon(1e-15));
  CHECK(xi(1.0) == doctest::Approx(1.5430806348152437).epsilon(1e-15));
}

TEST_CASE("eta0 landmark values") {
  CHECK(eta0(0.0) == 1.0);
  CHECK(std::abs(eta0(-kPi * kPi)) < 1e-15);
  CHECK(eta0(-kPi * kPi / 4.0) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
  CHECK(eta0(1.0) == doctest::Approx(eta0_series(1.0)).epsilon(1e-15));
}

TEST_CASE("closed forms agree with the series on |Z| in [1e-4, 1]") {
  // establishes that switching branches anywhere in this band is safe
  for (int i = 0; i <= 200; ++i) {
    const double mag = std::pow(10.0, -4.0 + 4.0 * i / 200.0);
    for (double Z : {mag, -mag}) {
      const double xc = Z > 0 ? std::cosh(std::sqrt(Z)) : std::cos(std::sqrt(-Z));
      const double r = std::sqrt(std::abs(Z));
      const double ec = Z > 0 ? std::sinh(r) / r : std::sin(r) / r;
      CHECK(xc == doctest::Approx(xi_series(Z)).epsilon(1e-13));
      CHECK(ec == doctest::Approx(eta0_series(Z)).epsilon(1e-13));
      CHECK(xi(Z) == doctest::Approx(xi_series(Z)).epsilon(1e-13));
      CHECK(eta0(Z) == doctest::Approx(eta0_series(Z)).epsilon(1e-13));
    }
  }
}

TEST_CASE("xi^2 - Z eta0^2 = 1 over the representable range") {
  // log-uniform |Z|; positive side capped where cosh(sqrt(Z)) still fits
  // in a double (sqrt(Z) < 700)
  auto gen = testutil::rng(1);
  std::uniform_real_distribution<double> expo(-6.0, 6.0);
  std::bernoulli_distribution sign(0.5);
  int checked = 0;
  for (int i = 0; i < 4000; ++i) {
    double Z = std::pow(10.0, expo(gen));
    if (sign(gen)) Z = -Z;
    if (Z > 4.9e5) continue;
    const double x = xi(Z), e = eta0(Z);
    if (Z > 1.2e5) {
      // x^2 overflows a double here; same identity in ratio form
      CHECK(std::abs(x / (std::sqrt(Z) * e) - 1.0) <= 1e-12);
    } else {
      const double lhs = x * x - Z * e * e;
      const double scale = std::max(1.0, x * x);
      CHECK(std::abs(lhs - 1.0) / scale <= 1e-12);
    }
    ++checked;
  }
  CHECK(checked > 3000);
}

TEST_CASE("xi_m1_over_z matches its definition and limit") {
  CHECK(sl::xi_m1_over_z(0.0) == 0.5);
  for (double Z : {-30.0, -1.0, -0.05, 0.05, 1.0, 30.0}) {
    CHECK(sl::xi_m1_over_z(Z) ==
          doctest::Approx((xi_series(Z) - 1.0) / Z).epsilon(1e-13));
  }
}

TEST_CASE("expm_tracefree landmark generators") {
  SUBCASE("nilpotent") {
    const Mat2 m = expm_tracefree(0.0, 0.7, 0.0);
    CHECK(m.m11 == 1.0);
    CHECK(m.m12 == 0.7);
    CHECK(m.m21 == 0.0);
    CHECK(m.m22 == 1.0);
  }
  SUBCASE("rotation vs series oracle") {
    const Mat2 m = expm_tracefree(0.0, 1.0, -1.0);
    const Mat2 ref = testutil::expm_series({0.0, 1.0, -1.0, 0.0});
    CHECK(m.m11 == doctest::Approx(ref.m11).epsilon(1e-14));
    CHECK(m.m12 == doctest::Approx(ref.m12).epsilon(1e-14));
    CHECK(m.m21 == doctest::Approx(ref.m21).epsilon(1e-14));
    CHECK(m.m22 == doctest::Approx(ref.m22).epsilon(1e-14));
    CHECK(m.m11 == doctest::Approx(std::cos(1.0)).epsilon(1e-15));
    CHECK(m.m12 == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
  }
  SUBCASE("diagonal") {
    const Mat2 m = expm_tracefree(1.0, 0.0, 0.0);
    CHECK(m.m11 == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(m.m22 == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(m.m12 == 0.0);
    CHECK(m.m21 == 0.0);
  }
  SUBCASE("identity at zero, exactly") {
    const Mat2 m = expm_tracefree(0.0, 0.0, 0.0);
    CHECK(m.m11 == 1.0);
    CHECK(m.m12 == 0.0);
    CHECK(m.m21 == 0.0);
    CHECK(m.m22 == 1.0);
  }
}

TEST_CASE("expm_tracefree has unit determinant") {
  auto gen = testutil::rng(2);
  std::uniform_real_distribution<double> box(-1e3, 1e3);
  int checked = 0;
  while (checked < 1000) {
    const double a = box(gen), b = box(gen), c = box(gen);
    if (a * a + b * c > 1.2e5) continue;  // keep det computable in double
    const Mat2 m = expm_tracefree(a, b, c);
    const double scale = std::max(1.0, m.max_abs() * m.max_abs());
    CHECK(std::abs(m.det() - 1.0) / scale <= 1e-12);
    ++checked;
  }
}
