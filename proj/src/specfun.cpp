#include "slsolver/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace sl {

double Mat2::max_abs() const {
  return std::max(std::max(std::abs(m11), std::abs(m12)),
                  std::max(std::abs(m21), std::abs(m22)));
}

namespace {

// 10-term Horner evaluation of sum Z^n / (2n + k)!; tail < 1e-28 at |Z| = 0.1.
double series_even(double Z) {  // k = 0: xi
  double s = 1.0 / 355687428096000.0;  // 1/18!
  const double inv[] = {1.0 / 20922789888000.0, 1.0 / 87178291200.0,
                        1.0 / 479001600.0, 1.0 / 3628800.0, 1.0 / 40320.0,
                        1.0 / 720.0, 1.0 / 24.0, 1.0 / 2.0, 1.0};
  for (double c : inv) s = s * Z + c;
  return s;
}

double series_odd(double Z) {  // k = 1: eta0
  double s = 1.0 / 6402373705728000.0;  // 1/19!
  const double inv[] = {1.0 / 355687428096000.0, 1.0 / 1307674368000.0,
                        1.0 / 6227020800.0, 1.0 / 39916800.0, 1.0 / 362880.0,
                        1.0 / 5040.0, 1.0 / 120.0, 1.0 / 6.0, 1.0};
  for (double c : inv) s = s * Z + c;
  return s;
}

double series_even2(double Z) {  // k = 2: (xi - 1)/Z
  double s = 1.0 / 121645100408832000.0;  // 1/20!
  const double inv[] = {1.0 / 6402373705728000.0, 1.0 / 20922789888000.0,
                        1.0 / 87178291200.0, 1.0 / 479001600.0, 1.0 / 3628800.0,
                        1.0 / 40320.0, 1.0 / 720.0, 1.0 / 24.0, 1.0 / 2.0};
  for (double c : inv) s = s * Z + c;
  return s;
}

constexpr double kSeriesCut = 0.1;

}  // namespace

double xi(double Z) {
  if (std::abs(Z) < kSeriesCut) return series_even(Z);
  return Z > 0 ? std::cosh(std::sqrt(Z)) : std::cos(std::sqrt(-Z));
}

double eta0(double Z) {
  if (std::abs(Z) < kSeriesCut) return series_odd(Z);
  const double r = std::sqrt(std::abs(Z));
  return Z > 0 ? std::sinh(r) / r : std::sin(r) / r;
}

double xi_m1_over_z(double Z) {
  if (std::abs(Z) < kSeriesCut) return series_even2(Z);
  return (xi(Z) - 1.0) / Z;
}

Mat2 expm_tracefree(double a, double b, double c) {
  const double w = a * a + b * c;
  const double x = xi(w);
  const double e = eta0(w);
  return {x + a * e, b * e, c * e, x - a * e};
}

}  // namespace sl
