#pragma once

namespace sl {

/// Real 2x2 matrix acting on the state (y, p y').
struct Mat2 {
  double m11 = 1.0, m12 = 0.0;
  double m21 = 0.0, m22 = 1.0;

  static Mat2 identity() { return {}; }

  double det() const { return m11 * m22 - m12 * m21; }
  double trace() const { return m11 + m22; }
  double max_abs() const;

  /// Inverse of a determinant-1 matrix (adjugate).
  Mat2 adjugate() const { return {m22, -m12, -m21, m11}; }

  Mat2 operator*(const Mat2& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }
  Mat2 operator+(const Mat2& o) const {
    return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22};
  }
  Mat2 operator*(double s) const { return {s * m11, s * m12, s * m21, s * m22}; }
};

/// xi(Z): cos(sqrt(-Z)) for Z <= 0, cosh(sqrt(Z)) for Z > 0.
/// Entire in Z (= sum Z^n/(2n)!); series branch below |Z| = 0.1.
double xi(double Z);

/// eta0(Z): sin(sqrt(-Z))/sqrt(-Z) for Z < 0, 1 at 0, sinh(sqrt(Z))/sqrt(Z)
/// for Z > 0 (= sum Z^n/(2n+1)!).
double eta0(double Z);

/// (xi(Z) - 1)/Z, extended by 1/2 at Z = 0 (= sum Z^n/(2n+2)!).
double xi_m1_over_z(double Z);

/// Exponential of the trace-free matrix [[a, b], [c, -a]]:
///   [[xi(w) + a eta0(w), b eta0(w)], [c eta0(w), xi(w) - a eta0(w)]]
/// with w = a^2 + b c. Determinant is 1 by construction.
Mat2 expm_tracefree(double a, double b, double c);

}  // namespace sl
