#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "slsolver/problem.hpp"
#include "slsolver/specfun.hpp"

namespace sl {

enum class MethodKind { pruess2, neumann4, neumann8, magnus4, magnus8 };
enum class Direction { forward, backward };

/// Propagation method: the order-2 Pruess step, or a modified
/// Neumann/Magnus integrator of order 4 (nu = 2) or 8 (nu = 4).
struct Method {
  MethodKind kind = MethodKind::pruess2;
  int order = 2;
  int nu = 1;

  static Method make(MethodKind kind);
  static Method parse(const std::string& name);  // "pruess2", "neumann8", ...
  const char* name() const;
  bool is_modified() const { return kind != MethodKind::pruess2; }
};

/// One mesh interval with its precomputed coefficient data: the reference
/// value qbar and the scaled shifted-Legendre coefficients
/// Qhat[s-1] = h^{s+1} Q_s, s = 1..nu-1. All q evaluations happen here,
/// at the nu Gauss-Legendre nodes; shooting reuses this data for every
/// lambda.
struct IntervalData {
  double x_left = 0.0;
  double h = 0.0;
  double qbar = 0.0;
  std::array<double, 3> Qhat{0.0, 0.0, 0.0};
  int nu = 1;
  std::vector<double> node_values;
  double pbar = 1.0, wbar = 1.0;  // midpoint values, general-form Pruess only
  CoefficientFn q;                // original coefficient, absolute x

  double x_right() const { return x_left + h; }
  double Z(double lambda) const { return h * h * (qbar - lambda * wbar) / pbar; }
  /// The fitted polynomial qbar + sum_s Q_s h^s P*_s(delta/h).
  double model_q(double delta) const;
};

/// Gauss-Legendre nodes/weights on [0, 1], n in {1, 2, 4} (Newton-refined
/// Legendre roots, |residual| < 1e-15).
const std::vector<std::pair<double, double>>& gauss_legendre01(int n);

/// Shifted Legendre polynomial P*_s on [0, 1], s <= 3.
double shifted_legendre(int s, double t);

/// Projects q onto the interval basis with nu Gauss-Legendre evaluations.
IntervalData interval_coefficients(const CoefficientFn& q, double x_left, double h, int nu);

/// Splits an interval in half, re-projecting the fitted polynomial model;
/// performs no new q evaluations.
std::pair<IntervalData, IntervalData> split_interval(const IntervalData& iv);

/// Order-2 Pruess transfer matrix over the interval, acting on (y, p y').
/// Backward direction is the exact inverse (h -> -h).
Mat2 pruess_step(const IntervalData& iv, double lambda, Direction dir);

/// The modified-system matrix B(delta) = dq(delta) * kernel(delta) with
/// dq = qbar - q(x_left + delta); evaluates q once.
Mat2 modified_B_entries(const IntervalData& iv, double lambda, double delta);

/// Filon closed-form approximation of int_0^h B(delta) d(delta).
Mat2 univariate_integral(const IntervalData& iv, double lambda);

/// Second Magnus term sigma_2 = -1/2 * (double commutator integral).
Mat2 magnus_sigma2(const IntervalData& iv, double lambda);

/// Ordered Neumann double integral int_0^h int_0^d1 B(d1) B(d2).
Mat2 neumann_double_integral(const IntervalData& iv, double lambda);

/// The correction factor alone: I + N1 (+ N2) for Neumann, expm(sigma)
/// for Magnus, identity for pruess2. Backward returns its exact inverse.
Mat2 correction_factor(const Method& method, const IntervalData& iv, double lambda,
                       Direction dir);

/// Full per-interval transfer matrix for the given method.
Mat2 step(const Method& method, const IntervalData& iv, double lambda, Direction dir);

}  // namespace sl
