#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "slsolver/problem.hpp"
#include "slsolver/propagator.hpp"

namespace sl {

/// Local error estimate for a trial interval (Qhat3-driven, order-8 only).
struct ErrorEstimate {
  double eps = 0.0;
};

/// Lambda-independent mesh: ordered intervals tiling [a, b], a matching
/// point, and the method the interval data was built for. Immutable once
/// built; shared across all eigenvalue solves.
struct Mesh {
  std::vector<IntervalData> intervals;
  int match_index = 0;
  Method method;
  double tol = 0.0;  // construction tolerance; 0 for uniform
  SLProblem problem;
  long nfev = 0;  // coefficient evaluations during construction

  int n() const { return static_cast<int>(intervals.size()); }
  double a() const { return problem.a; }
  double b() const { return problem.b; }
  /// Mesh point x_i, 0 <= i <= n.
  double point(int i) const;
};

/// n equal intervals; match point nearest the interval midpoint.
Mesh uniform_mesh(const SLProblem& problem, int n, Method method);

/// Q-hat-3 contribution to the order-8 univariate closed forms, maximized
/// over the trial Z values (default {0, -pi^2, -4 pi^2}).
ErrorEstimate local_error_estimate(const IntervalData& iv, std::span<const double> trial_Z);
ErrorEstimate local_error_estimate(const IntervalData& iv);

/// Greedy stepsize selection: h_new = h (tol/eps)^{1/8}, accepted when
/// |h_new/h - 1| <= 0.1. Order-8 methods only.
Mesh adaptive_mesh(const SLProblem& problem, double tol, Method method);

/// Tab-separated dump: index, x_left, h, qbar, Qhat1..Qhat3 per interval.
void dump_mesh(const Mesh& mesh, std::ostream& os);

}  // namespace sl
