#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "slsolver/mesh.hpp"

namespace sl {

/// Numerical failure during shooting or root finding (bracket exhaustion,
/// non-monotone mismatch, correction overrotation, ...).
struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shooting state at a mesh point: unit-norm (y, p y'), the continuous
/// scaled Prufer phase theta, and the scaling S the phase refers to.
struct ShootState {
  double y = 0.0;
  double py = 0.0;
  double theta = 0.0;
  double scale = 1.0;
};

struct EigenResult {
  int k = 0;
  double lambda = 0.0;
  double residual = 0.0;  // |phi(lambda) - k pi|
  int iterations = 0;     // mismatch evaluations
  std::pair<double, double> bracket{0.0, 0.0};
  long fevals = 0;        // coefficient evaluations (0 after mesh build)
};

/// Left solution propagated from a to the matching point. The phase starts
/// at alpha and accumulates continuously: exact reference rotation
/// sqrt(-Z) in oscillatory intervals, principal atan2 increments otherwise,
/// with quadrant-preserving lifts at scale changes.
ShootState propagate_left(const Mesh& mesh, double lambda);

/// Right solution propagated from b down to the matching point (phase
/// starts at beta and decreases).
ShootState propagate_right(const Mesh& mesh, double lambda);

/// phi(lambda) = theta_L(x_m) - theta_R(x_m); phi(lambda_k) = k pi.
double mismatch(const Mesh& mesh, double lambda);

/// Solves phi(lambda) = k pi: expanding bracket, bisection, then secant.
EigenResult eigenvalue(const Mesh& mesh, int k, double tol_lambda = 1e-10);

/// Same, seeded with an initial guess (used by range solves and the
/// singular-endpoint iteration).
EigenResult eigenvalue_near(const Mesh& mesh, int k, double tol_lambda, double guess);

/// Eigenvalues k_lo..k_hi, each seeded from its neighbors.
std::vector<EigenResult> eigenvalue_range(const Mesh& mesh, int k_lo, int k_hi,
                                          double tol_lambda = 1e-10);

struct FunctionSample {
  double x = 0.0;
  double y = 0.0;
  double py = 0.0;
};

/// Eigenfunction samples at all mesh points; right segment rescaled to
/// match the left at x_m, then normalized so max |y| = 1.
std::vector<FunctionSample> eigenfunction_samples(const Mesh& mesh, double lambda);

}  // namespace sl
