#pragma once

#include <vector>

#include "slsolver/shoot.hpp"

namespace sl {

/// Outcome of the truncated-singular iteration for one eigenvalue.
struct SingularReport {
  EigenResult result;
  int nbisec = 0;       // bisections of the leading interval
  double epsilon = 0.0;
  std::vector<double> history;  // successive lambda approximations
  int nint_initial = 0;         // intervals in the initial mesh
  long fevals = 0;              // coefficient evaluations, total
};

/// Solves a problem with a truncated singular left endpoint: adaptive mesh
/// on [epsilon, b] plus the leading interval [0, epsilon], which is then
/// repeatedly bisected (boundary condition stays at the original endpoint;
/// coefficients are only ever evaluated at interior Legendre nodes) until
/// two successive eigenvalue approximations agree within tol.
SingularReport solve_singular(const SLProblem& problem, int k, double epsilon, double tol,
                              Method method);

}  // namespace sl
