#pragma once

#include <functional>
#include <map>
#include <string>

namespace sl {

using CoefficientFn = std::function<double(double)>;

/// Separated boundary conditions a1 y(a) + a2 (p y')(a) = 0,
/// b1 y(b) + b2 (p y')(b) = 0. Each pair must not be (0, 0).
struct BoundaryCondition {
  double a1 = 1.0, a2 = 0.0;
  double b1 = 1.0, b2 = 0.0;

  static BoundaryCondition dirichlet() { return {1.0, 0.0, 1.0, 0.0}; }
  static BoundaryCondition neumann() { return {0.0, 1.0, 0.0, 1.0}; }
  void validate() const;
};

enum class ProblemForm { schroedinger, general };
enum class EndpointKind { regular, truncated_singular };

/// -(p y')' + q y = lambda w y on (a, b). Schroedinger form means
/// p == w == 1; that form is required by all methods except pruess2.
struct SLProblem {
  CoefficientFn p;
  CoefficientFn q;
  CoefficientFn w;
  double a = 0.0;
  double b = 1.0;
  BoundaryCondition bc;
  ProblemForm form = ProblemForm::schroedinger;
  EndpointKind kind_a = EndpointKind::regular;
  EndpointKind kind_b = EndpointKind::regular;

  void validate() const;

  /// Schroedinger-form problem: y'' = (q - lambda) y.
  static SLProblem schroedinger(CoefficientFn q, double a, double b,
                                BoundaryCondition bc);
};

/// Prufer boundary angles, normalized to alpha in [0, pi), beta in (0, pi].
struct PruferAngles {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Built-in benchmark problems:
///   coffey_evans         beta (required)
///   woods_saxon          -
///   woods_saxon_singular l (required), xmax (default 20)
///   constant             c (default 0)
///   harmonic             xmax (default 10)
SLProblem builtin(const std::string& name,
                  const std::map<std::string, double>& params = {});

/// alpha solves tan(alpha) = -S_a a2/a1 in [0, pi) (pi/2 when a1 = 0);
/// beta solves tan(beta) = -S_b b2/b1 in (0, pi] (pi/2 when b1 = 0,
/// pi when b2 = 0).
PruferAngles prufer_boundary_angles(const SLProblem& problem, double S_a,
                                    double S_b);

}  // namespace sl
