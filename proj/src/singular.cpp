#include "slsolver/singular.hpp"

#include <cmath>
#include <stdexcept>

namespace sl {

namespace {

constexpr int kMaxBisections = 30;

// match point nearest the domain midpoint, forced >= n/4 away from the
// singular end
int match_index_for(const Mesh& mesh) {
  const double mid = 0.5 * (mesh.a() + mesh.b());
  int best = 0;
  double best_d = std::abs(mesh.point(0) - mid);
  for (int i = 1; i <= mesh.n(); ++i) {
    const double d = std::abs(mesh.point(i) - mid);
    if (d <= best_d) {
      best_d = d;
      best = i;
    }
  }
  return std::max(best, (mesh.n() + 3) / 4);
}

}  // namespace

SingularReport solve_singular(const SLProblem& problem, int k, double epsilon, double tol,
                              Method method) {
  problem.validate();
  if (problem.kind_a != EndpointKind::truncated_singular)
    throw std::invalid_argument("solve_singular: left endpoint must be truncated_singular");
  if (!(epsilon > 0.0) || epsilon >= problem.b - problem.a)
    throw std::invalid_argument("solve_singular: epsilon must lie in (0, b - a)");
  if (!(tol > 0.0)) throw std::invalid_argument("solve_singular: tol must be positive");

  // Stepsize selection runs on [epsilon, b] where q is smooth; the leading
  // interval [a, epsilon] only ever sees q at its interior Legendre nodes.
  SLProblem tail = problem;
  tail.a = problem.a + epsilon;
  tail.kind_a = EndpointKind::regular;
  Mesh mesh = adaptive_mesh(tail, tol, method);

  IntervalData lead = interval_coefficients(problem.q, problem.a, epsilon, method.nu);
  mesh.nfev += method.nu;
  mesh.intervals.insert(mesh.intervals.begin(), std::move(lead));
  mesh.problem = problem;  // boundary conditions apply at the original endpoint
  mesh.match_index = match_index_for(mesh);

  const double tol_lambda = 1e-12;
  SingularReport report;
  report.epsilon = epsilon;
  report.nint_initial = mesh.n();

  report.result = eigenvalue(mesh, k, tol_lambda);
  report.history.push_back(report.result.lambda);

  for (int bis = 1; bis <= kMaxBisections; ++bis) {
    // halve the implicit truncation offset: [0, e] -> [0, e/2] + [e/2, e]
    const IntervalData head = mesh.intervals.front();
    IntervalData lower = interval_coefficients(problem.q, head.x_left, head.h / 2.0, method.nu);
    IntervalData upper =
        interval_coefficients(problem.q, head.x_left + head.h / 2.0, head.h / 2.0, method.nu);
    mesh.nfev += 2 * method.nu;
    mesh.intervals.front() = std::move(lower);
    mesh.intervals.insert(mesh.intervals.begin() + 1, std::move(upper));
    ++mesh.match_index;

    const double prev = report.history.back();
    report.result = eigenvalue_near(mesh, k, tol_lambda, prev);
    report.history.push_back(report.result.lambda);
    report.nbisec = bis;
    if (std::abs(report.result.lambda - prev) <= tol * std::max(1.0, std::abs(prev))) {
      report.result.fevals = 0;
      report.fevals = mesh.nfev;
      return report;
    }
  }
  throw SolveError("solve_singular: no convergence after " + std::to_string(kMaxBisections) +
                   " bisections of the leading interval");
}

}  // namespace sl
