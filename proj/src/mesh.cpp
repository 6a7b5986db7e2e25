#include "slsolver/mesh.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace sl {

namespace {

constexpr double kPi = std::numbers::pi;

IntervalData build_interval(const SLProblem& problem, double x_left, double h, int nu,
                            long* nfev) {
  IntervalData iv = interval_coefficients(problem.q, x_left, h, nu);
  *nfev += nu;
  if (problem.form == ProblemForm::general) {
    const double mid = x_left + 0.5 * h;
    iv.pbar = problem.p(mid);
    iv.wbar = problem.w(mid);
    if (!(iv.pbar > 0.0) || !(iv.wbar > 0.0))
      throw std::runtime_error("p and w must be positive (at x = " + std::to_string(mid) + ")");
  }
  return iv;
}

int pick_match_index(const Mesh& mesh) {
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
  if (mesh.problem.kind_a == EndpointKind::truncated_singular) {
    const int floor_idx = (mesh.n() + 3) / 4;  // keep the match away from the singular end
    if (best < floor_idx) best = floor_idx;
  }
  return best;
}

void check_method_form(const SLProblem& problem, Method method) {
  if (method.is_modified() && problem.form != ProblemForm::schroedinger)
    throw std::invalid_argument("modified integrators require Schroedinger form");
}

}  // namespace

double Mesh::point(int i) const {
  if (i <= 0) return problem.a;
  if (i >= n()) return intervals.back().x_right();
  return intervals[static_cast<std::size_t>(i)].x_left;
}

Mesh uniform_mesh(const SLProblem& problem, int n, Method method) {
  problem.validate();
  check_method_form(problem, method);
  if (n < 1) throw std::invalid_argument("uniform_mesh: n must be >= 1");
  Mesh mesh;
  mesh.problem = problem;
  mesh.method = method;
  mesh.tol = 0.0;
  const double h = (problem.b - problem.a) / n;
  mesh.intervals.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    mesh.intervals.push_back(
        build_interval(problem, problem.a + i * h, h, method.nu, &mesh.nfev));
  mesh.match_index = pick_match_index(mesh);
  return mesh;
}

ErrorEstimate local_error_estimate(const IntervalData& iv, std::span<const double> trial_Z) {
  if (iv.nu != 4) throw std::invalid_argument("local_error_estimate: needs nu = 4");
  const std::array<double, 3> q3only{0.0, 0.0, iv.Qhat[2]};
  double eps = 0.0;
  for (double Z : trial_Z) {
    // univariate matrix with the Qhat3 terms alone
    IntervalData probe = iv;
    probe.Qhat = q3only;
    probe.qbar = 0.0;
    const Mat2 m = univariate_integral(probe, -Z / (iv.h * iv.h));
    eps = std::max(eps, m.max_abs());
  }
  return {eps};
}

ErrorEstimate local_error_estimate(const IntervalData& iv) {
  static const double trial[3] = {0.0, -kPi * kPi, -4.0 * kPi * kPi};
  return local_error_estimate(iv, trial);
}

Mesh adaptive_mesh(const SLProblem& problem, double tol, Method method) {
  problem.validate();
  check_method_form(problem, method);
  if (method.order != 8)
    throw std::invalid_argument("adaptive_mesh: stepsize selection is defined for order-8 methods");
  if (!(tol > 0.0)) throw std::invalid_argument("adaptive_mesh: tol must be positive");

  Mesh mesh;
  mesh.problem = problem;
  mesh.method = method;
  mesh.tol = tol;

  const double span = problem.b - problem.a;
  const double h_max = span / 10.0;
  const double h_min = 1e-10 * span;
  double x = problem.a;
  double h = span / 100.0;
  bool grow_next = false;

  while (x < problem.b - 1e-14 * span) {
    if (grow_next) h = std::min(2.0 * h, h_max);
    grow_next = false;
    h = std::min({h, h_max, problem.b - x});
    bool accepted = false;
    for (int retry = 0; retry <= 50; ++retry) {
      if (h < h_min)
        throw std::runtime_error("adaptive_mesh: tolerance not representable (h underflow)");
      IntervalData iv = build_interval(problem, x, h, method.nu, &mesh.nfev);
      const double eps = local_error_estimate(iv).eps;
      if (eps == 0.0) {
        mesh.intervals.push_back(std::move(iv));
        grow_next = true;  // nothing resolved here; let the step grow
        accepted = true;
        break;
      }
      const double h_bar = h * std::pow(tol / eps, 1.0 / 8.0);
      // accept also when the step wants to grow but is clamped by h_max or b
      const bool clamped = h >= std::min(h_max, problem.b - x) * (1.0 - 1e-14);
      if (std::abs(h_bar / h - 1.0) <= 0.1 || (clamped && h_bar >= h)) {
        mesh.intervals.push_back(std::move(iv));
        accepted = true;
        break;
      }
      h = std::min({h_bar, h_max, problem.b - x});
    }
    if (!accepted)
      throw std::runtime_error("adaptive_mesh: stepsize iteration failed to settle (pathological q?)");
    x = mesh.intervals.back().x_right();
    h = mesh.intervals.back().h;
  }
  // clamp the final breakpoint onto b exactly
  if (!mesh.intervals.empty()) {
    IntervalData& last = mesh.intervals.back();
    const double drift = problem.b - last.x_right();
    if (drift != 0.0 && std::abs(drift) < 1e-9 * span) {
      last = build_interval(problem, last.x_left, problem.b - last.x_left, method.nu, &mesh.nfev);
    }
  }
  mesh.match_index = pick_match_index(mesh);
  return mesh;
}

void dump_mesh(const Mesh& mesh, std::ostream& os) {
  os << "# index\tx_left\th\tqbar\tQhat1\tQhat2\tQhat3\n";
  char line[256];
  for (int i = 0; i < mesh.n(); ++i) {
    const IntervalData& iv = mesh.intervals[static_cast<std::size_t>(i)];
    std::snprintf(line, sizeof line, "%d\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\n", i,
                  iv.x_left, iv.h, iv.qbar, iv.Qhat[0], iv.Qhat[1], iv.Qhat[2]);
    os << line;
  }
}

}  // namespace sl
