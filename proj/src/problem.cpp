#include "slsolver/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sl {

namespace {

constexpr double kPi = std::numbers::pi;

double get_param(const std::map<std::string, double>& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end())
    throw std::invalid_argument("builtin problem requires parameter '" + name + "'");
  return it->second;
}

double get_param_or(const std::map<std::string, double>& params, const std::string& name,
                    double fallback) {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

double woods_saxon_q(double x) {
  const double t = std::exp((x - 7.0) / 0.6);
  return -50.0 * (1.0 - 5.0 * t / (3.0 * (1.0 + t))) / (1.0 + t);
}

}  // namespace

void BoundaryCondition::validate() const {
  if (a1 == 0.0 && a2 == 0.0)
    throw std::invalid_argument("boundary condition: (a1, a2) must not both be zero");
  if (b1 == 0.0 && b2 == 0.0)
    throw std::invalid_argument("boundary condition: (b1, b2) must not both be zero");
}

void SLProblem::validate() const {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("problem interval must be finite with a < b");
  bc.validate();
  if (!q) throw std::invalid_argument("problem has no potential q");
  if (form == ProblemForm::general && (!p || !w))
    throw std::invalid_argument("general-form problem needs p and w coefficients");
}

SLProblem SLProblem::schroedinger(CoefficientFn q, double a, double b, BoundaryCondition bc) {
  SLProblem prob;
  prob.p = [](double) { return 1.0; };
  prob.w = [](double) { return 1.0; };
  prob.q = std::move(q);
  prob.a = a;
  prob.b = b;
  prob.bc = bc;
  prob.form = ProblemForm::schroedinger;
  prob.validate();
  return prob;
}

SLProblem builtin(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "coffey_evans") {
    const double beta = get_param(params, "beta");
    return SLProblem::schroedinger(
        [beta](double x) {
          const double s = std::sin(2.0 * x);
          return -2.0 * beta * std::cos(2.0 * x) + beta * beta * s * s;
        },
        -kPi / 2.0, kPi / 2.0, BoundaryCondition::dirichlet());
  }
  if (name == "woods_saxon") {
    return SLProblem::schroedinger(woods_saxon_q, 0.0, 15.0, BoundaryCondition::dirichlet());
  }
  if (name == "woods_saxon_singular") {
    const double l = get_param(params, "l");
    const double xmax = get_param_or(params, "xmax", 20.0);
    auto prob = SLProblem::schroedinger(
        [l](double x) { return l * (l + 1.0) / (x * x) + woods_saxon_q(x); }, 0.0, xmax,
        BoundaryCondition::dirichlet());
    prob.kind_a = EndpointKind::truncated_singular;
    return prob;
  }
  if (name == "constant") {
    const double c = get_param_or(params, "c", 0.0);
    return SLProblem::schroedinger([c](double) { return c; }, 0.0, kPi,
                                   BoundaryCondition::dirichlet());
  }
  if (name == "harmonic") {
    const double xmax = get_param_or(params, "xmax", 10.0);
    return SLProblem::schroedinger([](double x) { return x * x; }, -xmax, xmax,
                                   BoundaryCondition::dirichlet());
  }
  throw std::invalid_argument("unknown builtin problem '" + name + "'");
}

PruferAngles prufer_boundary_angles(const SLProblem& problem, double S_a, double S_b) {
  problem.bc.validate();
  if (!(S_a > 0.0) || !(S_b > 0.0))
    throw std::invalid_argument("Prufer scale values must be positive");
  PruferAngles out;
  const BoundaryCondition& bc = problem.bc;
  if (bc.a1 == 0.0) {
    out.alpha = kPi / 2.0;
  } else {
    out.alpha = std::atan(-S_a * bc.a2 / bc.a1);   // in (-pi/2, pi/2)
    if (out.alpha < 0.0) out.alpha += kPi;         // shift into [0, pi)
  }
  if (bc.b1 == 0.0) {
    out.beta = kPi / 2.0;
  } else {
    out.beta = std::atan(-S_b * bc.b2 / bc.b1);
    if (out.beta <= 0.0) out.beta += kPi;          // shift into (0, pi]
  }
  return out;
}

}  // namespace sl
