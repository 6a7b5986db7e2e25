#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "slsolver/mesh.hpp"
#include "slsolver/shoot.hpp"
#include "test_util.hpp"

using namespace sl;

namespace {

constexpr double kPi = std::numbers::pi;

const double kWsRef[14] = {-49.45778872808258, -48.14843042000639, -46.29075395446623,
                           -43.96831843181467, -41.23260777218090, -38.12278509672854,
                           -34.67231320569997, -30.91224748790910, -26.87344891605993,
                           -22.58860225769320, -18.09468828212811, -13.43686904026007,
                           -8.67608167074520,  -3.90823248120989};

// dense RK4 reference integration of theta' = S cos^2 + ((lambda - q)/S) sin^2
// with S = 1 (unscaled Prufer phase of the true problem)
double theta_ode_reference(const CoefficientFn& q, double a, double b, double lambda,
                           double theta0, int steps) {
  const double h = (b - a) / steps;
  double th = theta0;
  auto rhs = [&](double x, double t) {
    const double c = std::cos(t), s = std::sin(t);
    return c * c + (lambda - q(x)) * s * s;
  };
  double x = a;
  for (int i = 0; i < steps; ++i) {
    const double k1 = rhs(x, th);
    const double k2 = rhs(x + 0.5 * h, th + 0.5 * h * k1);
    const double k3 = rhs(x + 0.5 * h, th + 0.5 * h * k2);
    const double k4 = rhs(x + h, th + h * k3);
    th += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    x += h;
  }
  return th;
}

int sign_changes(const std::vector<FunctionSample>& ys) {
  int n = 0;
  double prev = 0.0;
  for (const FunctionSample& s : ys) {
    if (s.y != 0.0) {
      if (prev != 0.0 && (s.y < 0.0) != (prev < 0.0)) ++n;
      prev = s.y;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("phase propagation on the free particle") {
  const SLProblem z = builtin("constant", {{"c", 0.0}});
  Mesh mesh = uniform_mesh(z, 16, Method::parse("pruess2"));
  SUBCASE("lambda = 1: one half turn across [0, pi]") {
    mesh.match_index = mesh.n();
    const ShootState st = propagate_left(mesh, 1.0);
    CHECK(st.theta == doctest::Approx(kPi).epsilon(1e-12));
  }
  SUBCASE("lambda = 4: winding 2 pi, against the theta-ODE oracle") {
    mesh.match_index = mesh.n();
    const ShootState st = propagate_left(mesh, 4.0);
    const double ref = theta_ode_reference(z.q, 0.0, kPi, 4.0, 0.0, 20000);
    CHECK(st.theta == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(st.theta == doctest::Approx(ref).epsilon(1e-7));
  }
  SUBCASE("nonoscillatory regime stays within (0, pi)") {
    mesh.match_index = mesh.n();
    const ShootState st = propagate_left(mesh, -10.0);
    CHECK(st.theta > 0.0);
    CHECK(st.theta < kPi);
  }
  SUBCASE("right propagation mirrors the left") {
    mesh.match_index = 0;
    const ShootState st = propagate_right(mesh, 1.0);
    CHECK(st.theta == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("Neumann condition starts the right phase at pi/2") {
    SLProblem zn = z;
    zn.bc = BoundaryCondition::neumann();
    Mesh mn = uniform_mesh(zn, 8, Method::parse("pruess2"));
    mn.match_index = mn.n();
    const ShootState st = propagate_right(mn, 2.0);
    CHECK(st.theta == doctest::Approx(kPi / 2.0).epsilon(1e-14));
  }
}

TEST_CASE("mismatch function") {
  const SLProblem z = builtin("constant", {{"c", 0.0}});
  const Mesh mesh = uniform_mesh(z, 16, Method::parse("neumann8"));
  CHECK(std::abs(mismatch(mesh, 1.0)) <= 1e-12);
  CHECK(mismatch(mesh, 9.0) == doctest::Approx(2.0 * kPi).epsilon(1e-12));

  const Mesh ws = uniform_mesh(builtin("woods_saxon"), 64, Method::parse("neumann8"));
  CHECK(std::abs(mismatch(ws, kWsRef[0])) <= 1e-7);
}

TEST_CASE("mismatch is symmetric about reflected matching points") {
  const SLProblem ce = builtin("coffey_evans", {{"beta", 30.0}});
  Mesh mesh = uniform_mesh(ce, 64, Method::parse("neumann8"));
  for (double lambda : {100.0, 500.0}) {
    mesh.match_index = 32 - 5;
    const double a = mismatch(mesh, lambda);
    mesh.match_index = 32 + 5;
    const double b = mismatch(mesh, lambda);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("mismatch increases monotonically in lambda") {
  const Mesh ws = uniform_mesh(builtin("woods_saxon"), 64, Method::parse("neumann8"));
  double prev = -1e300;
  for (int i = 0; i < 50; ++i) {
    const double lam = (kWsRef[0] - 5.0) + i * (kWsRef[13] + 5.0 - kWsRef[0] + 5.0) / 49.0;
    const double f = mismatch(ws, lam);
    CHECK(f > prev);
    prev = f;
  }
}

TEST_CASE("eigenvalue solves") {
  SUBCASE("exactly solvable free particle") {
    const Mesh mesh = uniform_mesh(builtin("constant", {{"c", 0.0}}), 32, Method::parse("pruess2"));
    const EigenResult er = eigenvalue(mesh, 4, 1e-12);
    // pruess2 on the constant potential is exact for every mesh
    CHECK(er.lambda == doctest::Approx(25.0).epsilon(1e-11));
    CHECK(er.k == 4);
    CHECK(er.fevals == 0);
    CHECK(er.bracket.first <= er.lambda);
    CHECK(er.bracket.second >= er.lambda);
  }
  SUBCASE("coffey-evans lambda_1, neumann8 n=128") {
    const Mesh mesh =
        uniform_mesh(builtin("coffey_evans", {{"beta", 30.0}}), 128, Method::parse("neumann8"));
    const EigenResult er = eigenvalue(mesh, 1, 1e-13);
    CHECK(std::abs(er.lambda - 117.9463076620687587) <= 5e-8);
  }
  SUBCASE("woods-saxon lambda_9, magnus8 n=64") {
    const Mesh mesh = uniform_mesh(builtin("woods_saxon"), 64, Method::parse("magnus8"));
    const EigenResult er = eigenvalue(mesh, 9, 1e-13);
    CHECK(std::abs(er.lambda - kWsRef[9]) <= 2e-5);
  }
}

TEST_CASE("eigenvalue ranges") {
  SUBCASE("free particle 0..9") {
    const Mesh mesh = uniform_mesh(builtin("constant", {{"c", 0.0}}), 24, Method::parse("magnus4"));
    const auto rs = eigenvalue_range(mesh, 0, 9, 1e-12);
    REQUIRE(rs.size() == 10);
    for (int k = 0; k <= 9; ++k)
      CHECK(rs[static_cast<std::size_t>(k)].lambda ==
            doctest::Approx((k + 1.0) * (k + 1.0)).epsilon(1e-10));
  }
  SUBCASE("coffey-evans near-triplet resolved in order") {
    const Mesh mesh =
        uniform_mesh(builtin("coffey_evans", {{"beta", 30.0}}), 128, Method::parse("neumann8"));
    const auto rs = eigenvalue_range(mesh, 2, 4, 1e-13);
    const double refs[3] = {231.6649292371271088, 231.6649293129610125, 231.6649293887949167};
    REQUIRE(rs.size() == 3);
    CHECK(rs[0].lambda < rs[1].lambda);
    CHECK(rs[1].lambda < rs[2].lambda);
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(rs[static_cast<std::size_t>(i)].lambda - refs[i]) <= 1e-6);
  }
  SUBCASE("woods-saxon bound spectrum: 14 states in (-50, 0)") {
    const Mesh mesh = uniform_mesh(builtin("woods_saxon"), 64, Method::parse("neumann8"));
    const auto rs = eigenvalue_range(mesh, 0, 13, 1e-12);
    REQUIRE(rs.size() == 14);
    for (const EigenResult& r : rs) {
      CHECK(r.lambda > -50.0);
      CHECK(r.lambda < 0.0);
    }
  }
}

TEST_CASE("index consistency: phase residual and zero counts") {
  const Mesh mesh = uniform_mesh(builtin("woods_saxon"), 64, Method::parse("neumann8"));
  const auto rs = eigenvalue_range(mesh, 0, 13, 1e-12);
  for (int k = 0; k <= 13; ++k) {
    const EigenResult& r = rs[static_cast<std::size_t>(k)];
    CHECK(std::abs(mismatch(mesh, r.lambda) - k * kPi) <= 1e-6);
    const auto samples = eigenfunction_samples(mesh, r.lambda);
    CHECK(sign_changes(samples) == k);
  }
}

TEST_CASE("eigenfunction samples") {
  SUBCASE("free particle ground state is sin x") {
    const Mesh mesh = uniform_mesh(builtin("constant", {{"c", 0.0}}), 16, Method::parse("neumann8"));
    const auto samples = eigenfunction_samples(mesh, 1.0);
    REQUIRE(static_cast<int>(samples.size()) == mesh.n() + 1);
    // normalized so max |y| = 1; sin(x) already is
    double flip = 0.0;
    for (const auto& s : samples)
      if (std::abs(std::sin(s.x)) > 0.5 && flip == 0.0) flip = s.y / std::sin(s.x) < 0 ? -1.0 : 1.0;
    for (const auto& s : samples) CHECK(std::abs(flip * s.y - std::sin(s.x)) <= 1e-9);
  }
  SUBCASE("coffey-evans ground state is even") {
    const Mesh mesh =
        uniform_mesh(builtin("coffey_evans", {{"beta", 30.0}}), 128, Method::parse("neumann8"));
    const EigenResult er = eigenvalue(mesh, 0, 1e-12);
    const auto samples = eigenfunction_samples(mesh, er.lambda);
    const int n = mesh.n();
    for (int i = 0; i <= n; ++i) {
      const auto& a = samples[static_cast<std::size_t>(i)];
      const auto& b = samples[static_cast<std::size_t>(n - i)];
      CHECK(std::abs(a.y - b.y) <= 1e-6);
    }
  }
}

TEST_CASE("matching point independence") {
  const SLProblem ce = builtin("coffey_evans", {{"beta", 30.0}});
  Mesh mesh = uniform_mesh(ce, 128, Method::parse("neumann8"));
  const double tol = 1e-10;
  double lams[3];
  int idx = 0;
  for (int m : {32, 64, 96}) {
    mesh.match_index = m;
    lams[idx++] = eigenvalue(mesh, 20, tol).lambda;
  }
  CHECK(std::abs(lams[0] - lams[1]) <= 10.0 * tol * 952.0);
  CHECK(std::abs(lams[1] - lams[2]) <= 10.0 * tol * 952.0);
}

TEST_CASE("determinant-one propagation across the whole mesh") {
  const Mesh mesh = uniform_mesh(builtin("woods_saxon"), 64, Method::parse("magnus8"));
  const double lambda = -30.0;
  Mat2 acc = Mat2::identity();
  for (int i = 0; i < mesh.n(); ++i)
    acc = step(mesh.method, mesh.intervals[static_cast<std::size_t>(i)], lambda,
               Direction::forward) *
          acc;
  for (int i = mesh.n() - 1; i >= 0; --i)
    acc = step(mesh.method, mesh.intervals[static_cast<std::size_t>(i)], lambda,
               Direction::backward) *
          acc;
  CHECK(std::abs(acc.m11 - 1.0) <= 1e-10);
  CHECK(std::abs(acc.m22 - 1.0) <= 1e-10);
  CHECK(std::abs(acc.m12) <= 1e-10);
  CHECK(std::abs(acc.m21) <= 1e-10);
}

TEST_CASE("boundary coefficient scaling leaves eigenvalues unchanged") {
  SLProblem ws = builtin("woods_saxon");
  const double tol = 1e-11;
  const Mesh base = uniform_mesh(ws, 64, Method::parse("neumann8"));
  const double lam0 = eigenvalue(base, 3, tol).lambda;
  for (double c : {7.3, -2.0}) {
    SLProblem scaled = ws;
    scaled.bc.a1 *= c;
    scaled.bc.a2 *= c;
    const Mesh mesh = uniform_mesh(scaled, 64, Method::parse("neumann8"));
    CHECK(std::abs(eigenvalue(mesh, 3, tol).lambda - lam0) <= tol * 50.0);
  }
}

TEST_CASE("general-form problems through pruess2") {
  // -(p y')' = lambda w y with constant p, w: lambda_k = (p/w) (k+1)^2 on [0, pi]
  SLProblem gen;
  gen.p = [](double) { return 2.0; };
  gen.w = [](double) { return 3.0; };
  gen.q = [](double) { return 0.0; };
  gen.a = 0.0;
  gen.b = kPi;
  gen.bc = BoundaryCondition::dirichlet();
  gen.form = ProblemForm::general;
  const Mesh mesh = uniform_mesh(gen, 128, Method::parse("pruess2"));
  for (int k : {0, 1, 4}) {
    const EigenResult er = eigenvalue(mesh, k, 1e-12);
    CHECK(er.lambda == doctest::Approx(2.0 / 3.0 * (k + 1.0) * (k + 1.0)).epsilon(1e-10));
  }
}

TEST_CASE("bracket exhaustion is reported") {
  // index far beyond anything the operator can reach within 200 expansions
  const Mesh mesh = uniform_mesh(builtin("constant", {{"c", 0.0}}), 8, Method::parse("pruess2"));
  CHECK_THROWS_AS((void)eigenvalue(mesh, 100000000, 1e-10), SolveError);
}
