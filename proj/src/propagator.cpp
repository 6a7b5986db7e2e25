#include "slsolver/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace sl {

namespace {
#include "filon_kernels.inc"

// Replace the closed forms by their truncated series below this |Z|;
// the 1/Z^4 tails cancel catastrophically near Z = 0.
constexpr double kSmallZ = 0.5;

struct UniTerms {
  double n11, n12, n21;  // x h, x h^2, x 1
};

UniTerms uni_terms(double Z, const std::array<double, 3>& Q) {
  if (std::abs(Z) < kSmallZ) {
    return {filon_n11_series(Z, Q[0], Q[1], Q[2]),
            filon_n12_series(Z, Q[0], Q[1], Q[2]),
            filon_n21_series(Z, Q[0], Q[1], Q[2])};
  }
  const double ZI = 1.0 / Z;
  const double xh = xi(4.0 * Z);
  const double eh = eta0(4.0 * Z);
  return {filon_n11_closed(ZI, xh, eh, Q[0], Q[1], Q[2]),
          filon_n12_closed(ZI, xh, eh, Q[0], Q[1], Q[2]),
          filon_n21_closed(ZI, xh, eh, Q[0], Q[1], Q[2])};
}

struct DblTerms {
  double s11, s12, s21;  // x h^2, x h^3, x h
};

DblTerms dbl_terms(double Z, const std::array<double, 3>& Q) {
  const double Q11 = Q[0] * Q[0], Q12 = Q[0] * Q[1], Q13 = Q[0] * Q[2];
  const double Q22 = Q[1] * Q[1], Q23 = Q[1] * Q[2], Q33 = Q[2] * Q[2];
  if (std::abs(Z) < kSmallZ) {
    return {filon_s11_series(Z, Q11, Q12, Q13, Q22, Q23, Q33),
            filon_s12_series(Z, Q11, Q12, Q13, Q22, Q23, Q33),
            filon_s21_series(Z, Q11, Q12, Q13, Q22, Q23, Q33)};
  }
  const double ZI = 1.0 / Z;
  const double xh = xi(4.0 * Z);
  const double eh = eta0(4.0 * Z);
  return {filon_s11_closed(ZI, xh, eh, Q11, Q12, Q13, Q22, Q23, Q33),
          filon_s12_closed(ZI, xh, eh, Q11, Q12, Q13, Q22, Q23, Q33),
          filon_s21_closed(ZI, xh, eh, Q11, Q12, Q13, Q22, Q23, Q33)};
}

Mat2 uni_matrix(double h, double Z, const std::array<double, 3>& Q) {
  const UniTerms t = uni_terms(Z, Q);
  return {h * t.n11, h * h * t.n12, t.n21, -h * t.n11};
}

Mat2 dbl_magnus_matrix(double h, double Z, const std::array<double, 3>& Q) {
  const DblTerms t = dbl_terms(Z, Q);
  return {h * h * t.s11, h * h * h * t.s12, h * t.s21, -h * h * t.s11};
}

void require_schroedinger(const IntervalData& iv) {
  if (iv.pbar != 1.0 || iv.wbar != 1.0)
    throw std::invalid_argument("modified integrators require Schroedinger form (p = w = 1)");
}

}  // namespace

Method Method::make(MethodKind kind) {
  switch (kind) {
    case MethodKind::pruess2: return {kind, 2, 1};
    case MethodKind::neumann4: return {kind, 4, 2};
    case MethodKind::magnus4: return {kind, 4, 2};
    case MethodKind::neumann8: return {kind, 8, 4};
    case MethodKind::magnus8: return {kind, 8, 4};
  }
  throw std::invalid_argument("bad method kind");
}

Method Method::parse(const std::string& name) {
  if (name == "pruess2") return make(MethodKind::pruess2);
  if (name == "neumann4") return make(MethodKind::neumann4);
  if (name == "neumann8") return make(MethodKind::neumann8);
  if (name == "magnus4") return make(MethodKind::magnus4);
  if (name == "magnus8") return make(MethodKind::magnus8);
  throw std::invalid_argument("unknown method '" + name + "'");
}

const char* Method::name() const {
  switch (kind) {
    case MethodKind::pruess2: return "pruess2";
    case MethodKind::neumann4: return "neumann4";
    case MethodKind::neumann8: return "neumann8";
    case MethodKind::magnus4: return "magnus4";
    case MethodKind::magnus8: return "magnus8";
  }
  return "?";
}

const std::vector<std::pair<double, double>>& gauss_legendre01(int n) {
  static const auto tables = [] {
    std::array<std::vector<std::pair<double, double>>, 3> t;
    for (int idx = 0; idx < 3; ++idx) {
      const int m = idx == 0 ? 1 : (idx == 1 ? 2 : 4);
      std::vector<std::pair<double, double>> nw(m);
      for (int i = 0; i < m; ++i) {
        // Newton on P_m over [-1, 1] from the Chebyshev-type initial guess.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
          double p0 = 1.0, p1 = 0.0;
          for (int j = 0; j < m; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
          }
          pp = m * (z * p0 - p1) / (z * z - 1.0);
          const double dz = p0 / pp;
          z -= dz;
          if (std::abs(dz) < 1e-15) break;
        }
        nw[i] = {0.5 * (1.0 - z), 1.0 / ((1.0 - z * z) * pp * pp)};
      }
      if (m == 1) nw[0] = {0.5, 1.0};
      t[static_cast<std::size_t>(idx)] = std::move(nw);
    }
    return t;
  }();
  switch (n) {
    case 1: return tables[0];
    case 2: return tables[1];
    case 4: return tables[2];
    default: throw std::invalid_argument("gauss_legendre01: n must be 1, 2 or 4");
  }
}

double shifted_legendre(int s, double t) {
  switch (s) {
    case 0: return 1.0;
    case 1: return 2.0 * t - 1.0;
    case 2: return (6.0 * t - 6.0) * t + 1.0;
    case 3: return ((20.0 * t - 30.0) * t + 12.0) * t - 1.0;
    default: throw std::invalid_argument("shifted_legendre: s must be <= 3");
  }
}

double IntervalData::model_q(double delta) const {
  const double t = delta / h;
  double v = qbar;
  for (int s = 1; s < nu; ++s) v += Qhat[static_cast<std::size_t>(s - 1)] / h * shifted_legendre(s, t);
  return v;
}

IntervalData interval_coefficients(const CoefficientFn& q, double x_left, double h, int nu) {
  if (!(h > 0.0)) throw std::invalid_argument("interval_coefficients: h must be positive");
  if (nu != 1 && nu != 2 && nu != 4)
    throw std::invalid_argument("interval_coefficients: nu must be 1, 2 or 4");
  IntervalData iv;
  iv.x_left = x_left;
  iv.h = h;
  iv.nu = nu;
  iv.q = q;
  const auto& nodes = gauss_legendre01(nu);
  iv.node_values.reserve(static_cast<std::size_t>(nu));
  for (const auto& [c, w] : nodes) {
    const double x = x_left + c * h;
    const double v = q(x);
    if (!std::isfinite(v))
      throw std::runtime_error("coefficient evaluation returned non-finite value at x = " +
                               std::to_string(x));
    iv.node_values.push_back(v);
  }
  double qbar = 0.0;
  for (int l = 0; l < nu; ++l) qbar += nodes[static_cast<std::size_t>(l)].second * iv.node_values[static_cast<std::size_t>(l)];
  iv.qbar = qbar;
  for (int s = 1; s < nu; ++s) {
    double acc = 0.0;
    for (int l = 0; l < nu; ++l)
      acc += nodes[static_cast<std::size_t>(l)].second * iv.node_values[static_cast<std::size_t>(l)] *
             shifted_legendre(s, nodes[static_cast<std::size_t>(l)].first);
    iv.Qhat[static_cast<std::size_t>(s - 1)] = h * (2.0 * s + 1.0) * acc;
  }
  return iv;
}

std::pair<IntervalData, IntervalData> split_interval(const IntervalData& iv) {
  auto model = [&iv](double x) { return iv.model_q(x - iv.x_left); };
  IntervalData left = interval_coefficients(model, iv.x_left, iv.h / 2.0, iv.nu);
  IntervalData right = interval_coefficients(model, iv.x_left + iv.h / 2.0, iv.h / 2.0, iv.nu);
  left.q = iv.q;
  right.q = iv.q;
  left.pbar = right.pbar = iv.pbar;
  left.wbar = right.wbar = iv.wbar;
  return {std::move(left), std::move(right)};
}

Mat2 pruess_step(const IntervalData& iv, double lambda, Direction dir) {
  const double Z = iv.Z(lambda);
  const double x = xi(Z);
  const double e = eta0(Z);
  const double hh = dir == Direction::forward ? iv.h : -iv.h;
  // exp of [[0, 1/p],[q - lambda w, 0]] h acting on (y, p y'); the p-free
  // form of the same matrix propagates (y, y').
  return {x, hh * e / iv.pbar, Z * e * iv.pbar / hh, x};
}

Mat2 modified_B_entries(const IntervalData& iv, double lambda, double delta) {
  if (delta < 0.0 || delta > iv.h)
    throw std::invalid_argument("modified_B_entries: delta outside [0, h]");
  const double dq = iv.qbar - iv.q(iv.x_left + delta);
  const double Z2d = 4.0 * (iv.qbar - lambda) * delta * delta;
  const double s = delta * eta0(Z2d);
  const double b12 = 2.0 * delta * delta * xi_m1_over_z(Z2d);
  const double b21 = -0.5 * (1.0 + xi(Z2d));
  return {dq * s, dq * b12, dq * b21, -dq * s};
}

Mat2 univariate_integral(const IntervalData& iv, double lambda) {
  if (iv.nu != 2 && iv.nu != 4)
    throw std::invalid_argument("univariate_integral: needs nu = 2 or 4");
  return uni_matrix(iv.h, iv.Z(lambda), iv.Qhat);
}

Mat2 magnus_sigma2(const IntervalData& iv, double lambda) {
  if (iv.nu != 4) throw std::invalid_argument("magnus_sigma2: needs nu = 4");
  return dbl_magnus_matrix(iv.h, iv.Z(lambda), iv.Qhat);
}

Mat2 neumann_double_integral(const IntervalData& iv, double lambda) {
  // Ordered product = antisymmetric part (= sigma2) + symmetric part;
  // the symmetric part is N1^2/2 = -det(N1)/2 * I by Cayley-Hamilton.
  const Mat2 n1 = univariate_integral(iv, lambda);
  Mat2 out = magnus_sigma2(iv, lambda);
  const double half_sym = -0.5 * n1.det();
  out.m11 += half_sym;
  out.m22 += half_sym;
  return out;
}

namespace {

// The Neumann/Magnus corrections are perturbation-series terms; far outside
// their convergence regime (leading intervals of truncated singular
// problems, where the fitted polynomial swings by ~1/epsilon^2) they carry
// no valid digits. Fall back to the bare reference step there.
constexpr double kCorrectionGuard = 1e3;

}  // namespace

Mat2 correction_factor(const Method& method, const IntervalData& iv, double lambda,
                       Direction dir) {
  if (method.is_modified()) require_schroedinger(iv);
  const double sgn = dir == Direction::forward ? 1.0 : -1.0;
  switch (method.kind) {
    case MethodKind::pruess2: return Mat2::identity();
    case MethodKind::neumann4:
    case MethodKind::neumann8: {
      Mat2 c = Mat2::identity() + univariate_integral(iv, lambda);
      if (method.kind == MethodKind::neumann8) c = c + neumann_double_integral(iv, lambda);
      if (c.max_abs() > kCorrectionGuard) return Mat2::identity();
      if (dir == Direction::forward) return c;
      return c.adjugate() * (1.0 / c.det());
    }
    case MethodKind::magnus4:
    case MethodKind::magnus8: {
      Mat2 s = univariate_integral(iv, lambda);
      if (method.kind == MethodKind::magnus8) s = s + magnus_sigma2(iv, lambda);
      if (s.max_abs() > kCorrectionGuard) return Mat2::identity();
      return expm_tracefree(sgn * s.m11, sgn * s.m12, sgn * s.m21);
    }
  }
  return Mat2::identity();
}

Mat2 step(const Method& method, const IntervalData& iv, double lambda, Direction dir) {
  if (method.is_modified()) {
    require_schroedinger(iv);
    if (iv.nu != method.nu) throw std::invalid_argument("interval nu does not match method");
  }
  if (dir == Direction::forward)
    return pruess_step(iv, lambda, dir) * correction_factor(method, iv, lambda, dir);
  return correction_factor(method, iv, lambda, dir) * pruess_step(iv, lambda, dir);
}

}  // namespace sl
