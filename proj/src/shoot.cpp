#include "slsolver/shoot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sl {

namespace {

constexpr double kPi = std::numbers::pi;

double principal(double a) { return std::remainder(a, 2.0 * kPi); }

double angle_of(double S, double y, double py) {
  return std::atan2(S * (y == 0.0 ? 0.0 : y), py);
}

double interval_scale(const IntervalData& iv, double lambda) {
  const double Z = iv.Z(lambda);
  if (Z < 0.0) return std::sqrt(iv.pbar * (lambda * iv.wbar - iv.qbar));
  return 1.0;
}

struct PhaseState {
  double y = 0.0, py = 1.0;
  double theta = 0.0;
  double scale = 1.0;
  double log_norm = 0.0;

  void renormalize() {
    const double n = std::hypot(y, py);
    if (n > 0.0 && std::isfinite(n)) {
      y /= n;
      py /= n;
      log_norm += std::log(n);
    }
    if (!std::isfinite(y) || !std::isfinite(py))
      throw SolveError("propagation produced a non-finite state");
  }

  // Positive scalings keep the state inside its quadrant, so the nearest
  // 2 pi branch is the continuous lift.
  void rescale_to(double S_new) {
    if (S_new == scale) return;
    const double raw = angle_of(S_new, y, py);
    theta = raw + 2.0 * kPi * std::round((theta - raw) / (2.0 * kPi));
    scale = S_new;
  }

  // Returns the principal phase increment of applying M in the current
  // scaling; the caller decides whether it is trustworthy.
  double apply(const Mat2& M) {
    const double before = angle_of(scale, y, py);
    const double ny = M.m11 * y + M.m12 * py;
    const double npy = M.m21 * y + M.m22 * py;
    const double after = angle_of(scale, ny, npy);
    y = ny;
    py = npy;
    return principal(after - before);
  }
};

constexpr int kMaxSplitDepth = 12;

// One interval of propagation with continuous phase accounting: exact
// reference rotation sqrt(-Z) when oscillatory, principal atan2 increments
// for barrier flows, and a sub-half-turn increment for the correction
// factor. A correction that rotates the state by more than pi/2 is out of
// its perturbative regime; the interval is then re-run split in half on
// the fitted polynomial model (no new coefficient evaluations).
void advance(PhaseState& st, const Method& method, const IntervalData& iv, double lambda,
             Direction dir, int depth = 0) {
  const double Z = iv.Z(lambda);
  const double S = interval_scale(iv, lambda);
  st.rescale_to(S);

  auto apply_correction = [&](Direction d) -> bool {
    if (!method.is_modified()) return true;
    const PhaseState saved = st;
    const double inc = st.apply(correction_factor(method, iv, lambda, d));
    if (std::abs(inc) <= 0.5 * kPi) {
      st.theta += inc;
      return true;
    }
    st = saved;
    return false;
  };
  auto split_and_recurse = [&]() {
    if (depth >= kMaxSplitDepth)
      throw SolveError("correction term rotates the state by more than pi/2; "
                       "mesh interval too coarse near x = " + std::to_string(iv.x_left));
    const auto halves = split_interval(iv);
    if (dir == Direction::forward) {
      advance(st, method, halves.first, lambda, dir, depth + 1);
      advance(st, method, halves.second, lambda, dir, depth + 1);
    } else {
      advance(st, method, halves.second, lambda, dir, depth + 1);
      advance(st, method, halves.first, lambda, dir, depth + 1);
    }
  };

  if (dir == Direction::forward) {
    if (!apply_correction(Direction::forward)) return split_and_recurse();
    const double inc = st.apply(pruess_step(iv, lambda, Direction::forward));
    st.theta += Z < 0.0 ? std::sqrt(-Z) : inc;
  } else {
    const PhaseState saved = st;
    const double inc = st.apply(pruess_step(iv, lambda, Direction::backward));
    st.theta += Z < 0.0 ? -std::sqrt(-Z) : inc;
    if (!apply_correction(Direction::backward)) {
      st = saved;
      return split_and_recurse();
    }
  }
  st.renormalize();
}

// State satisfying the boundary condition with its sign chosen so that
// atan2(S y, py) lands on the normalized window angle.
PhaseState boundary_state(double c1, double c2, double angle, double S) {
  PhaseState st;
  st.y = -c2;
  st.py = c1;
  st.scale = S;
  st.theta = angle;
  const double raw = angle_of(S, st.y, st.py);
  if (std::abs(principal(raw - angle)) > 0.5 * kPi) {
    st.y = -st.y;
    st.py = -st.py;
  }
  st.renormalize();
  return st;
}

PhaseState left_start(const Mesh& mesh, double lambda) {
  const double S1 = interval_scale(mesh.intervals.front(), lambda);
  const double tan_a = mesh.problem.bc.a1 == 0.0
                           ? 0.0
                           : -S1 * mesh.problem.bc.a2 / mesh.problem.bc.a1;
  double alpha;
  if (mesh.problem.bc.a1 == 0.0) {
    alpha = 0.5 * kPi;
  } else {
    alpha = std::atan(tan_a);
    if (alpha < 0.0) alpha += kPi;
  }
  return boundary_state(mesh.problem.bc.a1, mesh.problem.bc.a2, alpha, S1);
}

PhaseState right_start(const Mesh& mesh, double lambda) {
  const double Sn = interval_scale(mesh.intervals.back(), lambda);
  double beta;
  if (mesh.problem.bc.b1 == 0.0) {
    beta = 0.5 * kPi;
  } else {
    beta = std::atan(-Sn * mesh.problem.bc.b2 / mesh.problem.bc.b1);
    if (beta <= 0.0) beta += kPi;
  }
  return boundary_state(mesh.problem.bc.b1, mesh.problem.bc.b2, beta, Sn);
}

PhaseState run_left(const Mesh& mesh, double lambda, std::vector<FunctionSample>* samples,
                    std::vector<double>* log_norms) {
  PhaseState st = left_start(mesh, lambda);
  if (samples) {
    samples->push_back({mesh.point(0), st.y, st.py});
    log_norms->push_back(st.log_norm);
  }
  for (int i = 0; i < mesh.match_index; ++i) {
    advance(st, mesh.method, mesh.intervals[static_cast<std::size_t>(i)], lambda,
            Direction::forward);
    if (samples) {
      samples->push_back({mesh.point(i + 1), st.y, st.py});
      log_norms->push_back(st.log_norm);
    }
  }
  return st;
}

PhaseState run_right(const Mesh& mesh, double lambda, std::vector<FunctionSample>* samples,
                     std::vector<double>* log_norms) {
  PhaseState st = right_start(mesh, lambda);
  if (samples) {
    samples->push_back({mesh.point(mesh.n()), st.y, st.py});
    log_norms->push_back(st.log_norm);
  }
  for (int i = mesh.n() - 1; i >= mesh.match_index; --i) {
    advance(st, mesh.method, mesh.intervals[static_cast<std::size_t>(i)], lambda,
            Direction::backward);
    if (samples) {
      samples->push_back({mesh.point(i), st.y, st.py});
      log_norms->push_back(st.log_norm);
    }
  }
  return st;
}

ShootState to_shoot_state(const PhaseState& st) { return {st.y, st.py, st.theta, st.scale}; }

}  // namespace

ShootState propagate_left(const Mesh& mesh, double lambda) {
  return to_shoot_state(run_left(mesh, lambda, nullptr, nullptr));
}

ShootState propagate_right(const Mesh& mesh, double lambda) {
  return to_shoot_state(run_right(mesh, lambda, nullptr, nullptr));
}

double mismatch(const Mesh& mesh, double lambda) {
  PhaseState left = run_left(mesh, lambda, nullptr, nullptr);
  PhaseState right = run_right(mesh, lambda, nullptr, nullptr);
  right.rescale_to(left.scale);
  return left.theta - right.theta;
}

namespace {

double default_guess(const Mesh& mesh, int k) {
  double qm = 0.0, pm = 0.0, wm = 0.0;
  for (const IntervalData& iv : mesh.intervals) {
    qm += iv.h * iv.qbar;
    pm += iv.h * iv.pbar;
    wm += iv.h * iv.wbar;
  }
  const double span = mesh.b() - mesh.a();
  qm /= span;
  pm /= span;
  wm /= span;
  const double osc = (k + 1) * kPi / span;
  return (qm + pm * osc * osc) / wm;
}

}  // namespace

EigenResult eigenvalue_near(const Mesh& mesh, int k, double tol_lambda, double guess) {
  if (k < 0) throw std::invalid_argument("eigenvalue index must be >= 0");
  if (!(tol_lambda > 0.0)) throw std::invalid_argument("tol_lambda must be positive");
  const double target = k * kPi;
  const double slack = 1e-9;

  int evals = 0;
  auto phi = [&](double lam) {
    ++evals;
    return mismatch(mesh, lam);
  };
  // below ~4 ulp the lambda grid cannot express a tighter answer
  auto eff_tol = [&](double x) {
    return std::max(tol_lambda * std::max(1.0, std::abs(x)),
                    4.0 * std::numeric_limits<double>::epsilon() * std::abs(x));
  };

  double lo = guess, hi = guess;
  double flo = phi(lo), fhi = flo;
  int expansions = 0;
  for (double r = 1.0; flo > target; r *= 2.0) {
    lo -= r;
    flo = phi(lo);
    if (++expansions > 200)
      throw SolveError("bracket search for k = " + std::to_string(k) +
                       " exceeded 200 expansions (index beyond resolvable spectrum?)");
  }
  for (double r = 1.0; fhi < target; r *= 2.0) {
    hi += r;
    fhi = phi(hi);
    if (++expansions > 200)
      throw SolveError("bracket search for k = " + std::to_string(k) +
                       " exceeded 200 expansions (index beyond resolvable spectrum?)");
  }

  auto check_monotone = [&](double f) {
    if (f < flo - slack || f > fhi + slack)
      throw SolveError("mismatch is not monotone across the bracket; mesh too coarse");
  };

  // bisect down to the unit-phase neighbourhood of the root
  double x1 = lo, f1 = flo;
  while (hi - lo > eff_tol(lo) && std::abs(f1 - target) >= 0.5) {
    x1 = 0.5 * (lo + hi);
    f1 = phi(x1);
    check_monotone(f1);
    if (f1 < target) {
      lo = x1;
      flo = f1;
    } else {
      hi = x1;
      fhi = f1;
    }
  }

  // secant inside [lo, hi], with a forced bisection whenever the bracket
  // stops shrinking (phi can be plateau-and-wall shaped near clustered
  // eigenvalues, where plain secant creeps)
  double x0 = (x1 == lo) ? hi : lo;
  double f0 = (x1 == lo) ? fhi : flo;
  double width_prev2 = hi - lo;
  bool converged = false;
  for (int it = 0; it < 300; ++it) {
    if (hi - lo <= eff_tol(x1)) {
      converged = true;
      break;
    }
    double cand = 0.0;
    const double denom = f1 - f0;
    bool use_secant = denom != 0.0;
    if (use_secant) {
      cand = x1 - (f1 - target) * (x1 - x0) / denom;
      use_secant = std::isfinite(cand) && cand > lo && cand < hi;
    }
    if (it >= 2 && hi - lo > 0.6 * width_prev2) use_secant = false;
    if (it >= 2) width_prev2 = hi - lo;
    if (!use_secant) cand = 0.5 * (lo + hi);
    const double fc = phi(cand);
    check_monotone(fc);
    if (fc < target) {
      lo = cand;
      flo = fc;
    } else {
      hi = cand;
      fhi = fc;
    }
    const bool straddled = (f1 - target) * (fc - target) <= 0.0;
    x0 = x1;
    f0 = f1;
    x1 = cand;
    f1 = fc;
    if (straddled && std::abs(x1 - x0) <= eff_tol(x1)) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw SolveError("eigenvalue iteration for k = " + std::to_string(k) +
                     " failed to converge");
  double best_x = x1, best_f = f1;
  if (std::abs(flo - target) < std::abs(best_f - target)) {
    best_x = lo;
    best_f = flo;
  }
  if (std::abs(fhi - target) < std::abs(best_f - target)) {
    best_x = hi;
    best_f = fhi;
  }

  EigenResult out;
  out.k = k;
  out.lambda = best_x;
  out.residual = std::abs(best_f - target);
  out.iterations = evals;
  out.bracket = {lo, hi};
  out.fevals = 0;
  return out;
}

EigenResult eigenvalue(const Mesh& mesh, int k, double tol_lambda) {
  return eigenvalue_near(mesh, k, tol_lambda, default_guess(mesh, k));
}

std::vector<EigenResult> eigenvalue_range(const Mesh& mesh, int k_lo, int k_hi,
                                          double tol_lambda) {
  if (k_lo < 0 || k_hi < k_lo)
    throw std::invalid_argument("eigenvalue_range: need 0 <= k_lo <= k_hi");
  std::vector<EigenResult> out;
  out.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (int k = k_lo; k <= k_hi; ++k) {
    double guess = default_guess(mesh, k);
    const std::size_t m = out.size();
    if (m >= 2) {
      const double extrapolated =
          out[m - 1].lambda + (out[m - 1].lambda - out[m - 2].lambda);
      guess = std::max(guess, extrapolated);
    } else if (m == 1) {
      guess = std::max(guess, out[0].lambda);
    }
    out.push_back(eigenvalue_near(mesh, k, tol_lambda, guess));
    if (m >= 1 && !(out[m].lambda > out[m - 1].lambda - tol_lambda))
      throw SolveError("eigenvalue_range: results not strictly increasing");
  }
  return out;
}

std::vector<FunctionSample> eigenfunction_samples(const Mesh& mesh, double lambda) {
  std::vector<FunctionSample> left, right;
  std::vector<double> ln_left, ln_right;
  run_left(mesh, lambda, &left, &ln_left);
  run_right(mesh, lambda, &right, &ln_right);

  // right sweep recorded from b down to x_m; align it to the left state there
  const FunctionSample& lm = left.back();
  const FunctionSample& rm = right.back();
  const double dot = lm.y * rm.y + lm.py * rm.py;

  std::vector<FunctionSample> all;
  std::vector<double> amps;
  all.reserve(left.size() + right.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    all.push_back(left[i]);
    amps.push_back(ln_left[i]);
  }
  const double ln_shift = ln_left.back() - ln_right.back();
  for (std::size_t i = right.size(); i-- > 1;) {  // skip the duplicate x_m sample
    FunctionSample s = right[i - 1];
    s.y *= dot;
    s.py *= dot;
    all.push_back(s);
    amps.push_back(ln_right[i - 1] + ln_shift);
  }

  const double amp_max = *std::max_element(amps.begin(), amps.end());
  double y_max = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double f = std::exp(amps[i] - amp_max);
    all[i].y *= f;
    all[i].py *= f;
    y_max = std::max(y_max, std::abs(all[i].y));
  }
  if (y_max == 0.0)
    throw SolveError("eigenfunction_samples: zero function (lambda not near an eigenvalue?)");
  for (FunctionSample& s : all) {
    s.y /= y_max;
    s.py /= y_max;
  }
  return all;
}

}  // namespace sl
