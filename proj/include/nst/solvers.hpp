#pragma once

#include <chrono>
#include <iostream>
#include <optional>
#include <vector>

#include "nst/linalg.hpp"
#include "nst/schedule.hpp"
#include "nst/support.hpp"
#include "nst/types.hpp"

namespace nst {

enum class SolveStatus { Converged, MaxIters, SingularGram };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIters: return "max-iters";
    case SolveStatus::SingularGram: return "singular-gram";
  }
  return "";
}

struct SolverConfig {
  double epsilon = 1e-10;  ///< absolute l2 residual tolerance
  Index max_iters = 100;   ///< K
  bool record_history = false;
  /// Compute the feedback through the literal tail formula
  /// u_T = x_T + (A_T*A_T)^{-1}A_T*A_{T^c}x_{T^c} instead of the equivalent
  /// least-squares form (A_T*A_T)^{-1}A_T*y. The two agree for feasible x.
  bool feedback_via_tail = false;
  /// 0 = no limit. Checked once per iteration.
  std::chrono::milliseconds time_limit{0};
};

template <class Scalar>
struct SolveResult {
  Vector<Scalar> estimate;
  Index iterations = 0;
  SolveStatus status = SolveStatus::MaxIters;
  std::vector<double> residual_history;          ///< ||y - A u^k|| per iteration
  std::vector<SupportSet> support_history;       ///< recorded when record_history
  std::vector<Vector<Scalar>> iterate_history;   ///< u^k, recorded when record_history
  std::vector<Vector<Scalar>> tuned_history;     ///< x^k, recorded when record_history
  std::vector<Index> ls_sizes;                   ///< |T| per least-squares solve
  bool diverged = false;

  double final_residual() const {
    return residual_history.empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : residual_history.back();
  }
};

namespace detail {

/// Support sizes are clamped to min(M-1, N): once |T| >= M the Gram matrix
/// A_T*A_T is singular and the feedback is no longer well-posed.
inline Index dimension_cap(Index m, Index n) { return std::min(m - 1, n); }

template <class Scalar>
Vector<Scalar> feedback_on(const Matrix<Scalar>& a, const Vector<Scalar>& x,
                           const SupportSet& t, bool via_tail,
                           const Vector<Scalar>& y) {
  if (via_tail) {
    const SupportSet tc = complement(t, a.cols());
    const Vector<Scalar> tail = columns(a, tc) * restrict_to(x, tc);
    const Vector<Scalar> z = restrict_to(x, t) + restricted_ls(a, t, tail);
    return embed(z, t, a.cols());
  }
  return embed(restricted_ls(a, t, y), t, a.cols());
}

struct Deadline {
  std::optional<std::chrono::steady_clock::time_point> at;

  explicit Deadline(std::chrono::milliseconds limit) {
    if (limit.count() > 0) at = std::chrono::steady_clock::now() + limit;
  }
  bool expired() const { return at && std::chrono::steady_clock::now() > *at; }
};

}  // namespace detail

/// Adaptive null-space-tuning iteration with hard thresholding and functional
/// feedback. Per iteration k = 1, 2, ...:
///
///   x^k = u^{k-1} + A*(AA*)^{-1}(y - A u^{k-1})        (null-space tuning)
///   T_k = indices of the f(k) largest |x^k| entries     (hard thresholding)
///   u^k = least-squares fit of y on T_k, zero off T_k   (feedback)
///
/// with u^0 = 0, so x^1 is the minimum-norm feasible point. Every x^k is
/// feasible. Stops when ||y - A u^k|| <= epsilon or k = K. A rank-deficient
/// A_{T_k} ends the run with status SingularGram and the last valid iterate.
template <class Scalar>
SolveResult<Scalar> adpt_nst_ht_fb(const Matrix<Scalar>& a, const Vector<Scalar>& y,
                                   const Schedule& sched, const SolverConfig& cfg) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (y.size() != m) throw std::invalid_argument("adpt_nst_ht_fb: len(y) != M");
  if (cfg.max_iters < 1) throw std::invalid_argument("adpt_nst_ht_fb: K must be >= 1");
  require_finite(a, "adpt_nst_ht_fb");
  require_finite(y, "adpt_nst_ht_fb");

  const RowGram<Scalar> gram(a);
  const Index cap = detail::dimension_cap(m, n);
  const detail::Deadline deadline(cfg.time_limit);

  SolveResult<Scalar> result;
  Vector<Scalar> u = Vector<Scalar>::Zero(n);
  result.estimate = u;
  result.status = SolveStatus::MaxIters;

  for (Index k = 1; k <= cfg.max_iters; ++k) {
    const Vector<Scalar> r = y - a * u;
    if (r.norm() <= cfg.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
    if (deadline.expired()) break;

    const Vector<Scalar> x = u + a.adjoint() * gram.solve(r);
    const Index f = std::min(sched.eval(k), cap);
    const SupportSet t = top_k<Scalar>(x, f);

    try {
      u = detail::feedback_on(a, x, t, cfg.feedback_via_tail, y);
    } catch (const FactorizationError&) {
      result.status = SolveStatus::SingularGram;
      break;
    }

    result.iterations = k;
    result.ls_sizes.push_back(t.size());
    result.residual_history.push_back((y - a * u).norm());
    if (cfg.record_history) {
      result.support_history.push_back(t);
      result.tuned_history.push_back(x);
      result.iterate_history.push_back(u);
    }
    result.estimate = u;
    if (result.residual_history.back() <= cfg.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
  }
  return result;
}

/// The constant-schedule specialization: f(k) = s for all k.
template <class Scalar>
SolveResult<Scalar> nst_ht_fb(const Matrix<Scalar>& a, const Vector<Scalar>& y, Index s,
                              const SolverConfig& cfg) {
  return adpt_nst_ht_fb(a, y, Schedule::constant(s), cfg);
}

/// Feedback of a feasible x onto the index set T:
/// u_T = x_T + (A_T*A_T)^{-1}A_T*A_{T^c}x_{T^c}, u = 0 off T. When Ax = y this
/// equals the least-squares fit of y restricted to T.
template <class Scalar>
Vector<Scalar> feedback(const Matrix<Scalar>& a, const Vector<Scalar>& x,
                        const SupportSet& t) {
  if (x.size() != a.cols()) throw std::invalid_argument("feedback: len(x) != N");
  const SupportSet tc = complement(t, a.cols());
  const Vector<Scalar> tail = columns(a, tc) * restrict_to(x, tc);
  const Vector<Scalar> z = restrict_to(x, t) + restricted_ls(a, t, tail);
  return embed(z, t, a.cols());
}

/// Orthogonal matching pursuit: per iteration add the column most correlated
/// with the residual (normalized by column norm, ties to the smaller index),
/// refit by least squares, recompute the residual.
template <class Scalar>
SolveResult<Scalar> omp(const Matrix<Scalar>& a, const Vector<Scalar>& y,
                        Index max_support, const SolverConfig& cfg) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (y.size() != m) throw std::invalid_argument("omp: len(y) != M");
  if (max_support < 1) throw std::invalid_argument("omp: max_support must be >= 1");

  Vector<double> col_norms(n);
  for (Index j = 0; j < n; ++j) col_norms[j] = a.col(j).norm();
  if ((col_norms.array() == 0.0).any())
    throw std::invalid_argument("omp: zero column in A");

  const Index support_limit = std::min({max_support, m, n});
  const detail::Deadline deadline(cfg.time_limit);

  SolveResult<Scalar> result;
  result.estimate = Vector<Scalar>::Zero(n);
  result.status = SolveStatus::MaxIters;
  std::vector<Index> picked;
  Vector<Scalar> r = y;

  for (Index k = 1; k <= cfg.max_iters; ++k) {
    if (r.norm() <= cfg.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
    if (static_cast<Index>(picked.size()) >= support_limit) break;
    if (deadline.expired()) break;

    const Vector<Scalar> corr = a.adjoint() * r;
    Index best = -1;
    double best_val = -1.0;
    for (Index j = 0; j < n; ++j) {
      if (std::find(picked.begin(), picked.end(), j) != picked.end()) continue;
      const double val = std::abs(corr[j]) / col_norms[j];
      if (val > best_val) {
        best_val = val;
        best = j;
      }
    }
    picked.push_back(best);

    const SupportSet t(picked);
    try {
      result.estimate = embed(restricted_ls(a, t, y), t, n);
    } catch (const FactorizationError&) {
      result.status = SolveStatus::SingularGram;
      picked.pop_back();
      break;
    }
    r = y - a * result.estimate;

    result.iterations = k;
    result.ls_sizes.push_back(t.size());
    result.residual_history.push_back(r.norm());
    if (cfg.record_history) {
      result.support_history.push_back(t);
      result.iterate_history.push_back(result.estimate);
    }
    if (r.norm() <= cfg.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
  }
  return result;
}

/// Generalized OMP: the P highest-correlation indices are added per iteration.
/// P = 1 reproduces omp iterate-for-iterate. Values of P above floor(sqrt(M))
/// are accepted with a warning.
template <class Scalar>
SolveResult<Scalar> gomp(const Matrix<Scalar>& a, const Vector<Scalar>& y, Index p,
                         Index max_support, const SolverConfig& cfg) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (y.size() != m) throw std::invalid_argument("gomp: len(y) != M");
  if (p < 1) throw std::invalid_argument("gomp: P must be >= 1");
  if (static_cast<double>(p) > std::floor(std::sqrt(static_cast<double>(m))))
    std::cerr << "gomp: warning: P = " << p << " exceeds floor(sqrt(M)) = "
              << static_cast<Index>(std::floor(std::sqrt(static_cast<double>(m))))
              << "\n";

  Vector<double> col_norms(n);
  for (Index j = 0; j < n; ++j) col_norms[j] = a.col(j).norm();
  if ((col_norms.array() == 0.0).any())
    throw std::invalid_argument("gomp: zero column in A");

  const Index support_limit = std::min({max_support, m, n});
  const detail::Deadline deadline(cfg.time_limit);

  SolveResult<Scalar> result;
  result.estimate = Vector<Scalar>::Zero(n);
  result.status = SolveStatus::MaxIters;
  SupportSet t;
  Vector<Scalar> r = y;

  for (Index k = 1; k <= cfg.max_iters; ++k) {
    if (r.norm() <= cfg.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
    if (t.size() >= support_limit) break;
    if (deadline.expired()) break;

    const Vector<Scalar> corr = a.adjoint() * r;
    VectorXd scores(n);
    for (Index j = 0; j < n; ++j)
      scores[j] = t.contains(j) ? 0.0 : std::abs(corr[j]) / col_norms[j];
    const Index take = std::min(p, support_limit - t.size());
    const SupportSet fresh = top_k<double>(scores, take);
    t = set_union(t, fresh);

    try {
      result.estimate = embed(restricted_ls(a, t, y), t, n);
    } catch (const FactorizationError&) {
      result.status = SolveStatus::SingularGram;
      break;
    }
    r = y - a * result.estimate;

    result.iterations = k;
    result.ls_sizes.push_back(t.size());
    result.residual_history.push_back(r.norm());
    if (cfg.record_history) {
      result.support_history.push_back(t);
      result.iterate_history.push_back(result.estimate);
    }
    if (r.norm() <= cfg.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
  }
  return result;
}

/// Iterative hard thresholding: x <- H_s(x + mu A*(y - Ax)) from x = 0.
/// Returns the best iterate by residual. Divergence (residual above 1e6 times
/// ||y||) stops the run with the diverged flag set.
template <class Scalar>
SolveResult<Scalar> iht(const Matrix<Scalar>& a, const Vector<Scalar>& y, Index s,
                        double mu, const SolverConfig& cfg) {
  const Index n = a.cols();
  if (y.size() != a.rows()) throw std::invalid_argument("iht: len(y) != M");
  if (s < 1 || s > n) throw std::invalid_argument("iht: need 1 <= s <= N");
  if (mu < 0) throw std::invalid_argument("iht: mu must be >= 0");

  const double divergence_bar = 1e6 * y.norm();
  const detail::Deadline deadline(cfg.time_limit);

  SolveResult<Scalar> result;
  result.status = SolveStatus::MaxIters;
  Vector<Scalar> x = Vector<Scalar>::Zero(n);
  result.estimate = x;
  double best_res = y.norm();

  for (Index k = 1; k <= cfg.max_iters; ++k) {
    if (deadline.expired()) break;
    const Vector<Scalar> g = x + Scalar(mu) * (a.adjoint() * (y - a * x)).eval();
    const SupportSet t = top_k<Scalar>(g, s);
    x = Vector<Scalar>::Zero(n);
    for (Index i : t) x[i] = g[i];

    const double res = (y - a * x).norm();
    result.iterations = k;
    result.residual_history.push_back(res);
    if (cfg.record_history) {
      result.support_history.push_back(t);
      result.iterate_history.push_back(x);
    }
    if (res < best_res) {
      best_res = res;
      result.estimate = x;
    }
    if (res <= cfg.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
    if (res > divergence_bar) {
      result.diverged = true;
      break;
    }
  }
  return result;
}

/// Hard thresholding pursuit: support from the top s entries of the gradient
/// update x + D^{-1}A*(y - Ax) with D = diag(||a_j||^2), i.e. the unit-step
/// update on the column-normalized operator (the classical setting), then a
/// least-squares refit on that support. Stops on the residual test, a
/// stabilized support, or K.
template <class Scalar>
SolveResult<Scalar> htp(const Matrix<Scalar>& a, const Vector<Scalar>& y, Index s,
                        const SolverConfig& cfg) {
  const Index n = a.cols();
  if (y.size() != a.rows()) throw std::invalid_argument("htp: len(y) != M");
  if (s < 1 || s > std::min(a.rows(), n))
    throw std::invalid_argument("htp: need 1 <= s <= min(M, N)");

  const detail::Deadline deadline(cfg.time_limit);
  Vector<double> colsq(n);
  for (Index j = 0; j < n; ++j) colsq[j] = a.col(j).squaredNorm();
  if ((colsq.array() == 0.0).any()) throw std::invalid_argument("htp: zero column in A");

  SolveResult<Scalar> result;
  result.status = SolveStatus::MaxIters;
  Vector<Scalar> x = Vector<Scalar>::Zero(n);
  result.estimate = x;
  SupportSet prev;

  for (Index k = 1; k <= cfg.max_iters; ++k) {
    if (deadline.expired()) break;
    Vector<Scalar> g = a.adjoint() * (y - a * x);
    for (Index j = 0; j < n; ++j) g[j] = x[j] + g[j] / Scalar(colsq[j]);
    const SupportSet t = top_k<Scalar>(g, s);
    const bool stable = !prev.empty() && t == prev;
    prev = t;

    try {
      x = embed(restricted_ls(a, t, y), t, n);
    } catch (const FactorizationError&) {
      result.status = SolveStatus::SingularGram;
      break;
    }

    const double res = (y - a * x).norm();
    result.estimate = x;
    result.iterations = k;
    result.ls_sizes.push_back(t.size());
    result.residual_history.push_back(res);
    if (cfg.record_history) {
      result.support_history.push_back(t);
      result.iterate_history.push_back(x);
    }
    if (res <= cfg.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
    if (stable) break;
  }
  return result;
}

/// Graded hard thresholding pursuit: htp with a growing support size per
/// iteration. The default grading is |T_k| = k; pass Schedule::quadratic()
/// for the k^2 variant.
template <class Scalar>
SolveResult<Scalar> ghtp(const Matrix<Scalar>& a, const Vector<Scalar>& y,
                         const SolverConfig& cfg,
                         const Schedule& grading = Schedule::linear(1)) {
  const Index n = a.cols();
  if (y.size() != a.rows()) throw std::invalid_argument("ghtp: len(y) != M");
  const Index size_cap = std::min(a.rows(), n);
  const detail::Deadline deadline(cfg.time_limit);
  Vector<double> colsq(n);
  for (Index j = 0; j < n; ++j) colsq[j] = a.col(j).squaredNorm();
  if ((colsq.array() == 0.0).any()) throw std::invalid_argument("ghtp: zero column in A");

  SolveResult<Scalar> result;
  result.status = SolveStatus::MaxIters;
  Vector<Scalar> x = Vector<Scalar>::Zero(n);
  result.estimate = x;
  SupportSet prev;

  for (Index k = 1; k <= cfg.max_iters; ++k) {
    if (deadline.expired()) break;
    Vector<Scalar> g = a.adjoint() * (y - a * x);
    for (Index j = 0; j < n; ++j) g[j] = x[j] + g[j] / Scalar(colsq[j]);
    const Index size = std::min(grading.eval(k), size_cap);
    const SupportSet t = top_k<Scalar>(g, size);
    const bool stable = !prev.empty() && t == prev;
    prev = t;

    try {
      x = embed(restricted_ls(a, t, y), t, n);
    } catch (const FactorizationError&) {
      result.status = SolveStatus::SingularGram;
      break;
    }

    const double res = (y - a * x).norm();
    result.estimate = x;
    result.iterations = k;
    result.ls_sizes.push_back(t.size());
    result.residual_history.push_back(res);
    if (cfg.record_history) {
      result.support_history.push_back(t);
      result.iterate_history.push_back(x);
    }
    if (res <= cfg.epsilon) {
      result.status = SolveStatus::Converged;
      break;
    }
    if (stable) break;
  }
  return result;
}

}  // namespace nst
