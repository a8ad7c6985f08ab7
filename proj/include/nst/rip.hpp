#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "nst/linalg.hpp"
#include "nst/rng.hpp"
#include "nst/support.hpp"
#include "nst/types.hpp"

namespace nst {

enum class RipKind { Delta, Gamma, Theta };

inline const char* to_string(RipKind k) {
  switch (k) {
    case RipKind::Delta: return "delta";
    case RipKind::Gamma: return "gamma";
    case RipKind::Theta: return "theta";
  }
  return "";
}

inline RipKind rip_kind_from_string(const std::string& s) {
  if (s == "delta") return RipKind::Delta;
  if (s == "gamma") return RipKind::Gamma;
  if (s == "theta") return RipKind::Theta;
  throw std::invalid_argument("unknown RIP constant kind '" + s + "'");
}

struct RipReport {
  Index order = 0;
  RipKind which = RipKind::Delta;
  double value = 0.0;
  enum class Method { Exact, MonteCarlo } method = Method::Exact;
  std::uint64_t supports_examined = 0;
  std::uint64_t trials = 0;  ///< MonteCarlo only
  std::uint64_t seed = 0;    ///< MonteCarlo only
};

namespace comb {

/// C(n, k), saturating at kOverflow instead of wrapping.
inline constexpr std::uint64_t kOverflow = UINT64_MAX;

inline std::uint64_t binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (Index i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (c > static_cast<unsigned __int128>(kOverflow) / 2) return kOverflow;
  }
  return static_cast<std::uint64_t>(c);
}

/// The rank-th size-k subset of {0..n-1} in lexicographic order.
inline std::vector<Index> unrank(std::uint64_t rank, Index n, Index k) {
  std::vector<Index> out(static_cast<std::size_t>(k));
  Index v = 0;
  for (Index pos = 0; pos < k; ++pos) {
    for (;; ++v) {
      const std::uint64_t below = binomial(n - 1 - v, k - 1 - pos);
      if (rank < below) break;
      rank -= below;
    }
    out[static_cast<std::size_t>(pos)] = v;
    ++v;
  }
  return out;
}

/// Advance to the lexicographically next size-k subset; false past the last.
inline bool next_combination(std::vector<Index>& idx, Index n) {
  const Index k = static_cast<Index>(idx.size());
  Index i = k - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < k; ++j)
    idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

}  // namespace comb

/// Default support-enumeration budget; override with NST_ENUM_BUDGET.
inline std::uint64_t default_enum_budget() {
  if (const char* env = std::getenv("NST_ENUM_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 2'000'000;
}

namespace detail {

/// max |eig(B_S*B_S) - 1| over the given lexicographic rank range of size-s
/// supports.
template <class Scalar>
double support_sweep(const Matrix<Scalar>& b, Index s, std::uint64_t first,
                     std::uint64_t last) {
  if (first >= last) return 0.0;
  std::vector<Index> idx = comb::unrank(first, b.cols(), s);
  Matrix<Scalar> sub(b.rows(), s);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig;
  double worst = 0.0;
  for (std::uint64_t r = first; r < last; ++r) {
    for (Index i = 0; i < s; ++i) sub.col(i) = b.col(idx[static_cast<std::size_t>(i)]);
    eig.compute(sub.adjoint() * sub, Eigen::EigenvaluesOnly);
    const auto& lam = eig.eigenvalues();
    worst = std::max({worst, std::abs(lam(0) - 1.0), std::abs(lam(s - 1) - 1.0)});
    if (r + 1 < last) comb::next_combination(idx, b.cols());
  }
  return worst;
}

/// Same objective evaluated on an explicit list of supports.
template <class Scalar>
double support_max(const Matrix<Scalar>& b, const std::vector<std::vector<Index>>& supports) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig;
  double worst = 0.0;
  for (const auto& idx : supports) {
    const Index s = static_cast<Index>(idx.size());
    Matrix<Scalar> sub(b.rows(), s);
    for (Index i = 0; i < s; ++i) sub.col(i) = b.col(idx[static_cast<std::size_t>(i)]);
    eig.compute(sub.adjoint() * sub, Eigen::EigenvaluesOnly);
    const auto& lam = eig.eigenvalues();
    worst = std::max({worst, std::abs(lam(0) - 1.0), std::abs(lam(s - 1) - 1.0)});
  }
  return worst;
}

template <class Scalar>
Matrix<Scalar> rip_target(const Matrix<Scalar>& a, RipKind which) {
  switch (which) {
    case RipKind::Delta: return a;
    case RipKind::Gamma: return precondition(a, PreconditionMode::Half);
    case RipKind::Theta: return precondition(a, PreconditionMode::Full);
  }
  throw std::logic_error("rip_target: bad kind");
}

}  // namespace detail

/// Exact RIP-style constant of order s:
///   delta: max over |S| = s of ||A_S*A_S - I||_2
///   gamma: the same for (AA*)^{-1/2}A   (preconditioned constant)
///   theta: the same for (AA*)^{-1}A
/// The max over |S| <= s is attained at |S| = s (eigenvalue interlacing for
/// principal submatrices), so only size-s supports are enumerated. The sweep
/// is partitioned across workers by combinatorial rank; the result does not
/// depend on the worker count.
template <class Scalar>
RipReport exact_constant(const Matrix<Scalar>& a, Index s, RipKind which,
                         std::uint64_t budget = default_enum_budget(),
                         unsigned workers = 0) {
  const Index n = a.cols();
  if (s < 1 || s > n) throw std::invalid_argument("exact_constant: need 1 <= s <= N");
  const std::uint64_t total = comb::binomial(n, s);
  if (total > budget)
    throw EnumerationBudgetError(
        "exact_constant: C(" + std::to_string(n) + ", " + std::to_string(s) + ") = " +
        (total == comb::kOverflow ? std::string(">1e18") : std::to_string(total)) +
        " supports exceeds the enumeration budget " + std::to_string(budget) +
        "; use mc_lower_bound");

  const Matrix<Scalar> b = detail::rip_target(a, which);

  if (workers == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    workers = hw == 0 ? 1 : hw;
  }
  if (total < 4096) workers = 1;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, total));

  double value = 0.0;
  if (workers <= 1) {
    value = detail::support_sweep(b, s, 0, total);
  } else {
    std::vector<double> partial(workers, 0.0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t first = std::min<std::uint64_t>(w * chunk, total);
      const std::uint64_t last = std::min<std::uint64_t>(first + chunk, total);
      pool.emplace_back([&, w, first, last] {
        partial[w] = detail::support_sweep(b, s, first, last);
      });
    }
    for (auto& th : pool) th.join();
    value = *std::max_element(partial.begin(), partial.end());
  }

  RipReport report;
  report.order = s;
  report.which = which;
  report.value = value;
  report.method = RipReport::Method::Exact;
  report.supports_examined = total;
  return report;
}

/// Monte-Carlo lower bound: the support objective maximized over `trials`
/// supports sampled uniformly without replacement. Sampling that covers all
/// C(N, s) supports degenerates to the exact sweep.
template <class Scalar>
RipReport mc_lower_bound(const Matrix<Scalar>& a, Index s, RipKind which,
                         std::uint64_t trials, std::uint64_t seed) {
  const Index n = a.cols();
  if (s < 1 || s > n) throw std::invalid_argument("mc_lower_bound: need 1 <= s <= N");
  if (trials < 1) throw std::invalid_argument("mc_lower_bound: trials must be >= 1");

  const std::uint64_t total = comb::binomial(n, s);
  const Matrix<Scalar> b = detail::rip_target(a, which);

  RipReport report;
  report.order = s;
  report.which = which;
  report.method = RipReport::Method::MonteCarlo;
  report.trials = trials;
  report.seed = seed;

  if (trials >= total) {
    report.value = detail::support_sweep(b, s, 0, total);
    report.supports_examined = total;
    return report;
  }

  Philox rng(seed, 0x52495053ull);  // "RIPS"
  std::vector<std::vector<Index>> supports;
  supports.reserve(trials);
  if (total <= 10'000'000 && trials * 2 >= total) {
    // dense regime: partial shuffle of all ranks
    std::vector<std::uint64_t> ranks(total);
    for (std::uint64_t r = 0; r < total; ++r) ranks[r] = r;
    for (std::uint64_t i = 0; i < trials; ++i) {
      const std::uint64_t j = i + rng.next_below(total - i);
      std::swap(ranks[i], ranks[j]);
      supports.push_back(comb::unrank(ranks[i], n, s));
    }
  } else {
    // sparse regime: rejection-sample distinct supports
    std::unordered_set<std::string> seen;
    while (supports.size() < trials) {
      std::vector<Index> idx = rng.sample_subset(n, s);
      std::sort(idx.begin(), idx.end());
      std::string key;
      key.reserve(idx.size() * 3);
      for (Index v : idx) {
        key += std::to_string(v);
        key += ',';
      }
      if (seen.insert(std::move(key)).second) supports.push_back(std::move(idx));
    }
  }
  report.value = detail::support_max(b, supports);
  report.supports_examined = trials;
  return report;
}

struct ConditionCheck {
  bool holds = false;
  double margin = 0.0;
};

/// 2*gamma^2 + delta^2 < 1; margin = 1 - (2*gamma^2 + delta^2).
inline ConditionCheck check_theorem_condition(double delta, double gamma) {
  if (delta < 0 || gamma < 0)
    throw std::invalid_argument("check_theorem_condition: constants must be >= 0");
  const double margin = 1.0 - (2.0 * gamma * gamma + delta * delta);
  return {margin > 0.0, margin};
}

/// The older sufficient condition delta_2s + sqrt(2)*gamma_3s < 1;
/// margin = 1 - (delta + sqrt(2)*gamma).
inline ConditionCheck check_legacy_condition(double delta2s, double gamma3s) {
  if (delta2s < 0 || gamma3s < 0)
    throw std::invalid_argument("check_legacy_condition: constants must be >= 0");
  const double margin = 1.0 - (delta2s + std::sqrt(2.0) * gamma3s);
  return {margin > 0.0, margin};
}

}  // namespace nst
