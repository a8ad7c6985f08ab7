#pragma once

#include <vector>

#include "nst/rip.hpp"
#include "nst/schedule.hpp"
#include "nst/types.hpp"

namespace nst {

/// Per-iteration convergence certificate for the adaptive feedback iteration
/// on a specific matrix, from exactly enumerated constants.
struct CertificateRow {
  Index k = 0;
  Index f_k = 0;         ///< schedule size at k
  double delta = 0.0;    ///< delta_{s + f(k)}
  double delta_f = 0.0;  ///< delta_{f(k)}
  double gamma = 0.0;    ///< gamma_{s + f(k-1) + f(k)}
  double theta = 0.0;    ///< theta_{s + f(k)}
  double rho = 0.0;      ///< error contraction factor sqrt(2 gamma^2 / (1 - delta^2))
  double c = 0.0;        ///< noise amplification constant
  bool holds = false;    ///< 2 gamma^2 + delta^2 < 1
  bool applies = false;  ///< f(k) >= s, the regime the contraction bound covers
};

/// Certificate rows for k = 1..k_max. Orders are clamped to N (a t-sparse
/// vector with t >= N is unrestricted, so the constants saturate at order N);
/// f(0) = 0 since u^0 = 0. Requires enumeration to fit the budget.
template <class Scalar>
std::vector<CertificateRow> convergence_certificate(
    const Matrix<Scalar>& a, Index s, const Schedule& sched, Index k_max,
    std::uint64_t budget = default_enum_budget()) {
  if (s < 1) throw std::invalid_argument("convergence_certificate: s must be >= 1");
  if (k_max < 1) throw std::invalid_argument("convergence_certificate: k_max must be >= 1");
  const Index n = a.cols();
  const auto clamp_order = [n](Index t) { return std::min(t, n); };

  // cache: one exact sweep per distinct (kind, order)
  std::vector<double> delta_cache(static_cast<std::size_t>(n) + 1, -1.0);
  std::vector<double> gamma_cache(static_cast<std::size_t>(n) + 1, -1.0);
  std::vector<double> theta_cache(static_cast<std::size_t>(n) + 1, -1.0);
  const auto lookup = [&](RipKind which, Index order) {
    auto& cache = which == RipKind::Delta   ? delta_cache
                  : which == RipKind::Gamma ? gamma_cache
                                            : theta_cache;
    auto& slot = cache[static_cast<std::size_t>(order)];
    if (slot < 0.0) slot = exact_constant(a, order, which, budget).value;
    return slot;
  };

  std::vector<CertificateRow> rows;
  rows.reserve(static_cast<std::size_t>(k_max));
  Index f_prev = 0;
  for (Index k = 1; k <= k_max; ++k) {
    const Index f_k = sched.eval(k);
    CertificateRow row;
    row.k = k;
    row.f_k = f_k;
    row.delta = lookup(RipKind::Delta, clamp_order(s + f_k));
    row.delta_f = lookup(RipKind::Delta, clamp_order(f_k));
    row.gamma = lookup(RipKind::Gamma, clamp_order(s + f_prev + f_k));
    row.theta = lookup(RipKind::Theta, clamp_order(s + f_k));

    const double one_minus_d2 = 1.0 - row.delta * row.delta;
    row.rho = one_minus_d2 > 0.0
                  ? std::sqrt(2.0 * row.gamma * row.gamma / one_minus_d2)
                  : std::numeric_limits<double>::infinity();
    row.c = one_minus_d2 > 0.0
                ? std::sqrt(1.0 + row.delta_f) / (1.0 - row.delta) +
                      std::sqrt(2.0 * (1.0 + row.theta)) / std::sqrt(one_minus_d2)
                : std::numeric_limits<double>::infinity();
    row.holds = check_theorem_condition(row.delta, row.gamma).holds;
    row.applies = f_k >= s;
    rows.push_back(row);
    f_prev = f_k;
  }
  return rows;
}

}  // namespace nst
