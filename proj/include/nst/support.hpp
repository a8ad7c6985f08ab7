#pragma once

#include <algorithm>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "nst/types.hpp"

namespace nst {

/// Ordered set of column indices T ⊆ {0..N-1}. Indices are kept strictly
/// increasing with no duplicates.
class SupportSet {
public:
  SupportSet() = default;

  explicit SupportSet(std::vector<Index> indices) : idx_(std::move(indices)) {
    std::sort(idx_.begin(), idx_.end());
    idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
    if (!idx_.empty() && idx_.front() < 0)
      throw std::invalid_argument("SupportSet: negative index");
  }

  SupportSet(std::initializer_list<Index> indices)
      : SupportSet(std::vector<Index>(indices)) {}

  Index size() const { return static_cast<Index>(idx_.size()); }
  bool empty() const { return idx_.empty(); }
  Index operator[](Index i) const { return idx_[static_cast<std::size_t>(i)]; }

  const std::vector<Index>& indices() const { return idx_; }

  bool contains(Index j) const {
    return std::binary_search(idx_.begin(), idx_.end(), j);
  }

  bool contains(const SupportSet& other) const {
    return std::includes(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end());
  }

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

  friend bool operator==(const SupportSet& a, const SupportSet& b) {
    return a.idx_ == b.idx_;
  }

private:
  std::vector<Index> idx_;
};

/// Indices of the k largest-magnitude entries of v. Ties break toward the
/// smaller index so results are identical across runs and thread counts.
/// Uses partial selection rather than a full sort.
template <class Scalar>
SupportSet top_k(const Vector<Scalar>& v, Index k) {
  const Index n = v.size();
  if (k < 1 || k > n)
    throw std::invalid_argument("top_k: k must be in [1, len(v)]");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const auto better = [&v](Index a, Index b) {
    const auto ma = std::abs(v[a]);
    const auto mb = std::abs(v[b]);
    if (ma != mb) return ma > mb;
    return a < b;
  };
  std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), better);
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return SupportSet(std::move(order));
}

/// {0..N-1} \ T, sorted.
inline SupportSet complement(const SupportSet& t, Index n) {
  if (!t.empty() && t[t.size() - 1] >= n)
    throw std::invalid_argument("complement: index >= N");
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(n - t.size()));
  auto it = t.begin();
  for (Index j = 0; j < n; ++j) {
    if (it != t.end() && *it == j) {
      ++it;
    } else {
      out.push_back(j);
    }
  }
  return SupportSet(std::move(out));
}

/// Symmetric difference (T \ U) ∪ (U \ T), sorted.
inline SupportSet sym_diff(const SupportSet& t, const SupportSet& u) {
  std::vector<Index> out;
  std::set_symmetric_difference(t.begin(), t.end(), u.begin(), u.end(),
                                std::back_inserter(out));
  return SupportSet(std::move(out));
}

/// Union, sorted.
inline SupportSet set_union(const SupportSet& t, const SupportSet& u) {
  std::vector<Index> out;
  std::set_union(t.begin(), t.end(), u.begin(), u.end(), std::back_inserter(out));
  return SupportSet(std::move(out));
}

/// Columns of A indexed by T.
template <class Scalar>
Matrix<Scalar> columns(const Matrix<Scalar>& a, const SupportSet& t) {
  Matrix<Scalar> sub(a.rows(), t.size());
  for (Index i = 0; i < t.size(); ++i) sub.col(i) = a.col(t[i]);
  return sub;
}

/// Entries of v indexed by T.
template <class Scalar>
Vector<Scalar> restrict_to(const Vector<Scalar>& v, const SupportSet& t) {
  Vector<Scalar> sub(t.size());
  for (Index i = 0; i < t.size(); ++i) sub[i] = v[t[i]];
  return sub;
}

/// Embed a |T|-vector into an n-vector supported on T.
template <class Scalar>
Vector<Scalar> embed(const Vector<Scalar>& sub, const SupportSet& t, Index n) {
  Vector<Scalar> out = Vector<Scalar>::Zero(n);
  for (Index i = 0; i < t.size(); ++i) out[t[i]] = sub[i];
  return out;
}

/// Indices of the nonzero entries of v.
template <class Scalar>
SupportSet nonzero_support(const Vector<Scalar>& v) {
  std::vector<Index> out;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != Scalar(0)) out.push_back(i);
  return SupportSet(std::move(out));
}

}  // namespace nst
