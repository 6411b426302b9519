#pragma once

#include "flexsky/dataset.hpp"
#include "flexsky/preference.hpp"

#include <optional>

namespace flexsky {

/// Pareto dominance under the min-better convention: t is no worse everywhere
/// and strictly better somewhere. Exact comparisons.
template <typename DerivedT, typename DerivedS>
bool pareto_dominates(const Eigen::MatrixBase<DerivedT>& t, const Eigen::MatrixBase<DerivedS>& s) {
  if (t.size() != s.size()) throw InputError("pareto_dominates: arity mismatch");
  bool strict = false;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t(i) > s(i)) return false;
    if (t(i) < s(i)) strict = true;
  }
  return strict;
}

struct DominanceVerdict {
  bool dominates = false;
  /// dominates: a weight where t scores strictly lower.
  /// !dominates via the max test: a weight where t scores strictly higher.
  std::optional<Vector> witness;
};

/// t F-dominates s over the region when max_w w.(t - s) <= eps and
/// min_w w.(t - s) < -eps.
DominanceVerdict f_dominates(const Eigen::Ref<const Vector>& t, const Eigen::Ref<const Vector>& s,
                             const WeightPolytope& p);

class DominanceMode {
 public:
  static DominanceMode pareto() { return DominanceMode(nullptr); }
  static DominanceMode flexible(const WeightPolytope& p) { return DominanceMode(&p); }

  bool is_pareto() const noexcept { return region_ == nullptr; }
  const WeightPolytope& region() const { return *region_; }

 private:
  explicit DominanceMode(const WeightPolytope* region) : region_(region) {}
  const WeightPolytope* region_;
};

/// Number of distinct vectors in the view that dominate v.
std::size_t dominance_count(const Eigen::Ref<const Vector>& v, const DistinctView& view, DominanceMode mode);

/// Scores of every vector under every region vertex, used to decide
/// F-dominance for many pairs without re-solving LPs. Falls back to per-pair
/// LPs when the region is beyond the vertex budget.
class FDominanceTable {
 public:
  FDominanceTable(const RowMatrix& values, const WeightPolytope& p);

  /// Row a F-dominates row b.
  bool dominates(Eigen::Index a, Eigen::Index b) const;

  Eigen::Index size() const noexcept { return values_.rows(); }

 private:
  const RowMatrix& values_;
  WeightPolytope region_;
  RowMatrix scores_;  // rows x vertices, empty when beyond budget
  double eps_;
};

}  // namespace flexsky
