#include "flexsky/dominance.hpp"

#include <algorithm>
#include <limits>

namespace flexsky {

DominanceVerdict f_dominates(const Eigen::Ref<const Vector>& t, const Eigen::Ref<const Vector>& s,
                             const WeightPolytope& p) {
  if (t.size() != s.size() || static_cast<std::size_t>(t.size()) != p.dimension()) {
    throw InputError("f_dominates: arity mismatch");
  }
  const double eps = p.tolerances().dominance;
  const Vector delta = t - s;

  const auto worst = lp_max(delta, p);
  if (!worst) throw EmptyRegionError();
  if (worst->value > eps) return {false, worst->argmax};

  const auto best = lp_max(-delta, p);
  if (-best->value < -eps) return {true, best->argmax};
  return {false, std::nullopt};
}

std::size_t dominance_count(const Eigen::Ref<const Vector>& v, const DistinctView& view, DominanceMode mode) {
  const auto self = view.find(v);
  if (!self) throw InputError("dominance_count: vector is not part of the view");
  std::size_t count = 0;
  const RowMatrix& values = view.values();
  if (mode.is_pareto()) {
    for (Eigen::Index g = 0; g < values.rows(); ++g) {
      if (pareto_dominates(values.row(g), v.transpose())) ++count;
    }
    return count;
  }
  const FDominanceTable table(values, mode.region());
  for (Eigen::Index g = 0; g < values.rows(); ++g) {
    if (g != static_cast<Eigen::Index>(*self) && table.dominates(g, static_cast<Eigen::Index>(*self))) ++count;
  }
  return count;
}

FDominanceTable::FDominanceTable(const RowMatrix& values, const WeightPolytope& p)
    : values_(values), region_(p), eps_(p.tolerances().dominance) {
  if (static_cast<std::size_t>(values.cols()) != p.dimension()) throw InputError("dominance table: arity mismatch");
  if (is_empty(p)) throw EmptyRegionError();
  if (p.within_budget()) scores_ = values * p.vertex_matrix().transpose();
}

bool FDominanceTable::dominates(Eigen::Index a, Eigen::Index b) const {
  if (a == b) return false;
  if (scores_.cols() == 0) return f_dominates(values_.row(a).transpose(), values_.row(b).transpose(), region_).dominates;
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < scores_.cols(); ++k) {
    const double diff = scores_(a, k) - scores_(b, k);
    if (diff > eps_) return false;
    hi = std::max(hi, diff);
    lo = std::min(lo, diff);
  }
  return hi <= eps_ && lo < -eps_;
}

}  // namespace flexsky
