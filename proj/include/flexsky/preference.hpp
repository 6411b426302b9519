#pragma once

#include "flexsky/dataset.hpp"
#include "flexsky/types.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace flexsky {

/// coeffs . w <= bound
struct LinearConstraint {
  Vector coeffs;
  double bound = 0.0;
};

/// Parses the weight-constraint language, one constraint per line:
///
///     expr (">="|"<="|"=") expr      expr := term (("+"|"-") term)*
///     term := number | [number "*"] "w_" name
///
/// Everything is moved to the left-hand side, `>=` is negated into `<=`, and
/// `=` becomes a pair of `<=`. Blank lines and `#` comments are skipped; `;`
/// may separate constraints on one line.
std::vector<LinearConstraint> parse_constraints(std::string_view text, const Schema& schema);

struct VertexBudget {
  std::size_t max_dimension = 8;
  std::size_t max_constraints = 32;
};

struct LpResult {
  double value = 0.0;
  Vector argmax;
};

/// The weight simplex {w >= 0, sum w = 1} cut by user constraints A w <= b.
/// Immutable; the vertex list is computed once on first use and shared by copies.
class WeightPolytope {
 public:
  explicit WeightPolytope(std::size_t dimension, std::vector<LinearConstraint> constraints = {},
                          Tolerances tol = default_tolerances(), VertexBudget budget = {});

  /// Full simplex of the given dimension.
  static WeightPolytope simplex(std::size_t dimension) { return WeightPolytope(dimension); }

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<LinearConstraint>& constraints() const noexcept { return constraints_; }
  const Tolerances& tolerances() const noexcept { return tol_; }
  const VertexBudget& budget() const noexcept { return budget_; }

  /// Same region with additional constraints.
  WeightPolytope with(const std::vector<LinearConstraint>& extra) const;

  bool within_budget() const noexcept {
    return dimension_ <= budget_.max_dimension && constraints_.size() <= budget_.max_constraints;
  }

  /// Feasibility of w against the simplex and every user constraint.
  bool contains(const Eigen::Ref<const Vector>& w, double slack) const;
  bool contains(const Eigen::Ref<const Vector>& w) const { return contains(w, tol_.feasibility); }

  /// Exact vertex set, lexicographically sorted. Throws BudgetExceededError
  /// beyond the enumeration budget.
  const std::vector<Vector>& vertices() const;

  /// Vertices stacked as rows (k x d).
  const RowMatrix& vertex_matrix() const;

 private:
  struct VertexCache;

  std::size_t dimension_;
  std::vector<LinearConstraint> constraints_;
  Tolerances tol_;
  VertexBudget budget_;
  std::shared_ptr<VertexCache> cache_;
};

/// Vertex enumeration by solving every (d-1)-subset of facets together with sum w = 1.
std::vector<Vector> polytope_vertices(const WeightPolytope& p);

/// max c.w over the region; nullopt when the region is empty. Scans vertices
/// when within budget, otherwise solves an LP.
std::optional<LpResult> lp_max(const Eigen::Ref<const Vector>& c, const WeightPolytope& p);
std::optional<LpResult> lp_max_vertices(const Eigen::Ref<const Vector>& c, const WeightPolytope& p);
std::optional<LpResult> lp_max_simplex(const Eigen::Ref<const Vector>& c, const WeightPolytope& p);

bool is_empty(const WeightPolytope& p);

/// Deterministic feasible samples: every vertex, every pairwise vertex midpoint,
/// then interior points until at least `count` samples exist.
std::vector<Vector> sample_weights(const WeightPolytope& p, std::size_t count, std::uint64_t seed);

struct RegionRows {
  RowMatrix A;
  Vector b;
};

/// Rows of A w <= b for the region, with the simplex equality as two
/// inequalities. Nonnegativity stays implicit (the LP's x >= 0).
RegionRows region_rows(const WeightPolytope& p);

}  // namespace flexsky
