#pragma once

#include "flexsky/dataset.hpp"
#include "flexsky/preference.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace flexsky::oracle {

// Brute-force references. They share no code path with the operators beyond
// the relation and polytope containers, and trade speed for obviousness.

struct OracleConfig {
  std::size_t sample_count = 10000;
  double grid_step = 1e-3;
  std::uint64_t seed = 0;
  double margin = 1e-9;

  void validate() const;
};

/// All-pairs Pareto filter over rows; identical rows never dominate each other.
std::vector<std::size_t> oracle_skyline(const Relation& r);

struct SampledVerdict {
  bool dominates = false;
  /// A sampled weight with w.(t - s) > margin, when one was found. Such a
  /// "false" is conclusive; a "true" is only evidence.
  std::optional<Vector> violation;
  std::size_t samples = 0;
};

SampledVerdict oracle_f_dominates(const Vector& t, const Vector& s, const WeightPolytope& p,
                                  const OracleConfig& cfg = {});

/// Grid scan of the region for a weight making t the strict unique minimizer
/// over r's other distinct vectors. A hit is conclusive; a miss may skip a thin
/// witness region.
struct GridVerdict {
  bool member = false;
  std::optional<Vector> witness;
  std::size_t grid_points = 0;
};

GridVerdict oracle_po_member(const Vector& t, const Relation& r, const WeightPolytope& p, const OracleConfig& cfg = {});

/// Full sort by (score, id); first k rows.
std::vector<std::size_t> oracle_topk(const Relation& r, const Vector& w, std::size_t k);

}  // namespace flexsky::oracle
