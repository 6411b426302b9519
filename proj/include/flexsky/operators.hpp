#pragma once

#include "flexsky/dataset.hpp"
#include "flexsky/dominance.hpp"
#include "flexsky/preference.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flexsky {

enum class OpKind { Sky, Nd, Po, TopK, Lex, Skyband, FSkyband };

std::string_view to_string(OpKind kind);
std::optional<OpKind> parse_op_kind(std::string_view text);

enum class SkylineAlgorithm { Naive, Sorted };

struct QuerySpec {
  OpKind kind = OpKind::Sky;
  std::optional<std::size_t> k;
  std::optional<Vector> weights;
  std::vector<LinearConstraint> constraints;
  std::optional<std::vector<std::string>> priority;
  SkylineAlgorithm algorithm = SkylineAlgorithm::Sorted;

  /// Throws InputError when a field required by `kind` is missing or invalid.
  void validate(const Schema& schema) const;
};

struct ResultEntry {
  std::size_t row = 0;
  std::string id;
  std::optional<double> score;
};

struct ResultMeta {
  OpKind kind = OpKind::Sky;
  std::size_t input_size = 0;
  std::size_t distinct_size = 0;
  std::size_t dimension = 0;
  std::size_t vertex_count = 0;
  double elapsed_ms = 0.0;
};

/// Operator output. Unscored results are in ascending id order; top-k results
/// are in ascending score order with ties by id.
struct ResultSet {
  std::vector<ResultEntry> entries;
  ResultMeta meta;

  std::size_t size() const noexcept { return entries.size(); }
  std::vector<std::size_t> rows() const;
  std::vector<std::string> ids() const;
};

ResultSet skyline(const Relation& r, SkylineAlgorithm algorithm = SkylineAlgorithm::Sorted);

/// Tuples F-dominated by no other tuple over the region.
ResultSet nd(const Relation& r, const WeightPolytope& p);

/// Tuples that are the strict unique best for some weight in the region.
ResultSet po(const Relation& r, const WeightPolytope& p);

ResultSet topk(const Relation& r, const Eigen::Ref<const Vector>& w, std::size_t k);

/// Successive stage-minimizer filters, in priority order, until one distinct
/// vector remains.
ResultSet lex_best(const Relation& r, const std::vector<std::size_t>& priority);
ResultSet lex_best(const Relation& r, const std::vector<std::string>& priority);

ResultSet k_skyband(const Relation& r, std::size_t k);
ResultSet f_skyband(const Relation& r, const WeightPolytope& p, std::size_t k);

ResultSet run_query(const Relation& r, const QuerySpec& spec, const Tolerances& tol = default_tolerances());

// Group-level building blocks over a DistinctView; results are ascending group indices.

std::vector<std::size_t> skyline_groups(const DistinctView& view, SkylineAlgorithm algorithm);
std::vector<std::size_t> nd_groups(const DistinctView& view, const WeightPolytope& p);
std::vector<std::size_t> po_groups(const DistinctView& view, const WeightPolytope& p);
std::vector<std::size_t> skyband_counts(const DistinctView& view, std::size_t cap);

struct OptimalityMargin {
  /// max over the region of min_s w.(s - t); positive means t can be the strict best.
  double margin = 0.0;
  Vector weight;
};

/// Largest score gap by which t can beat every competitor for some region weight.
/// nullopt when the region is empty; an empty competitor set gives +infinity.
std::optional<OptimalityMargin> optimality_margin(const Eigen::Ref<const Vector>& t, const RowMatrix& competitors,
                                                  const WeightPolytope& p);

}  // namespace flexsky
