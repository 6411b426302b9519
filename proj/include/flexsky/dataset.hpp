#pragma once

#include "flexsky/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flexsky {

enum class Direction { Min, Max };

struct AttributeSpec {
  std::string name;
  Direction direction = Direction::Min;
};

/// Ordered attribute list; names are non-empty and unique.
class Schema {
 public:
  explicit Schema(std::vector<AttributeSpec> attributes);

  /// `d` attributes named a1..ad, all MIN.
  static Schema uniform(std::size_t d);

  /// Parses "name:min|max,..." (direction defaults to min when omitted).
  static Schema parse(std::string_view text);

  std::size_t arity() const noexcept { return attributes_.size(); }
  const std::vector<AttributeSpec>& attributes() const noexcept { return attributes_; }
  const AttributeSpec& operator[](std::size_t i) const { return attributes_[i]; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const Schema& a, const Schema& b) {
    if (a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (a[i].name != b[i].name || a[i].direction != b[i].direction) return false;
    }
    return true;
  }

 private:
  std::vector<AttributeSpec> attributes_;
};

struct RawTuple {
  std::string id;
  std::vector<double> values;
};

/// Tuple id ordering: integer ids numerically, then any other id lexicographically.
bool id_less(std::string_view a, std::string_view b);

/// Immutable set of identified tuples. Rows are kept in ascending id order,
/// so row position doubles as the id tie-break everywhere downstream.
class Relation {
 public:
  Relation(Schema schema, std::vector<RawTuple> tuples);

  const Schema& schema() const noexcept { return schema_; }
  std::size_t size() const noexcept { return ids_.size(); }
  std::size_t arity() const noexcept { return schema_.arity(); }
  bool empty() const noexcept { return ids_.empty(); }

  const std::string& id(std::size_t row) const { return ids_[row]; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::optional<std::size_t> row_of(std::string_view id) const;

  const RowMatrix& raw() const noexcept { return raw_; }

  bool is_normalized() const noexcept { return normalized_.has_value(); }
  /// Min-better values in [0,1]; throws InputError when not normalized.
  const RowMatrix& normalized() const;

  /// Treats the raw values as already normalized (all in [0,1], lower better).
  Relation assume_normalized() const;

 private:
  friend Relation normalize(const Relation& r);
  Relation(Schema schema, std::vector<std::string> ids, RowMatrix raw,
           std::optional<RowMatrix> normalized);

  Schema schema_;
  std::vector<std::string> ids_;
  RowMatrix raw_;
  std::optional<RowMatrix> normalized_;
};

struct CsvOptions {
  std::optional<std::string> id_column;
};

/// Reads a comma-separated file with a header row. Columns are matched to the
/// schema by name; extra columns are ignored. Without an id column the 0-based
/// data-row index becomes the id.
Relation ingest_csv(const std::filesystem::path& path, const Schema& schema,
                    const CsvOptions& options = {});

/// Min-max scaling to [0,1] with MAX attributes flipped; constant columns map to 0.
Relation normalize(const Relation& r);

enum class Distribution { Independent, Correlated, Anticorrelated };

std::string_view to_string(Distribution dist);
std::optional<Distribution> parse_distribution(std::string_view text);

/// Deterministic synthetic benchmark data, already normalized, schema a1..ad.
Relation gen_synthetic(std::size_t n, std::size_t d, Distribution dist, std::uint64_t seed);

/// Normalized rows grouped by exact value equality. Groups are ordered by their
/// smallest row, and each group's rows are ascending.
class DistinctView {
 public:
  struct Group {
    Vector values;
    std::vector<std::size_t> rows;
  };

  explicit DistinctView(const Relation& r);

  std::size_t size() const noexcept { return groups_.size(); }
  bool empty() const noexcept { return groups_.empty(); }
  std::size_t arity() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Group& operator[](std::size_t g) const { return groups_[g]; }
  const std::vector<Group>& groups() const noexcept { return groups_; }

  /// One row per group, same order as groups().
  const RowMatrix& values() const noexcept { return values_; }

  /// Group holding exactly this vector, if any.
  std::optional<std::size_t> find(const Eigen::Ref<const Vector>& v) const;

 private:
  std::vector<Group> groups_;
  RowMatrix values_;
};

inline DistinctView distinct_view(const Relation& r) { return DistinctView(r); }

}  // namespace flexsky
