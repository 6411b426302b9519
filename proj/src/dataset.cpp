#include "flexsky/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace flexsky {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<long long> parse_integer(std::string_view s) {
  long long value = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  if (begin == end) return std::nullopt;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::optional<double> parse_real(std::string_view s) {
  double value = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  if (begin == end) return std::nullopt;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.emplace_back(trim(field));
  return fields;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

Schema::Schema(std::vector<AttributeSpec> attributes) : attributes_(std::move(attributes)) {
  if (attributes_.empty()) throw InputError("schema needs at least one attribute");
  std::set<std::string> seen;
  for (const auto& a : attributes_) {
    if (a.name.empty()) throw InputError("attribute name must be non-empty");
    if (!seen.insert(a.name).second) throw InputError("duplicate attribute name '" + a.name + "'");
  }
}

Schema Schema::uniform(std::size_t d) {
  std::vector<AttributeSpec> attrs;
  attrs.reserve(d);
  for (std::size_t i = 0; i < d; ++i) attrs.push_back({"a" + std::to_string(i + 1), Direction::Min});
  return Schema(std::move(attrs));
}

Schema Schema::parse(std::string_view text) {
  std::vector<AttributeSpec> attrs;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    const auto colon = item.find(':');
    AttributeSpec spec;
    spec.name = std::string(trim(item.substr(0, colon)));
    if (colon != std::string_view::npos) {
      const auto dir = lowercase(trim(item.substr(colon + 1)));
      if (dir == "min") {
        spec.direction = Direction::Min;
      } else if (dir == "max") {
        spec.direction = Direction::Max;
      } else {
        throw InputError("attribute '" + spec.name + "': direction must be min or max, got '" + dir + "'");
      }
    }
    attrs.push_back(std::move(spec));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Schema(std::move(attrs));
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

bool id_less(std::string_view a, std::string_view b) {
  const auto ia = parse_integer(a);
  const auto ib = parse_integer(b);
  if (ia && ib) return *ia != *ib ? *ia < *ib : a < b;
  if (ia != ib) return ia.has_value();
  return a < b;
}

Relation::Relation(Schema schema, std::vector<RawTuple> tuples) : schema_(std::move(schema)) {
  const std::size_t d = schema_.arity();
  std::vector<std::size_t> order(tuples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return id_less(tuples[a].id, tuples[b].id); });

  ids_.reserve(tuples.size());
  raw_.resize(static_cast<Eigen::Index>(tuples.size()), static_cast<Eigen::Index>(d));
  for (std::size_t row = 0; row < order.size(); ++row) {
    auto& t = tuples[order[row]];
    if (t.values.size() != d) {
      throw InputError("tuple '" + t.id + "' has " + std::to_string(t.values.size()) +
                       " values, schema has " + std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::isfinite(t.values[j])) {
        throw InputError("tuple '" + t.id + "', attribute '" + schema_[j].name + "': non-finite value");
      }
      raw_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) = t.values[j];
    }
    if (row > 0 && ids_.back() == t.id) throw InputError("duplicate tuple id '" + t.id + "'");
    ids_.push_back(std::move(t.id));
  }
}

Relation::Relation(Schema schema, std::vector<std::string> ids, RowMatrix raw,
                   std::optional<RowMatrix> normalized)
    : schema_(std::move(schema)), ids_(std::move(ids)), raw_(std::move(raw)), normalized_(std::move(normalized)) {}

std::optional<std::size_t> Relation::row_of(std::string_view id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id,
                                   [](const std::string& a, std::string_view b) { return id_less(a, b); });
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

const RowMatrix& Relation::normalized() const {
  if (!normalized_) throw InputError("relation is not normalized");
  return *normalized_;
}

Relation Relation::assume_normalized() const {
  if (raw_.size() > 0 && (raw_.minCoeff() < 0.0 || raw_.maxCoeff() > 1.0)) {
    throw InputError("pre-normalized data must lie in [0,1]");
  }
  return Relation(schema_, ids_, raw_, raw_);
}

Relation ingest_csv(const std::filesystem::path& path, const Schema& schema, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");

  std::string line;
  std::size_t line_no = 0;
  // Skip leading blank lines; the first non-blank line is the header.
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw InputError("'" + path.string() + "': missing header row");
  if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

  const auto header = split_record(line);
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.size(); ++c) column.emplace(header[c], c);

  std::vector<std::size_t> attr_column(schema.arity());
  for (std::size_t j = 0; j < schema.arity(); ++j) {
    const auto it = column.find(schema[j].name);
    if (it == column.end()) throw InputError("unknown column '" + schema[j].name + "': not in CSV header");
    attr_column[j] = it->second;
  }
  std::optional<std::size_t> id_column;
  if (options.id_column) {
    const auto it = column.find(*options.id_column);
    if (it == column.end()) throw InputError("unknown column '" + *options.id_column + "': id column not in CSV header");
    id_column = it->second;
  }

  std::vector<RawTuple> tuples;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_record(line);
    if (fields.size() != header.size()) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    RawTuple t;
    t.id = id_column ? fields[*id_column] : std::to_string(data_row);
    if (t.id.empty()) throw InputError("line " + std::to_string(line_no) + ": empty id");
    t.values.reserve(schema.arity());
    for (std::size_t j = 0; j < schema.arity(); ++j) {
      const auto& cell = fields[attr_column[j]];
      const auto value = parse_real(cell);
      if (!value || !std::isfinite(*value)) {
        throw InputError("line " + std::to_string(line_no) + " (data row " + std::to_string(data_row) +
                         "), column '" + schema[j].name + "': " +
                         (value ? "non-finite" : "non-numeric") + " value '" + cell + "'");
      }
      t.values.push_back(*value);
    }
    tuples.push_back(std::move(t));
    ++data_row;
  }
  return Relation(schema, std::move(tuples));
}

Relation normalize(const Relation& r) {
  if (r.empty()) throw InputError("cannot normalize an empty relation");
  const RowMatrix& raw = r.raw();
  RowMatrix out(raw.rows(), raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const double lo = raw.col(j).minCoeff();
    const double hi = raw.col(j).maxCoeff();
    const double span = hi - lo;
    if (span <= 0.0) {
      out.col(j).setZero();
    } else if (r.schema()[static_cast<std::size_t>(j)].direction == Direction::Min) {
      out.col(j) = ((raw.col(j).array() - lo) / span).cwiseMax(0.0).cwiseMin(1.0);
    } else {
      out.col(j) = ((hi - raw.col(j).array()) / span).cwiseMax(0.0).cwiseMin(1.0);
    }
  }
  return Relation(r.schema(), r.ids(), raw, std::move(out));
}

std::string_view to_string(Distribution dist) {
  switch (dist) {
    case Distribution::Independent: return "independent";
    case Distribution::Correlated: return "correlated";
    case Distribution::Anticorrelated: return "anticorrelated";
  }
  return "unknown";
}

std::optional<Distribution> parse_distribution(std::string_view text) {
  const auto t = lowercase(trim(text));
  if (t == "independent") return Distribution::Independent;
  if (t == "correlated") return Distribution::Correlated;
  if (t == "anticorrelated") return Distribution::Anticorrelated;
  return std::nullopt;
}

Relation gen_synthetic(std::size_t n, std::size_t d, Distribution dist, std::uint64_t seed) {
  if (n == 0 || d == 0) throw InputError("gen_synthetic: n and d must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> centered(-0.5, 0.5);
  std::normal_distribution<double> latent(0.5, 0.2);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::normal_distribution<double> plane(0.5, 0.05);

  std::vector<RawTuple> tuples(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& values = tuples[i].values;
    values.resize(d);
    switch (dist) {
      case Distribution::Independent:
        for (auto& v : values) v = unit(rng);
        break;
      case Distribution::Correlated: {
        const double c = latent(rng);
        for (auto& v : values) v = c + jitter(rng);
        break;
      }
      case Distribution::Anticorrelated: {
        // Spread uniformly within the hyperplane sum(v) = d * c.
        const double c = plane(rng);
        double mean = 0.0;
        for (auto& v : values) {
          v = centered(rng);
          mean += v;
        }
        mean /= static_cast<double>(d);
        for (auto& v : values) v = c + (v - mean);
        break;
      }
    }
    for (auto& v : values) v = std::clamp(v, 0.0, 1.0);
    tuples[i].id = std::to_string(i);
  }
  return Relation(Schema::uniform(d), std::move(tuples)).assume_normalized();
}

DistinctView::DistinctView(const Relation& r) {
  const RowMatrix& values = r.normalized();
  const auto d = values.cols();
  std::map<std::vector<double>, std::size_t> index;
  for (Eigen::Index row = 0; row < values.rows(); ++row) {
    std::vector<double> key(values.row(row).data(), values.row(row).data() + d);
    auto [it, inserted] = index.emplace(std::move(key), groups_.size());
    if (inserted) groups_.push_back({values.row(row).transpose(), {}});
    groups_[it->second].rows.push_back(static_cast<std::size_t>(row));
  }
  values_.resize(static_cast<Eigen::Index>(groups_.size()), d);
  for (std::size_t g = 0; g < groups_.size(); ++g) values_.row(static_cast<Eigen::Index>(g)) = groups_[g].values.transpose();
}

std::optional<std::size_t> DistinctView::find(const Eigen::Ref<const Vector>& v) const {
  if (static_cast<std::size_t>(v.size()) != arity()) return std::nullopt;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].values == v) return g;
  }
  return std::nullopt;
}

}  // namespace flexsky
