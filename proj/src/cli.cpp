#include "flexsky/cli.hpp"

#include "flexsky/bench.hpp"
#include "flexsky/dataset.hpp"
#include "flexsky/operators.hpp"
#include "flexsky/preference.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace flexsky::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(v);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    out.push_back(first == std::string::npos ? std::string() : item.substr(first, last - first + 1));
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text, const std::string& flag) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(flag + ": invalid number '" + text + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) {
    if (const auto dots = item.find(".."); dots != std::string::npos && std::is_integral_v<T>) {
      const T lo = parse_number<T>(item.substr(0, dots), flag);
      const T hi = parse_number<T>(item.substr(dots + 2), flag);
      if (hi < lo) throw UsageError(flag + ": empty range '" + item + "'");
      for (T v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_number<T>(item, flag));
    }
  }
  if (out.empty()) throw UsageError(flag + ": expected at least one value");
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Schema schema_from_header(const std::string& path, const std::optional<std::string>& id_column) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string header;
  while (std::getline(in, header) && header.find_first_not_of(" \t\r") == std::string::npos) {
  }
  if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);
  std::vector<AttributeSpec> attrs;
  for (auto& name : split_list(header)) {
    if (!name.empty() && name.back() == '\r') name.pop_back();
    if (id_column && name == *id_column) continue;
    attrs.push_back({name, Direction::Min});
  }
  return Schema(std::move(attrs));
}

struct GenArgs {
  long long n = 0;
  long long d = 0;
  std::string dist;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  if (a.n <= 0) throw UsageError("--n must be a positive integer");
  if (a.d <= 0) throw UsageError("--d must be a positive integer");
  const auto dist = parse_distribution(a.dist);
  if (!dist) throw UsageError("--dist must be independent, correlated or anticorrelated");

  const Relation r = gen_synthetic(static_cast<std::size_t>(a.n), static_cast<std::size_t>(a.d), *dist, a.seed);
  std::ostringstream csv;
  for (std::size_t j = 0; j < r.arity(); ++j) csv << (j ? "," : "") << r.schema()[j].name;
  csv << '\n';
  for (Eigen::Index row = 0; row < r.raw().rows(); ++row) {
    for (Eigen::Index j = 0; j < r.raw().cols(); ++j) csv << (j ? "," : "") << format_real(r.raw()(row, j));
    csv << '\n';
  }
  if (a.out.empty() || a.out == "-") {
    out << csv.str();
  } else {
    std::ofstream file(a.out, std::ios::binary);
    if (!file) throw InputError("cannot write '" + a.out + "'");
    file << csv.str();
  }
  return kOk;
}

struct QueryArgs {
  std::string in;
  std::string op;
  std::string schema;
  std::string constraints;
  std::string weights;
  long long k = 0;
  bool k_set = false;
  std::string priority;
  bool normalized = false;
  std::string format = "csv";
  std::string algo;
  std::string id_column;
};

int cmd_query(const QueryArgs& a, std::ostream& out, std::ostream& err) {
  const auto kind = parse_op_kind(a.op);
  if (!kind) throw UsageError("--op must be one of sky|nd|po|topk|lex|skyband|fskyband");
  if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json");

  QuerySpec spec;
  spec.kind = *kind;
  if (!a.algo.empty()) {
    if (a.algo == "naive") spec.algorithm = SkylineAlgorithm::Naive;
    else if (a.algo == "sorted") spec.algorithm = SkylineAlgorithm::Sorted;
    else throw UsageError("--algo must be naive or sorted");
  }

  CsvOptions csv;
  if (!a.id_column.empty()) csv.id_column = a.id_column;
  const Schema schema = a.schema.empty() ? schema_from_header(a.in, csv.id_column) : Schema::parse(a.schema);

  if (a.k_set) {
    if (a.k <= 0) throw UsageError("--k must be a positive integer");
    spec.k = static_cast<std::size_t>(a.k);
  }
  if (!a.weights.empty()) {
    const auto values = parse_number_list<double>(a.weights, "--weights");
    spec.weights = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
  }
  if (!a.priority.empty()) spec.priority = split_list(a.priority);
  if (!a.constraints.empty()) {
    const bool is_file = std::filesystem::is_regular_file(a.constraints);
    spec.constraints = parse_constraints(is_file ? read_text(a.constraints) : a.constraints, schema);
  }
  try {
    spec.validate(schema);
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }

  const Relation raw = ingest_csv(a.in, schema, csv);
  const Relation r = a.normalized ? raw.assume_normalized() : (raw.empty() ? raw.assume_normalized() : normalize(raw));
  const ResultSet result = run_query(r, spec);

  if (a.format == "json") {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : result.entries) {
      nlohmann::json item{{"id", e.id}};
      if (e.score) item["score"] = *e.score;
      entries.push_back(std::move(item));
    }
    nlohmann::json doc{{"op", std::string(to_string(result.meta.kind))},
                       {"entries", std::move(entries)},
                       {"meta",
                        {{"n", result.meta.input_size},
                         {"distinct", result.meta.distinct_size},
                         {"d", result.meta.dimension},
                         {"out", result.size()},
                         {"vertices", result.meta.vertex_count},
                         {"elapsed_ms", result.meta.elapsed_ms}}}};
    out << doc.dump(2) << '\n';
  } else {
    for (const auto& e : result.entries) {
      out << e.id;
      if (e.score) out << ',' << format_real(*e.score);
      out << '\n';
    }
  }
  err << "op=" << to_string(result.meta.kind) << " n=" << result.meta.input_size << " d=" << result.meta.dimension
      << " out=" << result.size() << " vertices=" << result.meta.vertex_count
      << " elapsed_ms=" << result.meta.elapsed_ms << '\n';
  return kOk;
}

struct BenchArgs {
  std::string dists = "anticorrelated";
  std::string ns = "1000";
  std::string ds = "3";
  std::string constraints = "2";
  std::string seeds = "1";
  std::string out;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  BenchConfig config;
  config.dists.clear();
  for (const auto& name : split_list(a.dists)) {
    const auto dist = parse_distribution(name);
    if (!dist) throw UsageError("--dists: unknown distribution '" + name + "'");
    config.dists.push_back(*dist);
  }
  config.ns = parse_number_list<std::size_t>(a.ns, "--ns");
  config.ds = parse_number_list<std::size_t>(a.ds, "--ds");
  config.constraint_counts = parse_number_list<std::size_t>(a.constraints, "--constraints-per-cell");
  config.seeds = parse_number_list<std::uint64_t>(a.seeds, "--seeds");
  if (config.dists.empty()) throw UsageError("--dists: expected at least one distribution");
  for (const auto n : config.ns) {
    if (n == 0) throw UsageError("--ns: values must be positive");
  }
  for (const auto d : config.ds) {
    if (d == 0) throw UsageError("--ds: values must be positive");
  }

  const BenchMatrix matrix = run_bench(config);
  if (a.out.empty() || a.out == "-") {
    write_bench_csv(out, matrix);
  } else {
    std::ofstream file(a.out, std::ios::binary);
    if (!file) throw InputError("cannot write '" + a.out + "'");
    write_bench_csv(file, matrix);
  }

  // Mean retention of ND and PO relative to SKY per cell.
  std::map<std::tuple<int, std::size_t, std::size_t, std::size_t>, std::array<double, 3>> retention;
  for (std::size_t i = 0; i + 2 < matrix.size(); i += 3) {
    const auto& sky = matrix[i];
    auto& acc = retention[{static_cast<int>(sky.dist), sky.n, sky.d, sky.m_constraints}];
    const double denom = static_cast<double>(std::max<std::size_t>(sky.out_card, 1));
    acc[0] += static_cast<double>(matrix[i + 1].out_card) / denom;
    acc[1] += static_cast<double>(matrix[i + 2].out_card) / denom;
    acc[2] += 1.0;
  }
  for (const auto& [key, acc] : retention) {
    err << "dist=" << to_string(static_cast<Distribution>(std::get<0>(key))) << " n=" << std::get<1>(key)
        << " d=" << std::get<2>(key) << " m=" << std::get<3>(key) << " nd/sky=" << acc[0] / acc[2]
        << " po/sky=" << acc[1] / acc[2] << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"flexsky: skyline, top-k, lexicographic and flexible-skyline queries over CSV data", "flexsky"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic benchmark dataset as CSV");
  gen_cmd->add_option("--n", gen.n, "Number of tuples")->required();
  gen_cmd->add_option("--d", gen.d, "Number of attributes")->required();
  gen_cmd->add_option("--dist", gen.dist, "independent|correlated|anticorrelated")->required();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output file (stdout when omitted)");

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Run one operator over a CSV dataset");
  query_cmd->add_option("--in", query.in, "Input CSV")->required();
  query_cmd->add_option("--op", query.op, "sky|nd|po|topk|lex|skyband|fskyband")->required();
  query_cmd->add_option("--schema", query.schema, "name:min|max,... (all columns, min, when omitted)");
  query_cmd->add_option("--constraints", query.constraints, "Constraint file or inline constraint text");
  query_cmd->add_option("--weights", query.weights, "Comma-separated weights (topk)");
  auto* k_opt = query_cmd->add_option("--k", query.k, "k for topk, skyband, fskyband");
  query_cmd->add_option("--priority", query.priority, "Comma-separated attribute order (lex)");
  query_cmd->add_flag("--normalized", query.normalized, "Input is already min-better in [0,1]");
  query_cmd->add_option("--format", query.format, "csv|json");
  query_cmd->add_option("--algo", query.algo, "naive|sorted (sky only)");
  query_cmd->add_option("--id-column", query.id_column, "Column holding tuple ids");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run SKY/ND/PO over a matrix of synthetic datasets");
  bench_cmd->add_option("--dists", bench.dists, "Comma-separated distributions");
  bench_cmd->add_option("--ns", bench.ns, "Comma-separated cardinalities");
  bench_cmd->add_option("--ds", bench.ds, "Comma-separated dimensions");
  bench_cmd->add_option("--constraints-per-cell", bench.constraints, "Comma-separated constraint counts");
  bench_cmd->add_option("--seeds", bench.seeds, "Comma-separated seeds or ranges a..b");
  bench_cmd->add_option("--out", bench.out, "Output CSV (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    for (auto* sub : {gen_cmd, query_cmd, bench_cmd}) {
      if (sub->parsed()) {
        err << sub->help();
        return kUsage;
      }
    }
    err << app.help();
    return kUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, out);
    if (query_cmd->parsed()) {
      query.k_set = k_opt->count() > 0;
      return cmd_query(query, out, err);
    }
    return cmd_bench(bench, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "constraint parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const EmptyRegionError& e) {
    err << "error: " << e.what() << '\n';
    return kEmptyRegion;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace flexsky::cli
