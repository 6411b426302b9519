#include "flexsky/operators.hpp"
#include "flexsky/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

namespace flexsky {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

ResultSet expand(const Relation& r, const DistinctView& view, const std::vector<std::size_t>& groups, OpKind kind) {
  ResultSet out;
  for (const auto g : groups) {
    for (const auto row : view[g].rows) out.entries.push_back({row, r.id(row), std::nullopt});
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ResultEntry& a, const ResultEntry& b) { return a.row < b.row; });
  out.meta.kind = kind;
  out.meta.input_size = r.size();
  out.meta.distinct_size = view.size();
  out.meta.dimension = r.arity();
  return out;
}

void require_region(const Relation& r, const WeightPolytope& p) {
  if (p.dimension() != r.arity()) {
    throw InputError("weight region has dimension " + std::to_string(p.dimension()) + ", relation has " +
                     std::to_string(r.arity()) + " attributes");
  }
  if (is_empty(p)) throw EmptyRegionError();
}

std::size_t vertex_count(const WeightPolytope& p) { return p.within_budget() ? p.vertices().size() : 0; }

// Groups ordered so that a dominator always precedes everything it dominates:
// ascending coordinate sum, then lexicographic values.
std::vector<std::size_t> dominance_order(const DistinctView& view) {
  const RowMatrix& values = view.values();
  const Vector sums = values.rowwise().sum();
  std::vector<std::size_t> order(view.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ia = static_cast<Eigen::Index>(a);
    const auto ib = static_cast<Eigen::Index>(b);
    if (sums(ia) != sums(ib)) return sums(ia) < sums(ib);
    const auto ra = values.row(ia);
    const auto rb = values.row(ib);
    return std::lexicographical_compare(ra.data(), ra.data() + ra.size(), rb.data(), rb.data() + rb.size());
  });
  return order;
}

RowMatrix gather(const RowMatrix& values, const std::vector<std::size_t>& groups) {
  RowMatrix out(static_cast<Eigen::Index>(groups.size()), values.cols());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = values.row(static_cast<Eigen::Index>(groups[i]));
  }
  return out;
}

}  // namespace

std::string_view to_string(OpKind kind) {
  switch (kind) {
    case OpKind::Sky: return "sky";
    case OpKind::Nd: return "nd";
    case OpKind::Po: return "po";
    case OpKind::TopK: return "topk";
    case OpKind::Lex: return "lex";
    case OpKind::Skyband: return "skyband";
    case OpKind::FSkyband: return "fskyband";
  }
  return "unknown";
}

std::optional<OpKind> parse_op_kind(std::string_view text) {
  for (const auto kind : {OpKind::Sky, OpKind::Nd, OpKind::Po, OpKind::TopK, OpKind::Lex, OpKind::Skyband,
                          OpKind::FSkyband}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

void QuerySpec::validate(const Schema& schema) const {
  switch (kind) {
    case OpKind::TopK:
      if (!weights) throw InputError("topk requires weights");
      if (!k) throw InputError("topk requires k");
      if (static_cast<std::size_t>(weights->size()) != schema.arity()) {
        throw InputError("weights have " + std::to_string(weights->size()) + " entries, schema has " +
                         std::to_string(schema.arity()));
      }
      break;
    case OpKind::Lex: {
      if (!priority) throw InputError("lex requires a priority");
      if (priority->size() != schema.arity()) throw InputError("priority must list every attribute exactly once");
      std::vector<bool> seen(schema.arity(), false);
      for (const auto& name : *priority) {
        const auto idx = schema.index_of(name);
        if (!idx) throw InputError("priority names unknown attribute '" + name + "'");
        if (seen[*idx]) throw InputError("priority lists '" + name + "' twice");
        seen[*idx] = true;
      }
      break;
    }
    case OpKind::Skyband:
    case OpKind::FSkyband:
      if (!k) throw InputError(std::string(to_string(kind)) + " requires k");
      break;
    default:
      break;
  }
  if (k && *k == 0) throw InputError("k must be at least 1");
}

std::vector<std::size_t> ResultSet::rows() const {
  std::vector<std::size_t> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.row);
  return out;
}

std::vector<std::string> ResultSet::ids() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.id);
  return out;
}

std::vector<std::size_t> skyline_groups(const DistinctView& view, SkylineAlgorithm algorithm) {
  const RowMatrix& values = view.values();
  std::vector<std::size_t> out;
  if (algorithm == SkylineAlgorithm::Naive) {
    for (Eigen::Index t = 0; t < values.rows(); ++t) {
      bool dominated = false;
      for (Eigen::Index s = 0; s < values.rows() && !dominated; ++s) {
        dominated = s != t && pareto_dominates(values.row(s), values.row(t));
      }
      if (!dominated) out.push_back(static_cast<std::size_t>(t));
    }
    return out;
  }

  for (const auto g : dominance_order(view)) {
    const auto row = values.row(static_cast<Eigen::Index>(g));
    const bool dominated = std::any_of(out.begin(), out.end(), [&](std::size_t kept) {
      return pareto_dominates(values.row(static_cast<Eigen::Index>(kept)), row);
    });
    if (!dominated) out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> skyband_counts(const DistinctView& view, std::size_t cap) {
  const RowMatrix& values = view.values();
  const auto order = dominance_order(view);
  std::vector<std::size_t> counts(view.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto row = values.row(static_cast<Eigen::Index>(order[i]));
    std::size_t c = 0;
    for (std::size_t j = 0; j < i && c < cap; ++j) {
      if (pareto_dominates(values.row(static_cast<Eigen::Index>(order[j])), row)) ++c;
    }
    counts[order[i]] = c;
  }
  return counts;
}

std::vector<std::size_t> nd_groups(const DistinctView& view, const WeightPolytope& p) {
  const auto sky = skyline_groups(view, SkylineAlgorithm::Sorted);
  const RowMatrix candidates = gather(view.values(), sky);
  const FDominanceTable table(candidates, p);
  std::vector<std::size_t> out;
  for (Eigen::Index t = 0; t < candidates.rows(); ++t) {
    bool dominated = false;
    for (Eigen::Index s = 0; s < candidates.rows() && !dominated; ++s) dominated = table.dominates(s, t);
    if (!dominated) out.push_back(sky[static_cast<std::size_t>(t)]);
  }
  return out;
}

std::optional<OptimalityMargin> optimality_margin(const Eigen::Ref<const Vector>& t, const RowMatrix& competitors,
                                                  const WeightPolytope& p) {
  const auto d = static_cast<Eigen::Index>(p.dimension());
  if (competitors.rows() == 0) {
    const auto any = lp_max(Vector::Zero(d), p);
    if (!any) return std::nullopt;
    return OptimalityMargin{std::numeric_limits<double>::infinity(), any->argmax};
  }

  // Variables (w, shifted) with shifted = margin + 1 >= 0; every w.(s - t) lies in [-1, 1].
  //   maximize shifted  s.t.  region rows on w,  w.(t - s) + shifted <= 1  for each competitor s.
  const auto region = region_rows(p);
  const Eigen::Index m = region.A.rows();
  const Eigen::Index k = competitors.rows();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + k + 1, d + 1);
  Vector b(m + k + 1);
  A.topLeftCorner(m, d) = region.A;
  b.head(m) = region.b;
  for (Eigen::Index i = 0; i < k; ++i) {
    A.row(m + i).head(d) = (t - competitors.row(i).transpose()).transpose();
    A(m + i, d) = 1.0;
    b(m + i) = 1.0;
  }
  A(m + k, d) = 1.0;
  b(m + k) = 3.0;
  Vector c = Vector::Zero(d + 1);
  c(d) = 1.0;

  const auto sol = solve_lp(A, b, c, p.tolerances().feasibility);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  OptimalityMargin out;
  out.weight = sol.x.head(d);
  out.margin = ((competitors.rowwise() - t.transpose()) * out.weight).minCoeff();
  return out;
}

std::vector<std::size_t> po_groups(const DistinctView& view, const WeightPolytope& p) {
  const auto candidates = nd_groups(view, p);
  const RowMatrix nd_values = gather(view.values(), candidates);
  const double eps = p.tolerances().potential_optimality;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    RowMatrix competitors(nd_values.rows() - 1, nd_values.cols());
    for (Eigen::Index j = 0, row = 0; j < nd_values.rows(); ++j) {
      if (j != static_cast<Eigen::Index>(i)) competitors.row(row++) = nd_values.row(j);
    }
    const auto margin = optimality_margin(nd_values.row(static_cast<Eigen::Index>(i)).transpose(), competitors, p);
    if (!margin) throw EmptyRegionError();
    if (margin->margin > eps) out.push_back(candidates[i]);
  }
  return out;
}

ResultSet skyline(const Relation& r, SkylineAlgorithm algorithm) {
  const auto start = Clock::now();
  const DistinctView view(r);
  auto out = expand(r, view, skyline_groups(view, algorithm), OpKind::Sky);
  out.meta.elapsed_ms = elapsed_ms(start);
  return out;
}

ResultSet nd(const Relation& r, const WeightPolytope& p) {
  const auto start = Clock::now();
  require_region(r, p);
  const DistinctView view(r);
  auto out = expand(r, view, nd_groups(view, p), OpKind::Nd);
  out.meta.vertex_count = vertex_count(p);
  out.meta.elapsed_ms = elapsed_ms(start);
  return out;
}

ResultSet po(const Relation& r, const WeightPolytope& p) {
  const auto start = Clock::now();
  require_region(r, p);
  const DistinctView view(r);
  auto out = expand(r, view, po_groups(view, p), OpKind::Po);
  out.meta.vertex_count = vertex_count(p);
  out.meta.elapsed_ms = elapsed_ms(start);
  return out;
}

ResultSet topk(const Relation& r, const Eigen::Ref<const Vector>& w, std::size_t k) {
  const auto start = Clock::now();
  if (k == 0) throw InputError("topk: k must be at least 1");
  if (static_cast<std::size_t>(w.size()) != r.arity()) throw InputError("topk: weight arity mismatch");
  if (!WeightPolytope::simplex(r.arity()).contains(w)) {
    throw InputError("topk: weights must be nonnegative and sum to 1");
  }
  const RowMatrix& values = r.normalized();
  const Vector scores = values * w;
  std::vector<std::size_t> order(r.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double sa = scores(static_cast<Eigen::Index>(a));
                      const double sb = scores(static_cast<Eigen::Index>(b));
                      return sa != sb ? sa < sb : a < b;
                    });
  ResultSet out;
  for (std::size_t i = 0; i < take; ++i) {
    out.entries.push_back({order[i], r.id(order[i]), scores(static_cast<Eigen::Index>(order[i]))});
  }
  out.meta.kind = OpKind::TopK;
  out.meta.input_size = r.size();
  out.meta.distinct_size = r.size();
  out.meta.dimension = r.arity();
  out.meta.elapsed_ms = elapsed_ms(start);
  return out;
}

ResultSet lex_best(const Relation& r, const std::vector<std::size_t>& priority) {
  const auto start = Clock::now();
  std::vector<bool> seen(r.arity(), false);
  if (priority.size() != r.arity()) throw InputError("lex: priority must cover every attribute");
  for (const auto a : priority) {
    if (a >= r.arity() || seen[a]) throw InputError("lex: priority is not a permutation of the attributes");
    seen[a] = true;
  }

  const DistinctView view(r);
  const RowMatrix& values = view.values();
  std::vector<std::size_t> survivors(view.size());
  std::iota(survivors.begin(), survivors.end(), std::size_t{0});
  for (const auto a : priority) {
    if (survivors.size() <= 1) break;
    const auto col = static_cast<Eigen::Index>(a);
    double best = std::numeric_limits<double>::infinity();
    for (const auto g : survivors) best = std::min(best, values(static_cast<Eigen::Index>(g), col));
    std::erase_if(survivors, [&](std::size_t g) { return values(static_cast<Eigen::Index>(g), col) != best; });
  }
  auto out = expand(r, view, survivors, OpKind::Lex);
  out.meta.elapsed_ms = elapsed_ms(start);
  return out;
}

ResultSet lex_best(const Relation& r, const std::vector<std::string>& priority) {
  std::vector<std::size_t> idx;
  idx.reserve(priority.size());
  for (const auto& name : priority) {
    const auto i = r.schema().index_of(name);
    if (!i) throw InputError("lex: unknown attribute '" + name + "'");
    idx.push_back(*i);
  }
  return lex_best(r, idx);
}

ResultSet k_skyband(const Relation& r, std::size_t k) {
  const auto start = Clock::now();
  if (k == 0) throw InputError("skyband: k must be at least 1");
  const DistinctView view(r);
  const auto counts = skyband_counts(view, k);
  std::vector<std::size_t> groups;
  for (std::size_t g = 0; g < counts.size(); ++g) {
    if (counts[g] < k) groups.push_back(g);
  }
  auto out = expand(r, view, groups, OpKind::Skyband);
  out.meta.elapsed_ms = elapsed_ms(start);
  return out;
}

ResultSet f_skyband(const Relation& r, const WeightPolytope& p, std::size_t k) {
  const auto start = Clock::now();
  if (k == 0) throw InputError("fskyband: k must be at least 1");
  require_region(r, p);
  const DistinctView view(r);
  // F-dominator counts are never below Pareto counts, so only the k-skyband can qualify.
  const auto counts = skyband_counts(view, k);
  const FDominanceTable table(view.values(), p);
  std::vector<std::size_t> groups;
  for (std::size_t g = 0; g < counts.size(); ++g) {
    if (counts[g] >= k) continue;
    std::size_t c = 0;
    for (Eigen::Index s = 0; s < table.size() && c < k; ++s) {
      if (table.dominates(s, static_cast<Eigen::Index>(g))) ++c;
    }
    if (c < k) groups.push_back(g);
  }
  auto out = expand(r, view, groups, OpKind::FSkyband);
  out.meta.vertex_count = vertex_count(p);
  out.meta.elapsed_ms = elapsed_ms(start);
  return out;
}

ResultSet run_query(const Relation& r, const QuerySpec& spec, const Tolerances& tol) {
  spec.validate(r.schema());
  const WeightPolytope region(r.arity(), spec.constraints, tol);
  switch (spec.kind) {
    case OpKind::Sky: return skyline(r, spec.algorithm);
    case OpKind::Nd: return nd(r, region);
    case OpKind::Po: return po(r, region);
    case OpKind::TopK: return topk(r, *spec.weights, *spec.k);
    case OpKind::Lex: return lex_best(r, *spec.priority);
    case OpKind::Skyband: return k_skyband(r, *spec.k);
    case OpKind::FSkyband: return f_skyband(r, region, *spec.k);
  }
  throw InputError("unknown operator");
}

}  // namespace flexsky
