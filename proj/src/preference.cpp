#include "flexsky/preference.hpp"
#include "flexsky/simplex.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <mutex>
#include <random>
#include <string>

namespace flexsky {

namespace {

class ConstraintLexer {
 public:
  ConstraintLexer(std::string_view text, std::size_t line, std::size_t column_offset)
      : text_(text), line_(line), offset_(column_offset) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  bool starts_number() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  double number() {
    skip_space();
    double sign = 1.0;
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      sign = text_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
      skip_space();
    }
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
    if (ec != std::errc{} || !std::isfinite(value)) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return sign * value;
  }

  std::string weight_name() {
    skip_space();
    if (text_.substr(pos_, 2) != "w_") fail("expected a weight 'w_<name>'");
    pos_ += 2;
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a weight name after 'w_'");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::size_t column() const { return offset_ + pos_ + 1; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, column()); }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

// Linear expression: signed sum of `number`, `w_name` or `number * w_name`.
struct Expression {
  Vector weights;
  double constant = 0.0;
};

Expression parse_expression(ConstraintLexer& lex, std::size_t line, const Schema& schema) {
  Expression e{Vector::Zero(static_cast<Eigen::Index>(schema.arity())), 0.0};
  auto term = [&](double sign) {
    if (lex.starts_number()) {
      const double factor = lex.number();
      if (!lex.accept("*")) {
        e.constant += sign * factor;
        return;
      }
      sign *= factor;
    }
    const std::size_t name_column = lex.column();
    const auto name = lex.weight_name();
    const auto idx = schema.index_of(name);
    if (!idx) throw ParseError("unknown weight name 'w_" + name + "'", line, name_column);
    e.weights(static_cast<Eigen::Index>(*idx)) += sign;
  };

  double sign = 1.0;
  if (lex.accept("-")) sign = -1.0;
  else lex.accept("+");
  term(sign);
  for (;;) {
    if (lex.accept("+")) term(1.0);
    else if (lex.accept("-")) term(-1.0);
    else break;
  }
  return e;
}

void parse_one(std::string_view text, std::size_t line, std::size_t offset, const Schema& schema,
               std::vector<LinearConstraint>& out) {
  ConstraintLexer lex(text, line, offset);
  const Expression lhs = parse_expression(lex, line, schema);

  enum class Op { Le, Ge, Eq } op;
  if (lex.accept("<=")) op = Op::Le;
  else if (lex.accept(">=")) op = Op::Ge;
  else if (lex.accept("=")) op = Op::Eq;
  else lex.fail("expected '<=', '>=' or '='");

  const Expression rhs = parse_expression(lex, line, schema);
  if (!lex.at_end()) lex.fail("unexpected trailing input");

  // lhs op rhs  ->  (lhs.w - rhs.w) . w  op  rhs.c - lhs.c
  const Vector coeffs = lhs.weights - rhs.weights;
  const double bound = rhs.constant - lhs.constant;
  if (coeffs.cwiseAbs().maxCoeff() == 0.0) lex.fail("constraint has no nonzero coefficient");

  if (op == Op::Le || op == Op::Eq) out.push_back({coeffs, bound});
  if (op == Op::Ge || op == Op::Eq) out.push_back({-coeffs, -bound});
}

// Sorted lexicographically so vertex order never depends on enumeration order.
bool lex_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

Vector dirichlet_point(std::size_t d, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  Vector w(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = exp1(rng);
  return w / w.sum();
}

}  // namespace

std::vector<LinearConstraint> parse_constraints(std::string_view text, const Schema& schema) {
  std::vector<LinearConstraint> out;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    ++line;
    const auto nl = text.find('\n', start);
    std::string_view row = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    if (const auto hash = row.find('#'); hash != std::string_view::npos) row = row.substr(0, hash);

    std::size_t seg_start = 0;
    while (seg_start <= row.size()) {
      const auto semi = row.find(';', seg_start);
      const auto seg = row.substr(seg_start, semi == std::string_view::npos ? row.npos : semi - seg_start);
      if (seg.find_first_not_of(" \t\r") != std::string_view::npos) parse_one(seg, line, seg_start, schema, out);
      if (semi == std::string_view::npos) break;
      seg_start = semi + 1;
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return out;
}

struct WeightPolytope::VertexCache {
  std::once_flag once;
  std::vector<Vector> vertices;
  RowMatrix matrix;
};

WeightPolytope::WeightPolytope(std::size_t dimension, std::vector<LinearConstraint> constraints, Tolerances tol,
                               VertexBudget budget)
    : dimension_(dimension),
      constraints_(std::move(constraints)),
      tol_(tol),
      budget_(budget),
      cache_(std::make_shared<VertexCache>()) {
  if (dimension_ == 0) throw InputError("weight polytope needs dimension >= 1");
  for (const auto& c : constraints_) {
    if (static_cast<std::size_t>(c.coeffs.size()) != dimension_) {
      throw InputError("constraint arity " + std::to_string(c.coeffs.size()) + " does not match dimension " +
                       std::to_string(dimension_));
    }
    if (!c.coeffs.allFinite() || !std::isfinite(c.bound)) throw InputError("constraint has non-finite entries");
    if (c.coeffs.cwiseAbs().maxCoeff() == 0.0) throw InputError("constraint has no nonzero coefficient");
  }
}

WeightPolytope WeightPolytope::with(const std::vector<LinearConstraint>& extra) const {
  auto all = constraints_;
  all.insert(all.end(), extra.begin(), extra.end());
  return WeightPolytope(dimension_, std::move(all), tol_, budget_);
}

bool WeightPolytope::contains(const Eigen::Ref<const Vector>& w, double slack) const {
  if (static_cast<std::size_t>(w.size()) != dimension_) return false;
  if (w.minCoeff() < -slack || std::abs(w.sum() - 1.0) > slack) return false;
  return std::all_of(constraints_.begin(), constraints_.end(),
                     [&](const LinearConstraint& c) { return c.coeffs.dot(w) <= c.bound + slack; });
}

const std::vector<Vector>& WeightPolytope::vertices() const {
  if (!within_budget()) {
    throw BudgetExceededError("vertex enumeration budget exceeded (d=" + std::to_string(dimension_) +
                              ", constraints=" + std::to_string(constraints_.size()) + ")");
  }
  std::call_once(cache_->once, [this] {
    cache_->vertices = polytope_vertices(*this);
    cache_->matrix.resize(static_cast<Eigen::Index>(cache_->vertices.size()), static_cast<Eigen::Index>(dimension_));
    for (std::size_t k = 0; k < cache_->vertices.size(); ++k) {
      cache_->matrix.row(static_cast<Eigen::Index>(k)) = cache_->vertices[k].transpose();
    }
  });
  return cache_->vertices;
}

const RowMatrix& WeightPolytope::vertex_matrix() const {
  vertices();
  return cache_->matrix;
}

std::vector<Vector> polytope_vertices(const WeightPolytope& p) {
  if (!p.within_budget()) throw BudgetExceededError("vertex enumeration budget exceeded; use lp_max");
  const auto d = static_cast<Eigen::Index>(p.dimension());
  const auto& tol = p.tolerances();

  // Facet pool: -w_i <= 0 for every i, then the user constraints.
  const auto pool_size = d + static_cast<Eigen::Index>(p.constraints().size());
  RowMatrix pool(pool_size, d);
  Vector pool_bound(pool_size);
  pool.topRows(d) = -RowMatrix::Identity(d, d);
  pool_bound.head(d).setZero();
  for (std::size_t k = 0; k < p.constraints().size(); ++k) {
    pool.row(d + static_cast<Eigen::Index>(k)) = p.constraints()[k].coeffs.transpose();
    pool_bound(d + static_cast<Eigen::Index>(k)) = p.constraints()[k].bound;
  }

  std::vector<Vector> found;
  auto keep = [&](Vector w) {
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (std::abs(w(i)) < 1e-14) w(i) = 0.0;
    }
    if (!p.contains(w)) return;
    for (const auto& v : found) {
      if ((v - w).cwiseAbs().maxCoeff() <= tol.vertex) return;
    }
    found.push_back(std::move(w));
  };

  const Eigen::Index pick = d - 1;
  if (pick == 0) {
    keep(Vector::Ones(1));
  } else if (pool_size >= pick) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(pick));
    for (Eigen::Index i = 0; i < pick; ++i) idx[static_cast<std::size_t>(i)] = i;
    Eigen::MatrixXd system(d, d);
    Vector rhs(d);
    system.row(0).setOnes();
    rhs(0) = 1.0;
    for (;;) {
      for (Eigen::Index i = 0; i < pick; ++i) {
        system.row(i + 1) = pool.row(idx[static_cast<std::size_t>(i)]);
        rhs(i + 1) = pool_bound(idx[static_cast<std::size_t>(i)]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
      if (lu.rank() == d) keep(lu.solve(rhs));

      // Next combination in lexicographic order.
      Eigen::Index i = pick - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == pool_size - pick + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (Eigen::Index j = i + 1; j < pick; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  std::sort(found.begin(), found.end(), lex_less);
  return found;
}

RegionRows region_rows(const WeightPolytope& p) {
  const auto d = static_cast<Eigen::Index>(p.dimension());
  const auto m = static_cast<Eigen::Index>(p.constraints().size());
  RegionRows rows{RowMatrix(m + 2, d), Vector(m + 2)};
  for (Eigen::Index k = 0; k < m; ++k) {
    rows.A.row(k) = p.constraints()[static_cast<std::size_t>(k)].coeffs.transpose();
    rows.b(k) = p.constraints()[static_cast<std::size_t>(k)].bound;
  }
  rows.A.row(m).setOnes();
  rows.b(m) = 1.0;
  rows.A.row(m + 1).setConstant(-1.0);
  rows.b(m + 1) = -1.0;
  return rows;
}

std::optional<LpResult> lp_max_vertices(const Eigen::Ref<const Vector>& c, const WeightPolytope& p) {
  const RowMatrix& V = p.vertex_matrix();
  if (V.rows() == 0) return std::nullopt;
  const Vector scores = V * c;
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < scores.size(); ++k) {
    if (scores(k) > scores(best)) best = k;
  }
  return LpResult{scores(best), V.row(best).transpose()};
}

std::optional<LpResult> lp_max_simplex(const Eigen::Ref<const Vector>& c, const WeightPolytope& p) {
  const auto rows = region_rows(p);
  const auto sol = solve_lp(rows.A, rows.b, c, p.tolerances().feasibility);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  return LpResult{c.dot(sol.x), sol.x};
}

std::optional<LpResult> lp_max(const Eigen::Ref<const Vector>& c, const WeightPolytope& p) {
  if (static_cast<std::size_t>(c.size()) != p.dimension()) throw InputError("objective arity does not match polytope");
  return p.within_budget() ? lp_max_vertices(c, p) : lp_max_simplex(c, p);
}

bool is_empty(const WeightPolytope& p) {
  if (p.within_budget()) return p.vertices().empty();
  return !lp_max_simplex(Vector::Zero(static_cast<Eigen::Index>(p.dimension())), p).has_value();
}

std::vector<Vector> sample_weights(const WeightPolytope& p, std::size_t count, std::uint64_t seed) {
  if (is_empty(p)) throw EmptyRegionError();
  std::mt19937_64 rng(seed);
  const auto d = p.dimension();

  std::vector<Vector> anchors;
  if (p.within_budget()) {
    anchors = p.vertices();
  } else {
    // Beyond the enumeration budget, LP optima of random objectives stand in for vertices.
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t k = 0; k < 2 * d + 2; ++k) {
      Vector c(static_cast<Eigen::Index>(d));
      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = gauss(rng);
      if (auto best = lp_max_simplex(c, p)) {
        const bool seen = std::any_of(anchors.begin(), anchors.end(), [&](const Vector& a) {
          return (a - best->argmax).cwiseAbs().maxCoeff() <= p.tolerances().vertex;
        });
        if (!seen) anchors.push_back(best->argmax);
      }
    }
  }

  std::vector<Vector> out = anchors;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < anchors.size(); ++j) out.push_back(0.5 * (anchors[i] + anchors[j]));
  }

  constexpr int kRejectionAttempts = 32;
  std::uniform_int_distribution<std::size_t> pick_anchor(0, anchors.size() - 1);
  while (out.size() < count) {
    bool accepted = false;
    for (int attempt = 0; attempt < kRejectionAttempts && !accepted; ++attempt) {
      Vector w = dirichlet_point(d, rng);
      if (p.contains(w)) {
        out.push_back(std::move(w));
        accepted = true;
      }
    }
    if (!accepted) {
      // Thin region: fall back to a random convex combination of the anchors.
      const Vector mix = dirichlet_point(anchors.size(), rng);
      Vector w = Vector::Zero(static_cast<Eigen::Index>(d));
      for (std::size_t k = 0; k < anchors.size(); ++k) w += mix(static_cast<Eigen::Index>(k)) * anchors[k];
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace flexsky
