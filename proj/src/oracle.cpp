#include "flexsky/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace flexsky::oracle {

namespace {

double dot(const Vector& w, const double* row, Eigen::Index d) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) acc += w(i) * row[i];
  return acc;
}

}  // namespace

void OracleConfig::validate() const {
  if (sample_count < 1) throw InputError("oracle: sample_count must be >= 1");
  if (!(grid_step > 0.0 && grid_step < 1.0)) throw InputError("oracle: grid_step must lie in (0, 1)");
}

std::vector<std::size_t> oracle_skyline(const Relation& r) {
  if (r.empty()) return {};
  const RowMatrix& v = r.normalized();
  const auto n = v.rows();
  const auto d = v.cols();
  std::vector<std::size_t> out;
  for (Eigen::Index t = 0; t < n; ++t) {
    bool dominated = false;
    for (Eigen::Index s = 0; s < n && !dominated; ++s) {
      bool no_worse = true;
      bool better = false;
      for (Eigen::Index i = 0; i < d; ++i) {
        if (v(s, i) > v(t, i)) no_worse = false;
        if (v(s, i) < v(t, i)) better = true;
      }
      dominated = no_worse && better;
    }
    if (!dominated) out.push_back(static_cast<std::size_t>(t));
  }
  return out;
}

SampledVerdict oracle_f_dominates(const Vector& t, const Vector& s, const WeightPolytope& p, const OracleConfig& cfg) {
  cfg.validate();
  if (t.size() != s.size() || static_cast<std::size_t>(t.size()) != p.dimension()) {
    throw InputError("oracle_f_dominates: arity mismatch");
  }
  const auto samples = sample_weights(p, cfg.sample_count, cfg.seed);
  SampledVerdict out;
  out.samples = samples.size();
  bool strict = false;
  for (const auto& w : samples) {
    double diff = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) diff += w(i) * (t(i) - s(i));
    if (diff > cfg.margin) {
      out.violation = w;
      return out;
    }
    if (diff < -cfg.margin) strict = true;
  }
  out.dominates = strict;
  return out;
}

GridVerdict oracle_po_member(const Vector& t, const Relation& r, const WeightPolytope& p, const OracleConfig& cfg) {
  cfg.validate();
  if (is_empty(p)) throw EmptyRegionError();
  const RowMatrix& v = r.normalized();
  const auto d = v.cols();
  if (t.size() != d || static_cast<std::size_t>(d) != p.dimension()) throw InputError("oracle_po_member: arity mismatch");

  std::vector<Eigen::Index> others;
  for (Eigen::Index row = 0; row < v.rows(); ++row) {
    bool same = true;
    for (Eigen::Index i = 0; i < d && same; ++i) same = v(row, i) == t(i);
    if (!same) others.push_back(row);
  }
  if (others.size() == static_cast<std::size_t>(v.rows())) throw InputError("oracle_po_member: t is not a tuple of r");

  const auto steps = static_cast<long>(std::floor(1.0 / cfg.grid_step + 1e-9));
  GridVerdict out;
  Vector w(d);
  std::vector<long> ticks(static_cast<std::size_t>(d), 0);

  // Iterates the first d-1 coordinates over multiples of grid_step; the last
  // coordinate takes the remainder.
  std::function<bool(Eigen::Index, long)> scan = [&](Eigen::Index axis, long used) -> bool {
    if (axis == d - 1) {
      double partial = 0.0;
      for (Eigen::Index i = 0; i < d - 1; ++i) {
        w(i) = static_cast<double>(ticks[static_cast<std::size_t>(i)]) * cfg.grid_step;
        partial += w(i);
      }
      w(d - 1) = std::max(0.0, 1.0 - partial);
      ++out.grid_points;
      if (!p.contains(w)) return false;
      const double mine = dot(w, t.data(), d);
      for (const auto row : others) {
        if (dot(w, v.row(row).data(), d) - mine <= cfg.margin) return false;
      }
      out.member = true;
      out.witness = w;
      return true;
    }
    for (long k = 0; k + used <= steps; ++k) {
      ticks[static_cast<std::size_t>(axis)] = k;
      if (scan(axis + 1, used + k)) return true;
    }
    return false;
  };
  scan(0, 0);
  return out;
}

std::vector<std::size_t> oracle_topk(const Relation& r, const Vector& w, std::size_t k) {
  const RowMatrix& v = r.normalized();
  std::vector<std::pair<double, std::size_t>> scored;
  for (Eigen::Index row = 0; row < v.rows(); ++row) {
    scored.emplace_back(dot(w, v.row(row).data(), v.cols()), static_cast<std::size_t>(row));
  }
  std::stable_sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return id_less(r.id(a.second), r.id(b.second));
  });
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < std::min(k, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

}  // namespace flexsky::oracle
