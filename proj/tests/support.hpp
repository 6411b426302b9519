#pragma once

#include "flexsky/bench.hpp"
#include "flexsky/dataset.hpp"
#include "flexsky/operators.hpp"
#include "flexsky/preference.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace flexsky::testing {

/// Normalized relation over a1..ad with ids 0..n-1 in row order.
inline Relation make_relation(const std::vector<std::vector<double>>& rows) {
  const std::size_t d = rows.empty() ? 1 : rows.front().size();
  std::vector<RawTuple> tuples;
  for (std::size_t i = 0; i < rows.size(); ++i) tuples.push_back({std::to_string(i), rows[i]});
  return Relation(Schema::uniform(d), std::move(tuples)).assume_normalized();
}

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v(i++) = x;
  return v;
}

inline std::set<std::size_t> row_set(const ResultSet& r) {
  const auto rows = r.rows();
  return {rows.begin(), rows.end()};
}

inline std::set<std::size_t> row_set(const std::vector<std::size_t>& rows) { return {rows.begin(), rows.end()}; }

inline bool subset(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Uniform values; with `levels > 0` every value is snapped to a grid of that
/// many steps so duplicates and ties are common.
inline Relation random_relation(std::size_t n, std::size_t d, std::mt19937_64& rng, int levels = 0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> rows(n, std::vector<double>(d));
  for (auto& row : rows) {
    for (auto& v : row) {
      v = unit(rng);
      if (levels > 0) v = std::round(v * levels) / levels;
    }
  }
  return make_relation(rows);
}

inline Vector random_simplex_point(std::size_t d, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  Vector w(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = exp1(rng);
  return w / w.sum();
}

/// Random region: `m` halfspaces through interior points (always nonempty).
inline WeightPolytope random_region(std::size_t d, std::size_t m, std::mt19937_64& rng) {
  return WeightPolytope(d, random_constraints(d, m, rng()));
}

/// Weight strictly inside the region: positive components and slack on every
/// constraint. Tries the whole simplex first, then positive combinations of
/// the region's vertices for thin regions.
inline std::optional<Vector> interior_weight(const WeightPolytope& p, std::mt19937_64& rng, double slack = 1e-6,
                                             int attempts = 10000) {
  const auto inside = [&](const Vector& w) {
    return w.minCoeff() > slack && std::all_of(p.constraints().begin(), p.constraints().end(),
                                               [&](const LinearConstraint& c) { return c.coeffs.dot(w) < c.bound - slack; });
  };
  for (int i = 0; i < attempts; ++i) {
    Vector w = random_simplex_point(p.dimension(), rng);
    if (inside(w)) return w;
  }
  const auto& vs = p.vertices();
  if (vs.empty()) return std::nullopt;
  for (int i = 0; i < attempts; ++i) {
    const Vector mix = random_simplex_point(vs.size(), rng);
    Vector w = Vector::Zero(static_cast<Eigen::Index>(p.dimension()));
    for (std::size_t k = 0; k < vs.size(); ++k) w += mix(static_cast<Eigen::Index>(k)) * vs[k];
    if (inside(w)) return w;
  }
  return std::nullopt;
}

}  // namespace flexsky::testing
