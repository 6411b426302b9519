#pragma once

#include "flexsky/dataset.hpp"
#include "flexsky/operators.hpp"
#include "flexsky/preference.hpp"

#include <cstdint>
#include <ostream>
#include <vector>

namespace flexsky {

/// One operator run inside a benchmark cell.
struct RunReport {
  Distribution dist = Distribution::Independent;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t m_constraints = 0;
  std::uint64_t seed = 0;
  OpKind op = OpKind::Sky;
  std::size_t out_card = 0;
  std::size_t vertices = 0;
  double ms = 0.0;
};

using BenchMatrix = std::vector<RunReport>;

struct BenchConfig {
  std::vector<Distribution> dists{Distribution::Anticorrelated};
  std::vector<std::size_t> ns{1000};
  std::vector<std::size_t> ds{3};
  std::vector<std::size_t> constraint_counts{2};
  std::vector<std::uint64_t> seeds{1};
};

/// `m` halfspaces c.w <= c.p, each through a random interior point p of the
/// simplex with a random unit normal c. A halfspace that would empty the
/// region is redrawn, so the result is always feasible.
std::vector<LinearConstraint> random_constraints(std::size_t d, std::size_t m, std::uint64_t seed);

/// Runs SKY, ND and PO for every (dist, n, d, m, seed) cell, in that nesting order.
BenchMatrix run_bench(const BenchConfig& config);

/// Header plus one row per report: dist,n,d,m_constraints,seed,op,out_card,vertices,ms
void write_bench_csv(std::ostream& out, const BenchMatrix& matrix);

}  // namespace flexsky
