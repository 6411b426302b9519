#include "flexsky/bench.hpp"

#include <cmath>
#include <random>

namespace flexsky {

std::vector<LinearConstraint> random_constraints(std::size_t d, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::exponential_distribution<double> exp1(1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto dim = static_cast<Eigen::Index>(d);
  std::vector<LinearConstraint> out;
  out.reserve(m);
  while (out.size() < m) {
    Vector p(dim);
    for (Eigen::Index i = 0; i < dim; ++i) p(i) = exp1(rng);
    p /= p.sum();
    Vector c(dim);
    for (Eigen::Index i = 0; i < dim; ++i) c(i) = gauss(rng);
    const double norm = c.norm();
    if (norm < 1e-12) continue;
    c /= norm;
    out.push_back({c, c.dot(p)});
    if (is_empty(WeightPolytope(d, out))) out.pop_back();
  }
  return out;
}

BenchMatrix run_bench(const BenchConfig& config) {
  BenchMatrix out;
  for (const auto dist : config.dists) {
    for (const auto n : config.ns) {
      for (const auto d : config.ds) {
        for (const auto m : config.constraint_counts) {
          for (const auto seed : config.seeds) {
            const Relation r = gen_synthetic(n, d, dist, seed);
            const WeightPolytope region(d, random_constraints(d, m, seed * 1000003ULL + m));
            RunReport base{dist, n, d, m, seed, OpKind::Sky, 0, 0, 0.0};
            for (const auto& result : {skyline(r), nd(r, region), po(r, region)}) {
              RunReport report = base;
              report.op = result.meta.kind;
              report.out_card = result.size();
              report.vertices = result.meta.vertex_count;
              report.ms = result.meta.elapsed_ms;
              out.push_back(report);
            }
          }
        }
      }
    }
  }
  return out;
}

void write_bench_csv(std::ostream& out, const BenchMatrix& matrix) {
  out << "dist,n,d,m_constraints,seed,op,out_card,vertices,ms\n";
  for (const auto& r : matrix) {
    out << to_string(r.dist) << ',' << r.n << ',' << r.d << ',' << r.m_constraints << ',' << r.seed << ','
        << to_string(r.op) << ',' << r.out_card << ',' << r.vertices << ',' << std::round(r.ms * 1000.0) / 1000.0
        << '\n';
  }
}

}  // namespace flexsky
