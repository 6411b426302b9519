#include "flexsky/dominance.hpp"
#include "flexsky/operators.hpp"
#include "flexsky/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace flexsky;
using flexsky::testing::make_relation;
using flexsky::testing::row_set;
using flexsky::testing::vec;

namespace {

Relation r0() { return make_relation({{0.2, 0.3}, {0.4, 0.5}, {0.1, 0.8}, {0.9, 0.9}}); }
Relation r1() { return make_relation({{0.1, 0.9}, {0.5, 0.5}, {0.9, 0.1}}); }

WeightPolytope first_at_least_second() { return WeightPolytope(2, {{vec({-1.0, 1.0}), 0.0}}); }

Vector row(const Relation& r, Eigen::Index i) { return r.normalized().row(i).transpose(); }

}  // namespace

TEST_CASE("oracle_skyline examples") {
  CHECK(row_set(oracle::oracle_skyline(r0())) == std::set<std::size_t>{0, 2});
  CHECK(row_set(oracle::oracle_skyline(make_relation({{0.3, 0.3}, {0.3, 0.3}}))) == std::set<std::size_t>{0, 1});
  CHECK(oracle::oracle_skyline(Relation(Schema::uniform(2), {}).assume_normalized()).empty());
}

TEST_CASE("oracle_f_dominates examples") {
  const auto p = first_at_least_second();
  const auto yes = oracle::oracle_f_dominates(vec({0.2, 0.5}), vec({0.4, 0.4}), p);
  CHECK(yes.dominates);
  CHECK_FALSE(yes.violation.has_value());
  CHECK(yes.samples >= 10000);

  const auto no = oracle::oracle_f_dominates(vec({0.3, 0.6}), vec({0.4, 0.4}), p);
  CHECK_FALSE(no.dominates);
  REQUIRE(no.violation.has_value());
  CHECK(p.contains(*no.violation));
  CHECK(no.violation->dot(vec({-0.1, 0.2})) > 0.0);

  CHECK_FALSE(oracle::oracle_f_dominates(vec({0.5, 0.6}), vec({0.4, 0.4}), p).dominates);
  CHECK(oracle::oracle_f_dominates(vec({0.1, 0.2}), vec({0.4, 0.4}), WeightPolytope(2, {{vec({1.0, -3.0}), 0.0}}))
            .dominates);

  const WeightPolytope empty(2, {{vec({-1, 0}), -0.8}, {vec({0, -1}), -0.8}});
  CHECK_THROWS_AS(oracle::oracle_f_dominates(vec({0.1, 0.2}), vec({0.4, 0.4}), empty), EmptyRegionError);
  CHECK_THROWS_AS(oracle::oracle_f_dominates(vec({0.1, 0.2}), vec({0.4, 0.4}), p, {.sample_count = 0}), InputError);
}

TEST_CASE("oracle_po_member examples") {
  const Relation r = r1();
  const auto hit = oracle::oracle_po_member(row(r, 0), r, first_at_least_second());
  CHECK(hit.member);
  REQUIRE(hit.witness.has_value());
  CHECK((*hit.witness)(0) > 0.5);

  const auto miss = oracle::oracle_po_member(row(r, 1), r, WeightPolytope::simplex(2));
  CHECK_FALSE(miss.member);
  CHECK(miss.grid_points == 1001);

  CHECK(oracle::oracle_po_member(row(r, 2), r, WeightPolytope::simplex(2)).member);
  const Relation q = r0();
  CHECK_FALSE(oracle::oracle_po_member(row(q, 3), q, WeightPolytope::simplex(2)).member);
  CHECK_THROWS_AS(oracle::oracle_po_member(vec({0.3, 0.3}), r, WeightPolytope::simplex(2)), InputError);
}

TEST_CASE("oracle_topk examples") {
  const Relation r = r0();
  CHECK(oracle::oracle_topk(r, vec({0.5, 0.5}), 1) == std::vector<std::size_t>{0});
  CHECK(oracle::oracle_topk(r, vec({0.5, 0.5}), 2) == std::vector<std::size_t>{0, 1});
  CHECK(oracle::oracle_topk(r, vec({0.5, 0.5}), 9) == std::vector<std::size_t>{0, 1, 2, 3});
  const Relation same = make_relation({{0.4, 0.4}, {0.4, 0.4}, {0.4, 0.4}});
  CHECK(oracle::oracle_topk(same, vec({0.5, 0.5}), 3) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("oracle_skyline agrees with skyline on random relations") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> size(1, 200);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = static_cast<std::size_t>(1 + trial % 5);
    const Relation r = flexsky::testing::random_relation(size(rng), d, rng, trial % 4 == 0 ? 3 : 0);
    const auto expected = row_set(oracle::oracle_skyline(r));
    CHECK(row_set(skyline(r, SkylineAlgorithm::Sorted)) == expected);
    CHECK(row_set(skyline(r, SkylineAlgorithm::Naive)) == expected);
  }
}

TEST_CASE("oracle_topk agrees with topk on random inputs") {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<std::size_t> size(1, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = static_cast<std::size_t>(1 + trial % 4);
    const Relation r = flexsky::testing::random_relation(size(rng), d, rng, trial % 2 ? 4 : 0);
    const Vector w = flexsky::testing::random_simplex_point(d, rng);
    const std::size_t k = 1 + rng() % (r.size() + 2);
    CHECK(topk(r, w, k).rows() == oracle::oracle_topk(r, w, k));
  }
}

TEST_CASE("conclusive oracle verdicts agree with the exact kernel") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 150; ++trial) {
    const auto d = static_cast<std::size_t>(2 + trial % 3);
    const auto p = flexsky::testing::random_region(d, static_cast<std::size_t>(trial % 4), rng);
    Vector t(static_cast<Eigen::Index>(d));
    Vector s(static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      t(i) = unit(rng);
      s(i) = std::clamp(t(i) + 0.4 * (unit(rng) - 0.35), 0.0, 1.0);
    }
    const auto exact = f_dominates(t, s, p);
    const auto sampled = oracle::oracle_f_dominates(t, s, p, {.sample_count = 2000, .seed = static_cast<std::uint64_t>(trial)});
    if (sampled.violation) CHECK_FALSE(exact.dominates);
    if (exact.dominates) CHECK(sampled.violation == std::nullopt);
  }
}

TEST_CASE("grid witnesses imply po membership") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = trial % 2 ? 3 : 2;
    const Relation r = flexsky::testing::random_relation(12, d, rng);
    const auto p = flexsky::testing::random_region(d, static_cast<std::size_t>(trial % 3), rng);
    const auto members = row_set(po(r, p));
    const oracle::OracleConfig cfg{.grid_step = d == 2 ? 1e-3 : 1e-2};
    for (Eigen::Index i = 0; i < r.normalized().rows(); ++i) {
      const auto verdict = oracle::oracle_po_member(row(r, i), r, p, cfg);
      if (verdict.member) CHECK(members.count(static_cast<std::size_t>(i)) == 1);
    }
  }
}
