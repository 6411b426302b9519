#include "flexsky/dataset.hpp"
#include "flexsky/operators.hpp"
#include "flexsky/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <random>

using namespace flexsky;
using flexsky::testing::make_relation;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("flexsky_dataset_" + name);
  std::ofstream(path) << content;
  return path;
}

Schema car_schema() { return Schema({{"price", Direction::Min}, {"perf", Direction::Max}}); }

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("schema parsing and validation") {
  const auto s = Schema::parse("price:min, perf:max,weight");
  REQUIRE(s.arity() == 3);
  CHECK(s[0].direction == Direction::Min);
  CHECK(s[1].direction == Direction::Max);
  CHECK(s[2].direction == Direction::Min);
  CHECK(s.index_of("perf") == 1);
  CHECK_FALSE(s.index_of("nope").has_value());

  CHECK_THROWS_AS(Schema::parse("a,a"), InputError);
  CHECK_THROWS_AS(Schema::parse("a:up"), InputError);
  CHECK_THROWS_AS(Schema(std::vector<AttributeSpec>{}), InputError);
  CHECK_THROWS_AS(Schema::parse("a,,b"), InputError);
}

TEST_CASE("ingest_csv reads rows in order with row-index ids") {
  const auto path = write_temp("two.csv", "price,perf\n10000,300\n50000,100\n");
  const Relation r = ingest_csv(path, car_schema());
  REQUIRE(r.size() == 2);
  CHECK(r.ids() == std::vector<std::string>{"0", "1"});
  CHECK(r.raw()(0, 0) == 10000.0);
  CHECK(r.raw()(0, 1) == 300.0);
  CHECK(r.raw()(1, 0) == 50000.0);
  CHECK(r.raw()(1, 1) == 100.0);
  CHECK_FALSE(r.is_normalized());
}

TEST_CASE("ingest_csv matches columns by name and honours an id column") {
  const auto path = write_temp("ids.csv", "name,perf,extra,price\ncar-b,100,x,50000\ncar-a,300,y,10000\n");
  const Relation r = ingest_csv(path, car_schema(), {.id_column = "name"});
  REQUIRE(r.size() == 2);
  CHECK(r.ids() == std::vector<std::string>{"car-a", "car-b"});
  CHECK(r.raw()(0, 0) == 10000.0);
  CHECK(r.raw()(0, 1) == 300.0);
  CHECK(r.row_of("car-b") == 1);
  CHECK_FALSE(r.row_of("car-c").has_value());
}

TEST_CASE("ingest_csv errors") {
  SUBCASE("non-finite cell names row and column") {
    const auto path = write_temp("nan.csv", "price,perf\n10000,300\n50000,NaN\n");
    const auto msg = error_of([&] { ingest_csv(path, car_schema()); });
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("data row 1") != std::string::npos);
    CHECK(msg.find("'perf'") != std::string::npos);
  }
  SUBCASE("non-numeric cell") {
    const auto path = write_temp("text.csv", "price,perf\nabc,300\n");
    const auto msg = error_of([&] { ingest_csv(path, car_schema()); });
    CHECK(msg.find("non-numeric") != std::string::npos);
    CHECK(msg.find("'price'") != std::string::npos);
  }
  SUBCASE("missing schema column") {
    const auto path = write_temp("missing.csv", "cost,perf\n1,2\n");
    const auto msg = error_of([&] { ingest_csv(path, car_schema()); });
    CHECK(msg.find("unknown column") != std::string::npos);
    CHECK(msg.find("price") != std::string::npos);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(ingest_csv("/nonexistent/flexsky.csv", car_schema()), InputError);
  }
  SUBCASE("ragged row") {
    const auto path = write_temp("ragged.csv", "price,perf\n1,2,3\n");
    CHECK_THROWS_AS(ingest_csv(path, car_schema()), InputError);
  }
  SUBCASE("duplicate ids") {
    const auto path = write_temp("dupid.csv", "id,price,perf\nx,1,2\nx,3,4\n");
    CHECK_THROWS_AS(ingest_csv(path, car_schema(), {.id_column = "id"}), InputError);
  }
}

TEST_CASE("normalize flips MAX attributes into min-better [0,1]") {
  const Relation raw(car_schema(), {{"0", {10000, 300}}, {"1", {50000, 100}}, {"2", {20000, 250}}});
  const Relation r = normalize(raw);
  const RowMatrix& v = r.normalized();
  CHECK(v(0, 0) == 0.0);
  CHECK(v(0, 1) == 0.0);
  CHECK(v(1, 0) == 1.0);
  CHECK(v(1, 1) == 1.0);
  CHECK(v(2, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(v(2, 1) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("normalize edge cases") {
  const Relation constant(Schema::parse("a,b:max"), {{"0", {5, 1}}, {"1", {5, 2}}, {"2", {5, 3}}});
  const RowMatrix v = normalize(constant).normalized();
  CHECK(v.col(0).isZero());
  CHECK(v(2, 1) == 0.0);
  CHECK(v(0, 1) == 1.0);

  const Relation empty(Schema::uniform(2), {});
  CHECK_THROWS_AS(normalize(empty), InputError);
  CHECK_THROWS_AS(empty.normalized(), InputError);
}

TEST_CASE("normalize properties: idempotence and orientation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(-50.0, 50.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RawTuple> tuples;
    for (int i = 0; i < 20; ++i) tuples.push_back({std::to_string(i), {unit(rng), unit(rng), unit(rng)}});
    const Relation raw(Schema::parse("a:min,b:max,c:max"), tuples);
    const Relation once = normalize(raw);
    const RowMatrix& v = once.normalized();
    CHECK(v.minCoeff() >= 0.0);
    CHECK(v.maxCoeff() <= 1.0);

    for (Eigen::Index s = 0; s < v.rows(); ++s) {
      for (Eigen::Index t = 0; t < v.rows(); ++t) {
        if (raw.raw()(s, 1) > raw.raw()(t, 1)) CHECK(v(s, 1) <= v(t, 1));
      }
    }

    // Re-reading normalized values as raw MIN attributes is the identity.
    std::vector<RawTuple> again;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      again.push_back({once.id(static_cast<std::size_t>(i)), {v(i, 0), v(i, 1), v(i, 2)}});
    }
    const RowMatrix twice = normalize(Relation(Schema::uniform(3), again)).normalized();
    CHECK((twice - v).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("gen_synthetic is deterministic and in range") {
  for (const auto dist : {Distribution::Independent, Distribution::Correlated, Distribution::Anticorrelated}) {
    const Relation a = gen_synthetic(100, 2, dist, 7);
    const Relation b = gen_synthetic(100, 2, dist, 7);
    CHECK(a.raw() == b.raw());
    CHECK(a.ids() == b.ids());
    CHECK(a.is_normalized());
    CHECK(a.normalized().minCoeff() >= 0.0);
    CHECK(a.normalized().maxCoeff() <= 1.0);
    CHECK(gen_synthetic(100, 2, dist, 8).raw() != a.raw());

    const Relation single = gen_synthetic(1, 3, dist, 3);
    REQUIRE(single.size() == 1);
    CHECK(skyline(single).ids() == std::vector<std::string>{"0"});
  }
  CHECK_THROWS_AS(gen_synthetic(0, 2, Distribution::Independent, 1), InputError);
  CHECK_THROWS_AS(gen_synthetic(5, 0, Distribution::Independent, 1), InputError);
}

TEST_CASE("anticorrelated data has the larger skyline") {
  int wins = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto anti = oracle::oracle_skyline(gen_synthetic(10000, 2, Distribution::Anticorrelated, seed)).size();
    const auto indep = oracle::oracle_skyline(gen_synthetic(10000, 2, Distribution::Independent, seed)).size();
    if (anti > indep) ++wins;
  }
  CHECK(wins >= 15);
}

TEST_CASE("correlated data concentrates along the diagonal") {
  const Relation r = gen_synthetic(2000, 2, Distribution::Correlated, 5);
  const RowMatrix& v = r.normalized();
  const Eigen::VectorXd a = v.col(0).array() - v.col(0).mean();
  const Eigen::VectorXd b = v.col(1).array() - v.col(1).mean();
  CHECK(a.dot(b) / (a.norm() * b.norm()) > 0.8);
}

TEST_CASE("distinct_view groups identical vectors") {
  const Relation dup = make_relation({{0.2, 0.3}, {0.5, 0.5}, {0.2, 0.3}});
  const DistinctView view = distinct_view(dup);
  REQUIRE(view.size() == 2);
  CHECK(view[0].rows == std::vector<std::size_t>{0, 2});
  CHECK(view[1].rows == std::vector<std::size_t>{1});
  CHECK(view.find(flexsky::testing::vec({0.5, 0.5})) == 1);
  CHECK_FALSE(view.find(flexsky::testing::vec({0.5, 0.4})).has_value());

  const Relation distinct = make_relation({{0.1, 0.2}, {0.2, 0.1}, {0.3, 0.3}});
  CHECK(distinct_view(distinct).size() == 3);

  const Relation empty(Schema::uniform(2), {});
  CHECK(distinct_view(empty.assume_normalized()).empty());
}

TEST_CASE("distinct_view partitions the rows") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Relation r = flexsky::testing::random_relation(60, 3, rng, 2);
    const DistinctView view(r);
    std::vector<int> hits(r.size(), 0);
    for (const auto& g : view.groups()) {
      for (const auto row : g.rows) {
        ++hits[row];
        CHECK(r.normalized().row(static_cast<Eigen::Index>(row)).transpose() == g.values);
      }
    }
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    for (std::size_t a = 0; a < view.size(); ++a) {
      for (std::size_t b = a + 1; b < view.size(); ++b) CHECK(view[a].values != view[b].values);
    }
  }
}

TEST_CASE("id ordering is numeric for integer ids") {
  CHECK(id_less("2", "10"));
  CHECK_FALSE(id_less("10", "2"));
  CHECK(id_less("10", "abc"));
  CHECK(id_less("abc", "abd"));
  const Relation r(Schema::uniform(1), {{"10", {0.1}}, {"2", {0.2}}, {"b", {0.3}}, {"a", {0.4}}});
  CHECK(r.ids() == std::vector<std::string>{"2", "10", "a", "b"});
}

TEST_CASE("assume_normalized rejects out-of-range data") {
  const Relation r(Schema::uniform(1), {{"0", {1.5}}});
  CHECK_THROWS_AS(r.assume_normalized(), InputError);
}
