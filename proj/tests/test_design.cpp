#include <doctest.h>

#include <random>

#include "fglm/design.hpp"
#include "fglm/errors.hpp"

using namespace fglm;

namespace {

std::vector<Factor> demo_factors() {
  std::vector<Factor> f;
  f.push_back(Factor::categorical("group", {"A", "A", "B", "B", "C", "C"}));
  f.push_back(Factor::categorical("block", {"u", "v", "u", "v", "u", "v"}));
  f.push_back(Factor::continuous("dose", {0, 10, 20, 30, 40, 50}));
  f.push_back(Factor::continuous("age", {1, 4, 9, 16, 25, 36}));
  return f;
}

Vector random_vec(Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

} // namespace

TEST_CASE("three-level categorical interest with intercept-only nuisance") {
  ModelSpec spec;
  spec.interest = {"group"};
  const DesignPair d = build_design(spec, demo_factors(), 6);

  CHECK(d.X.rows() == 6);
  CHECK(d.X.cols() == 2);
  CHECK(d.Z.cols() == 1);
  CHECK(d.Z.col(0).isOnes());
  CHECK(d.j_count() == 3);
  CHECK(d.j_labels == std::vector<std::string>{"group=A", "group=B", "group=C"});

  // Recovered effects sum to zero for every coefficient vector, exactly.
  const Vector b = random_vec(2, 11);
  const Vector effects = d.expand * b;
  CHECK(std::abs(effects.sum()) <= 1e-10);

  // Carrier reconstruction: carrier * expand == X on the contrast scale.
  CHECK((d.carrier * d.expand * b - d.X * b).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("continuous interest contributes one centered column, J=1") {
  ModelSpec spec;
  spec.interest = {"dose"};
  spec.nuisance = {"group"};
  const DesignPair d = build_design(spec, demo_factors(), 6);

  CHECK(d.X.cols() == 1);
  CHECK(std::abs(d.X.col(0).sum()) <= 1e-10);
  CHECK(d.Z.cols() == 3);  // intercept + 2 group contrasts
  CHECK(d.j_count() == 1);
  CHECK(d.j_labels == std::vector<std::string>{"dose"});
}

TEST_CASE("categorical x categorical interaction expands to all cells") {
  ModelSpec spec;
  spec.interest = {"group:block"};
  spec.nuisance = {"group", "block"};
  const DesignPair d = build_design(spec, demo_factors(), 6);

  CHECK(d.X.cols() == 2);  // (3-1) * (2-1)
  CHECK(d.j_count() == 6);
  CHECK(d.j_labels.front() == "group=A:block=u");
  CHECK(d.j_labels.back() == "group=C:block=v");

  // Cell effects sum to zero along every row and column of the 3x2 grid.
  const Vector b = random_vec(2, 23);
  const Vector cells = d.expand * b;  // order (A,u),(A,v),(B,u),(B,v),(C,u),(C,v)
  for (Index ra = 0; ra < 3; ++ra) CHECK(std::abs(cells[2 * ra] + cells[2 * ra + 1]) <= 1e-10);
  for (Index rb = 0; rb < 2; ++rb)
    CHECK(std::abs(cells[rb] + cells[2 + rb] + cells[4 + rb]) <= 1e-10);
  CHECK((d.carrier * d.expand * b - d.X * b).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("categorical x continuous interaction gives per-level slopes") {
  ModelSpec spec;
  spec.interest = {"group:dose"};
  spec.nuisance = {"group", "dose"};
  const DesignPair d = build_design(spec, demo_factors(), 6);

  CHECK(d.j_count() == 3);
  CHECK(d.j_labels == std::vector<std::string>{"group=A:dose", "group=B:dose", "group=C:dose"});
  const Vector b = random_vec(2, 37);
  CHECK(std::abs((d.expand * b).sum()) <= 1e-10);
  CHECK((d.carrier * d.expand * b - d.X * b).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("continuous x continuous interaction is one product column") {
  ModelSpec spec;
  spec.interest = {"dose:age"};
  spec.nuisance = {"dose", "age"};
  const DesignPair d = build_design(spec, demo_factors(), 6);
  CHECK(d.j_count() == 1);
  CHECK(d.j_labels == std::vector<std::string>{"dose:age"});
}

TEST_CASE("design validation errors") {
  const auto factors = demo_factors();
  ModelSpec spec;

  SUBCASE("no interest term") {
    CHECK_THROWS_AS(build_design(spec, factors, 6), ConfigError);
  }
  SUBCASE("unknown factor") {
    spec.interest = {"nope"};
    CHECK_THROWS_AS(build_design(spec, factors, 6), ConfigError);
  }
  SUBCASE("term in both parts") {
    spec.interest = {"group"};
    spec.nuisance = {"group"};
    CHECK_THROWS_AS(build_design(spec, factors, 6), ConfigError);
  }
  SUBCASE("interaction without its parents") {
    spec.interest = {"group:block"};
    CHECK_THROWS_AS(build_design(spec, factors, 6), ConfigError);
  }
  SUBCASE("three-way interaction unsupported") {
    spec.interest = {"group:block:dose"};
    spec.nuisance = {"group", "block", "dose"};
    CHECK_THROWS_AS(build_design(spec, factors, 6), ConfigError);
  }
  SUBCASE("factor with fewer than two levels") {
    auto bad = factors;
    bad.push_back(Factor::categorical("const", {"x", "x", "x", "x", "x", "x"}));
    spec.interest = {"const"};
    CHECK_THROWS_AS(build_design(spec, bad, 6), ConfigError);
  }
  SUBCASE("declared level with no observations") {
    Factor f;
    f.name = "gap";
    f.kind = FactorKind::categorical;
    f.levels = {"a", "b", "c"};
    f.level_index = {0, 1, 0, 1, 0, 1};  // level "c" never occurs
    auto bad = factors;
    bad.push_back(f);
    spec.interest = {"gap"};
    CHECK_THROWS_AS(build_design(spec, bad, 6), EmptyLevelError);
  }
  SUBCASE("observation count mismatch") {
    spec.interest = {"group"};
    CHECK_THROWS_AS(build_design(spec, factors, 7), ShapeMismatchError);
  }
  SUBCASE("interest confounded with nuisance") {
    auto bad = factors;
    bad.push_back(Factor::continuous("dose2", {0, 20, 40, 60, 80, 100}));  // 2 * dose
    spec.interest = {"dose2"};
    spec.nuisance = {"dose"};
    CHECK_THROWS_AS(build_design(spec, bad, 6), ConfoundedDesignError);
  }
  SUBCASE("categorical interest repeated under another name") {
    auto bad = factors;
    bad.push_back(Factor::categorical("group_copy", {"A", "A", "B", "B", "C", "C"}));
    spec.interest = {"group_copy"};
    spec.nuisance = {"group"};
    CHECK_THROWS_AS(build_design(spec, bad, 6), ConfoundedDesignError);
  }
}
