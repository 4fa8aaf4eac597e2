#include <doctest.h>

#include "fglm/errors.hpp"
#include "fglm/sample.hpp"

using namespace fglm;

namespace {
Vector grid3() {
  Vector g(3);
  g << 0.0, 0.5, 1.0;
  return g;
}
} // namespace

TEST_CASE("functional sample validates its invariants") {
  Matrix v(2, 3);
  v << 1, 2, 3, 4, 5, 6;

  SUBCASE("well-formed sample") {
    const FunctionalSample s(grid3(), v, {"a", "b"});
    CHECK(s.n() == 2);
    CHECK(s.k() == 3);
    CHECK(s.values(1, 2) == 6);
  }
  SUBCASE("fabricated ids") {
    const FunctionalSample s = make_sample(grid3(), v);
    CHECK(s.ids == std::vector<std::string>{"f1", "f2"});
  }
  SUBCASE("grid too short") {
    Vector g(1);
    g << 0.0;
    Matrix one(2, 1);
    one << 1, 2;
    CHECK_THROWS_AS(FunctionalSample(g, one, {"a", "b"}), GridError);
  }
  SUBCASE("non-increasing grid") {
    Vector g(3);
    g << 0.0, 0.5, 0.5;
    CHECK_THROWS_AS(FunctionalSample(g, v, {"a", "b"}), GridError);
  }
  SUBCASE("grid/values shape mismatch") {
    Matrix wide(2, 4);
    wide.setZero();
    CHECK_THROWS_AS(FunctionalSample(grid3(), wide, {"a", "b"}), ShapeMismatchError);
  }
  SUBCASE("id count mismatch") {
    CHECK_THROWS_AS(FunctionalSample(grid3(), v, {"a"}), ShapeMismatchError);
  }
  SUBCASE("duplicate ids") {
    CHECK_THROWS_AS(FunctionalSample(grid3(), v, {"a", "a"}), DuplicateIdError);
  }
  SUBCASE("non-finite values") {
    v(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(FunctionalSample(grid3(), v, {"a", "b"}), NonFiniteInputError);
  }
}
