#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>
#include <vector>

#include "blr/basis.hpp"
#include "blr/rng.hpp"

using namespace blr;

namespace {

// Brute-force count of exponent tuples with sum <= max_degree.
int count_by_enumeration(int d, int max_degree) {
  if (d == 0) return 1;
  int total = 0;
  for (int e = 0; e <= max_degree; ++e)
    total += count_by_enumeration(d - 1, max_degree - e);
  return total;
}

long binomial(int n, int k) {
  long v = 1;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

}  // namespace

TEST_CASE("enumerate_total_degree degenerate and small cases") {
  const IndexSet only_constant = enumerate_total_degree(2, 0, BasisFamily::monomial);
  REQUIRE(only_constant.size() == 1);
  CHECK(only_constant[0] == MultiIndex({0, 0}));

  const IndexSet deg2 = enumerate_total_degree(2, 2, BasisFamily::legendre);
  CHECK(deg2.size() == 6);

  const IndexSet ladder = enumerate_total_degree(1, 3, BasisFamily::monomial);
  REQUIRE(ladder.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(ladder[k] == MultiIndex({k}));
}

TEST_CASE("enumeration cardinality equals C(d+k, d)") {
  for (int d = 1; d <= 4; ++d) {
    for (int k = 0; k <= 5; ++k) {
      const IndexSet set = enumerate_total_degree(d, k, BasisFamily::monomial);
      CHECK(set.size() == binomial(d + k, d));
      CHECK(set.size() == count_by_enumeration(d, k));
    }
  }
}

TEST_CASE("graded-lexicographic order is canonical") {
  const IndexSet set = enumerate_total_degree(2, 2, BasisFamily::monomial);
  const std::vector<MultiIndex> expected = {
      MultiIndex({0, 0}), MultiIndex({0, 1}), MultiIndex({1, 0}),
      MultiIndex({0, 2}), MultiIndex({1, 1}), MultiIndex({2, 0})};
  REQUIRE(set.size() == 6);
  for (int j = 0; j < 6; ++j) CHECK(set[j] == expected[static_cast<std::size_t>(j)]);

  for (int j = 0; j + 1 < set.size(); ++j) CHECK(grlex_less(set[j], set[j + 1]));
}

TEST_CASE("nested enumerations are subsets") {
  for (int k = 0; k < 4; ++k) {
    const IndexSet smaller = enumerate_total_degree(3, k, BasisFamily::monomial);
    const IndexSet larger = enumerate_total_degree(3, k + 1, BasisFamily::monomial);
    for (const auto& mi : smaller) CHECK(larger.contains(mi));
  }
}

TEST_CASE("IndexSet canonicalizes, rejects duplicates, inserts") {
  IndexSet set({MultiIndex({2, 0}), MultiIndex({0, 0}), MultiIndex({0, 1})},
               BasisFamily::legendre);
  CHECK(set[0] == MultiIndex({0, 0}));
  CHECK(set[1] == MultiIndex({0, 1}));
  CHECK(set[2] == MultiIndex({2, 0}));

  CHECK_THROWS_AS(IndexSet({MultiIndex({1, 0}), MultiIndex({1, 0})},
                           BasisFamily::monomial),
                  InvalidArgument);
  CHECK_THROWS_AS(IndexSet({MultiIndex({1}), MultiIndex({1, 0})},
                           BasisFamily::monomial),
                  DimensionMismatch);

  const IndexSet grown = set.with(MultiIndex({1, 0}));
  CHECK(grown.size() == 4);
  CHECK(grown.position(MultiIndex({1, 0})) == 2);
  CHECK_THROWS_AS(set.with(MultiIndex({0, 0})), InvalidArgument);
}

TEST_CASE("monomial tensor product value") {
  Dataset data;
  data.x = Matrix(1, 2);
  data.x << 2.0, 3.0;
  data.y = Vector::Zero(1);
  const IndexSet set({MultiIndex({1, 2})}, BasisFamily::monomial);
  const DesignMatrix psi = evaluate_design(data, set);
  CHECK(psi.values(0, 0) == doctest::Approx(18.0).epsilon(1e-15));
}

TEST_CASE("zero multi-index gives a column of ones for every family") {
  SplitMix64 rng(7);
  Dataset data;
  data.x = Matrix(5, 3);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 3; ++c) data.x(r, c) = rng.uniform(-1.0, 1.0);
  data.y = Vector::Zero(5);
  for (BasisFamily family :
       {BasisFamily::monomial, BasisFamily::legendre, BasisFamily::hermite}) {
    const IndexSet set({MultiIndex({0, 0, 0})}, family);
    const DesignMatrix psi = evaluate_design(data, set);
    CHECK((psi.values.col(0) - Vector::Ones(5)).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("legendre values match closed forms") {
  CHECK(legendre_value(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
  SplitMix64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    CHECK(legendre_value(0, x) == 1.0);
    CHECK(legendre_value(1, x) == x);
    CHECK(legendre_value(2, x) ==
          doctest::Approx(0.5 * (3 * x * x - 1)).epsilon(1e-14));
    CHECK(legendre_value(3, x) ==
          doctest::Approx(0.5 * (5 * x * x * x - 3 * x)).epsilon(1e-14));
    CHECK(legendre_value(4, x) ==
          doctest::Approx((35 * std::pow(x, 4) - 30 * x * x + 3) / 8).epsilon(1e-13));
    CHECK(legendre_value(5, x) ==
          doctest::Approx((63 * std::pow(x, 5) - 70 * x * x * x + 15 * x) / 8)
              .epsilon(1e-13));
  }
}

TEST_CASE("probabilists' hermite values match closed forms") {
  SplitMix64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform(-3.0, 3.0);
    CHECK(hermite_value(0, x) == 1.0);
    CHECK(hermite_value(1, x) == x);
    CHECK(hermite_value(2, x) == doctest::Approx(x * x - 1).epsilon(1e-14));
    CHECK(hermite_value(3, x) == doctest::Approx(x * x * x - 3 * x).epsilon(1e-14));
    CHECK(hermite_value(4, x) ==
          doctest::Approx(std::pow(x, 4) - 6 * x * x + 3).epsilon(1e-13));
  }
}

TEST_CASE("row permutation of the data permutes design rows identically") {
  SplitMix64 rng(17);
  Dataset data;
  const int n = 8;
  data.x = Matrix(n, 2);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < 2; ++c) data.x(r, c) = rng.uniform(-1.0, 1.0);
  data.y = Vector::Zero(n);
  const IndexSet set = enumerate_total_degree(2, 3, BasisFamily::legendre);
  const Matrix psi = evaluate_design(data, set).values;

  std::vector<int> perm = {3, 0, 7, 1, 5, 2, 6, 4};
  Dataset shuffled;
  shuffled.x = Matrix(n, 2);
  shuffled.y = Vector::Zero(n);
  for (int r = 0; r < n; ++r) shuffled.x.row(r) = data.x.row(perm[r]);
  const Matrix psi_shuffled = evaluate_design(shuffled, set).values;
  for (int r = 0; r < n; ++r)
    CHECK((psi_shuffled.row(r) - psi.row(perm[r])).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("0/1 monomial exponents select raw input column products") {
  SplitMix64 rng(19);
  Dataset data;
  data.x = Matrix(6, 3);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 3; ++c) data.x(r, c) = rng.uniform(-2.0, 2.0);
  data.y = Vector::Zero(6);
  const IndexSet set({MultiIndex({1, 0, 1})}, BasisFamily::monomial);
  const Matrix psi = evaluate_design(data, set).values;
  const Vector expected = data.x.col(0).cwiseProduct(data.x.col(2));
  CHECK((psi.col(0) - expected).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("design evaluation rejects bad input") {
  Dataset data;
  data.x = Matrix(2, 2);
  data.x << 0.0, 1.0, 2.0, 3.0;
  data.y = Vector::Zero(2);
  const IndexSet wrong_d({MultiIndex({1})}, BasisFamily::monomial);
  CHECK_THROWS_AS(evaluate_design(data, wrong_d), DimensionMismatch);

  data.x(1, 1) = std::numeric_limits<double>::quiet_NaN();
  const IndexSet ok({MultiIndex({1, 1})}, BasisFamily::monomial);
  CHECK_THROWS_AS(evaluate_design(data, ok), DataError);
}

TEST_CASE("multi-index basics") {
  CHECK_THROWS_AS(MultiIndex({-1, 0}), InvalidArgument);
  CHECK_THROWS_AS(MultiIndex(std::vector<int>{}), InvalidArgument);
  CHECK(MultiIndex({1, 2, 0}).total_degree() == 3);
  CHECK(MultiIndex({1, 2, 0}).to_string() == "(1,2,0)");
  CHECK(family_from_name("legendre") == BasisFamily::legendre);
  CHECK_THROWS_AS(family_from_name("chebyshev"), InvalidArgument);
}
