#include <catch_amalgamated.hpp>

#include <random>

#include "nhcech/linalg.hpp"
#include "oracle.hpp"

using namespace nhcech;

namespace {

const PrimeField F2(2);

FMatrix four_cycle_incidence() {
  // rows: edges ab, ad, bc, cd; columns: vertices a, b, c, d
  FMatrix m(F2, 4, 4);
  const int rows[4][2] = {{0, 1}, {0, 3}, {1, 2}, {2, 3}};
  for (std::size_t r = 0; r < 4; ++r) {
    m.set(r, static_cast<std::size_t>(rows[r][0]), 1);
    m.set(r, static_cast<std::size_t>(rows[r][1]), 1);
  }
  return m;
}

FMatrix random_matrix(std::mt19937_64& rng, PrimeField f, std::size_t rows, std::size_t cols) {
  FMatrix m(f, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, static_cast<Scalar>(rng() % f.modulus()));
  return m;
}

}  // namespace

TEST_CASE("prime field arithmetic", "[linalg]") {
  const PrimeField f(7);
  CHECK(f.add(5, 4) == 2);
  CHECK(f.sub(2, 5) == 4);
  CHECK(f.mul(3, 5) == 1);
  CHECK(f.inv(3) == 5);
  CHECK(f.neg(0) == 0);
  CHECK(f.sign(1) == 6);
  CHECK(F2.sign(1) == 1);
  CHECK_THROWS_AS(PrimeField(4), Error);
  CHECK_THROWS_AS(PrimeField(1), Error);
}

TEST_CASE("rank and nullity", "[linalg]") {
  CHECK(rank_nullity(FMatrix(F2, 3, 3)) == RankNullity{0, 3});
  CHECK(rank_nullity(FMatrix::identity(F2, 4)) == RankNullity{4, 0});
  const FMatrix inc = four_cycle_incidence();
  CHECK(rank(inc) == 3);
  CHECK(rank(inc) == oracle::rank_f2(inc));
}

TEST_CASE("kernel bases", "[linalg]") {
  CHECK(kernel_basis(FMatrix::identity(F2, 4)).cols() == 0);
  const FMatrix k = kernel_basis(FMatrix(F2, 2, 5));
  CHECK(k.cols() == 5);
  CHECK(k == FMatrix::identity(F2, 5));
  // delta^1 on the 4-cycle maps into a zero-dimensional space
  CHECK(kernel_basis(FMatrix(F2, 0, 4)).cols() == 4);
  CHECK((four_cycle_incidence() * kernel_basis(four_cycle_incidence())).is_zero());
}

TEST_CASE("solving linear systems", "[linalg]") {
  const FVector b{1, 0, 1, 1};
  const auto x = solve_linear(FMatrix::identity(F2, 4), b);
  REQUIRE(x);
  CHECK(*x == b);
  CHECK_FALSE(solve_linear(FMatrix(F2, 4, 4), b));

  // a single -1 edge on the 4-cycle is no coboundary
  const FVector single_edge{0, 0, 0, 1};
  CHECK_FALSE(solve_linear(four_cycle_incidence(), single_edge));
  bool brute_found = false;
  for (std::uint32_t v = 0; v < 16; ++v) {
    const FVector values{v & 1U, (v >> 1) & 1U, (v >> 2) & 1U, (v >> 3) & 1U};
    if (four_cycle_incidence().apply(values) == single_edge) brute_found = true;
  }
  CHECK_FALSE(brute_found);
}

TEST_CASE("quotient dimensions", "[linalg]") {
  const FMatrix z = FMatrix::identity(F2, 4);
  CHECK(quotient_dim(z, z) == 0);
  CHECK(quotient_dim(z, FMatrix(F2, 4, 0)) == 4);
  CHECK(quotient_dim(z, four_cycle_incidence()) == 1);
  FMatrix outside(F2, 3, 1);
  outside.set(2, 0, 1);
  FMatrix sub(F2, 3, 1);
  sub.set(0, 0, 1);
  CHECK_THROWS_AS(quotient_dim(sub, outside), Error);
}

TEST_CASE("row reduction agrees with brute-force span counting", "[linalg][property]") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng() % 8;
    const std::size_t cols = 1 + rng() % 8;
    const FMatrix m = random_matrix(rng, F2, rows, cols);
    CAPTURE(trial);
    CHECK(rank(m) == oracle::rank_f2(m));
    CHECK(rank(m) + kernel_basis(m).cols() == cols);
    CHECK((m * kernel_basis(m)).is_zero());
    CHECK(rank(m) == rank(m.transpose()));
    CHECK(column_space_basis(m).cols() == rank(m));
  }
}

TEST_CASE("solutions satisfy the system over F_5", "[linalg][property]") {
  const PrimeField f(5);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const FMatrix a = random_matrix(rng, f, 1 + rng() % 6, 1 + rng() % 6);
    FVector x0(a.cols());
    for (auto& v : x0) v = static_cast<Scalar>(rng() % 5);
    const FVector b = a.apply(x0);
    const auto x = solve_linear(a, b);
    REQUIRE(x);
    CHECK(a.apply(*x) == b);
  }
}
