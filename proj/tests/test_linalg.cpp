#include <doctest.h>

#include "detfun/errors.hpp"
#include "detfun/linalg.hpp"

#include <random>

using namespace detfun;

namespace {

MatFp random_mat(std::mt19937_64& rng, std::uint32_t p, std::size_t r, std::size_t c) {
  MatFp m(p, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, static_cast<long long>(rng() % p));
  return m;
}

MatZ random_matz(std::mt19937_64& rng, std::size_t r, std::size_t c, int range) {
  MatZ m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<long long>(rng() % (2 * range + 1)) - range;
  return m;
}

}  // namespace

TEST_CASE("solve small systems") {
  auto a = MatFp::from_rows(5, {{1}});
  VecFp b{3};
  auto x = solve(a, b);
  REQUIRE(x);
  CHECK(*x == VecFp{3});

  auto a2 = MatFp::from_rows(2, {{1, 1}, {1, 1}});
  VecFp b2{1, 0};
  CHECK_FALSE(solve(a2, b2));
}

TEST_CASE("solve round-trips on random invertible systems over F7") {
  std::mt19937_64 rng(7);
  int done = 0;
  while (done < 50) {
    auto a = random_mat(rng, 7, 6, 6);
    if (det(a) == 0) continue;
    VecFp b(6);
    for (auto& v : b) v = static_cast<Fp>(rng() % 7);
    auto x = solve(a, b);
    REQUIRE(x);
    CHECK(a.apply(*x) == b);
    ++done;
  }
}

TEST_CASE("det, rank, kernel") {
  CHECK(det(MatFp::from_rows(5, {{2, 0}, {0, 3}})) == 1);
  auto a = MatFp::from_rows(3, {{1, 1}, {2, 2}});
  CHECK(rank(a) == 1);
  auto k = kernel_basis(a);
  REQUIRE(k.size() == 1);
  CHECK(a.apply(k[0]) == VecFp{0, 0});
  CHECK(det(MatFp::identity(11, 4)) == 1);
  CHECK_THROWS_AS(det(MatFp(5, 2, 3)), InputError);
  CHECK_THROWS_AS(MatFp::from_rows(5, {{1}}) * MatFp::from_rows(7, {{1}}), InputError);
}

TEST_CASE("det of inverse over F5") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    auto a = random_mat(rng, 5, 4, 4);
    auto inv = inverse(a);
    if (det(a) == 0) {
      CHECK_FALSE(inv);
      continue;
    }
    REQUIRE(inv);
    CHECK(a * *inv == MatFp::identity(5, 4));
    CHECK(fp_mul(det(a), det(*inv), 5) == 1);
  }
}

TEST_CASE("rank-nullity and kernel vectors on random matrices") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    std::uint32_t p = std::array<std::uint32_t, 4>{2, 3, 5, 7}[t % 4];
    auto a = random_mat(rng, p, 1 + rng() % 6, 1 + rng() % 6);
    auto k = kernel_basis(a);
    CHECK(rank(a) + k.size() == a.cols());
    for (const auto& v : k) {
      auto av = a.apply(v);
      CHECK(std::all_of(av.begin(), av.end(), [](Fp x) { return x == 0; }));
    }
    auto cs = column_space_basis(a);
    CHECK(cs.cols() == rank(a));
  }
}

TEST_CASE("det is multiplicative") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 200; ++t) {
    auto a = random_mat(rng, 7, 5, 5), b = random_mat(rng, 7, 5, 5);
    CHECK(det(a * b) == fp_mul(det(a), det(b), 7));
  }
  for (int t = 0; t < 100; ++t) {
    auto a = random_matz(rng, 4, 4, 9), b = random_matz(rng, 4, 4, 9);
    CHECK(det(a * b) == det(a) * det(b));
  }
}

TEST_CASE("Smith normal form examples") {
  auto s = smith_normal_form(MatZ::from_rows({{2, 0}, {0, 3}}, 2));
  CHECK(s.d == MatZ::from_rows({{1, 0}, {0, 6}}, 2));
  auto z = smith_normal_form(MatZ::from_rows({{0}}, 1));
  CHECK(z.d == MatZ::from_rows({{0}}, 1));
  auto two = smith_normal_form(MatZ::from_rows({{2, 0}, {0, 2}}, 2));
  CHECK(two.d == MatZ::from_rows({{2, 0}, {0, 2}}, 2));
  CHECK(group_from_presentation(2, MatZ::from_rows({{2, 0}, {0, 2}}, 2)).describe() == "Z/2 + Z/2, rank 0");
}

TEST_CASE("Smith normal form invariants on random matrices") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    auto a = random_matz(rng, r, c, 12);
    auto s = smith_normal_form(a);
    CHECK(s.u * a * s.v == s.d);
    CHECK(s.d.is_diagonal());
    CHECK(abs(det(s.u)) == 1);
    CHECK(abs(det(s.v)) == 1);
    std::size_t n = std::min(r, c);
    for (std::size_t i = 0; i < n; ++i) CHECK(s.d(i, i) >= 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (s.d(i, i) == 0)
        CHECK(s.d(i + 1, i + 1) == 0);
      else
        CHECK(s.d(i + 1, i + 1) % s.d(i, i) == 0);
    }
  }
}

TEST_CASE("group presentations") {
  auto z = group_from_presentation(1, MatZ(0, 1));
  CHECK(z.describe() == "Z, rank 1");

  auto g = group_from_presentation(3, MatZ::from_rows({{1, 0, 0}, {0, 1, 1}}, 3));
  CHECK(g.free_rank == 1);
  CHECK(g.torsion.empty());
  // g1 and g2 map to opposite generators, g0 to zero.
  CHECK(g.class_of(0) == std::vector<BigInt>{0});
  CHECK(g.class_of(1)[0] == -g.class_of(2)[0]);
  CHECK(abs(g.class_of(1)[0]) == 1);

  auto f = group_from_presentation(2, MatZ::from_rows({{1, -1}, {5, 0}}, 2));
  CHECK(f.describe() == "Z/5, rank 0");
  CHECK(f.class_of(0) == f.class_of(1));
  std::vector<BigInt> five{5, 0};
  CHECK(f.normalize(five) == std::vector<BigInt>{0});

  CHECK_THROWS_AS(group_from_presentation(2, MatZ::from_rows({{1, 2, 3}}, 3)), InputError);
}

TEST_CASE("presentation class map respects relations") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + rng() % 4, m = rng() % 4;
    auto rel = random_matz(rng, m, n, 4);
    auto g = group_from_presentation(n, rel);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<BigInt> row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = rel(i, j);
      auto y = g.normalize(row);
      CHECK(std::all_of(y.begin(), y.end(), [](const BigInt& v) { return v == 0; }));
    }
  }
}

TEST_CASE("canonical basis elements have unit coordinates") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + rng() % 4, m = rng() % 4;
    auto g = group_from_presentation(n, random_matz(rng, m, n, 4));
    for (std::size_t k = 0; k < g.moduli.size(); ++k) {
      std::vector<BigInt> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = g.basis(k, i);
      auto y = g.normalize(x);
      for (std::size_t j = 0; j < y.size(); ++j) CHECK(y[j] == (j == k ? 1 : 0));
    }
  }
}
