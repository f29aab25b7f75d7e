#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace detfun {

using Fp = std::uint32_t;
using VecFp = std::vector<Fp>;

bool is_prime(std::uint64_t n);

Fp fp_reduce(long long v, std::uint32_t p);
Fp fp_add(Fp a, Fp b, std::uint32_t p);
Fp fp_sub(Fp a, Fp b, std::uint32_t p);
Fp fp_mul(Fp a, Fp b, std::uint32_t p);
Fp fp_neg(Fp a, std::uint32_t p);
Fp fp_inv(Fp a, std::uint32_t p);
Fp fp_pow(Fp a, long long e, std::uint32_t p);

// Dense row-major matrix over the prime field F_p. Entries are always reduced.
class MatFp {
 public:
  MatFp() = default;
  MatFp(std::uint32_t p, std::size_t rows, std::size_t cols);

  static MatFp zero(std::uint32_t p, std::size_t rows, std::size_t cols) { return {p, rows, cols}; }
  static MatFp identity(std::uint32_t p, std::size_t n);
  static MatFp scalar(std::uint32_t p, std::size_t n, Fp s);
  static MatFp from_rows(std::uint32_t p, const std::vector<std::vector<long long>>& rows);
  // Columns given as vectors of length `rows`.
  static MatFp from_columns(std::uint32_t p, std::size_t rows, const std::vector<VecFp>& cols);

  std::uint32_t prime() const { return p_; }
  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool square() const { return r_ == c_; }

  Fp operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  void set(std::size_t i, std::size_t j, long long v) { a_[i * c_ + j] = fp_reduce(v, p_); }

  MatFp operator*(const MatFp& o) const;
  MatFp operator+(const MatFp& o) const;
  MatFp operator-(const MatFp& o) const;
  MatFp operator-() const;
  MatFp scaled(Fp s) const;
  VecFp apply(std::span<const Fp> v) const;
  MatFp transpose() const;
  MatFp block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  VecFp column(std::size_t j) const;
  VecFp row(std::size_t i) const;
  bool is_zero() const;

  static MatFp hstack(const MatFp& a, const MatFp& b);
  static MatFp vstack(const MatFp& a, const MatFp& b);
  static MatFp direct_sum(const MatFp& a, const MatFp& b);

  bool operator==(const MatFp& o) const = default;

  std::string to_string() const;

 private:
  std::uint32_t p_ = 2;
  std::size_t r_ = 0, c_ = 0;
  std::vector<Fp> a_;
};

// Reduced row echelon form R = T * A, pivot columns in increasing order.
struct Rref {
  MatFp reduced;
  MatFp transform;
  std::vector<std::size_t> pivots;
};

Rref rref(const MatFp& a);
std::optional<VecFp> solve(const MatFp& a, std::span<const Fp> b);
// Basis of {x : A x = 0}; one vector per free column, canonical for the row space of A.
std::vector<VecFp> kernel_basis(const MatFp& a);
std::size_t rank(const MatFp& a);
Fp det(const MatFp& a);
std::optional<MatFp> inverse(const MatFp& a);

// Canonical basis (rows of the RREF) of the column span of A, as columns.
MatFp column_space_basis(const MatFp& a);

using BigInt = boost::multiprecision::cpp_int;

class MatZ {
 public:
  MatZ() = default;
  MatZ(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static MatZ identity(std::size_t n);
  static MatZ from_rows(const std::vector<std::vector<long long>>& rows, std::size_t cols);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }

  MatZ operator*(const MatZ& o) const;
  bool operator==(const MatZ& o) const = default;
  bool is_diagonal() const;
  void append_row(const std::vector<BigInt>& row);

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<BigInt> a_;
};

BigInt det(const MatZ& a);
// Exact inverse of a matrix with determinant +-1.
MatZ inverse_unimodular(const MatZ& a);

struct SmithForm {
  MatZ d;  // diagonal, d_1 | d_2 | ...
  MatZ u;  // unimodular, rows x rows
  MatZ v;  // unimodular, cols x cols
};

// u * a * v == d.
SmithForm smith_normal_form(const MatZ& a);

// Invariant-factor decomposition of Z^n / (row span of relations).
struct GroupForm {
  std::size_t generators = 0;
  std::size_t free_rank = 0;
  std::vector<BigInt> torsion;   // invariant factors > 1, ascending by divisibility
  std::vector<BigInt> moduli;    // per canonical coordinate: torsion entries then 0 for each free one
  MatZ coords;                   // generators x moduli.size(): image of each generator
  MatZ basis;                    // moduli.size() x generators: each canonical basis element as a generator combination

  // Canonical coordinates of sum x_i g_i.
  std::vector<BigInt> normalize(std::span<const BigInt> x) const;
  std::vector<BigInt> class_of(std::size_t generator) const;
  bool is_trivial() const { return moduli.empty(); }
  std::string describe() const;
};

GroupForm group_from_presentation(std::size_t n, const MatZ& relations);

}  // namespace detfun
