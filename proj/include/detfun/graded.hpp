#pragma once

#include "detfun/linalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace detfun {

// A bounded graded F_p-vector space with standard bases; the window is trimmed
// so that equal objects compare equal.
class GradedObject {
 public:
  GradedObject() = default;
  GradedObject(std::uint32_t p, int lo, std::vector<std::size_t> dims);
  static GradedObject zero(std::uint32_t p) { return GradedObject(p, 0, {}); }
  static GradedObject concentrated(std::uint32_t p, int degree, std::size_t dim);

  std::uint32_t prime() const { return p_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
  bool is_zero() const { return dims_.empty(); }
  std::size_t dim(int i) const;
  const std::vector<std::size_t>& dims() const { return dims_; }

  // (T^k A)_j = A_{j+k}
  GradedObject shift(int k = 1) const;
  long long euler() const;
  std::size_t even_dim() const;
  std::size_t odd_dim() const;
  // The summands of the given parity, ordered by increasing degree.
  std::vector<int> degrees_of_parity(int parity) const;

  bool operator==(const GradedObject&) const = default;
  std::string to_string() const;

 private:
  std::uint32_t p_ = 2;
  int lo_ = 0;
  std::vector<std::size_t> dims_;
};

class GradedMap {
 public:
  GradedMap() = default;
  GradedMap(GradedObject src, GradedObject tgt, std::map<int, MatFp> comps);
  static GradedMap identity(const GradedObject& a);
  static GradedMap zero(const GradedObject& a, const GradedObject& b);

  const GradedObject& src() const { return src_; }
  const GradedObject& tgt() const { return tgt_; }
  MatFp comp(int i) const;

  GradedMap shift(int k = 1) const;
  bool is_iso() const;
  GradedMap inverse() const;
  bool operator==(const GradedMap& o) const;

 private:
  GradedObject src_, tgt_;
  std::map<int, MatFp> comps_;
};

GradedMap compose(const GradedMap& second, const GradedMap& first);

// 0 -> A -> B -> C -> 0, exact in every degree.
struct GradedSes {
  GradedMap in, out;
  GradedSes(GradedMap in, GradedMap out);
  const GradedObject& A() const { return in.src(); }
  const GradedObject& B() const { return in.tgt(); }
  const GradedObject& C() const { return out.tgt(); }
  GradedSes shift(int k = 1) const { return {in.shift(k), out.shift(k)}; }
};

// The split sequence A -> A + B -> B with canonical inclusion and projection.
GradedSes graded_sum_ses(const GradedObject& a, const GradedObject& b);
GradedObject graded_sum(const GradedObject& a, const GradedObject& b);

// Short exact sequence of vector spaces F_p^a -> F_p^b -> F_p^c.
struct VectSes {
  MatFp in, out;
  VectSes(MatFp in, MatFp out);
  std::size_t a() const { return in.cols(); }
  std::size_t b() const { return in.rows(); }
  std::size_t c() const { return out.rows(); }
};

// Columns s with out * s = identity.
MatFp section(const MatFp& surjection);

}  // namespace detfun
