#include "detfun/graded.hpp"

#include "detfun/errors.hpp"

#include <sstream>

namespace detfun {

GradedObject::GradedObject(std::uint32_t p, int lo, std::vector<std::size_t> dims) : p_(p), lo_(lo), dims_(std::move(dims)) {
  std::size_t first = 0;
  while (first < dims_.size() && dims_[first] == 0) ++first;
  std::size_t last = dims_.size();
  while (last > first && dims_[last - 1] == 0) --last;
  if (first == last) {
    dims_.clear();
    lo_ = 0;
    return;
  }
  dims_ = std::vector<std::size_t>(dims_.begin() + first, dims_.begin() + last);
  lo_ += static_cast<int>(first);
}

GradedObject GradedObject::concentrated(std::uint32_t p, int degree, std::size_t dim) { return {p, degree, {dim}}; }

std::size_t GradedObject::dim(int i) const {
  if (dims_.empty() || i < lo_ || i > hi()) return 0;
  return dims_[i - lo_];
}

GradedObject GradedObject::shift(int k) const {
  if (is_zero()) return *this;
  return {p_, lo_ - k, dims_};
}

long long GradedObject::euler() const {
  long long e = 0;
  for (int i = lo_; i <= hi(); ++i) e += (i % 2 == 0 ? 1 : -1) * static_cast<long long>(dim(i));
  return e;
}

std::size_t GradedObject::even_dim() const {
  std::size_t n = 0;
  for (int i : degrees_of_parity(0)) n += dim(i);
  return n;
}

std::size_t GradedObject::odd_dim() const {
  std::size_t n = 0;
  for (int i : degrees_of_parity(1)) n += dim(i);
  return n;
}

std::vector<int> GradedObject::degrees_of_parity(int parity) const {
  std::vector<int> out;
  if (is_zero()) return out;
  for (int i = lo_; i <= hi(); ++i)
    if (((i % 2) + 2) % 2 == parity) out.push_back(i);
  return out;
}

std::string GradedObject::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = lo_; i <= hi(); ++i) os << (i == lo_ ? "" : " ") << i << ":" << dim(i);
  os << "]";
  return os.str();
}

GradedMap::GradedMap(GradedObject src, GradedObject tgt, std::map<int, MatFp> comps)
    : src_(std::move(src)), tgt_(std::move(tgt)) {
  if (src_.prime() != tgt_.prime()) throw InputError("graded map: prime mismatch");
  for (auto& [i, m] : comps) {
    if (m.rows() != tgt_.dim(i) || m.cols() != src_.dim(i) || m.prime() != src_.prime())
      throw InputError("graded map: component shape mismatch in degree " + std::to_string(i));
    if (m.rows() > 0 && m.cols() > 0) comps_.emplace(i, std::move(m));
  }
}

GradedMap GradedMap::identity(const GradedObject& a) {
  std::map<int, MatFp> c;
  for (int i = a.lo(); i <= a.hi(); ++i) c.emplace(i, MatFp::identity(a.prime(), a.dim(i)));
  return {a, a, c};
}

GradedMap GradedMap::zero(const GradedObject& a, const GradedObject& b) { return {a, b, {}}; }

MatFp GradedMap::comp(int i) const {
  auto it = comps_.find(i);
  if (it != comps_.end()) return it->second;
  return MatFp::zero(src_.prime(), tgt_.dim(i), src_.dim(i));
}

GradedMap GradedMap::shift(int k) const {
  std::map<int, MatFp> c;
  for (auto& [i, m] : comps_) c.emplace(i - k, m);
  return {src_.shift(k), tgt_.shift(k), c};
}

bool GradedMap::is_iso() const {
  for (int i = std::min(src_.lo(), tgt_.lo()); i <= std::max(src_.hi(), tgt_.hi()); ++i) {
    if (src_.dim(i) != tgt_.dim(i)) return false;
    if (src_.dim(i) > 0 && rank(comp(i)) != src_.dim(i)) return false;
  }
  return true;
}

GradedMap GradedMap::inverse() const {
  if (!is_iso()) throw InputError("graded map is not invertible");
  std::map<int, MatFp> c;
  for (auto& [i, m] : comps_) c.emplace(i, *detfun::inverse(m));
  return {tgt_, src_, c};
}

bool GradedMap::operator==(const GradedMap& o) const {
  if (src_ != o.src_ || tgt_ != o.tgt_) return false;
  for (int i = src_.lo(); i <= src_.hi(); ++i)
    if (comp(i) != o.comp(i)) return false;
  return true;
}

GradedMap compose(const GradedMap& second, const GradedMap& first) {
  if (first.tgt() != second.src()) throw InputError("graded compose: not composable");
  std::map<int, MatFp> c;
  for (int i = first.src().lo(); i <= first.src().hi(); ++i) c.emplace(i, second.comp(i) * first.comp(i));
  return {first.src(), second.tgt(), c};
}

GradedSes::GradedSes(GradedMap in_, GradedMap out_) : in(std::move(in_)), out(std::move(out_)) {
  if (in.tgt() != out.src()) throw InputError("graded ses: maps not composable");
  const auto& b = in.tgt();
  int lo = std::min({A().lo(), B().lo(), C().lo()});
  int hi = std::max({A().hi(), B().hi(), C().hi()});
  for (int i = lo; i <= hi; ++i) {
    std::size_t a = A().dim(i), bb = b.dim(i), c = C().dim(i);
    if (a + c != bb) throw InputError("graded ses: dimensions do not add up in degree " + std::to_string(i));
    if (!(out.comp(i) * in.comp(i)).is_zero() || (a > 0 && rank(in.comp(i)) != a) || (c > 0 && rank(out.comp(i)) != c))
      throw InputError("graded ses: not exact in degree " + std::to_string(i));
  }
}

GradedObject graded_sum(const GradedObject& a, const GradedObject& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  std::vector<std::size_t> dims;
  for (int i = lo; i <= hi; ++i) dims.push_back(a.dim(i) + b.dim(i));
  return {a.prime(), lo, dims};
}

GradedSes graded_sum_ses(const GradedObject& a, const GradedObject& b) {
  if (a.prime() != b.prime()) throw InputError("graded sum: prime mismatch");
  GradedObject s = graded_sum(a, b);
  std::map<int, MatFp> in, out;
  for (int i = s.lo(); i <= s.hi(); ++i) {
    std::uint32_t p = a.prime();
    in.emplace(i, MatFp::vstack(MatFp::identity(p, a.dim(i)), MatFp::zero(p, b.dim(i), a.dim(i))));
    out.emplace(i, MatFp::hstack(MatFp::zero(p, b.dim(i), a.dim(i)), MatFp::identity(p, b.dim(i))));
  }
  return {GradedMap(a, s, in), GradedMap(s, b, out)};
}

VectSes::VectSes(MatFp in_, MatFp out_) : in(std::move(in_)), out(std::move(out_)) {
  if (in.rows() != out.cols()) throw InputError("ses: maps not composable");
  if (a() + c() != b() || !(out * in).is_zero() || rank(in) != a() || rank(out) != c())
    throw InputError("ses: not exact");
}

MatFp section(const MatFp& surjection) {
  std::uint32_t p = surjection.prime();
  std::vector<VecFp> cols;
  for (std::size_t j = 0; j < surjection.rows(); ++j) {
    VecFp e(surjection.rows(), 0);
    e[j] = 1;
    auto x = solve(surjection, e);
    if (!x) throw InputError("section: map is not surjective");
    cols.push_back(*x);
  }
  return MatFp::from_columns(p, surjection.cols(), cols);
}

}  // namespace detfun
