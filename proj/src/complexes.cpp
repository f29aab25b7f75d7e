#include "detfun/complexes.hpp"

#include "detfun/errors.hpp"

#include <sstream>

namespace detfun {

namespace {

MatFp zeros(std::uint32_t p, std::size_t r, std::size_t c) { return MatFp::zero(p, r, c); }

// Block matrix from a grid; every block in a row shares its row count, every block in a column its column count.
MatFp blocks(const std::vector<std::vector<MatFp>>& grid) {
  MatFp out;
  bool first_row = true;
  for (const auto& row : grid) {
    MatFp r = row.at(0);
    for (std::size_t j = 1; j < row.size(); ++j) r = MatFp::hstack(r, row[j]);
    out = first_row ? r : MatFp::vstack(out, r);
    first_row = false;
  }
  return out;
}

// Columns x with basis * x = m, for a basis of full column rank containing the columns of m.
MatFp coords_in(const MatFp& basis, const MatFp& m) {
  std::vector<VecFp> cols;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto x = solve(basis, m.column(j));
    if (!x) throw InputError("coordinates: vector outside the span");
    cols.push_back(*x);
  }
  return MatFp::from_columns(m.prime(), basis.cols(), cols);
}

MatFp kernel_matrix(const MatFp& m) { return MatFp::from_columns(m.prime(), m.cols(), kernel_basis(m)); }

void require_same_prime(std::uint32_t p, std::uint32_t q, const char* what) {
  if (p != q) throw InputError(std::string(what) + ": prime mismatch");
}

int parity(int i) { return ((i % 2) + 2) % 2; }

}  // namespace

// ---------------------------------------------------------------- complexes

Complex::Complex(std::uint32_t p, int lo, std::vector<std::size_t> dims, std::vector<MatFp> diffs) : p_(p), lo_(lo) {
  if (!is_prime(p)) throw InputError("complex: modulus is not prime");
  if (!dims.empty() && diffs.size() > dims.size() - 1) throw InputError("complex: too many differentials");
  if (dims.empty() && !diffs.empty()) throw InputError("complex: too many differentials");
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    if (k >= diffs.size()) diffs.push_back(zeros(p, dims[k + 1], dims[k]));
    const MatFp& d = diffs[k];
    if (d.prime() != p || d.rows() != dims[k + 1] || d.cols() != dims[k])
      throw InputError("complex: differential shape mismatch in degree " + std::to_string(lo + static_cast<int>(k)));
  }
  for (std::size_t k = 0; k + 2 < dims.size(); ++k)
    if (!(diffs[k + 1] * diffs[k]).is_zero())
      throw InputError("complex: d^2 != 0 in degree " + std::to_string(lo + static_cast<int>(k)));
  std::size_t first = 0, last = dims.size();
  while (first < last && dims[first] == 0) ++first;
  while (last > first && dims[last - 1] == 0) --last;
  if (first == last) {
    lo_ = 0;
    return;
  }
  dims_.assign(dims.begin() + first, dims.begin() + last);
  diffs_.assign(diffs.begin() + first, diffs.begin() + (last - 1));
  lo_ = lo + static_cast<int>(first);
}

Complex Complex::zero(std::uint32_t p) { return {p, 0, {}, {}}; }

Complex Complex::concentrated(std::uint32_t p, int degree, std::size_t dim) { return {p, degree, {dim}, {}}; }

Complex Complex::from_graded(const GradedObject& a) { return {a.prime(), a.lo(), a.dims(), {}}; }

std::size_t Complex::dim(int i) const {
  if (dims_.empty() || i < lo_ || i > hi()) return 0;
  return dims_[i - lo_];
}

MatFp Complex::diff(int i) const {
  if (i >= lo_ && i < hi()) return diffs_[i - lo_];
  return zeros(p_, dim(i + 1), dim(i));
}

std::size_t Complex::total_dim() const {
  std::size_t n = 0;
  for (auto d : dims_) n += d;
  return n;
}

bool Complex::operator==(const Complex& o) const {
  return p_ == o.p_ && lo_ == o.lo_ && dims_ == o.dims_ && diffs_ == o.diffs_;
}

std::string Complex::to_string() const {
  std::ostringstream os;
  os << "complex over F_" << p_;
  if (is_zero()) return os.str() + " (zero)";
  for (int i = lo_; i <= hi(); ++i) {
    os << "\n  " << i << ": dim " << dim(i);
    if (i < hi() && dim(i) > 0 && dim(i + 1) > 0) os << ", d = " << diff(i).to_string();
  }
  return os.str();
}

ChainMap::ChainMap(Complex src, Complex tgt, std::map<int, MatFp> comps) : src_(std::move(src)), tgt_(std::move(tgt)) {
  const auto p = src_.prime();
  require_same_prime(p, tgt_.prime(), "chain map");
  for (auto& [i, m] : comps) {
    if (m.prime() != p || m.rows() != tgt_.dim(i) || m.cols() != src_.dim(i))
      throw InputError("chain map: component shape mismatch in degree " + std::to_string(i));
    if (m.rows() > 0 && m.cols() > 0 && !m.is_zero()) comps_.emplace(i, std::move(m));
  }
  if (src_.is_zero() || tgt_.is_zero()) return;
  for (int i = std::min(src_.lo(), tgt_.lo()) - 1; i <= std::max(src_.hi(), tgt_.hi()); ++i)
    if (tgt_.diff(i) * comp(i) != comp(i + 1) * src_.diff(i))
      throw InputError("chain map: square fails in degree " + std::to_string(i));
}

ChainMap ChainMap::identity(const Complex& a) {
  std::map<int, MatFp> c;
  for (int i = a.lo(); i <= a.hi(); ++i) c.emplace(i, MatFp::identity(a.prime(), a.dim(i)));
  return {a, a, c};
}

ChainMap ChainMap::zero(const Complex& a, const Complex& b) { return {a, b, {}}; }

MatFp ChainMap::comp(int i) const {
  auto it = comps_.find(i);
  if (it != comps_.end()) return it->second;
  return zeros(src_.prime(), tgt_.dim(i), src_.dim(i));
}

bool ChainMap::operator==(const ChainMap& o) const {
  return src_ == o.src_ && tgt_ == o.tgt_ && comps_ == o.comps_;
}

Complex shift(const Complex& a, int k) {
  if (a.is_zero()) return a;
  std::vector<MatFp> diffs;
  for (int i = a.lo(); i < a.hi(); ++i) diffs.push_back(k % 2 == 0 ? a.diff(i) : -a.diff(i));
  return {a.prime(), a.lo() - k, a.terms().dims(), diffs};
}

ChainMap shift(const ChainMap& f, int k) {
  std::map<int, MatFp> c;
  for (int i = f.src().lo(); i <= f.src().hi(); ++i) c.emplace(i - k, f.comp(i));
  return {shift(f.src(), k), shift(f.tgt(), k), c};
}

ChainMap compose(const ChainMap& second, const ChainMap& first) {
  if (!(first.tgt() == second.src())) throw InputError("compose: chain maps are not composable");
  std::map<int, MatFp> c;
  for (int i = first.src().lo(); i <= first.src().hi(); ++i) c.emplace(i, second.comp(i) * first.comp(i));
  return {first.src(), second.tgt(), c};
}

ChainMap add(const ChainMap& f, const ChainMap& g) {
  if (!(f.src() == g.src()) || !(f.tgt() == g.tgt())) throw InputError("add: chain maps have different shapes");
  std::map<int, MatFp> c;
  for (int i = f.src().lo(); i <= f.src().hi(); ++i) c.emplace(i, f.comp(i) + g.comp(i));
  return {f.src(), f.tgt(), c};
}

ChainMap scale(const ChainMap& f, Fp s) {
  std::map<int, MatFp> c;
  for (int i = f.src().lo(); i <= f.src().hi(); ++i) c.emplace(i, f.comp(i).scaled(s));
  return {f.src(), f.tgt(), c};
}

ChainMap negate(const ChainMap& f) { return scale(f, f.src().prime() - 1); }

// ---------------------------------------------------------------- homotopy

std::optional<Homotopy> find_homotopy(const ChainMap& f, const ChainMap& g) {
  if (!(f.src() == g.src()) || !(f.tgt() == g.tgt())) throw InputError("homotopy: chain maps have different shapes");
  const Complex& a = f.src();
  const Complex& b = f.tgt();
  const auto p = a.prime();
  Homotopy h;
  if (a.is_zero() || b.is_zero()) {
    if (f == g) return h;
    return std::nullopt;
  }
  // Unknown h^i : A^i -> B^{i-1}, stored row-major at offset[i].
  std::map<int, std::size_t> offset;
  std::size_t n = 0;
  for (int i = a.lo(); i <= a.hi(); ++i) {
    offset[i] = n;
    n += b.dim(i - 1) * a.dim(i);
  }
  auto var = [&](int i, std::size_t r, std::size_t c) { return offset.at(i) + r * a.dim(i) + c; };
  std::size_t m = 0;
  for (int i = a.lo(); i <= a.hi(); ++i) m += b.dim(i) * a.dim(i);
  MatFp sys(p, m, n);
  VecFp rhs(m, 0);
  std::size_t row = 0;
  for (int i = a.lo(); i <= a.hi(); ++i) {
    MatFp target = f.comp(i) - g.comp(i);
    MatFp db = b.diff(i - 1);  // B^{i-1} -> B^i
    MatFp da = a.diff(i);      // A^i -> A^{i+1}
    for (std::size_t r = 0; r < b.dim(i); ++r) {
      for (std::size_t c = 0; c < a.dim(i); ++c, ++row) {
        rhs[row] = target(r, c);
        // (d_B h^i)[r, c] = sum_k db[r, k] h^i[k, c]
        for (std::size_t k = 0; k < b.dim(i - 1); ++k)
          if (db(r, k) != 0) sys.set(row, var(i, k, c), sys(row, var(i, k, c)) + db(r, k));
        // (h^{i+1} d_A)[r, c] = sum_k h^{i+1}[r, k] da[k, c]
        if (i + 1 <= a.hi())
          for (std::size_t k = 0; k < a.dim(i + 1); ++k)
            if (da(k, c) != 0) sys.set(row, var(i + 1, r, k), sys(row, var(i + 1, r, k)) + da(k, c));
      }
    }
  }
  auto x = solve(sys, rhs);
  if (!x) return std::nullopt;
  for (int i = a.lo(); i <= a.hi(); ++i) {
    MatFp hi(p, b.dim(i - 1), a.dim(i));
    for (std::size_t r = 0; r < hi.rows(); ++r)
      for (std::size_t c = 0; c < hi.cols(); ++c) hi.set(r, c, (*x)[var(i, r, c)]);
    h.emplace(i, hi);
  }
  return h;
}

bool is_homotopic(const ChainMap& f, const ChainMap& g) { return find_homotopy(f, g).has_value(); }

bool is_null_homotopic(const ChainMap& f) { return is_homotopic(f, ChainMap::zero(f.src(), f.tgt())); }

// ---------------------------------------------------------------- triangles

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::cone:
      return "cone";
    case Provenance::sum:
      return "sum";
    case Provenance::transported:
      return "transported";
  }
  return "?";
}

bool has_triangle_shape(const Triangle& t) {
  if (!(t.b.src() == t.B()) || !(t.c.src() == t.C()) || !(t.c.tgt() == shift(t.A()))) return false;
  return is_null_homotopic(compose(t.b, t.a)) && is_null_homotopic(compose(t.c, t.b)) &&
         is_null_homotopic(compose(shift(t.a), t.c));
}

Triangle cone(const ChainMap& f) {
  const Complex& a = f.src();
  const Complex& b = f.tgt();
  const auto p = a.prime();
  require_same_prime(p, b.prime(), "cone");
  int lo = std::min(a.is_zero() ? b.lo() : a.lo() - 1, b.is_zero() ? a.lo() - 1 : b.lo());
  int hi = std::max(a.is_zero() ? b.hi() : a.hi() - 1, b.is_zero() ? a.hi() - 1 : b.hi());
  if (a.is_zero() && b.is_zero()) lo = 0, hi = -1;
  std::vector<std::size_t> dims;
  std::vector<MatFp> diffs;
  for (int i = lo; i <= hi; ++i) dims.push_back(a.dim(i + 1) + b.dim(i));
  for (int i = lo; i < hi; ++i) {
    diffs.push_back(blocks({{-a.diff(i + 1), zeros(p, a.dim(i + 2), b.dim(i))},
                            {f.comp(i + 1), b.diff(i)}}));
  }
  Complex c(p, lo, dims, diffs);
  Complex ta = shift(a);
  std::map<int, MatFp> incl, proj;
  for (int i = lo; i <= hi; ++i) {
    incl.emplace(i, MatFp::vstack(zeros(p, a.dim(i + 1), b.dim(i)), MatFp::identity(p, b.dim(i))));
    proj.emplace(i, MatFp::hstack(MatFp::identity(p, a.dim(i + 1)), zeros(p, a.dim(i + 1), b.dim(i))));
  }
  return {f, ChainMap(b, c, incl), ChainMap(c, ta, proj), Provenance::cone};
}

Triangle sum_triangle(const Complex& a, const Complex& b) {
  const auto p = a.prime();
  require_same_prime(p, b.prime(), "sum");
  int lo = a.is_zero() ? b.lo() : (b.is_zero() ? a.lo() : std::min(a.lo(), b.lo()));
  int hi = a.is_zero() ? b.hi() : (b.is_zero() ? a.hi() : std::max(a.hi(), b.hi()));
  std::vector<std::size_t> dims;
  std::vector<MatFp> diffs;
  for (int i = lo; i <= hi; ++i) dims.push_back(a.dim(i) + b.dim(i));
  for (int i = lo; i < hi; ++i) diffs.push_back(MatFp::direct_sum(a.diff(i), b.diff(i)));
  Complex s(p, lo, dims, diffs);
  std::map<int, MatFp> incl, proj;
  for (int i = lo; i <= hi; ++i) {
    incl.emplace(i, MatFp::vstack(MatFp::identity(p, a.dim(i)), zeros(p, b.dim(i), a.dim(i))));
    proj.emplace(i, MatFp::hstack(zeros(p, b.dim(i), a.dim(i)), MatFp::identity(p, b.dim(i))));
  }
  return {ChainMap(a, s, incl), ChainMap(s, b, proj), ChainMap::zero(b, shift(a)), Provenance::sum};
}

Triangle sum_triangle_swapped(const Complex& a, const Complex& b) {
  const auto p = a.prime();
  Triangle s = sum_triangle(a, b);
  std::map<int, MatFp> incl, proj;
  for (int i = s.B().lo(); i <= s.B().hi(); ++i) {
    incl.emplace(i, MatFp::vstack(zeros(p, a.dim(i), b.dim(i)), MatFp::identity(p, b.dim(i))));
    proj.emplace(i, MatFp::hstack(MatFp::identity(p, a.dim(i)), zeros(p, a.dim(i), b.dim(i))));
  }
  return {ChainMap(b, s.B(), incl), ChainMap(s.B(), a, proj), ChainMap::zero(a, shift(b)), Provenance::transported};
}

Triangle shift_triangle(const Triangle& t) {
  return {shift(t.a), shift(t.b), negate(shift(t.c)), Provenance::transported};
}

Triangle rotate(const Triangle& t) { return {t.b, t.c, negate(shift(t.a)), Provenance::transported}; }

bool is_triangle_iso(const TriangleIso& t) {
  const Triangle& x = t.from;
  const Triangle& y = t.to;
  if (!(t.alpha.src() == x.A()) || !(t.alpha.tgt() == y.A()) || !(t.beta.src() == x.B()) || !(t.beta.tgt() == y.B()) ||
      !(t.gamma.src() == x.C()) || !(t.gamma.tgt() == y.C()))
    return false;
  return is_homotopic(compose(t.beta, x.a), compose(y.a, t.alpha)) &&
         is_homotopic(compose(t.gamma, x.b), compose(y.b, t.beta)) &&
         is_homotopic(compose(shift(t.alpha), x.c), compose(y.c, t.gamma)) && is_quasi_iso(t.alpha) &&
         is_quasi_iso(t.beta) && is_quasi_iso(t.gamma);
}

// ---------------------------------------------------------------- cohomology

Cohomology::Cohomology(const Complex& a) : a_(a) {
  const auto p = a.prime();
  for (int i = a.lo(); i <= a.hi(); ++i) {
    MatFp im = column_space_basis(a.diff(i - 1));
    MatFp span = im;
    std::size_t r = rank(span);
    std::vector<VecFp> chosen;
    for (const auto& z : kernel_basis(a.diff(i))) {
      MatFp trial = MatFp::hstack(span, MatFp::from_columns(p, a.dim(i), {z}));
      std::size_t rt = rank(trial);
      if (rt > r) {
        chosen.push_back(z);
        span = trial;
        r = rt;
      }
    }
    if (chosen.empty()) continue;
    MatFp reps = MatFp::from_columns(p, a.dim(i), chosen);
    reps_.emplace(i, reps);
    solver_.emplace(i, MatFp::hstack(reps, im));
  }
}

GradedObject Cohomology::graded() const {
  if (reps_.empty()) return GradedObject::zero(a_.prime());
  int lo = reps_.begin()->first, hi = reps_.rbegin()->first;
  std::vector<std::size_t> dims;
  for (int i = lo; i <= hi; ++i) dims.push_back(dim(i));
  return {a_.prime(), lo, dims};
}

std::size_t Cohomology::dim(int i) const {
  auto it = reps_.find(i);
  return it == reps_.end() ? 0 : it->second.cols();
}

MatFp Cohomology::reps(int i) const {
  auto it = reps_.find(i);
  if (it != reps_.end()) return it->second;
  return zeros(a_.prime(), a_.dim(i), 0);
}

MatFp Cohomology::classes(int i, const MatFp& cycles) const {
  const std::size_t h = dim(i);
  if (h == 0) return zeros(a_.prime(), 0, cycles.cols());
  MatFp full = coords_in(solver_.at(i), cycles);
  return full.block(0, 0, h, cycles.cols());
}

GradedObject cohomology(const Complex& a) { return Cohomology(a).graded(); }

GradedMap h_map(const ChainMap& f, const Cohomology& hs, const Cohomology& ht) {
  std::map<int, MatFp> c;
  GradedObject src = hs.graded(), tgt = ht.graded();
  for (int i = src.lo(); i <= src.hi(); ++i) {
    if (src.dim(i) == 0 || tgt.dim(i) == 0) continue;
    c.emplace(i, ht.classes(i, f.comp(i) * hs.reps(i)));
  }
  return {src, tgt, c};
}

GradedMap h_map(const ChainMap& f) { return h_map(f, Cohomology(f.src()), Cohomology(f.tgt())); }

bool is_quasi_iso(const ChainMap& f) { return h_map(f).is_iso(); }

// ---------------------------------------------------------------- truncations

Truncation truncate_le(const Complex& a, int i) {
  const auto p = a.prime();
  if (a.is_zero() || i < a.lo()) {
    Complex z = Complex::zero(p);
    return {z, ChainMap::zero(z, a)};
  }
  if (i >= a.hi()) return {a, ChainMap::identity(a)};
  MatFp k = kernel_matrix(a.diff(i));
  std::vector<std::size_t> dims;
  std::vector<MatFp> diffs;
  for (int j = a.lo(); j < i; ++j) dims.push_back(a.dim(j));
  dims.push_back(k.cols());
  for (int j = a.lo(); j + 1 < i; ++j) diffs.push_back(a.diff(j));
  if (i > a.lo()) diffs.push_back(coords_in(k, a.diff(i - 1)));
  Complex t(p, a.lo(), dims, diffs);
  std::map<int, MatFp> incl;
  for (int j = a.lo(); j < i; ++j) incl.emplace(j, MatFp::identity(p, a.dim(j)));
  incl.emplace(i, k);
  return {t, ChainMap(t, a, incl)};
}

Truncation truncate_gt(const Complex& a, int i) {
  const auto p = a.prime();
  if (a.is_zero() || i >= a.hi()) {
    Complex z = Complex::zero(p);
    return {z, ChainMap::zero(a, z)};
  }
  if (i < a.lo()) return {a, ChainMap::identity(a)};
  // Rows of q span the functionals vanishing on im d^i.
  std::vector<VecFp> rows = kernel_basis(a.diff(i).transpose());
  MatFp q = MatFp::from_columns(p, a.dim(i + 1), rows).transpose();
  std::vector<std::size_t> dims{q.rows()};
  std::vector<MatFp> diffs;
  for (int j = i + 2; j <= a.hi(); ++j) dims.push_back(a.dim(j));
  if (i + 1 < a.hi()) diffs.push_back(a.diff(i + 1) * section(q));
  for (int j = i + 2; j < a.hi(); ++j) diffs.push_back(a.diff(j));
  Complex t(p, i + 1, dims, diffs);
  std::map<int, MatFp> proj;
  proj.emplace(i + 1, q);
  for (int j = i + 2; j <= a.hi(); ++j) proj.emplace(j, MatFp::identity(p, a.dim(j)));
  return {t, ChainMap(a, t, proj)};
}

Triangle truncation_triangle(const Complex& a, int i) {
  Truncation le = truncate_le(a, i);
  Truncation gt = truncate_gt(a, i);
  return {le.map, gt.map, ChainMap::zero(gt.complex, shift(le.complex)), Provenance::transported};
}

// ---------------------------------------------------------------- octahedra

Octahedron octahedron_of(const ChainMap& u, const ChainMap& v) {
  if (!(u.tgt() == v.src())) throw InputError("octahedron: maps are not composable");
  const Complex& a = u.src();
  const Complex& b = u.tgt();
  const Complex& c = v.tgt();
  const auto p = a.prime();
  Triangle h1 = cone(u);
  Triangle h2 = cone(compose(v, u));
  Triangle v1 = cone(v);
  const Complex& cp = h1.C();  // A[1] + B
  const Complex& bp = h2.C();  // A[1] + C
  const Complex& ap = v1.C();  // B[1] + C
  std::map<int, MatFp> f, g, h;
  for (int i = std::min({a.lo(), b.lo(), c.lo()}) - 2; i <= std::max({a.hi(), b.hi(), c.hi()}) + 1; ++i) {
    std::size_t a1 = a.dim(i + 1), a2 = a.dim(i + 2), b0 = b.dim(i), b1 = b.dim(i + 1), c0 = c.dim(i);
    if (cp.dim(i) > 0 && bp.dim(i) > 0)
      f.emplace(i, blocks({{MatFp::identity(p, a1), zeros(p, a1, b0)}, {zeros(p, c0, a1), v.comp(i)}}));
    if (bp.dim(i) > 0 && ap.dim(i) > 0)
      g.emplace(i, blocks({{u.comp(i + 1), zeros(p, b1, c0)}, {zeros(p, c0, a1), MatFp::identity(p, c0)}}));
    if (ap.dim(i) > 0 && cp.dim(i + 1) > 0)
      h.emplace(i, blocks({{zeros(p, a2, b1), zeros(p, a2, c0)}, {MatFp::identity(p, b1), zeros(p, b1, c0)}}));
  }
  Triangle v2{ChainMap(cp, bp, f), ChainMap(bp, ap, g), ChainMap(ap, shift(cp), h), Provenance::transported};
  return {h1, h2, v1, v2};
}

std::vector<std::string> octahedron_defects(const Octahedron& o) {
  std::vector<std::string> out;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) out.emplace_back(what);
  };
  try {
    expect(compose(o.v1.a, o.h1.a) == o.h2.a, "A->B->C differs from A->C");
    expect(compose(o.v2.a, o.h1.b) == compose(o.h2.b, o.v1.a), "B->C'->B' differs from B->C->B'");
    expect(compose(o.h2.c, o.v2.a) == o.h1.c, "C'->B'->TA differs from C'->TA");
    expect(compose(o.v2.b, o.h2.b) == o.v1.b, "C->B'->A' differs from C->A'");
    expect(o.v2.c == compose(shift(o.h1.b), o.v1.c), "A'->TC' differs from A'->TB->TC'");
    expect(compose(shift(o.h1.a), o.h2.c) == compose(o.v1.c, o.v2.b), "Ta.c differs from e.d");
  } catch (const InputError& e) {
    out.emplace_back(std::string("shape mismatch: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------- 9-term diagrams

NineTerm nine_term_of(const ChainMap& u_top, const ChainMap& u, const ChainMap& alpha, const ChainMap& beta) {
  if (!(compose(beta, u_top) == compose(u, alpha))) throw InputError("nine-term: the square does not commute");
  const Complex& a1 = u_top.src();
  const Complex& b1 = u_top.tgt();
  const Complex& a = u.src();
  const Complex& b = u.tgt();
  const auto p = a.prime();
  NineTerm n;
  n.row[0] = cone(u_top);
  n.row[1] = cone(u);
  n.col[0] = cone(alpha);
  n.col[1] = cone(beta);
  int lo = std::min({a1.lo(), b1.lo(), a.lo(), b.lo()}) - 3;
  int hi = std::max({a1.hi(), b1.hi(), a.hi(), b.hi()}) + 1;
  std::map<int, MatFp> gamma;
  for (int i = lo; i <= hi; ++i)
    gamma.emplace(i, MatFp::direct_sum(alpha.comp(i + 1), beta.comp(i)));
  const Complex& c1 = n.row[0].C();
  const Complex& c = n.row[1].C();
  n.col[2] = cone(ChainMap(c1, c, gamma));
  const Complex& a2 = n.col[0].C();
  const Complex& b2 = n.col[1].C();
  const Complex& c2 = n.col[2].C();
  // C''^i = A'^{i+2} + B'^{i+1} + A^{i+1} + B^i; B''^i = B'^{i+1} + B^i; A''^i = A'^{i+1} + A^i.
  std::map<int, MatFp> u2, b2c2, c2ta2;
  for (int i = lo; i <= hi; ++i) {
    std::size_t x2 = a1.dim(i + 2), y1 = b1.dim(i + 1), x1 = a.dim(i + 1), y0 = b.dim(i);
    u2.emplace(i, MatFp::direct_sum(u_top.comp(i + 1), u.comp(i)));
    b2c2.emplace(i, blocks({{zeros(p, x2, y1), zeros(p, x2, y0)},
                            {MatFp::identity(p, y1), zeros(p, y1, y0)},
                            {zeros(p, x1, y1), zeros(p, x1, y0)},
                            {zeros(p, y0, y1), MatFp::identity(p, y0)}}));
    c2ta2.emplace(i, blocks({{-MatFp::identity(p, x2), zeros(p, x2, y1), zeros(p, x2, x1), zeros(p, x2, y0)},
                             {zeros(p, x1, x2), zeros(p, x1, y1), MatFp::identity(p, x1), zeros(p, x1, y0)}}));
  }
  auto restrict = [](const std::map<int, MatFp>& m, const Complex& s, const Complex& t) {
    std::map<int, MatFp> out;
    for (auto& [i, x] : m)
      if (x.rows() == t.dim(i) && x.cols() == s.dim(i) && x.rows() > 0 && x.cols() > 0) out.emplace(i, x);
    return out;
  };
  n.row[2] = {ChainMap(a2, b2, restrict(u2, a2, b2)), ChainMap(b2, c2, restrict(b2c2, b2, c2)),
              ChainMap(c2, shift(a2), restrict(c2ta2, c2, shift(a2))), Provenance::transported};
  return n;
}

std::vector<std::string> nine_term_defects(const NineTerm& n) {
  std::vector<std::string> out;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) out.emplace_back(what);
  };
  const Triangle(&r)[3] = n.row;
  const Triangle(&c)[3] = n.col;
  try {
    expect(compose(c[1].a, r[0].a) == compose(r[1].a, c[0].a), "square A'B'AB");
    expect(compose(c[2].a, r[0].b) == compose(r[1].b, c[1].a), "square B'C'BC");
    expect(compose(shift(c[0].a), r[0].c) == compose(r[1].c, c[2].a), "square C'TA'CTA");
    expect(compose(c[1].b, r[1].a) == compose(r[2].a, c[0].b), "square ABA''B''");
    expect(compose(c[2].b, r[1].b) == compose(r[2].b, c[1].b), "square BCB''C''");
    expect(compose(shift(c[0].b), r[1].c) == compose(r[2].c, c[2].b), "square CTAC''TA''");
    expect(compose(c[1].c, r[2].a) == compose(shift(r[0].a), c[0].c), "square A''B''TA'TB'");
    expect(compose(c[2].c, r[2].b) == compose(shift(r[0].b), c[1].c), "square B''C''TB'TC'");
    expect(compose(shift(c[0].c), r[2].c) == negate(compose(shift(r[0].c), c[2].c)), "corner square anticommutes");
  } catch (const InputError& e) {
    out.emplace_back(std::string("shape mismatch: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------- graded-line determinant

namespace {

// Per-degree short exact sequences in_i : A_i -> B_i, out_i : B_i -> C_i.
using LevelSes = std::map<int, std::pair<MatFp, MatFp>>;

bool odd(long long n) { return n % 2 != 0; }

// Value in F_p^* of the even/odd determinant of a graded short exact sequence.
Fp graded_ses_value(const LevelSes& ses, std::uint32_t p) {
  Fp val = 1;
  long long sign = 0;
  std::map<int, std::size_t> adim, cdim;
  for (auto& [i, io] : ses) {
    const auto& [in, out] = io;
    adim[i] = in.cols();
    cdim[i] = out.rows();
    MatFp m = MatFp::hstack(in, section(out));
    Fp d = m.rows() == 0 ? 1 : det(m);
    val = fp_mul(val, parity(i) == 0 ? fp_inv(d, p) : d, p);
  }
  long long a_od = 0, c_od = 0, c_ev = 0;
  for (auto& [j, cj] : cdim) {
    (parity(j) == 0 ? c_ev : c_od) += static_cast<long long>(cj);
    for (auto& [k, ak] : adim)
      if (j < k && parity(j) == parity(k)) sign += static_cast<long long>(cj * ak);
  }
  for (auto& [k, ak] : adim)
    if (parity(k) == 1) a_od += static_cast<long long>(ak);
  sign += a_od * c_od + c_ev * a_od;
  return odd(sign) ? fp_neg(val, p) : val;
}

}  // namespace

Obj det_graded(const Complex& a) {
  long long chi = 0;
  for (int i = a.lo(); i <= a.hi(); ++i) chi += (parity(i) == 0 ? 1 : -1) * static_cast<long long>(a.dim(i));
  return {chi};
}

Elt det_graded_iso(const ChainMap& f) {
  const auto p = f.src().prime();
  GradedMap h = h_map(f);
  if (!h.is_iso()) throw InputError("det_graded_iso: not a quasi-isomorphism");
  Fp v = 1;
  for (int i = h.src().lo(); i <= h.src().hi(); ++i) {
    if (h.src().dim(i) == 0) continue;
    Fp d = det(h.comp(i));
    v = fp_mul(v, parity(i) == 0 ? d : fp_inv(d, p), p);
  }
  return {static_cast<long long>(v)};
}

Elt det_graded_triangle(const Triangle& t) {
  const auto p = t.A().prime();
  Cohomology ha(t.A()), hb(t.B()), hc(t.C()), hta(shift(t.A()));
  GradedMap ma = h_map(t.a, ha, hb), mb = h_map(t.b, hb, hc), mc = h_map(t.c, hc, hta);
  GradedObject ga = ha.graded(), gb = hb.graded(), gc = hc.graded();
  int lo = std::min({ga.is_zero() ? 0 : ga.lo(), gb.is_zero() ? 0 : gb.lo(), gc.is_zero() ? 0 : gc.lo()}) - 1;
  int hi = std::max({ga.hi(), gb.hi(), gc.hi()}) + 1;
  std::map<int, MatFp> ka, kb, kc;
  for (int i = lo; i <= hi + 1; ++i) {
    ka.emplace(i, kernel_matrix(ma.comp(i)));
    kb.emplace(i, kernel_matrix(mb.comp(i)));
    kc.emplace(i, kernel_matrix(mc.comp(i)));
  }
  LevelSes d1, d2, d3;
  long long k_tot = 0, kb_tot = 0, kc_tot = 0;
  for (int i = lo; i <= hi; ++i) {
    d1.emplace(i, std::pair{kb.at(i), coords_in(kc.at(i), mb.comp(i))});
    d2.emplace(i, std::pair{ka.at(i), coords_in(kb.at(i), ma.comp(i))});
    d3.emplace(i, std::pair{kc.at(i), coords_in(ka.at(i + 1), mc.comp(i))});
    long long k = static_cast<long long>(ka.at(i).cols());
    k_tot += k;
    kb_tot += static_cast<long long>(kb.at(i).cols());
    kc_tot += static_cast<long long>(kc.at(i).cols());
  }
  Fp v = graded_ses_value(d1, p);
  v = fp_mul(v, fp_inv(graded_ses_value(d2, p), p), p);
  v = fp_mul(v, fp_inv(graded_ses_value(d3, p), p), p);
  if (odd(k_tot * (kb_tot + kc_tot))) v = fp_neg(v, p);
  return {static_cast<long long>(v)};
}

TriangleDet det_graded_functor(std::uint32_t p) {
  return {std::make_shared<GradedLine>(p), det_graded, det_graded_iso, det_graded_triangle};
}

// ---------------------------------------------------------------- random instances

MatFp random_matrix(Rng& rng, std::uint32_t p, std::size_t rows, std::size_t cols) {
  std::uniform_int_distribution<std::uint32_t> u(0, p - 1);
  MatFp m(p, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, u(rng));
  return m;
}

MatFp random_invertible(Rng& rng, std::uint32_t p, std::size_t n) {
  for (;;) {
    MatFp m = random_matrix(rng, p, n, n);
    if (n == 0 || det(m) != 0) return m;
  }
}

Complex random_complex(Rng& rng, std::uint32_t p, int max_window, std::size_t max_dim, int lo_min, int spread) {
  int lo = lo_min + std::uniform_int_distribution<int>(0, spread)(rng);
  int len = std::uniform_int_distribution<int>(1, max_window)(rng);
  std::uniform_int_distribution<std::size_t> ud(0, max_dim);
  std::vector<std::size_t> dims(len);
  for (auto& d : dims) d = ud(rng);
  std::vector<MatFp> diffs;
  for (int k = 0; k + 1 < len; ++k) {
    if (k == 0) {
      diffs.push_back(random_matrix(rng, p, dims[1], dims[0]));
      continue;
    }
    std::vector<VecFp> rows = kernel_basis(diffs.back().transpose());
    MatFp q = MatFp::from_columns(p, dims[k], rows).transpose();
    diffs.push_back(random_matrix(rng, p, dims[k + 1], q.rows()) * q);
  }
  return {p, lo, dims, diffs};
}

ChainMap random_chain_map(Rng& rng, const Complex& a, const Complex& b) {
  const auto p = a.prime();
  if (a.is_zero() || b.is_zero()) return ChainMap::zero(a, b);
  int lo = std::max(a.lo(), b.lo()), hi = std::min(a.hi(), b.hi());
  std::map<int, std::size_t> offset;
  std::size_t n = 0;
  for (int i = lo; i <= hi; ++i) {
    offset[i] = n;
    n += b.dim(i) * a.dim(i);
  }
  if (n == 0) return ChainMap::zero(a, b);
  // d_B f^i - f^{i+1} d_A = 0 for each i.
  std::size_t m = 0;
  for (int i = lo - 1; i <= hi; ++i) m += b.dim(i + 1) * a.dim(i);
  MatFp sys(p, m, n);
  std::size_t row = 0;
  auto var = [&](int i, std::size_t r, std::size_t c) { return offset.at(i) + r * a.dim(i) + c; };
  for (int i = lo - 1; i <= hi; ++i) {
    MatFp db = b.diff(i), da = a.diff(i);
    for (std::size_t r = 0; r < b.dim(i + 1); ++r)
      for (std::size_t c = 0; c < a.dim(i); ++c, ++row) {
        if (offset.count(i))
          for (std::size_t k = 0; k < b.dim(i); ++k)
            if (db(r, k) != 0) sys.set(row, var(i, k, c), sys(row, var(i, k, c)) + db(r, k));
        if (offset.count(i + 1))
          for (std::size_t k = 0; k < a.dim(i + 1); ++k)
            if (da(k, c) != 0) sys.set(row, var(i + 1, r, k), sys(row, var(i + 1, r, k)) + p - da(k, c));
      }
  }
  std::vector<VecFp> ker = kernel_basis(sys);
  std::uniform_int_distribution<std::uint32_t> u(0, p - 1);
  VecFp x(n, 0);
  for (const auto& v : ker) {
    Fp s = u(rng);
    for (std::size_t j = 0; j < n; ++j) x[j] = fp_add(x[j], fp_mul(s, v[j], p), p);
  }
  std::map<int, MatFp> comps;
  for (int i = lo; i <= hi; ++i) {
    MatFp f(p, b.dim(i), a.dim(i));
    for (std::size_t r = 0; r < f.rows(); ++r)
      for (std::size_t c = 0; c < f.cols(); ++c) f.set(r, c, x[var(i, r, c)]);
    comps.emplace(i, f);
  }
  return {a, b, comps};
}

ChainMap random_rebase(Rng& rng, const Complex& a) {
  const auto p = a.prime();
  if (a.is_zero()) return ChainMap::identity(a);
  std::map<int, MatFp> basis, inv;
  for (int i = a.lo(); i <= a.hi(); ++i) {
    basis.emplace(i, random_invertible(rng, p, a.dim(i)));
    inv.emplace(i, *inverse(basis.at(i)));
  }
  std::vector<MatFp> diffs;
  for (int i = a.lo(); i < a.hi(); ++i) diffs.push_back(basis.at(i + 1) * a.diff(i) * inv.at(i));
  Complex b(p, a.lo(), a.terms().dims(), diffs);
  return {a, b, basis};
}

}  // namespace detfun
