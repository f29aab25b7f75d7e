#include "detfun/linalg.hpp"

#include "detfun/errors.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace detfun {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Fp fp_reduce(long long v, std::uint32_t p) {
  long long r = v % static_cast<long long>(p);
  if (r < 0) r += p;
  return static_cast<Fp>(r);
}

Fp fp_add(Fp a, Fp b, std::uint32_t p) { return static_cast<Fp>((std::uint64_t{a} + b) % p); }
Fp fp_sub(Fp a, Fp b, std::uint32_t p) { return static_cast<Fp>((std::uint64_t{a} + p - b) % p); }
Fp fp_mul(Fp a, Fp b, std::uint32_t p) { return static_cast<Fp>((std::uint64_t{a} * b) % p); }
Fp fp_neg(Fp a, std::uint32_t p) { return a == 0 ? 0 : p - a; }

Fp fp_pow(Fp a, long long e, std::uint32_t p) {
  if (e < 0) return fp_pow(fp_inv(a, p), -e, p);
  Fp r = 1 % p;
  while (e > 0) {
    if (e & 1) r = fp_mul(r, a, p);
    a = fp_mul(a, a, p);
    e >>= 1;
  }
  return r;
}

Fp fp_inv(Fp a, std::uint32_t p) {
  if (a % p == 0) throw InputError("fp_inv: zero has no inverse");
  long long t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    long long q = r / nr;
    std::tie(t, nt) = std::pair{nt, t - q * nt};
    std::tie(r, nr) = std::pair{nr, r - q * nr};
  }
  return fp_reduce(t, p);
}

MatFp::MatFp(std::uint32_t p, std::size_t rows, std::size_t cols) : p_(p), r_(rows), c_(cols), a_(rows * cols, 0) {
  if (!is_prime(p)) throw InputError("MatFp: modulus " + std::to_string(p) + " is not prime");
}

MatFp MatFp::identity(std::uint32_t p, std::size_t n) { return scalar(p, n, 1); }

MatFp MatFp::scalar(std::uint32_t p, std::size_t n, Fp s) {
  MatFp m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = s % p;
  return m;
}

MatFp MatFp::from_rows(std::uint32_t p, const std::vector<std::vector<long long>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows.front().size();
  MatFp m(p, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw InputError("MatFp::from_rows: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
  }
  return m;
}

MatFp MatFp::from_columns(std::uint32_t p, std::size_t rows, const std::vector<VecFp>& cols) {
  MatFp m(p, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw InputError("MatFp::from_columns: column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m.a_[i * m.c_ + j] = cols[j][i] % p;
  }
  return m;
}

static void require_same_prime(const MatFp& a, const MatFp& b, const char* what) {
  if (a.prime() != b.prime()) throw InputError(std::string(what) + ": prime mismatch");
}

MatFp MatFp::operator*(const MatFp& o) const {
  require_same_prime(*this, o, "MatFp::operator*");
  if (c_ != o.r_) throw InputError("MatFp::operator*: shape mismatch");
  MatFp m(p_, r_, o.c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < c_; ++k) {
      Fp x = a_[i * c_ + k];
      if (x == 0) continue;
      for (std::size_t j = 0; j < o.c_; ++j)
        m.a_[i * o.c_ + j] = fp_add(m.a_[i * o.c_ + j], fp_mul(x, o.a_[k * o.c_ + j], p_), p_);
    }
  return m;
}

MatFp MatFp::operator+(const MatFp& o) const {
  require_same_prime(*this, o, "MatFp::operator+");
  if (r_ != o.r_ || c_ != o.c_) throw InputError("MatFp::operator+: shape mismatch");
  MatFp m = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = fp_add(a_[i], o.a_[i], p_);
  return m;
}

MatFp MatFp::operator-(const MatFp& o) const { return *this + (-o); }

MatFp MatFp::operator-() const {
  MatFp m = *this;
  for (auto& x : m.a_) x = fp_neg(x, p_);
  return m;
}

MatFp MatFp::scaled(Fp s) const {
  MatFp m = *this;
  for (auto& x : m.a_) x = fp_mul(x, s % p_, p_);
  return m;
}

VecFp MatFp::apply(std::span<const Fp> v) const {
  if (v.size() != c_) throw InputError("MatFp::apply: length mismatch");
  VecFp out(r_, 0);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) out[i] = fp_add(out[i], fp_mul(a_[i * c_ + j], v[j] % p_, p_), p_);
  return out;
}

MatFp MatFp::transpose() const {
  MatFp m(p_, c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) m.a_[j * r_ + i] = a_[i * c_ + j];
  return m;
}

MatFp MatFp::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > r_ || c0 + nc > c_) throw InputError("MatFp::block: out of range");
  MatFp m(p_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) m.a_[i * nc + j] = a_[(r0 + i) * c_ + c0 + j];
  return m;
}

VecFp MatFp::column(std::size_t j) const {
  VecFp v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = a_[i * c_ + j];
  return v;
}

VecFp MatFp::row(std::size_t i) const { return VecFp(a_.begin() + i * c_, a_.begin() + (i + 1) * c_); }

bool MatFp::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](Fp x) { return x == 0; });
}

MatFp MatFp::hstack(const MatFp& a, const MatFp& b) {
  require_same_prime(a, b, "MatFp::hstack");
  if (a.r_ != b.r_) throw InputError("MatFp::hstack: row mismatch");
  MatFp m(a.p_, a.r_, a.c_ + b.c_);
  for (std::size_t i = 0; i < a.r_; ++i) {
    for (std::size_t j = 0; j < a.c_; ++j) m.a_[i * m.c_ + j] = a(i, j);
    for (std::size_t j = 0; j < b.c_; ++j) m.a_[i * m.c_ + a.c_ + j] = b(i, j);
  }
  return m;
}

MatFp MatFp::vstack(const MatFp& a, const MatFp& b) {
  require_same_prime(a, b, "MatFp::vstack");
  if (a.c_ != b.c_) throw InputError("MatFp::vstack: column mismatch");
  MatFp m(a.p_, a.r_ + b.r_, a.c_);
  std::copy(a.a_.begin(), a.a_.end(), m.a_.begin());
  std::copy(b.a_.begin(), b.a_.end(), m.a_.begin() + static_cast<std::ptrdiff_t>(a.a_.size()));
  return m;
}

MatFp MatFp::direct_sum(const MatFp& a, const MatFp& b) {
  require_same_prime(a, b, "MatFp::direct_sum");
  MatFp m(a.p_, a.r_ + b.r_, a.c_ + b.c_);
  for (std::size_t i = 0; i < a.r_; ++i)
    for (std::size_t j = 0; j < a.c_; ++j) m.a_[i * m.c_ + j] = a(i, j);
  for (std::size_t i = 0; i < b.r_; ++i)
    for (std::size_t j = 0; j < b.c_; ++j) m.a_[(a.r_ + i) * m.c_ + a.c_ + j] = b(i, j);
  return m;
}

std::string MatFp::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < r_; ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < c_; ++j) os << (j ? "," : "") << a_[i * c_ + j];
    os << ']';
  }
  os << ']';
  return os.str();
}

Rref rref(const MatFp& a) {
  const auto p = a.prime();
  MatFp r = a;
  MatFp t = MatFp::identity(p, a.rows());
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  auto swap_rows = [](MatFp& m, std::size_t i, std::size_t k) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Fp x = m(i, j);
      m.set(i, j, m(k, j));
      m.set(k, j, x);
    }
  };
  auto scale_row = [p](MatFp& m, std::size_t i, Fp s) {
    for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, fp_mul(m(i, j), s, p));
  };
  auto axpy_row = [p](MatFp& m, std::size_t dst, std::size_t src, Fp s) {
    for (std::size_t j = 0; j < m.cols(); ++j) m.set(dst, j, fp_sub(m(dst, j), fp_mul(s, m(src, j), p), p));
  };
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t k = row;
    while (k < a.rows() && r(k, col) == 0) ++k;
    if (k == a.rows()) continue;
    if (k != row) {
      swap_rows(r, k, row);
      swap_rows(t, k, row);
    }
    Fp s = fp_inv(r(row, col), p);
    scale_row(r, row, s);
    scale_row(t, row, s);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || r(i, col) == 0) continue;
      Fp f = r(i, col);
      axpy_row(r, i, row, f);
      axpy_row(t, i, row, f);
    }
    piv.push_back(col);
    ++row;
  }
  return {std::move(r), std::move(t), std::move(piv)};
}

std::optional<VecFp> solve(const MatFp& a, std::span<const Fp> b) {
  if (b.size() != a.rows()) throw InputError("solve: right-hand side length mismatch");
  auto [r, t, piv] = rref(a);
  VecFp tb = t.apply(b);
  for (std::size_t i = piv.size(); i < a.rows(); ++i)
    if (tb[i] != 0) return std::nullopt;
  VecFp x(a.cols(), 0);
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = tb[i];
  return x;
}

std::vector<VecFp> kernel_basis(const MatFp& a) {
  const auto p = a.prime();
  auto [r, t, piv] = rref(a);
  std::vector<bool> is_piv(a.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<VecFp> out;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_piv[f]) continue;
    VecFp v(a.cols(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = fp_neg(r(i, f), p);
    out.push_back(std::move(v));
  }
  return out;
}

std::size_t rank(const MatFp& a) { return rref(a).pivots.size(); }

Fp det(const MatFp& a) {
  if (!a.square()) throw InputError("det: matrix is not square");
  const auto p = a.prime();
  MatFp m = a;
  Fp d = 1 % p;
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t k = col;
    while (k < n && m(k, col) == 0) ++k;
    if (k == n) return 0;
    if (k != col) {
      for (std::size_t j = 0; j < n; ++j) {
        Fp x = m(k, j);
        m.set(k, j, m(col, j));
        m.set(col, j, x);
      }
      d = fp_neg(d, p);
    }
    Fp pv = m(col, col);
    d = fp_mul(d, pv, p);
    Fp inv = fp_inv(pv, p);
    for (std::size_t i = col + 1; i < n; ++i) {
      Fp f = fp_mul(m(i, col), inv, p);
      if (f == 0) continue;
      for (std::size_t j = col; j < n; ++j) m.set(i, j, fp_sub(m(i, j), fp_mul(f, m(col, j), p), p));
    }
  }
  return d;
}

std::optional<MatFp> inverse(const MatFp& a) {
  if (!a.square()) throw InputError("inverse: matrix is not square");
  auto [r, t, piv] = rref(a);
  if (piv.size() != a.rows()) return std::nullopt;
  return t;
}

MatFp column_space_basis(const MatFp& a) {
  auto [r, t, piv] = rref(a.transpose());
  return r.block(0, 0, piv.size(), a.rows()).transpose();
}

// ---------------------------------------------------------------- integers

MatZ MatZ::identity(std::size_t n) {
  MatZ m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

MatZ MatZ::from_rows(const std::vector<std::vector<long long>>& rows, std::size_t cols) {
  MatZ m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InputError("MatZ::from_rows: row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

MatZ MatZ::operator*(const MatZ& o) const {
  if (c_ != o.r_) throw InputError("MatZ::operator*: shape mismatch");
  MatZ m(r_, o.c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < c_; ++k) {
      const BigInt& x = (*this)(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < o.c_; ++j) m(i, j) += x * o(k, j);
    }
  return m;
}

bool MatZ::is_diagonal() const {
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

void MatZ::append_row(const std::vector<BigInt>& row) {
  if (row.size() != c_) throw InputError("MatZ::append_row: length mismatch");
  a_.insert(a_.end(), row.begin(), row.end());
  ++r_;
}

BigInt det(const MatZ& a) {
  if (a.rows() != a.cols()) throw InputError("det: matrix is not square");
  // Bareiss fraction-free elimination.
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  MatZ m = a;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t s = k + 1;
      while (s < n && m(s, k) == 0) ++s;
      if (s == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(s, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

MatZ inverse_unimodular(const MatZ& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw InputError("inverse_unimodular: matrix is not square");
  BigInt d = det(a);
  if (abs(d) != 1) throw InputError("inverse_unimodular: determinant is not a unit");
  MatZ inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      MatZ minor(n - 1, n - 1);
      for (std::size_t r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = a(r, c);
        }
        ++rr;
      }
      BigInt cof = det(minor);
      if ((i + j) % 2) cof = -cof;
      inv(j, i) = cof * d;
    }
  return inv;
}

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct SnfWork {
  MatZ a, u, v;

  void swap_rows(std::size_t i, std::size_t k) {
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(i, j), a(k, j));
    for (std::size_t j = 0; j < u.cols(); ++j) std::swap(u(i, j), u(k, j));
  }
  void swap_cols(std::size_t i, std::size_t k) {
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, k));
    for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v(r, i), v(r, k));
  }
  // row dst -= q * row src
  void sub_row(std::size_t dst, std::size_t src, const BigInt& q) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(dst, j) -= q * a(src, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u(dst, j) -= q * u(src, j);
  }
  void sub_col(std::size_t dst, std::size_t src, const BigInt& q) {
    for (std::size_t r = 0; r < a.rows(); ++r) a(r, dst) -= q * a(r, src);
    for (std::size_t r = 0; r < v.rows(); ++r) v(r, dst) -= q * v(r, src);
  }
  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = -a(i, j);
    for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) = -u(i, j);
  }
};

}  // namespace

SmithForm smith_normal_form(const MatZ& input) {
  const std::size_t m = input.rows(), n = input.cols();
  SnfWork w{input, MatZ::identity(m), MatZ::identity(n)};
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    for (;;) {
      // Pivot: smallest nonzero magnitude in the trailing block, first in row-major order.
      std::size_t pi = m, pj = n;
      BigInt best = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          const BigInt& x = w.a(i, j);
          if (x == 0) continue;
          BigInt ax = abs(x);
          if (pi == m || ax < best) {
            best = ax;
            pi = i;
            pj = j;
          }
        }
      if (pi == m) break;
      if (pi != t) w.swap_rows(pi, t);
      if (pj != t) w.swap_cols(pj, t);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (w.a(i, t) == 0) continue;
        w.sub_row(i, t, floor_div(w.a(i, t), w.a(t, t)));
        if (w.a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (w.a(t, j) == 0) continue;
        w.sub_col(j, t, floor_div(w.a(t, j), w.a(t, t)));
        if (w.a(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold any offending row into the pivot row and retry.
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (w.a(i, j) % w.a(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == m) break;
      w.sub_row(t, bad, BigInt(-1));
    }
    if (w.a(t, t) < 0) w.negate_row(t);
  }
  return {std::move(w.a), std::move(w.u), std::move(w.v)};
}

std::vector<BigInt> GroupForm::normalize(std::span<const BigInt> x) const {
  if (x.size() != generators) throw InputError("GroupForm::normalize: length mismatch");
  std::vector<BigInt> y(moduli.size(), 0);
  for (std::size_t k = 0; k < moduli.size(); ++k) {
    for (std::size_t i = 0; i < generators; ++i) y[k] += x[i] * coords(i, k);
    if (moduli[k] != 0) {
      y[k] %= moduli[k];
      if (y[k] < 0) y[k] += moduli[k];
    }
  }
  return y;
}

std::vector<BigInt> GroupForm::class_of(std::size_t generator) const {
  std::vector<BigInt> x(generators, 0);
  x.at(generator) = 1;
  return normalize(x);
}

std::string GroupForm::describe() const {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " + ";
    first = false;
  };
  if (free_rank > 0) {
    sep();
    os << 'Z';
    if (free_rank > 1) os << '^' << free_rank;
  }
  for (const auto& d : torsion) {
    sep();
    os << "Z/" << d;
  }
  if (first) os << '0';
  os << ", rank " << free_rank;
  return os.str();
}

GroupForm group_from_presentation(std::size_t n, const MatZ& relations) {
  if (relations.rows() > 0 && relations.cols() != n)
    throw InputError("group_from_presentation: relation matrix has " + std::to_string(relations.cols()) +
                     " columns, expected " + std::to_string(n));
  MatZ rel = relations.rows() > 0 ? relations : MatZ(0, n);
  auto snf = smith_normal_form(rel);
  GroupForm g;
  g.generators = n;
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < n; ++j) {
    BigInt d = j < rel.rows() ? snf.d(j, j) : BigInt(0);
    if (d == 1) continue;
    keep.push_back(j);
    g.moduli.push_back(d);
    if (d == 0)
      ++g.free_rank;
    else
      g.torsion.push_back(d);
  }
  g.coords = MatZ(n, keep.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < keep.size(); ++k) g.coords(i, k) = snf.v(i, keep[k]);
  MatZ vinv = inverse_unimodular(snf.v);
  g.basis = MatZ(keep.size(), n);
  for (std::size_t k = 0; k < keep.size(); ++k)
    for (std::size_t i = 0; i < n; ++i) g.basis(k, i) = vinv(keep[k], i);
  return g;
}

}  // namespace detfun
