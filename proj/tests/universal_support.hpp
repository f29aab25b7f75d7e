#pragma once

#include "detfun/complexes.hpp"
#include "detfun/fragments.hpp"
#include "detfun/universal.hpp"

#include <map>
#include <string>
#include <vector>

namespace detfun::support {

inline std::vector<MatFp> all_matrices(std::uint32_t p, std::size_t rows, std::size_t cols) {
  std::vector<MatFp> out;
  std::size_t n = rows * cols, total = 1;
  for (std::size_t k = 0; k < n; ++k) total *= p;
  for (std::size_t code = 0; code < total; ++code) {
    MatFp m(p, rows, cols);
    std::size_t c = code;
    for (std::size_t k = 0; k < n; ++k, c /= p) m.set(k / cols, k % cols, static_cast<long long>(c % p));
    out.push_back(m);
  }
  return out;
}

// Every complex over F_p living in degrees [lo, hi] with terms of dimension <= max_dim.
inline std::vector<Complex> all_complexes(std::uint32_t p, int lo, int hi, std::size_t max_dim) {
  std::vector<Complex> out;
  const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::size_t> dims;
  std::vector<MatFp> diffs;
  auto rec = [&](auto&& self) -> void {
    if (dims.size() == len) {
      out.emplace_back(p, lo, dims, diffs);
      return;
    }
    for (std::size_t d = 0; d <= max_dim; ++d) {
      if (dims.empty()) {
        dims.push_back(d);
        self(self);
        dims.pop_back();
        continue;
      }
      for (const MatFp& m : all_matrices(p, d, dims.back())) {
        if (!diffs.empty() && !(m * diffs.back()).is_zero()) continue;
        dims.push_back(d);
        diffs.push_back(m);
        self(self);
        diffs.pop_back();
        dims.pop_back();
      }
    }
  };
  rec(rec);
  return out;
}

inline std::vector<ChainMap> all_chain_maps(const Complex& a, const Complex& b) {
  std::vector<ChainMap> out;
  if (a.is_zero() || b.is_zero()) return {ChainMap::zero(a, b)};
  const std::uint32_t p = a.prime();
  std::vector<int> degrees;
  for (int i = a.lo(); i <= a.hi(); ++i)
    if (a.dim(i) > 0 && b.dim(i) > 0) degrees.push_back(i);
  std::map<int, MatFp> comps;
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == degrees.size()) {
      for (int i = a.lo() - 1; i <= a.hi(); ++i) {
        auto at = [&](int j) { return comps.contains(j) ? comps.at(j) : MatFp::zero(p, b.dim(j), a.dim(j)); };
        if (b.diff(i) * at(i) != at(i + 1) * a.diff(i)) return;
      }
      out.emplace_back(a, b, comps);
      return;
    }
    int i = degrees[k];
    for (const MatFp& m : all_matrices(p, b.dim(i), a.dim(i))) {
      comps[i] = m;
      self(self, k + 1);
    }
    comps.erase(i);
  };
  rec(rec, 0);
  return out;
}

// Objects are the given complexes, all inside degrees [lo, hi] with terms of dimension <= max_dim.
// Triangles are the cones of all chain maps between them whose cone is again among them, and both
// sum triangles of every pair whose sum is among them.
inline Fragment complexes_fragment(const std::vector<Complex>& cx, int lo, int hi, std::size_t max_dim) {
  Fragment frag;
  frag.prime = cx.front().prime();
  std::map<std::string, std::string> by_key;
  for (const auto& c : cx) {
    std::string n = "X" + std::to_string(frag.objects.size());
    if (!by_key.emplace(c.to_string(), n).second) continue;
    frag.objects.push_back(n);
    frag.complexes.emplace(n, c);
  }
  auto name = [&](const Complex& c) -> const std::string* {
    auto it = by_key.find(c.to_string());
    return it == by_key.end() ? nullptr : &it->second;
  };
  auto record = [&](const Triangle& t) {
    const std::string *a = name(t.A()), *b = name(t.B()), *c = name(t.C());
    if (!a || !b || !c) return std::string();
    std::string n = "D" + std::to_string(frag.triangles.size());
    frag.triangles.push_back({n, *a, *b, *c, n + "a", n + "b", n + "c"});
    return n;
  };
  for (const auto& x : cx)
    for (const auto& y : cx) {
      bool fits = true;
      for (int i = std::min(x.lo(), y.lo()) - 1; i <= std::max(x.hi(), y.hi()); ++i) {
        std::size_t d = x.dim(i + 1) + y.dim(i);
        if (d > 0 && (i < lo || i > hi || d > max_dim)) fits = false;
      }
      if (fits)
        for (const auto& f : all_chain_maps(x, y)) record(cone(f));
      Triangle s1 = sum_triangle(x, y);
      if (!name(s1.B())) continue;
      std::string d1 = record(s1), d2 = record(sum_triangle_swapped(x, y));
      frag.sums.push_back({"S" + std::to_string(frag.sums.size()), *name(x), *name(y), *name(s1.B()), d1, d2});
    }
  return frag;
}

inline ChainMap inverse_map(const ChainMap& f) {
  std::map<int, MatFp> m;
  for (int i = f.src().lo(); i <= f.src().hi(); ++i) m.emplace(i, *inverse(f.comp(i)));
  return {f.tgt(), f.src(), m};
}

// Cones of random maps with their octahedra, sums, rebased copies with comparison isomorphisms,
// shifted copies and A -> 0 -> TA.
inline FragmentBuilder random_fragment(Rng& rng, std::uint32_t p, int rounds) {
  FragmentBuilder fb(p);
  fb.zero_triangle();
  for (int k = 0; k < rounds; ++k) {
    Complex x = random_complex(rng, p, 3, 2), y = random_complex(rng, p, 3, 2), z = random_complex(rng, p, 3, 2);
    ChainMap u = random_chain_map(rng, x, y), v = random_chain_map(rng, y, z);
    fb.octahedron(octahedron_of(u, v));
    fb.sum(x, z);
    ChainMap alpha = random_rebase(rng, x), beta = random_rebase(rng, y);
    Triangle from = cone(u);
    Triangle to = cone(compose(beta, compose(u, inverse_map(alpha))));
    std::map<int, MatFp> g;
    for (int i = from.C().lo(); i <= from.C().hi(); ++i) g.emplace(i, MatFp::direct_sum(alpha.comp(i + 1), beta.comp(i)));
    fb.triangle_iso({from, to, alpha, beta, ChainMap(from.C(), to.C(), g)});
    fb.iso(inverse_map(alpha));
    fb.iso(ChainMap::identity(x));
    fb.triangle(shift_triangle(from));
    fb.mu_triangle(x);
  }
  return fb;
}

// det_graded over F_5 and its images in (Z; Z/4; eps = 2) by the discrete logarithm and in
// (Z; Z/2; eps = 0) by the quadratic character.
inline std::vector<DetData> three_models(const Fragment& frag) {
  DetData d = evaluate(frag, det_graded_functor(5));
  auto z4 = parse_model("discrete:a0=0;a1=4;eps=2");
  auto z2 = parse_model("discrete:a0=0;a1=2;eps=0");
  std::map<long long, long long> dlog;
  for (long long k = 0, u = 1; k < 4; ++k, u = u * 2 % 5) dlog[u] = k;
  MonoidalFunctorSpec to_z4{d.model, z4, [](const Obj& x) { return x; },
                            [dlog](const Obj&, const Elt& a) { return Elt{dlog.at(a[0])}; },
                            [z4](const Obj&, const Obj&) { return z4->one(); }};
  MonoidalFunctorSpec to_z2{d.model, z2, [](const Obj& x) { return x; },
                            [dlog](const Obj&, const Elt& a) { return Elt{dlog.at(a[0]) % 2}; },
                            [z2](const Obj&, const Obj&) { return z2->one(); }};
  return {d, push_forward(frag, d, to_z4), push_forward(frag, d, to_z2)};
}

// The sum A + A with its two sum triangles and the triangle isomorphisms used to show that
// psi_{A,A} and id (x) [-id_A] agree: d = swap = m u l u with m = diag(1, -1) and u, l elementary.
struct SwapSetup {
  FragmentBuilder fb{5};
  std::string a, d1, d2, id_a, neg_a;
  std::string d, m, u, l, lu, ulu;
};

inline SwapSetup swap_setup(const Complex& a) {
  SwapSetup s{FragmentBuilder(a.prime())};
  const std::uint32_t p = a.prime();
  Triangle t1 = sum_triangle(a, a), t2 = sum_triangle_swapped(a, a);
  const Complex& sum = t1.B();
  auto on_sum = [&](long long x00, long long x01, long long x10, long long x11) {
    std::map<int, MatFp> c;
    for (int i = a.lo(); i <= a.hi(); ++i) {
      std::size_t n = a.dim(i);
      MatFp id = MatFp::identity(p, n), z = MatFp::zero(p, n, n);
      auto piece = [&](long long v) { return v == 0 ? z : MatFp::scalar(p, n, fp_reduce(v, p)); };
      c.emplace(i, MatFp::vstack(MatFp::hstack(piece(x00), piece(x01)), MatFp::hstack(piece(x10), piece(x11))));
    }
    return ChainMap(sum, sum, c);
  };
  ChainMap id = ChainMap::identity(a), neg = negate(id);
  ChainMap d = on_sum(0, 1, 1, 0), m = on_sum(1, 0, 0, -1), u = on_sum(1, 1, 0, 1), l = on_sum(1, 0, -1, 1);
  s.a = s.fb.object(a);
  std::string sum_name = s.fb.sum(a, a);
  s.d1 = s.fb.fragment().sums.back().d1;
  s.d2 = s.fb.fragment().sums.back().d2;
  (void)sum_name;
  s.fb.triangle_iso({t1, t2, id, d, id});
  s.fb.triangle_iso({t1, t1, id, m, neg});
  s.fb.triangle_iso({t1, t1, id, u, id});
  s.fb.triangle_iso({t2, t2, id, l, id});
  s.id_a = s.fb.iso(id);
  s.neg_a = s.fb.iso(neg);
  s.d = s.fb.iso(d);
  s.m = s.fb.iso(m);
  s.u = s.fb.iso(u);
  s.l = s.fb.iso(l);
  s.lu = s.fb.iso(compose(l, u));
  s.ulu = s.fb.iso(compose(u, compose(l, u)));
  return s;
}

// Waypoints from psi_{A,A} to id_A (x) [-id_A]; consecutive words are a few rewrites apart.
inline std::vector<MorId> swap_chain(WordStore& w, const SwapSetup& s) {
  ObjId a = w.under(s.a);
  MorId psi = w.psi(a, a), ia = w.iota(a);
  MorId t1 = w.tri(s.d1), t1b = w.tri_bar(s.d1), t2 = w.tri(s.d2);
  MorId id_iso = w.iso(s.id_a), ids = w.mor_tensor(id_iso, id_iso);
  MorId d = w.iso(s.d), m = w.iso(s.m), u = w.iso(s.u), l = w.iso(s.l), lu = w.iso(s.lu), ulu = w.iso(s.ulu);
  MorId x0 = w.mor_tensor(id_iso, w.iso(s.neg_a)), x = w.mor_tensor(ia, w.iso(s.neg_a));
  auto c = [&](MorId b, MorId q) { return w.comp(b, q); };
  auto in_x = [&](MorId inner) { return c(x, c(inner, t1b)); };
  return {
      psi,
      c(psi, c(t1, t1b)),
      c(t2, t1b),
      c(c(c(t2, d), d), t1b),
      c(c(c(ids, t1), d), t1b),
      c(c(t1, d), t1b),
      c(c(c(t1, m), ulu), t1b),
      c(c(c(x0, t1), ulu), t1b),
      c(c(c(x, t1), ulu), t1b),
      in_x(c(t1, ulu)),
      in_x(c(c(t1, u), lu)),
      in_x(c(c(ids, t1), lu)),
      in_x(c(t1, lu)),
      in_x(c(c(t1, l), u)),
      in_x(c(c(c(psi, t2), l), u)),
      in_x(c(c(psi, c(t2, l)), u)),
      in_x(c(c(psi, c(ids, t2)), u)),
      in_x(c(c(psi, t2), u)),
      in_x(c(t1, u)),
      in_x(c(ids, t1)),
      c(x, c(t1, t1b)),
      x,
  };
}

}  // namespace detfun::support
