#include "detfun/tstructure.hpp"

#include "detfun/errors.hpp"

namespace detfun {

namespace {

Bracket pair_of(int a, int b, int c, int d) {
  return Bracket::pair(Bracket::pair(Bracket::of(a), Bracket::of(b)), Bracket::pair(Bracket::of(c), Bracket::of(d)));
}

// (x0 x1)(x2 x3) -> (x_a x_b)(x_c x_d)
Mor regroup(const PicardModel& m, const std::vector<Obj>& objs, int a, int b, int c, int d) {
  return reorder(m, objs, pair_of(0, 1, 2, 3), pair_of(a, b, c, d));
}

// The unit on the source of r induced by u along r : S -> U.
Unit transport(const Unit& u, const Mor& r) {
  const PicardModel& m = *u.model;
  Mor back = inverse(m, r);
  Mor d = compose(m, tensor(m, back, back), compose(m, u.delta_mor(), r));
  return unit_of(u.model, r.obj, d.val);
}

// Coordinates of the columns of m in the basis given by the columns of b.
MatFp coords(const MatFp& b, const MatFp& m) {
  std::vector<VecFp> cols;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    VecFp c = m.column(j);
    auto x = solve(b, c);
    if (!x) throw InputError("coordinates: vector outside the span");
    cols.push_back(*x);
  }
  return MatFp::from_columns(m.prime(), b.cols(), cols);
}

struct Sub {
  GradedObject obj;
  GradedMap incl;
};

Sub kernel_of(const GradedMap& f) {
  const GradedObject& a = f.src();
  const auto p = a.prime();
  std::map<int, MatFp> basis;
  int lo = a.lo(), hi = a.hi();
  std::vector<std::size_t> dims;
  for (int i = lo; i <= hi; ++i) {
    auto ker = kernel_basis(f.comp(i));
    dims.push_back(ker.size());
    if (!ker.empty()) basis.emplace(i, MatFp::from_columns(p, a.dim(i), ker));
  }
  GradedObject k(p, a.is_zero() ? 0 : lo, a.is_zero() ? std::vector<std::size_t>{} : dims);
  return {k, GradedMap(k, a, basis)};
}

// The map into the subspace s (given by its inclusion), expressed in the basis of s.
GradedMap corestrict(const GradedMap& f, const Sub& s, int shift = 0) {
  std::map<int, MatFp> c;
  const GradedObject& src = f.src();
  for (int i = src.lo(); i <= src.hi(); ++i) {
    if (src.dim(i) == 0 || s.obj.dim(i + shift) == 0) continue;
    c.emplace(i, coords(s.incl.comp(i + shift), f.comp(i)));
  }
  return {src, s.obj.shift(shift), c};
}

GradedObject concentrated(std::uint32_t p, int degree, std::size_t n) { return GradedObject::concentrated(p, degree, n); }

GradedMap at_zero(std::uint32_t p, std::size_t src, std::size_t dst, const MatFp& m) {
  return {concentrated(p, 0, src), concentrated(p, 0, dst), {{0, m}}};
}

std::vector<Obj> probe_objects(const DetData& d) {
  std::vector<Obj> out;
  for (const auto& [n, x] : d.f1_obj) out.push_back(x);
  return out;
}

}  // namespace

RightInverseChooser default_chooser(const ModelPtr& m) {
  return {[m](const Obj&) { return m->one(); }};
}

ExactDet vect_det(std::uint32_t p) {
  auto m = std::make_shared<GradedLine>(p);
  return {m, p, [](std::size_t n) { return Obj{static_cast<long long>(n)}; },
          [](const MatFp& a) { return Elt{det(a)}; },
          [p](const VectSes& s) { return Elt{fp_inv(det(MatFp::hstack(s.in, section(s.out))), p)}; }};
}

Unit chosen_unit(const ModelPtr& m, const RightInverseChooser& ch, const Obj& x) {
  return unit_of(m, m->tensor_obj(x, m->inverse_obj(x)), ch.delta(x));
}

Elt star(const ModelPtr& m, const RightInverseChooser& ch, const Obj& x, const Obj& y, const Elt& alpha) {
  // alpha (x) alpha* is the unit morphism between the chosen units.
  Elt u = unit_morphism(chosen_unit(m, ch, x), chosen_unit(m, ch, y));
  return m->mul(u, m->inv(alpha));
}

Elt kappa(const ModelPtr& m, const RightInverseChooser& ch, const Obj& x, const Obj& y) {
  Obj xs = m->inverse_obj(x), ys = m->inverse_obj(y);
  Unit prod = unit_product(chosen_unit(m, ch, x), chosen_unit(m, ch, y));
  // (X Y)(X* Y*) -> (X X*)(Y Y*)
  Unit moved = transport(prod, regroup(*m, {x, y, xs, ys}, 0, 2, 1, 3));
  return unit_morphism(chosen_unit(m, ch, m->tensor_obj(x, y)), moved);
}

std::size_t even_part(const GradedObject& a) { return a.even_dim(); }
std::size_t odd_part(const GradedObject& a) { return a.odd_dim(); }

MatFp parity_part(const GradedMap& f, int parity) {
  const auto p = f.src().prime();
  MatFp out(p, 0, 0);
  int lo = std::min(f.src().is_zero() ? 0 : f.src().lo(), f.tgt().is_zero() ? 0 : f.tgt().lo());
  int hi = std::max(f.src().is_zero() ? 0 : f.src().hi(), f.tgt().is_zero() ? 0 : f.tgt().hi());
  for (int i = lo; i <= hi; ++i)
    if (((i % 2) + 2) % 2 == parity) out = MatFp::direct_sum(out, f.comp(i));
  return out;
}

DetWithTranslation functor_R(const ExactDet& f, const RightInverseChooser& ch) {
  ModelPtr m = f.model;
  DetWithTranslation g;
  g.model = m;
  g.prime = f.prime;
  g.obj = [f, m](const GradedObject& a) {
    return m->tensor_obj(f.obj(even_part(a)), m->inverse_obj(f.obj(odd_part(a))));
  };
  g.iso = [f, m, ch](const GradedMap& a) {
    Obj od = f.obj(odd_part(a.src()));
    return m->mul(f.iso(parity_part(a, 0)), star(m, ch, od, od, f.iso(parity_part(a, 1))));
  };
  g.ses = [f, m, ch](const GradedSes& s) {
    const PicardModel& pm = *m;
    Obj aev = f.obj(even_part(s.A())), cev = f.obj(even_part(s.C()));
    Obj aod = f.obj(odd_part(s.A())), cod = f.obj(odd_part(s.C())), bod = f.obj(odd_part(s.B()));
    Elt ev = f.ses(VectSes(parity_part(s.in, 0), parity_part(s.out, 0)));
    Elt od = f.ses(VectSes(parity_part(s.in, 1), parity_part(s.out, 1)));
    // f1(B^od)* -> (f1(A^od) f1(C^od))* -> f1(A^od)* f1(C^od)*
    Elt od_star = pm.mul(kappa(m, ch, aod, cod), star(m, ch, bod, pm.tensor_obj(aod, cod), od));
    Obj aods = pm.inverse_obj(aod), cods = pm.inverse_obj(cod);
    Mor first = tensor(pm, Mor{pm.tensor_obj(aev, cev), ev}, Mor{pm.tensor_obj(aods, cods), od_star});
    return compose(pm, regroup(pm, {aev, cev, aods, cods}, 0, 2, 1, 3), first).val;
  };
  g.mu = [f, m, ch](const GradedObject& a) {
    const PicardModel& pm = *m;
    Obj e = f.obj(even_part(a)), o = f.obj(odd_part(a));
    Obj es = pm.inverse_obj(e), os = pm.inverse_obj(o);
    Unit prod = unit_product(chosen_unit(m, ch, e), chosen_unit(m, ch, o));
    // (e o*)(o e*) -> (e e*)(o o*), then eps(o)
    Mor theta = regroup(pm, {e, os, o, es}, 0, 3, 2, 1);
    theta.val = pm.mul(epsilon(pm, o), theta.val);
    return transport(prod, theta);
  };
  return g;
}

ExactDet functor_W(const DetWithTranslation& g) {
  const auto p = g.prime;
  ExactDet f;
  f.model = g.model;
  f.prime = p;
  f.obj = [g, p](std::size_t n) { return g.obj(concentrated(p, 0, n)); };
  f.iso = [g, p](const MatFp& a) { return g.iso(at_zero(p, a.cols(), a.rows(), a)); };
  f.ses = [g, p](const VectSes& s) {
    return g.ses(GradedSes(at_zero(p, s.a(), s.b(), s.in), at_zero(p, s.b(), s.c(), s.out)));
  };
  return f;
}

Complex functor_J(const GradedObject& a) { return Complex::from_graded(a); }

ChainMap functor_J(const GradedMap& f) {
  std::map<int, MatFp> c;
  for (int i = f.src().lo(); i <= f.src().hi(); ++i)
    if (f.src().dim(i) > 0) c.emplace(i, f.comp(i));
  return {functor_J(f.src()), functor_J(f.tgt()), c};
}

Triangle functor_J_ses(const GradedSes& s) {
  Complex a = functor_J(s.A()), c = functor_J(s.C());
  return {functor_J(s.in), functor_J(s.out), ChainMap::zero(c, shift(a)), Provenance::transported};
}

Unit triangle_mu(const TriangleDet& f, const Complex& a) {
  const PicardModel& m = *f.model;
  Complex z = Complex::zero(a.prime());
  Obj zo = f.obj(z);
  Mor delta0{zo, f.tri(cone(ChainMap::identity(z)))};
  Mor da{zo, f.tri(cone(ChainMap::zero(a, z)))};
  // ([D_A] (x) [D_A]) o delta_0 o [D_A]^{-1}
  Mor mu = compose(m, tensor(m, da, da), compose(m, delta0, inverse(m, da)));
  return unit_of(f.model, m.tensor_obj(f.obj(a), f.obj(shift(a))), mu.val);
}

DetWithTranslation functor_V(const TriangleDet& f, std::uint32_t p) {
  DetWithTranslation g;
  g.model = f.model;
  g.prime = p;
  g.obj = [f](const GradedObject& a) { return f.obj(functor_J(a)); };
  g.iso = [f](const GradedMap& a) { return f.iso(functor_J(a)); };
  g.ses = [f](const GradedSes& s) { return f.tri(functor_J_ses(s)); };
  g.mu = [f](const GradedObject& a) { return triangle_mu(f, functor_J(a)); };
  return g;
}

TriangleDet functor_Hstar(const DetWithTranslation& g) {
  TriangleDet f;
  f.model = g.model;
  f.obj = [g](const Complex& a) { return g.obj(cohomology(a)); };
  f.iso = [g](const ChainMap& a) { return g.iso(h_map(a)); };
  f.tri = [g](const Triangle& t) {
    const PicardModel& m = *g.model;
    Cohomology ha(t.A()), hb(t.B()), hc(t.C()), hta(shift(t.A()));
    GradedMap fa = h_map(t.a, ha, hb), fb = h_map(t.b, hb, hc), fc = h_map(t.c, hc, hta);
    Sub ka = kernel_of(fa), kb = kernel_of(fb), kc = kernel_of(fc);
    // Splitting of 0 -> K -> HA -> HB -> HC -> TK -> 0.
    GradedSes d1(kb.incl, corestrict(fb, kc));
    GradedSes d2(ka.incl, corestrict(fa, kb));
    GradedSes d3(kc.incl, corestrict(fc, ka, 1));
    Obj hbo = g.obj(hb.graded());
    Obj k = g.obj(ka.obj), tk = g.obj(ka.obj.shift(1)), okb = g.obj(kb.obj), okc = g.obj(kc.obj);
    Unit mu = g.mu(ka.obj);
    Mor r = mu.rho(hbo);
    Mor step1 = tensor(m, Mor{hbo, g.ses(d1)}, identity(m, mu.obj));
    // (kb kc)(K TK) -> (K kb)(kc TK)
    Mor step2 = regroup(m, {okb, okc, k, tk}, 2, 0, 1, 3);
    Mor step3 = tensor(m, inverse(m, Mor{g.obj(ha.graded()), g.ses(d2)}), inverse(m, Mor{g.obj(hc.graded()), g.ses(d3)}));
    return compose(m, step3, compose(m, step2, compose(m, step1, r))).val;
  };
  return f;
}

// ---------------------------------------------------------------- exact fragments

DetData evaluate(const Fragment& frag, const DetWithTranslation& g) {
  DetData d;
  d.model = g.model;
  for (const auto& n : frag.objects) d.f1_obj[n] = g.obj(frag.graded_objects.at(n));
  for (const auto& i : frag.isos) d.f1_iso[i.name] = g.iso(frag.graded_maps.at(i.name));
  for (const auto& t : frag.triangles)
    d.f2[t.name] = g.ses(GradedSes(frag.graded_maps.at(t.a), frag.graded_maps.at(t.b)));
  return d;
}

DetData evaluate(const Fragment& frag, const ExactDet& f) {
  auto degree0 = [](const GradedObject& a) {
    if (!a.is_zero() && (a.lo() != 0 || a.hi() != 0)) throw InputError("evaluate: object not concentrated in degree 0");
    return a.dim(0);
  };
  DetData d;
  d.model = f.model;
  for (const auto& n : frag.objects) d.f1_obj[n] = f.obj(degree0(frag.graded_objects.at(n)));
  for (const auto& i : frag.isos) d.f1_iso[i.name] = f.iso(frag.graded_maps.at(i.name).comp(0));
  for (const auto& t : frag.triangles) {
    const GradedMap &a = frag.graded_maps.at(t.a), &b = frag.graded_maps.at(t.b);
    degree0(a.src());
    degree0(b.tgt());
    d.f2[t.name] = f.ses(VectSes(a.comp(0), b.comp(0)));
  }
  return d;
}

namespace {

// g2(D) (x) g2(TD) followed by (A C)(TA TC) -> (A TA)(C TC) must carry mu_B to mu_A mu_C.
bool translate_compatible(const DetWithTranslation& g, const GradedSes& s) {
  const PicardModel& m = *g.model;
  GradedSes ts = s.shift(1);
  Obj a = g.obj(s.A()), c = g.obj(s.C()), ta = g.obj(ts.A()), tc = g.obj(ts.C());
  Mor first = tensor(m, Mor{g.obj(s.B()), g.ses(s)}, Mor{g.obj(ts.B()), g.ses(ts)});
  Mor map = compose(m, regroup(m, {a, c, ta, tc}, 0, 2, 1, 3), first);
  return is_unit_morphism(g.mu(s.B()), unit_product(g.mu(s.A()), g.mu(s.C())), map.val);
}

}  // namespace

Report check_translation_det(const Fragment& frag, const DetWithTranslation& g) {
  DetData d = evaluate(frag, g);
  Report r = check_exact_det_axioms(frag, d);
  std::vector<Obj> probes = probe_objects(d);
  for (const auto& n : frag.objects) {
    Report u = check_unit(g.mu(frag.graded_objects.at(n)), probes);
    for (const auto& f : u.failures) r.fail("mu at " + n + ": " + f);
  }
  for (const auto& i : frag.isos) {
    const GradedMap& a = frag.graded_maps.at(i.name);
    Elt v = g.model->mul(g.iso(a), g.iso(a.shift(1)));
    if (!is_unit_morphism(g.mu(a.src()), g.mu(a.tgt()), v)) r.fail("mu is not natural at iso " + i.name);
  }
  for (const auto& t : frag.triangles)
    if (!translate_compatible(g, GradedSes(frag.graded_maps.at(t.a), frag.graded_maps.at(t.b))))
      r.fail("mu is not compatible with the translate of " + t.name);
  return r;
}

// ---------------------------------------------------------------- comparison witnesses

namespace {

// rho for the unit ([0]*, kappa o delta_0*) on f1(0)*, at f1(n).
Elt unit_on_zero_star(const ExactDet& f, const RightInverseChooser& ch, std::size_t n) {
  const PicardModel& m = *f.model;
  Obj z = f.obj(0);
  Elt delta0 = f.ses(VectSes(MatFp::zero(f.prime, 0, 0), MatFp::zero(f.prime, 0, 0)));
  Elt d = m.mul(kappa(f.model, ch, z, z), star(f.model, ch, z, m.tensor_obj(z, z), delta0));
  Unit u = unit_of(f.model, m.inverse_obj(z), d);
  return u.rho(f.obj(n)).val;
}

}  // namespace

Elt witness_WR(const ExactDet& f, const RightInverseChooser& ch, std::size_t n) { return unit_on_zero_star(f, ch, n); }

Elt witness_RW(const DetWithTranslation& g, const RightInverseChooser& ch, const GradedObject& a) {
  const PicardModel& m = *g.model;
  const auto p = g.prime;
  if (a.is_zero()) return witness_WR(functor_W(g), ch, 0);
  if (a.lo() != a.hi()) {
    // Split off the lowest degree.
    GradedObject low = concentrated(p, a.lo(), a.dim(a.lo()));
    std::vector<std::size_t> rest_dims(a.dims().begin() + 1, a.dims().end());
    GradedObject rest(p, a.lo() + 1, rest_dims);
    GradedSes s = graded_sum_ses(low, rest);
    DetWithTranslation rw = functor_R(functor_W(g), ch);
    Elt inner = m.mul(witness_RW(g, ch, low), witness_RW(g, ch, rest));
    return m.mul(m.inv(rw.ses(s)), m.mul(inner, g.ses(s)));
  }
  int i = a.lo();
  std::size_t n = a.dim(i);
  if (i == 0) return witness_WR(functor_W(g), ch, n);
  DetWithTranslation rw = functor_R(functor_W(g), ch);
  // pi_X pi_{TX} is the unit morphism mu_X -> mu'_X.
  if (i > 0) {
    Elt u = unit_morphism(g.mu(a), rw.mu(a));
    return m.mul(u, m.inv(witness_RW(g, ch, a.shift(1))));
  }
  GradedObject up = a.shift(-1);
  Elt u = unit_morphism(g.mu(up), rw.mu(up));
  return m.mul(u, m.inv(witness_RW(g, ch, up)));
}

Elt witness_VH(const DetWithTranslation& g, const GradedObject&) {
  // H(J(A)) is A in its standard bases.
  return g.model->one();
}

Elt witness_HV(const TriangleDet& f, const Complex& a) {
  const PicardModel& m = *f.model;
  const auto p = a.prime();
  Cohomology h(a);
  GradedObject ha = h.graded();
  if (ha.is_zero()) return f.iso(ChainMap::zero(a, Complex::zero(p)));
  int i = ha.lo();
  // tau_{<=i} A -> A -> tau_{>i} A with zero connecting map.
  Triangle tr = truncation_triangle(a, i);
  const Complex& le = tr.A();
  const Complex& gt = tr.C();
  // J(H^i A) -> tau_{<=i} A through the canonical representatives.
  GradedObject hi = concentrated(p, i, ha.dim(i));
  MatFp reps = h.reps(i);
  MatFp inc = tr.a.comp(i);
  ChainMap q(functor_J(hi), le, {{i, coords(inc, reps)}});
  // H(tau_{>i} A) -> (HA)_{>i}, the inverse of H(b) above degree i.
  std::vector<std::size_t> rest_dims(ha.dims().begin() + 1, ha.dims().end());
  GradedObject rest(p, i + 1, rest_dims);
  GradedMap hb = h_map(tr.b, h, Cohomology(gt));
  std::map<int, MatFp> back;
  for (int j = i + 1; j <= ha.hi(); ++j)
    if (ha.dim(j) > 0) back.emplace(j, *inverse(hb.comp(j)));
  GradedMap theta(cohomology(gt), rest, back);
  Triangle sum = sum_triangle(functor_J(hi), functor_J(rest));
  Obj gt_obj = f.obj(gt);
  Mor split{f.obj(a), f.tri(tr)};
  Mor left = inverse(m, Mor{f.obj(functor_J(hi)), f.iso(q)});
  Mor right{gt_obj, m.mul(f.iso(functor_J(theta)), witness_HV(f, gt))};
  Mor joined = inverse(m, Mor{f.obj(sum.B()), f.tri(sum)});
  return compose(m, joined, compose(m, tensor(m, left, right), split)).val;
}

Report check_composite_WR(const Fragment& frag, const ExactDet& f, const RightInverseChooser& ch) {
  DetData d = evaluate(frag, f);
  DetData e = evaluate(frag, functor_W(functor_R(f, ch)));
  DetMorphism lambda;
  for (const auto& n : frag.objects) lambda[n] = witness_WR(f, ch, frag.graded_objects.at(n).dim(0));
  return check_det_morphism(frag, d, e, lambda);
}

namespace {

Report translation_morphism(const Fragment& frag, const DetWithTranslation& g, const DetWithTranslation& h,
                            const std::function<Elt(const GradedObject&)>& w) {
  DetData d = evaluate(frag, g), e = evaluate(frag, h);
  DetMorphism lambda;
  for (const auto& n : frag.objects) lambda[n] = w(frag.graded_objects.at(n));
  Report r = check_det_morphism(frag, d, e, lambda);
  for (const auto& n : frag.objects) {
    const GradedObject& a = frag.graded_objects.at(n);
    Elt v = g.model->mul(w(a), w(a.shift(1)));
    if (!is_unit_morphism(g.mu(a), h.mu(a), v)) r.fail("mu compatibility fails at " + n);
  }
  return r;
}

}  // namespace

Report check_composite_RW(const Fragment& frag, const DetWithTranslation& g, const RightInverseChooser& ch) {
  return translation_morphism(frag, g, functor_R(functor_W(g), ch),
                              [&](const GradedObject& a) { return witness_RW(g, ch, a); });
}

Report check_composite_VHstar(const Fragment& frag, const DetWithTranslation& g) {
  return translation_morphism(frag, g, functor_V(functor_Hstar(g), g.prime),
                              [&](const GradedObject& a) { return witness_VH(g, a); });
}

Report check_composite_HstarV(const Fragment& frag, const TriangleDet& f) {
  DetData d = evaluate(frag, f);
  TriangleDet hv = functor_Hstar(functor_V(f, frag.prime));
  DetData e = evaluate(frag, hv);
  DetMorphism lambda;
  for (const auto& n : frag.objects) lambda[n] = witness_HV(f, frag.complexes.at(n));
  Report r = check_det_morphism(frag, d, e, lambda);
  // eta_A (x) eta_TA carries mu_A to mu of J(HA).
  for (const auto& n : frag.objects) {
    const Complex& a = frag.complexes.at(n);
    Elt v = f.model->mul(lambda.at(n), witness_HV(f, shift(a)));
    if (!is_unit_morphism(triangle_mu(f, a), triangle_mu(f, functor_J(cohomology(a))), v))
      r.fail("mu compatibility fails at " + n);
  }
  return r;
}

// ---------------------------------------------------------------- random data

GradedObject random_graded(Rng& rng, std::uint32_t p, int max_window, std::size_t max_dim, int lo_min, int spread) {
  int len = static_cast<int>(rng() % static_cast<unsigned>(max_window + 1));
  int lo = lo_min + static_cast<int>(rng() % static_cast<unsigned>(spread + 1));
  std::vector<std::size_t> dims;
  for (int k = 0; k < len; ++k) dims.push_back(rng() % (max_dim + 1));
  return {p, lo, dims};
}

GradedMap random_graded_iso(Rng& rng, const GradedObject& a) {
  std::map<int, MatFp> c;
  for (int i = a.lo(); i <= a.hi(); ++i)
    if (a.dim(i) > 0) c.emplace(i, random_invertible(rng, a.prime(), a.dim(i)));
  return {a, a, c};
}

GradedSes random_graded_ses(Rng& rng, const GradedObject& a, const GradedObject& c) {
  const auto p = a.prime();
  GradedSes split = graded_sum_ses(a, c);
  const GradedObject& b = split.B();
  std::map<int, MatFp> in, out;
  for (int i = b.lo(); i <= b.hi(); ++i) {
    if (b.dim(i) == 0) continue;
    MatFp g = random_invertible(rng, p, b.dim(i));
    if (a.dim(i) > 0) in.emplace(i, g * split.in.comp(i));
    if (c.dim(i) > 0) out.emplace(i, split.out.comp(i) * *inverse(g));
  }
  return {GradedMap(a, b, in), GradedMap(b, c, out)};
}

Fragment random_graded_fragment(Rng& rng, std::uint32_t p, int rounds, bool degree0) {
  ExactFragmentBuilder eb(p);
  auto obj = [&] { return degree0 ? GradedObject::concentrated(p, 0, rng() % 4) : random_graded(rng, p, 3, 2); };
  for (int k = 0; k < rounds; ++k) {
    GradedObject a = obj(), c = obj();
    GradedSes s = random_graded_ses(rng, a, c);
    eb.ses(s);
    if (!degree0) eb.ses(s.shift(1));
    eb.sum(a, c);
    eb.iso(random_graded_iso(rng, a));
    GradedMap alpha = random_graded_iso(rng, a), beta = random_graded_iso(rng, s.B()), gamma = random_graded_iso(rng, c);
    GradedSes t(compose(beta, compose(s.in, alpha.inverse())), compose(gamma, compose(s.out, beta.inverse())));
    eb.ses_iso(s, t, alpha, beta, gamma);
  }
  return eb.fragment();
}

}  // namespace detfun
