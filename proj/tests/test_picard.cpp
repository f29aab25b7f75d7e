#include <doctest.h>

#include "detfun/errors.hpp"
#include "detfun/picard.hpp"

#include <map>
#include <numeric>
#include <random>

using namespace detfun;

namespace {

std::vector<Obj> degrees(long long lo, long long hi) {
  std::vector<Obj> out;
  for (long long n = lo; n <= hi; ++n) out.push_back({n});
  return out;
}

ModelPtr gl(std::uint32_t p) { return std::make_shared<GradedLine>(p); }

}  // namespace

TEST_CASE("graded line coherence") {
  CHECK(check_picard_axioms(*gl(5), degrees(-2, 2)).ok);
  CHECK(check_picard_axioms(*gl(2), degrees(0, 1)).ok);
  CHECK_THROWS_AS(check_picard_axioms(*gl(5), {{1, 2}}), InputError);
  CHECK_THROWS_AS(check_picard_axioms(*gl(5), {}), InputError);
}

TEST_CASE("discrete Z/2 with identity eps, brute force") {
  auto m = DiscretePicard::cyclic({2}, {2}, {{1}});
  // Independent table: the only bilinear form on Z/2 with b(1,1) = 1.
  for (long long x = 0; x < 2; ++x)
    for (long long y = 0; y < 2; ++y) CHECK(m.psi_val({x}, {y}) == Elt{(x * y) % 2});
  // Every morphism is invertible: 2 objects x 2 automorphisms each.
  for (long long x = 0; x < 2; ++x)
    for (long long a = 0; a < 2; ++a) {
      Mor f{{x}, {a}};
      CHECK(compose(m, inverse(m, f), f) == identity(m, {x}));
    }
  CHECK(check_picard_axioms(m, {{0}, {1}}).ok);
  CHECK(m.pi1_elements().size() == 2);
}

TEST_CASE("a non-bilinear braiding is caught") {
  struct Broken : PicardModel {
    GradedLine base{5};
    std::string spec() const override { return "broken"; }
    bool valid_obj(const Obj& x) const override { return base.valid_obj(x); }
    Obj tensor_obj(const Obj& x, const Obj& y) const override { return base.tensor_obj(x, y); }
    Obj inverse_obj(const Obj& x) const override { return base.inverse_obj(x); }
    Obj neutral() const override { return base.neutral(); }
    bool valid_elt(const Elt& a) const override { return base.valid_elt(a); }
    Elt one() const override { return base.one(); }
    Elt mul(const Elt& a, const Elt& b) const override { return base.mul(a, b); }
    Elt inv(const Elt& a) const override { return base.inv(a); }
    Elt phi_val(const Obj&, const Obj&, const Obj&) const override { return one(); }
    // psi(n, m) = 2 for n, m odd and n < m: not symmetric-inverse.
    Elt psi_val(const Obj& x, const Obj& y) const override {
      return (x[0] % 2 && y[0] % 2 && x[0] < y[0]) ? Elt{2} : Elt{1};
    }
    GroupForm pi0_form() const override { return base.pi0_form(); }
    std::vector<BigInt> pi0_coords(const Obj& x) const override { return base.pi0_coords(x); }
    GroupForm pi1_form() const override { return base.pi1_form(); }
    std::vector<Elt> pi1_elements() const override { return base.pi1_elements(); }
    std::vector<Elt> pi1_generators() const override { return base.pi1_generators(); }
  } broken;
  auto r = check_picard_axioms(broken, degrees(0, 3));
  CHECK_FALSE(r.ok);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0] == "psi^2 fails at ((1), (3))");
}

TEST_CASE("units") {
  auto m = gl(5);
  auto u1 = unit_of(m, {0}, {1});
  CHECK(check_unit(u1, degrees(-2, 2)).ok);
  auto u2 = unit_of(m, {0}, {2});
  CHECK(check_unit(u2, degrees(-2, 2)).ok);
  // The comparison morphism is the unique automorphism commuting with the deltas.
  int hits = 0;
  for (const auto& a : m->pi1_elements()) hits += is_unit_morphism(u1, u2, a);
  CHECK(hits == 1);
  CHECK(is_unit_morphism(u1, u2, unit_morphism(u1, u2)));
  CHECK_THROWS_AS(unit_of(m, {1}, {1}), InputError);
}

TEST_CASE("unit product") {
  auto m = gl(5);
  auto p = unit_product(unit_of(m, {0}, {1}), unit_of(m, {0}, {1}));
  CHECK(p.obj == Obj{0});
  CHECK(p.delta == Elt{1});
  // Both units live on the degree-0 object, so the reordering carries sign (+1)
  // and delta'' is the product of the two deltas.
  auto q = unit_product(unit_of(m, {0}, {2}), unit_of(m, {0}, {3}));
  CHECK(q.delta == Elt{(2 * 3) % 5});
  CHECK(check_unit(q, degrees(-2, 2)).ok);

  auto d = std::make_shared<DiscretePicard>(DiscretePicard::cyclic({0}, {4}, {{2}}));
  for (long long a = 0; a < 4; ++a)
    for (long long b = 0; b < 4; ++b) {
      auto r = unit_product(unit_of(d, {0}, {a}), unit_of(d, {0}, {b}));
      CHECK(r.delta == Elt{(a + b) % 4});
    }
  auto other = gl(7);
  CHECK_THROWS_AS(unit_product(unit_of(m, {0}, {1}), unit_of(other, {0}, {1})), InputError);
}

TEST_CASE("units are unique up to unique isomorphism in small discrete models") {
  auto d = std::make_shared<DiscretePicard>(DiscretePicard::cyclic({2, 0}, {2, 2}, {{1, 0}, {0, 1}}));
  auto elts = d->pi1_elements();
  for (const auto& a : elts)
    for (const auto& b : elts) {
      auto ua = unit_of(d, d->neutral(), a), ub = unit_of(d, d->neutral(), b);
      int hits = 0;
      for (const auto& c : elts) hits += is_unit_morphism(ua, ub, c);
      CHECK(hits == 1);
    }
}

TEST_CASE("epsilon") {
  auto m = gl(5);
  CHECK(epsilon(*m, {1}) == Elt{4});
  CHECK(epsilon(*m, {2}) == Elt{1});
  auto d = DiscretePicard::cyclic({2}, {3}, {{0}});
  CHECK(epsilon(d, {1}) == Elt{0});
  CHECK_THROWS_AS(DiscretePicard::cyclic({2}, {3}, {{1}}), InputError);
  CHECK_THROWS_AS(DiscretePicard::cyclic({0}, {4}, {{1}}), InputError);
}

TEST_CASE("epsilon is a homomorphism with 2 eps = 0") {
  std::vector<ModelPtr> models{gl(2), gl(3), gl(5), gl(7), parse_model("discrete:a0=0,2;a1=4,2;eps=2,0/0,1")};
  for (const auto& m : models) {
    std::vector<Obj> objs;
    if (m->spec().starts_with("gradedline"))
      objs = degrees(-4, 4);
    else
      for (long long a = -3; a <= 3; ++a)
        for (long long b = 0; b < 2; ++b) objs.push_back(m->tensor_obj({a, 0}, {0, b}));
    for (const auto& x : objs) {
      CHECK(m->mul(epsilon(*m, x), epsilon(*m, x)) == m->one());
      for (const auto& y : objs) CHECK(epsilon(*m, m->tensor_obj(x, y)) == m->mul(epsilon(*m, x), epsilon(*m, y)));
    }
    CHECK(check_picard_axioms(*m, std::vector<Obj>(objs.begin(), objs.begin() + 6)).ok);
  }
}

TEST_CASE("model specs") {
  CHECK(parse_model("gradedline:7")->spec() == "gradedline:7");
  auto d = parse_model("discrete:a0=0;a1=4;eps=2");
  CHECK(d->spec() == "discrete:a0=0;a1=4;eps=2");
  CHECK(parse_model(d->spec())->spec() == d->spec());
  CHECK_THROWS_AS(parse_model("gradedline:8"), InputError);
  CHECK_THROWS_AS(parse_model("nope:1"), InputError);
  CHECK_THROWS_AS(parse_model("discrete:a0=0;a1=0;eps=0"), InputError);
}

TEST_CASE("reorder agrees with psi and composes") {
  auto m = gl(7);
  std::vector<Obj> objs{{1}, {3}};
  auto r = reorder(*m, objs, Bracket::pair(Bracket::of(0), Bracket::of(1)), Bracket::pair(Bracket::of(1), Bracket::of(0)));
  CHECK(r.val == m->psi_val({1}, {3}));

  std::mt19937_64 rng(3);
  auto random_bracket = [&](std::vector<int> leaves) {
    std::function<Bracket(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) -> Bracket {
      if (hi - lo == 1) return Bracket::of(leaves[lo]);
      std::size_t mid = lo + 1 + rng() % (hi - lo - 1);
      return Bracket::pair(build(lo, mid), build(mid, hi));
    };
    return build(0, leaves.size());
  };
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + rng() % 4;
    std::vector<Obj> os;
    for (std::size_t i = 0; i < n; ++i) os.push_back({static_cast<long long>(rng() % 5) - 2});
    std::vector<int> l0(n);
    std::iota(l0.begin(), l0.end(), 0);
    auto l1 = l0, l2 = l0;
    std::shuffle(l1.begin(), l1.end(), rng);
    std::shuffle(l2.begin(), l2.end(), rng);
    auto a = random_bracket(l0), b = random_bracket(l1), c = random_bracket(l2);
    auto ab = reorder(*m, os, a, b), bc = reorder(*m, os, b, c), ac = reorder(*m, os, a, c);
    CHECK(m->mul(bc.val, ab.val) == ac.val);
    // Oracle: the sign of the permutation restricted to odd-degree objects.
    long long inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        auto pos = [&](int leaf) { return std::find(l2.begin(), l2.end(), leaf) - l2.begin(); };
        bool odd = os[i][0] % 2 != 0 && os[j][0] % 2 != 0;
        if (odd && pos(static_cast<int>(i)) > pos(static_cast<int>(j))) ++inversions;
      }
    CHECK(ac.val == Elt{inversions % 2 ? 6 : 1});
  }
}

TEST_CASE("monoidal functors") {
  auto m = gl(5);
  auto id = identity_functor(m);
  CHECK(check_monoidal(id, degrees(-2, 2)).ok);
  auto maps = induced_pi_maps(id);
  CHECK(maps.equivalence());
  CHECK(maps.pi0 == MatZ::from_rows({{1}}, 1));
  for (const auto& [a, b] : maps.pi1) CHECK(a == b);

  // Forgetting lines: degree n to n in Z, unit u to its discrete log base 2 in Z/4.
  auto d = parse_model("discrete:a0=0;a1=4;eps=2");
  std::map<long long, long long> dlog;
  for (long long k = 0, u = 1; k < 4; ++k, u = u * 2 % 5) dlog[u] = k;
  MonoidalFunctorSpec forget{m, d, [](const Obj& x) { return x; },
                             [dlog](const Obj&, const Elt& a) { return Elt{dlog.at(a[0])}; },
                             [d](const Obj&, const Obj&) { return d->one(); }};
  CHECK(check_monoidal(forget, degrees(-3, 3)).ok);
  auto fm = induced_pi_maps(forget);
  CHECK(fm.pi0_iso);
  CHECK(fm.pi1_iso);

  // Degree doubling: the symmetry square fails at (1, 1) whatever c is.
  for (long long c = 1; c < 5; ++c) {
    MonoidalFunctorSpec dbl{m, m, [](const Obj& x) { return Obj{2 * x[0]}; }, [](const Obj&, const Elt& a) { return a; },
                            [c](const Obj&, const Obj&) { return Elt{c}; }};
    auto r = check_monoidal(dbl, degrees(0, 1));
    CHECK_FALSE(r.ok);
    CHECK(std::find(r.failures.begin(), r.failures.end(), "symmetry square fails at ((1), (1))") != r.failures.end());
    CHECK_FALSE(induced_pi_maps(dbl).pi0_iso);
  }

  MonoidalFunctorSpec bad{m, m, [](const Obj& x) { return Obj{x[0] + 1}; }, [](const Obj&, const Elt& a) { return a; },
                          [](const Obj&, const Obj&) { return Elt{1}; }};
  CHECK_THROWS_AS(check_monoidal(bad, degrees(0, 1)), InputError);
}

TEST_CASE("isomorphic monoidal functors induce equal maps") {
  auto m = gl(7);
  std::mt19937_64 rng(29);
  auto d = parse_model("discrete:a0=0;a1=6;eps=3");
  std::map<long long, long long> dlog;
  for (long long k = 0, u = 1; k < 6; ++k, u = u * 3 % 7) dlog[u] = k;
  MonoidalFunctorSpec f{m, d, [](const Obj& x) { return x; },
                        [dlog](const Obj&, const Elt& a) { return Elt{dlog.at(a[0])}; },
                        [d](const Obj&, const Obj&) { return d->one(); }};
  CHECK(check_monoidal(f, degrees(-2, 2)).ok);
  for (int t = 0; t < 20; ++t) {
    // Twist by t(X): c'(X,Y) = t(XY) c(X,Y) t(X)^{-1} t(Y)^{-1}.
    std::map<long long, long long> tw;
    for (long long n = -8; n <= 8; ++n) tw[n] = static_cast<long long>(rng() % 6);
    auto twisted = f;
    twisted.coherence = [=](const Obj& x, const Obj& y) {
      long long v = tw.at(x[0] + y[0]) - tw.at(x[0]) - tw.at(y[0]);
      return Elt{((v % 6) + 6) % 6};
    };
    CHECK(check_monoidal(twisted, degrees(-2, 2)).ok);
    auto a = induced_pi_maps(f), b = induced_pi_maps(twisted);
    CHECK(a.pi0 == b.pi0);
    CHECK(a.pi1 == b.pi1);
  }
  auto twice = compose_functors(identity_functor(d), f);
  CHECK(check_monoidal(twice, degrees(-2, 2)).ok);
}
