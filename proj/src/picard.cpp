#include "detfun/picard.hpp"

#include "detfun/errors.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace detfun {

namespace {

std::string join(const std::vector<long long>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

long long mod_floor(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::string PicardModel::show_obj(const Obj& x) const { return "(" + join(x) + ")"; }
std::string PicardModel::show_elt(const Elt& a) const { return "(" + join(a) + ")"; }

Elt PicardModel::pow(const Elt& a, long long e) const {
  Elt base = e < 0 ? inv(a) : a;
  if (e < 0) e = -e;
  Elt r = one();
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

void PicardModel::require_obj(const Obj& x, const char* where) const {
  if (!valid_obj(x)) throw InputError(std::string(where) + ": invalid object " + show_obj(x) + " for " + spec());
}

void PicardModel::require_elt(const Elt& a, const char* where) const {
  if (!valid_elt(a)) throw InputError(std::string(where) + ": invalid automorphism " + show_elt(a) + " for " + spec());
}

// ---------------------------------------------------------------- GradedLine

GradedLine::GradedLine(std::uint32_t p) : p_(p), generator_(1) {
  if (p >= (1u << 16) || !is_prime(p)) throw InputError("gradedline: " + std::to_string(p) + " is not a 16-bit prime");
  std::vector<std::uint32_t> factors;
  std::uint32_t n = p - 1;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      factors.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) factors.push_back(n);
  for (Fp g = 1; g < p; ++g) {
    bool primitive = std::all_of(factors.begin(), factors.end(),
                                 [&](std::uint32_t q) { return fp_pow(g, (p - 1) / q, p) != 1; });
    if (primitive) {
      generator_ = g;
      break;
    }
  }
}

std::string GradedLine::spec() const { return "gradedline:" + std::to_string(p_); }

Obj GradedLine::tensor_obj(const Obj& x, const Obj& y) const { return {x.at(0) + y.at(0)}; }

bool GradedLine::valid_elt(const Elt& a) const { return a.size() == 1 && a[0] >= 1 && a[0] < static_cast<long long>(p_); }

Elt GradedLine::mul(const Elt& a, const Elt& b) const {
  return {static_cast<long long>(fp_mul(static_cast<Fp>(a.at(0)), static_cast<Fp>(b.at(0)), p_))};
}

Elt GradedLine::inv(const Elt& a) const { return {static_cast<long long>(fp_inv(static_cast<Fp>(a.at(0)), p_))}; }

Elt GradedLine::psi_val(const Obj& x, const Obj& y) const {
  bool odd = (x.at(0) % 2 != 0) && (y.at(0) % 2 != 0);
  return {odd ? static_cast<long long>(p_ - 1) : 1};
}

GroupForm GradedLine::pi0_form() const { return group_from_presentation(1, MatZ(0, 1)); }

GroupForm GradedLine::pi1_form() const {
  return group_from_presentation(1, MatZ::from_rows({{static_cast<long long>(p_) - 1}}, 1));
}

std::vector<Elt> GradedLine::pi1_elements() const {
  std::vector<Elt> out;
  for (long long u = 1; u < static_cast<long long>(p_); ++u) out.push_back({u});
  return out;
}

std::vector<Elt> GradedLine::pi1_generators() const {
  if (p_ == 2) return {};
  return {{static_cast<long long>(generator_)}};
}

// ---------------------------------------------------------------- DiscretePicard

DiscretePicard::DiscretePicard(std::size_t a0_gens, const MatZ& a0_relations, std::size_t a1_gens,
                               const MatZ& a1_relations, const std::vector<std::vector<long long>>& eps_rows)
    : a0_(group_from_presentation(a0_gens, a0_relations)), a1_(group_from_presentation(a1_gens, a1_relations)) {
  if (a1_.free_rank != 0) throw InputError("discrete: A1 must be finite");
  if (eps_rows.size() != a0_gens) throw InputError("discrete: eps needs one row per A0 generator");
  for (const auto& r : eps_rows)
    if (r.size() != a1_gens) throw InputError("discrete: eps row length must equal the number of A1 generators");
  auto eps_of = [&](const std::vector<BigInt>& x) {
    std::vector<BigInt> y(a1_gens, 0);
    for (std::size_t i = 0; i < a0_gens; ++i)
      for (std::size_t j = 0; j < a1_gens; ++j) y[j] += x[i] * eps_rows[i][j];
    auto z = a1_.normalize(y);
    Elt e;
    for (const auto& v : z) e.push_back(static_cast<long long>(v));
    return e;
  };
  for (std::size_t r = 0; r < a0_relations.rows(); ++r) {
    std::vector<BigInt> row(a0_gens);
    for (std::size_t i = 0; i < a0_gens; ++i) row[i] = a0_relations(r, i);
    if (eps_of(row) != one()) throw InputError("discrete: eps does not respect A0 relation " + std::to_string(r));
  }
  for (std::size_t k = 0; k < a0_.moduli.size(); ++k) {
    std::vector<BigInt> row(a0_gens);
    for (std::size_t i = 0; i < a0_gens; ++i) row[i] = a0_.basis(k, i);
    Elt e = eps_of(row);
    if (mul(e, e) != one()) throw InputError("discrete: eps must take values of order at most 2");
    eps_basis_.push_back(std::move(e));
  }
  std::ostringstream os;
  os << "discrete:a0=";
  for (std::size_t k = 0; k < a0_.moduli.size(); ++k) os << (k ? "," : "") << a0_.moduli[k];
  os << ";a1=";
  for (std::size_t k = 0; k < a1_.moduli.size(); ++k) os << (k ? "," : "") << a1_.moduli[k];
  os << ";eps=";
  for (std::size_t k = 0; k < eps_basis_.size(); ++k) os << (k ? "/" : "") << join(eps_basis_[k]);
  spec_ = os.str();
}

DiscretePicard DiscretePicard::cyclic(const std::vector<long long>& a0_orders, const std::vector<long long>& a1_orders,
                                      const std::vector<std::vector<long long>>& eps_rows) {
  auto relations = [](const std::vector<long long>& orders) {
    MatZ rel(0, orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] < 0) throw InputError("discrete: negative cyclic order");
      if (orders[i] == 0) continue;
      std::vector<BigInt> row(orders.size(), 0);
      row[i] = orders[i];
      rel.append_row(row);
    }
    return rel;
  };
  return DiscretePicard(a0_orders.size(), relations(a0_orders), a1_orders.size(), relations(a1_orders), eps_rows);
}

Obj DiscretePicard::reduce_obj(Obj x) const {
  for (std::size_t k = 0; k < x.size(); ++k)
    if (a0_.moduli[k] != 0) x[k] = mod_floor(x[k], static_cast<long long>(a0_.moduli[k]));
  return x;
}

Elt DiscretePicard::reduce_elt(Elt a) const {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = mod_floor(a[k], static_cast<long long>(a1_.moduli[k]));
  return a;
}

bool DiscretePicard::valid_obj(const Obj& x) const {
  if (x.size() != a0_.moduli.size()) return false;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (a0_.moduli[k] != 0 && (x[k] < 0 || x[k] >= a0_.moduli[k])) return false;
  return true;
}

bool DiscretePicard::valid_elt(const Elt& a) const {
  if (a.size() != a1_.moduli.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] < 0 || a[k] >= a1_.moduli[k]) return false;
  return true;
}

Obj DiscretePicard::tensor_obj(const Obj& x, const Obj& y) const {
  Obj z(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) z[k] = x[k] + y.at(k);
  return reduce_obj(std::move(z));
}

Obj DiscretePicard::inverse_obj(const Obj& x) const {
  Obj z(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) z[k] = -x[k];
  return reduce_obj(std::move(z));
}

Elt DiscretePicard::mul(const Elt& a, const Elt& b) const {
  Elt c(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[k] + b.at(k);
  return reduce_elt(std::move(c));
}

Elt DiscretePicard::inv(const Elt& a) const {
  Elt c(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) c[k] = -a[k];
  return reduce_elt(std::move(c));
}

Elt DiscretePicard::psi_val(const Obj& x, const Obj& y) const {
  Elt r = one();
  for (std::size_t k = 0; k < eps_basis_.size(); ++k) r = mul(r, pow(eps_basis_[k], mod_floor(x.at(k) * y.at(k), 2)));
  return r;
}

std::vector<BigInt> DiscretePicard::pi0_coords(const Obj& x) const { return {x.begin(), x.end()}; }

std::vector<Elt> DiscretePicard::pi1_elements() const {
  std::vector<Elt> out{one()};
  for (std::size_t k = 0; k < a1_.moduli.size(); ++k) {
    std::vector<Elt> next;
    for (const auto& e : out)
      for (long long v = 0; v < a1_.moduli[k]; ++v) {
        Elt f = e;
        f[k] = v;
        next.push_back(std::move(f));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<Elt> DiscretePicard::pi1_generators() const {
  std::vector<Elt> out;
  for (std::size_t k = 0; k < a1_.moduli.size(); ++k) {
    Elt e = one();
    e[k] = 1;
    out.push_back(std::move(e));
  }
  return out;
}

Obj DiscretePicard::obj_from_generators(const std::vector<long long>& x) const {
  std::vector<BigInt> b(x.begin(), x.end());
  auto y = a0_.normalize(b);
  return Obj(y.begin(), y.end());
}

Elt DiscretePicard::elt_from_generators(const std::vector<long long>& x) const {
  std::vector<BigInt> b(x.begin(), x.end());
  auto y = a1_.normalize(b);
  return Elt(y.begin(), y.end());
}

ModelPtr parse_model(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw InputError("model spec '" + spec + "' lacks a ':'");
  std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
  auto parse_ll = [&](const std::string& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      throw InputError("model spec '" + spec + "': bad integer '" + s + "'");
    }
    if (pos != s.size()) throw InputError("model spec '" + spec + "': bad integer '" + s + "'");
    return v;
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == sep) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  };
  if (kind == "gradedline") {
    long long p = parse_ll(rest);
    if (p < 2 || p >= (1 << 16)) throw InputError("model spec '" + spec + "': prime out of range");
    return std::make_shared<GradedLine>(static_cast<std::uint32_t>(p));
  }
  if (kind == "discrete") {
    std::map<std::string, std::string> kv;
    for (const auto& part : split(rest, ';')) {
      auto eq = part.find('=');
      if (eq == std::string::npos) throw InputError("model spec '" + spec + "': expected key=value");
      kv[part.substr(0, eq)] = part.substr(eq + 1);
    }
    for (const char* key : {"a0", "a1", "eps"})
      if (!kv.count(key)) throw InputError("model spec '" + spec + "': missing " + key);
    auto orders = [&](const std::string& s) {
      std::vector<long long> out;
      if (s.empty()) return out;
      for (const auto& t : split(s, ',')) out.push_back(parse_ll(t));
      return out;
    };
    auto a0 = orders(kv["a0"]), a1 = orders(kv["a1"]);
    std::vector<std::vector<long long>> eps;
    if (!a0.empty())
      for (const auto& row : split(kv["eps"], '/')) eps.push_back(orders(row));
    return std::make_shared<DiscretePicard>(DiscretePicard::cyclic(a0, a1, eps));
  }
  throw InputError("model spec '" + spec + "': unknown model kind '" + kind + "'");
}

// ---------------------------------------------------------------- morphisms

Mor identity(const PicardModel& m, const Obj& x) { return {x, m.one()}; }

Mor compose(const PicardModel& m, const Mor& second, const Mor& first) {
  if (second.obj != first.obj)
    throw InputError("compose: codomain " + m.show_obj(first.obj) + " does not match domain " + m.show_obj(second.obj));
  return {first.obj, m.mul(second.val, first.val)};
}

Mor tensor(const PicardModel& m, const Mor& a, const Mor& b) { return {m.tensor_obj(a.obj, b.obj), m.mul(a.val, b.val)}; }

Mor inverse(const PicardModel& m, const Mor& a) { return {a.obj, m.inv(a.val)}; }

Mor phi(const PicardModel& m, const Obj& x, const Obj& y, const Obj& z) {
  return {m.tensor_obj(x, m.tensor_obj(y, z)), m.phi_val(x, y, z)};
}

Mor phi_inv(const PicardModel& m, const Obj& x, const Obj& y, const Obj& z) { return inverse(m, phi(m, x, y, z)); }

Mor psi(const PicardModel& m, const Obj& x, const Obj& y) { return {m.tensor_obj(x, y), m.psi_val(x, y)}; }

Elt epsilon(const PicardModel& m, const Obj& x) { return m.psi_val(x, x); }

// ---------------------------------------------------------------- coherence

Bracket Bracket::of(int i) { return Bracket{i, nullptr, nullptr}; }

Bracket Bracket::pair(Bracket l, Bracket r) {
  return Bracket{-1, std::make_shared<const Bracket>(std::move(l)), std::make_shared<const Bracket>(std::move(r))};
}

Bracket Bracket::right_nested(const std::vector<int>& leaves) {
  if (leaves.empty()) throw InputError("Bracket::right_nested: empty leaf list");
  Bracket b = of(leaves.back());
  for (auto it = leaves.rbegin() + 1; it != leaves.rend(); ++it) b = pair(of(*it), std::move(b));
  return b;
}

std::vector<int> Bracket::leaves() const {
  if (leaf >= 0) return {leaf};
  auto l = left->leaves();
  auto r = right->leaves();
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

Obj Bracket::object(const PicardModel& m, const std::vector<Obj>& objs) const {
  if (leaf >= 0) return objs.at(static_cast<std::size_t>(leaf));
  return m.tensor_obj(left->object(m, objs), right->object(m, objs));
}

namespace {

Obj nested_object(const PicardModel& m, const std::vector<Obj>& objs, const std::vector<int>& order, std::size_t from) {
  Obj x = objs.at(static_cast<std::size_t>(order.back()));
  for (std::size_t i = order.size() - 1; i-- > from;) x = m.tensor_obj(objs.at(static_cast<std::size_t>(order[i])), x);
  return x;
}

// Value of the canonical iso from bracketing b to the right-nested form of its leaves.
Elt to_right_nested(const PicardModel& m, const std::vector<Obj>& objs, const Bracket& b) {
  if (b.leaf >= 0) return m.one();
  Elt v = m.mul(to_right_nested(m, objs, *b.left), to_right_nested(m, objs, *b.right));
  // (l_0 Y_0) R -> l_0 (Y_0 R), then the same under l_0 for Y_0 = l_1 Y_1, and so on.
  auto ls = b.left->leaves();
  Obj rest = nested_object(m, objs, b.right->leaves(), 0);
  for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
    std::vector<int> tail(ls.begin() + static_cast<std::ptrdiff_t>(i) + 1, ls.end());
    v = m.mul(v, m.inv(m.phi_val(objs.at(static_cast<std::size_t>(ls[i])), nested_object(m, objs, tail, 0), rest)));
  }
  return v;
}

}  // namespace

Mor reorder(const PicardModel& m, const std::vector<Obj>& objs, const Bracket& src, const Bracket& dst) {
  auto from = src.leaves();
  auto to = dst.leaves();
  {
    auto a = from, b = to;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw InputError("reorder: bracketings have different leaves");
  }
  Elt v = to_right_nested(m, objs, src);
  // Bubble sort the right-nested list into dst order with adjacent swaps.
  std::vector<std::size_t> rank(objs.size());
  for (std::size_t i = 0; i < to.size(); ++i) rank[static_cast<std::size_t>(to[i])] = i;
  auto cur = from;
  for (bool swapped = true; swapped;) {
    swapped = false;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (rank[static_cast<std::size_t>(cur[i])] <= rank[static_cast<std::size_t>(cur[i + 1])]) continue;
      const Obj& a = objs.at(static_cast<std::size_t>(cur[i]));
      const Obj& b = objs.at(static_cast<std::size_t>(cur[i + 1]));
      if (i + 2 == cur.size()) {
        v = m.mul(v, m.psi_val(a, b));
      } else {
        Obj rest = nested_object(m, objs, cur, i + 2);
        v = m.mul(v, m.phi_val(a, b, rest));
        v = m.mul(v, m.psi_val(a, b));
        v = m.mul(v, m.inv(m.phi_val(b, a, rest)));
      }
      std::swap(cur[i], cur[i + 1]);
      swapped = true;
    }
  }
  v = m.mul(v, m.inv(to_right_nested(m, objs, dst)));
  return {src.object(m, objs), v};
}

// ---------------------------------------------------------------- axioms

Report check_picard_axioms(const PicardModel& m, const std::vector<Obj>& probes) {
  if (probes.empty()) throw InputError("check_picard_axioms: no probe objects");
  for (const auto& x : probes) m.require_obj(x, "check_picard_axioms");
  Report r;
  auto T = [&](const Obj& a, const Obj& b) { return m.tensor_obj(a, b); };
  auto M = [&](const Elt& a, const Elt& b) { return m.mul(a, b); };
  for (const auto& x : probes)
    for (const auto& y : probes)
      if (M(m.psi_val(y, x), m.psi_val(x, y)) != m.one()) {
        r.fail("psi^2 fails at (" + m.show_obj(x) + ", " + m.show_obj(y) + ")");
        return r;
      }
  for (const auto& x : probes)
    for (const auto& y : probes) {
      for (const auto& z : probes) {
        // Hexagon: phi(Y,Z,X) psi(X,YZ) phi(X,Y,Z) = (psi(X,Y) (x) id) phi(Y,X,Z) (id (x) psi(X,Z)).
        Elt lhs = M(M(m.phi_val(y, z, x), m.psi_val(x, T(y, z))), m.phi_val(x, y, z));
        Elt rhs = M(M(m.psi_val(x, y), m.phi_val(y, x, z)), m.psi_val(x, z));
        if (lhs != rhs) {
          r.fail("hexagon fails at (" + m.show_obj(x) + ", " + m.show_obj(y) + ", " + m.show_obj(z) + ")");
          return r;
        }
        for (const auto& w : probes) {
          Elt p1 = M(m.phi_val(T(w, x), y, z), m.phi_val(w, x, T(y, z)));
          Elt p2 = M(M(m.phi_val(w, x, y), m.phi_val(w, T(x, y), z)), m.phi_val(x, y, z));
          if (p1 != p2) {
            r.fail("pentagon fails at (" + m.show_obj(w) + ", " + m.show_obj(x) + ", " + m.show_obj(y) + ", " +
                   m.show_obj(z) + ")");
            return r;
          }
        }
      }
    }
  return r;
}

// ---------------------------------------------------------------- units

Mor Unit::lambda(const Obj& x) const {
  // id_U (x) lambda_X = phi^{-1}(U,U,X) o (delta (x) id_X)
  return {x, model->mul(delta, model->inv(model->phi_val(obj, obj, x)))};
}

Mor Unit::rho(const Obj& x) const { return {x, model->mul(model->psi_val(obj, x), lambda(x).val)}; }

Unit unit_of(ModelPtr m, const Obj& u, const Elt& delta) {
  m->require_obj(u, "unit_of");
  m->require_elt(delta, "unit_of");
  if (m->tensor_obj(u, u) != u)
    throw InputError("unit_of: no morphism " + m->show_obj(u) + " -> " + m->show_obj(m->tensor_obj(u, u)) +
                     " exists, so " + m->show_obj(u) + " carries no unit structure");
  return Unit{std::move(m), u, delta};
}

Report check_unit(const Unit& u, const std::vector<Obj>& probes) {
  const auto& m = *u.model;
  Report r;
  if (u.lambda(u.obj).val != u.delta || u.rho(u.obj).val != u.delta) r.fail("lambda_U or rho_U differs from delta");
  for (const auto& x : probes)
    for (const auto& y : probes) {
      // (id_X (x) lambda_Y) = phi^{-1}(X,U,Y) o (rho_X (x) id_Y)
      Elt lhs = u.lambda(y).val;
      Elt rhs = m.mul(m.inv(m.phi_val(x, u.obj, y)), u.rho(x).val);
      if (lhs != rhs) r.fail("triangle axiom fails at (" + m.show_obj(x) + ", " + m.show_obj(y) + ")");
      // lambda_X (x) id_Y = phi(U,X,Y) o lambda_{XY}
      if (u.lambda(x).val != m.mul(m.phi_val(u.obj, x, y), u.lambda(m.tensor_obj(x, y)).val))
        r.fail("lambda fails tensor compatibility at (" + m.show_obj(x) + ", " + m.show_obj(y) + ")");
      // id_X (x) rho_Y = phi^{-1}(X,Y,U) o rho_{XY}
      if (u.rho(y).val != m.mul(m.inv(m.phi_val(x, y, u.obj)), u.rho(m.tensor_obj(x, y)).val))
        r.fail("rho fails tensor compatibility at (" + m.show_obj(x) + ", " + m.show_obj(y) + ")");
    }
  return r;
}

Unit unit_product(const Unit& a, const Unit& b) {
  if (a.model != b.model && a.model->spec() != b.model->spec()) throw InputError("unit_product: units live in different models");
  const auto& m = *a.model;
  // (U U) (U' U') -> (U U') (U U'); leaves 0:U 1:U 2:U' 3:U'
  std::vector<Obj> objs{a.obj, a.obj, b.obj, b.obj};
  auto src = Bracket::pair(Bracket::pair(Bracket::of(0), Bracket::of(1)), Bracket::pair(Bracket::of(2), Bracket::of(3)));
  auto dst = Bracket::pair(Bracket::pair(Bracket::of(0), Bracket::of(2)), Bracket::pair(Bracket::of(1), Bracket::of(3)));
  Mor re = reorder(m, objs, src, dst);
  Mor dd = tensor(m, a.delta_mor(), b.delta_mor());
  return Unit{a.model, m.tensor_obj(a.obj, b.obj), compose(m, re, dd).val};
}

bool is_unit_morphism(const Unit& a, const Unit& b, const Elt& alpha) {
  const auto& m = *a.model;
  if (a.obj != b.obj) return false;
  // (alpha (x) alpha) o delta = delta' o alpha
  return m.mul(m.mul(alpha, alpha), a.delta) == m.mul(b.delta, alpha);
}

Elt unit_morphism(const Unit& a, const Unit& b) {
  if (a.obj != b.obj) throw InputError("unit_morphism: units on non-isomorphic objects");
  return a.model->mul(b.delta, a.model->inv(a.delta));
}

// ---------------------------------------------------------------- monoidal functors

MonoidalFunctorSpec identity_functor(ModelPtr m) {
  auto one = m;
  return {m, m, [](const Obj& x) { return x; }, [](const Obj&, const Elt& a) { return a; },
          [one](const Obj&, const Obj&) { return one->one(); }};
}

MonoidalFunctorSpec compose_functors(const MonoidalFunctorSpec& second, const MonoidalFunctorSpec& first) {
  MonoidalFunctorSpec g;
  g.src = first.src;
  g.dst = second.dst;
  g.on_obj = [=](const Obj& x) { return second.on_obj(first.on_obj(x)); };
  g.on_mor = [=](const Obj& x, const Elt& a) { return second.on_mor(first.on_obj(x), first.on_mor(x, a)); };
  // c''(X,Y) = N(c(X,Y)) o c'(MX, MY)
  g.coherence = [=](const Obj& x, const Obj& y) {
    Obj xy = first.src->tensor_obj(x, y);
    Elt nc = second.on_mor(first.on_obj(xy), first.coherence(x, y));
    return second.dst->mul(nc, second.coherence(first.on_obj(x), first.on_obj(y)));
  };
  return g;
}

namespace {

std::vector<Elt> probe_elements(const PicardModel& m) {
  auto all = m.pi1_elements();
  if (all.size() <= 64) return all;
  std::vector<Elt> out{m.one()};
  for (const auto& g : m.pi1_generators())
    for (long long e = 1; e < 8; ++e) out.push_back(m.pow(g, e));
  return out;
}

}  // namespace

Report check_monoidal(const MonoidalFunctorSpec& f, const std::vector<Obj>& probes) {
  const auto& s = *f.src;
  const auto& d = *f.dst;
  Report r;
  for (const auto& x : probes) s.require_obj(x, "check_monoidal");
  for (const auto& x : probes)
    for (const auto& y : probes) {
      Obj mx = f.on_obj(x), my = f.on_obj(y), mxy = f.on_obj(s.tensor_obj(x, y));
      if (d.tensor_obj(mx, my) != mxy)
        throw InputError("check_monoidal: c(" + s.show_obj(x) + ", " + s.show_obj(y) + ") is ill-typed");
      if (!d.valid_elt(f.coherence(x, y)))
        throw InputError("check_monoidal: c(" + s.show_obj(x) + ", " + s.show_obj(y) + ") is not an automorphism");
    }
  auto elts = probe_elements(s);
  for (const auto& x : probes) {
    if (f.on_mor(x, s.one()) != d.one()) r.fail("identity not preserved at " + s.show_obj(x));
    for (const auto& a : elts)
      for (const auto& b : elts)
        if (f.on_mor(x, s.mul(a, b)) != d.mul(f.on_mor(x, a), f.on_mor(x, b)))
          r.fail("composition not preserved at " + s.show_obj(x));
  }
  for (const auto& x : probes)
    for (const auto& y : probes) {
      Obj xy = s.tensor_obj(x, y);
      Obj mx = f.on_obj(x), my = f.on_obj(y);
      std::string at = "(" + s.show_obj(x) + ", " + s.show_obj(y) + ")";
      for (const auto& a : elts)
        for (const auto& b : elts) {
          // M(a (x) b) o c = c o (Ma (x) Mb)
          Elt lhs = d.mul(f.on_mor(xy, s.mul(a, b)), f.coherence(x, y));
          Elt rhs = d.mul(f.coherence(x, y), d.mul(f.on_mor(x, a), f.on_mor(y, b)));
          if (lhs != rhs) {
            r.fail("c not natural at " + at);
            goto symmetry;
          }
        }
    symmetry:
      // M(psi) o c(X,Y) = c(Y,X) o psi'
      if (d.mul(f.on_mor(xy, s.psi_val(x, y)), f.coherence(x, y)) != d.mul(f.coherence(y, x), d.psi_val(mx, my)))
        r.fail("symmetry square fails at " + at);
      for (const auto& z : probes) {
        Obj mz = f.on_obj(z);
        Obj xyz = s.tensor_obj(xy, z);
        // M(phi) c(X, YZ) (id (x) c(Y,Z)) = c(XY, Z) (c(X,Y) (x) id) phi'
        Elt lhs = d.mul(d.mul(f.on_mor(xyz, s.phi_val(x, y, z)), f.coherence(x, s.tensor_obj(y, z))), f.coherence(y, z));
        Elt rhs = d.mul(d.mul(f.coherence(xy, z), f.coherence(x, y)), d.phi_val(mx, my, mz));
        if (lhs != rhs) r.fail("associativity square fails at (" + s.show_obj(x) + ", " + s.show_obj(y) + ", " + s.show_obj(z) + ")");
      }
    }
  return r;
}

InducedMaps induced_pi_maps(const MonoidalFunctorSpec& f) {
  const auto& s = *f.src;
  const auto& d = *f.dst;
  InducedMaps out;
  auto g0 = s.pi0_form(), h0 = d.pi0_form();
  out.pi0 = MatZ(g0.moduli.size(), h0.moduli.size());
  for (std::size_t k = 0; k < g0.moduli.size(); ++k) {
    Obj e(g0.moduli.size(), 0);
    e[k] = 1;
    auto img = d.pi0_coords(f.on_obj(e));
    for (std::size_t j = 0; j < img.size(); ++j) out.pi0(k, j) = img[j];
  }
  // Surjective with equal invariants means bijective (finitely generated abelian groups are Hopfian).
  MatZ coker(0, h0.moduli.size());
  for (std::size_t j = 0; j < h0.moduli.size(); ++j) {
    std::vector<BigInt> row(h0.moduli.size(), 0);
    row[j] = h0.moduli[j];
    if (h0.moduli[j] != 0) coker.append_row(row);
  }
  for (std::size_t k = 0; k < out.pi0.rows(); ++k) {
    std::vector<BigInt> row(h0.moduli.size());
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = out.pi0(k, j);
    coker.append_row(row);
  }
  out.pi0_iso = g0.free_rank == h0.free_rank && g0.torsion == h0.torsion &&
                group_from_presentation(h0.moduli.size(), coker).is_trivial();

  Obj unit = s.neutral();
  std::set<Elt> image;
  for (const auto& a : s.pi1_elements()) {
    Elt b = f.on_mor(unit, a);
    out.pi1.emplace_back(a, b);
    image.insert(b);
  }
  out.pi1_iso = image.size() == out.pi1.size() && image.size() == d.pi1_elements().size();
  return out;
}

}  // namespace detfun
