#include "detfun/universal.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <unordered_map>

namespace detfun {

// ---------------------------------------------------------------- signature and store

Signature Signature::of(const Fragment& frag) {
  Signature s;
  s.objects = frag.objects;
  for (const auto& i : frag.isos) s.isos[i.name] = {i.src, i.dst};
  for (const auto& t : frag.triangles) s.triangles[t.name] = {t.A, t.B, t.C};
  return s;
}

WordStore::WordStore(Signature sig) : sig_(std::move(sig)) {}

ObjId WordStore::under(const std::string& a) {
  if (std::find(sig_.objects.begin(), sig_.objects.end(), a) == sig_.objects.end())
    throw TypeError("unknown object " + a);
  auto key = std::make_tuple(0, a, ObjId{0}, ObjId{0});
  if (auto it = obj_index_.find(key); it != obj_index_.end()) return it->second;
  ObjId id = static_cast<ObjId>(objs_.size());
  objs_.push_back({ObjKind::under, a, 0, 0});
  obj_index_.emplace(key, id);
  return id;
}

ObjId WordStore::obj_tensor(ObjId x, ObjId y) {
  auto key = std::make_tuple(1, std::string(), x, y);
  if (auto it = obj_index_.find(key); it != obj_index_.end()) return it->second;
  ObjId id = static_cast<ObjId>(objs_.size());
  objs_.push_back({ObjKind::tensor, "", x, y});
  obj_index_.emplace(key, id);
  return id;
}

MorId WordStore::intern(MorNode n) {
  auto key = std::make_tuple(static_cast<int>(n.kind), n.name, n.objs[0], n.objs[1], n.objs[2], n.kids[0], n.kids[1]);
  if (auto it = mor_index_.find(key); it != mor_index_.end()) return it->second;
  MorId id = static_cast<MorId>(mors_.size());
  mors_.push_back(std::move(n));
  mor_index_.emplace(key, id);
  return id;
}

MorId WordStore::iota(ObjId x) {
  MorNode n;
  n.kind = MorKind::iota;
  n.objs[0] = x;
  n.dom = n.cod = x;
  return intern(n);
}

MorId WordStore::comp(MorId beta, MorId alpha) {
  if (cod(alpha) != dom(beta))
    throw TypeError("composite " + show_mor(beta) + " o " + show_mor(alpha) + ": " + show(cod(alpha)) + " != " + show(dom(beta)));
  MorNode n;
  n.kind = MorKind::comp;
  n.kids = {beta, alpha};
  n.dom = dom(alpha);
  n.cod = cod(beta);
  return intern(n);
}

MorId WordStore::mor_tensor(MorId a, MorId b) {
  MorNode n;
  n.kind = MorKind::tensor;
  n.kids = {a, b};
  n.dom = obj_tensor(dom(a), dom(b));
  n.cod = obj_tensor(cod(a), cod(b));
  return intern(n);
}

MorId WordStore::phi(ObjId x, ObjId y, ObjId z) {
  MorNode n;
  n.kind = MorKind::phi;
  n.objs = {x, y, z};
  n.dom = obj_tensor(x, obj_tensor(y, z));
  n.cod = obj_tensor(obj_tensor(x, y), z);
  return intern(n);
}

MorId WordStore::phi_bar(ObjId x, ObjId y, ObjId z) {
  MorNode n;
  n.kind = MorKind::phi_bar;
  n.objs = {x, y, z};
  n.dom = obj_tensor(obj_tensor(x, y), z);
  n.cod = obj_tensor(x, obj_tensor(y, z));
  return intern(n);
}

MorId WordStore::psi(ObjId x, ObjId y) {
  MorNode n;
  n.kind = MorKind::psi;
  n.objs = {x, y, 0};
  n.dom = obj_tensor(x, y);
  n.cod = obj_tensor(y, x);
  return intern(n);
}

MorId WordStore::iso(const std::string& name) {
  auto it = sig_.isos.find(name);
  if (it == sig_.isos.end()) throw TypeError("unknown isomorphism " + name);
  MorNode n;
  n.kind = MorKind::iso;
  n.name = name;
  n.dom = under(it->second.first);
  n.cod = under(it->second.second);
  return intern(n);
}

MorId WordStore::tri(const std::string& name) {
  auto it = sig_.triangles.find(name);
  if (it == sig_.triangles.end()) throw TypeError("unknown triangle " + name);
  MorNode n;
  n.kind = MorKind::tri;
  n.name = name;
  n.dom = under(it->second[1]);
  n.cod = obj_tensor(under(it->second[0]), under(it->second[2]));
  return intern(n);
}

MorId WordStore::tri_bar(const std::string& name) {
  auto it = sig_.triangles.find(name);
  if (it == sig_.triangles.end()) throw TypeError("unknown triangle " + name);
  MorNode n;
  n.kind = MorKind::tri_bar;
  n.name = name;
  n.dom = obj_tensor(under(it->second[0]), under(it->second[2]));
  n.cod = under(it->second[1]);
  return intern(n);
}

MorId WordStore::rebuild(MorId a, MorId k0, MorId k1) {
  MorNode n = mor(a);
  if (n.kind == MorKind::comp) return comp(k0, k1);
  if (n.kind == MorKind::tensor) return mor_tensor(k0, k1);
  return a;
}

std::string WordStore::show(ObjId x) const {
  const ObjNode& n = obj(x);
  if (n.kind == ObjKind::under) return n.name;
  return "(tensor " + show(n.left) + " " + show(n.right) + ")";
}

std::string WordStore::show_mor(MorId a) const {
  const MorNode& n = mor(a);
  switch (n.kind) {
    case MorKind::iota: return "(iota " + show(n.objs[0]) + ")";
    case MorKind::comp: return "(comp " + show_mor(n.kids[0]) + " " + show_mor(n.kids[1]) + ")";
    case MorKind::tensor: return "(tensor " + show_mor(n.kids[0]) + " " + show_mor(n.kids[1]) + ")";
    case MorKind::phi: return "(phi " + show(n.objs[0]) + " " + show(n.objs[1]) + " " + show(n.objs[2]) + ")";
    case MorKind::phi_bar: return "(phibar " + show(n.objs[0]) + " " + show(n.objs[1]) + " " + show(n.objs[2]) + ")";
    case MorKind::psi: return "(psi " + show(n.objs[0]) + " " + show(n.objs[1]) + ")";
    case MorKind::iso: return "(iso " + n.name + ")";
    case MorKind::tri: return "(tri " + n.name + ")";
    case MorKind::tri_bar: return "(tribar " + n.name + ")";
  }
  return "";
}

namespace {

struct Tokens {
  std::vector<std::string> items;
  std::size_t pos = 0;

  explicit Tokens(const std::string& text) {
    std::string cur;
    auto flush = [&] {
      if (!cur.empty()) items.push_back(cur);
      cur.clear();
    };
    for (char ch : text) {
      if (ch == '(' || ch == ')') {
        flush();
        items.emplace_back(1, ch);
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        flush();
      } else {
        cur += ch;
      }
    }
    flush();
  }
  bool done() const { return pos >= items.size(); }
  const std::string& peek() const {
    if (done()) throw InputError("word: unexpected end of input");
    return items[pos];
  }
  std::string next() {
    std::string t = peek();
    ++pos;
    return t;
  }
  void expect(const std::string& t) {
    if (next() != t) throw InputError("word: expected '" + t + "' at token " + std::to_string(pos));
  }
};

ObjId parse_obj_tokens(WordStore& s, Tokens& t) {
  if (t.peek() != "(") {
    std::string name = t.next();
    if (name == ")") throw InputError("word: unexpected ')'");
    return s.under(name);
  }
  t.next();
  std::string head = t.next();
  if (head != "tensor") throw InputError("word: unknown object form " + head);
  ObjId x = parse_obj_tokens(s, t);
  ObjId y = parse_obj_tokens(s, t);
  t.expect(")");
  return s.obj_tensor(x, y);
}

MorId parse_mor_tokens(WordStore& s, Tokens& t) {
  t.expect("(");
  std::string head = t.next();
  MorId out = 0;
  if (head == "iota") {
    out = s.iota(parse_obj_tokens(s, t));
  } else if (head == "comp") {
    MorId b = parse_mor_tokens(s, t);
    MorId a = parse_mor_tokens(s, t);
    out = s.comp(b, a);
  } else if (head == "tensor") {
    MorId a = parse_mor_tokens(s, t);
    MorId b = parse_mor_tokens(s, t);
    out = s.mor_tensor(a, b);
  } else if (head == "phi" || head == "phibar") {
    ObjId x = parse_obj_tokens(s, t), y = parse_obj_tokens(s, t), z = parse_obj_tokens(s, t);
    out = head == "phi" ? s.phi(x, y, z) : s.phi_bar(x, y, z);
  } else if (head == "psi") {
    ObjId x = parse_obj_tokens(s, t), y = parse_obj_tokens(s, t);
    out = s.psi(x, y);
  } else if (head == "iso") {
    out = s.iso(t.next());
  } else if (head == "tri") {
    out = s.tri(t.next());
  } else if (head == "tribar") {
    out = s.tri_bar(t.next());
  } else {
    throw InputError("word: unknown morphism form " + head);
  }
  t.expect(")");
  return out;
}

}  // namespace

ObjId WordStore::parse_obj(const std::string& text) {
  Tokens t(text);
  ObjId x = parse_obj_tokens(*this, t);
  if (!t.done()) throw InputError("word: trailing input");
  return x;
}

MorId WordStore::parse_mor(const std::string& text) {
  Tokens t(text);
  MorId a = parse_mor_tokens(*this, t);
  if (!t.done()) throw InputError("word: trailing input");
  return a;
}

// ---------------------------------------------------------------- rules

namespace {

using Match = std::optional<MorId>;

bool is(const WordStore& s, MorId a, MorKind k) { return s.mor(a).kind == k; }

// (l, r) if x = l (x) r.
std::optional<std::pair<ObjId, ObjId>> split(const WordStore& s, ObjId x) {
  const ObjNode& n = s.obj(x);
  if (n.kind != ObjKind::tensor) return std::nullopt;
  return std::pair{n.left, n.right};
}

Rule rule(std::string name, bool oriented, std::function<Match(WordStore&, MorId)> fwd, std::function<Match(WordStore&, MorId)> bwd) {
  return {std::move(name), oriented, std::move(fwd), std::move(bwd)};
}

Rule ground(std::string name, bool oriented, MorId lhs, MorId rhs) {
  return rule(
      std::move(name), oriented, [lhs, rhs](WordStore&, MorId t) -> Match { return t == lhs ? Match(rhs) : std::nullopt; },
      [lhs, rhs](WordStore&, MorId t) -> Match { return t == rhs ? Match(lhs) : std::nullopt; });
}

std::vector<Rule> generic_rules() {
  std::vector<Rule> r;
  r.push_back(rule(
      "left_id", true,
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[0], MorKind::iota)) return std::nullopt;
        return n.kids[1];
      },
      [](WordStore& s, MorId t) -> Match { return s.comp(s.iota(s.cod(t)), t); }));
  r.push_back(rule(
      "right_id", true,
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[1], MorKind::iota)) return std::nullopt;
        return n.kids[0];
      },
      [](WordStore& s, MorId t) -> Match { return s.comp(t, s.iota(s.dom(t))); }));
  r.push_back(rule(
      "assoc", false,
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[1], MorKind::comp)) return std::nullopt;
        MorNode inner = s.mor(n.kids[1]);
        return s.comp(s.comp(n.kids[0], inner.kids[0]), inner.kids[1]);
      },
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[0], MorKind::comp)) return std::nullopt;
        MorNode inner = s.mor(n.kids[0]);
        return s.comp(inner.kids[0], s.comp(inner.kids[1], n.kids[1]));
      }));
  r.push_back(rule(
      "tensor_id", true,
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::tensor || !is(s, n.kids[0], MorKind::iota) || !is(s, n.kids[1], MorKind::iota))
          return std::nullopt;
        return s.iota(n.dom);
      },
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::iota) return std::nullopt;
        auto xy = split(s, n.objs[0]);
        if (!xy) return std::nullopt;
        return s.mor_tensor(s.iota(xy->first), s.iota(xy->second));
      }));
  r.push_back(rule(
      "interchange", false,
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::tensor || !is(s, n.kids[0], MorKind::comp) || !is(s, n.kids[1], MorKind::comp))
          return std::nullopt;
        MorNode l = s.mor(n.kids[0]), rr = s.mor(n.kids[1]);
        return s.comp(s.mor_tensor(l.kids[0], rr.kids[0]), s.mor_tensor(l.kids[1], rr.kids[1]));
      },
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[0], MorKind::tensor) || !is(s, n.kids[1], MorKind::tensor))
          return std::nullopt;
        MorNode b = s.mor(n.kids[0]), a = s.mor(n.kids[1]);
        return s.mor_tensor(s.comp(b.kids[0], a.kids[0]), s.comp(b.kids[1], a.kids[1]));
      }));
  r.push_back(rule(
      "phi_natural", false,
      [](WordStore& s, MorId t) -> Match {
        // <((a x b) x c) o phi_{X,Y,Z}>  ->  <phi_{X',Y',Z'} o (a x (b x c))>
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[1], MorKind::phi) || !is(s, n.kids[0], MorKind::tensor)) return std::nullopt;
        MorNode top = s.mor(n.kids[0]);
        if (!is(s, top.kids[0], MorKind::tensor)) return std::nullopt;
        MorNode ab = s.mor(top.kids[0]);
        MorId a = ab.kids[0], b = ab.kids[1], c = top.kids[1];
        return s.comp(s.phi(s.cod(a), s.cod(b), s.cod(c)), s.mor_tensor(a, s.mor_tensor(b, c)));
      },
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[0], MorKind::phi) || !is(s, n.kids[1], MorKind::tensor)) return std::nullopt;
        MorNode top = s.mor(n.kids[1]);
        if (!is(s, top.kids[1], MorKind::tensor)) return std::nullopt;
        MorNode bc = s.mor(top.kids[1]);
        MorId a = top.kids[0], b = bc.kids[0], c = bc.kids[1];
        return s.comp(s.mor_tensor(s.mor_tensor(a, b), c), s.phi(s.dom(a), s.dom(b), s.dom(c)));
      }));
  auto phi_cancel = [](const char* name, MorKind outer, MorKind inner, bool left_nested) {
    return rule(
        name, true,
        [outer, inner](WordStore& s, MorId t) -> Match {
          MorNode n = s.mor(t);
          if (n.kind != MorKind::comp || !is(s, n.kids[0], outer) || !is(s, n.kids[1], inner)) return std::nullopt;
          if (s.mor(n.kids[0]).objs != s.mor(n.kids[1]).objs) return std::nullopt;
          return s.iota(n.dom);
        },
        [outer, left_nested](WordStore& s, MorId t) -> Match {
          MorNode n = s.mor(t);
          if (n.kind != MorKind::iota) return std::nullopt;
          auto xy = split(s, n.objs[0]);
          if (!xy) return std::nullopt;
          ObjId x, y, z;
          if (left_nested) {
            auto ab = split(s, xy->first);
            if (!ab) return std::nullopt;
            x = ab->first, y = ab->second, z = xy->second;
          } else {
            auto bc = split(s, xy->second);
            if (!bc) return std::nullopt;
            x = xy->first, y = bc->first, z = bc->second;
          }
          return outer == MorKind::phi ? s.comp(s.phi(x, y, z), s.phi_bar(x, y, z)) : s.comp(s.phi_bar(x, y, z), s.phi(x, y, z));
        });
  };
  r.push_back(phi_cancel("phi_inverse_left", MorKind::phi, MorKind::phi_bar, true));
  r.push_back(phi_cancel("phi_inverse_right", MorKind::phi_bar, MorKind::phi, false));
  r.push_back(rule(
      "pentagon", false,
      [](WordStore& s, MorId t) -> Match {
        // <phi_{XY,Z,W} o phi_{X,Y,ZW}>
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[0], MorKind::phi) || !is(s, n.kids[1], MorKind::phi)) return std::nullopt;
        auto o = s.mor(n.kids[0]).objs, i = s.mor(n.kids[1]).objs;
        auto xy = split(s, o[0]), zw = split(s, i[2]);
        if (!xy || !zw || xy->first != i[0] || xy->second != i[1] || zw->first != o[1] || zw->second != o[2]) return std::nullopt;
        ObjId x = i[0], y = i[1], z = o[1], w = o[2];
        return s.comp(s.mor_tensor(s.phi(x, y, z), s.iota(w)),
                      s.comp(s.phi(x, s.obj_tensor(y, z), w), s.mor_tensor(s.iota(x), s.phi(y, z, w))));
      },
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[0], MorKind::tensor) || !is(s, n.kids[1], MorKind::comp)) return std::nullopt;
        MorNode left = s.mor(n.kids[0]), rest = s.mor(n.kids[1]);
        if (!is(s, left.kids[0], MorKind::phi) || !is(s, left.kids[1], MorKind::iota)) return std::nullopt;
        if (!is(s, rest.kids[0], MorKind::phi) || !is(s, rest.kids[1], MorKind::tensor)) return std::nullopt;
        MorNode right = s.mor(rest.kids[1]);
        if (!is(s, right.kids[0], MorKind::iota) || !is(s, right.kids[1], MorKind::phi)) return std::nullopt;
        auto p1 = s.mor(left.kids[0]).objs, p2 = s.mor(rest.kids[0]).objs, p3 = s.mor(right.kids[1]).objs;
        ObjId x = p1[0], y = p1[1], z = p1[2], w = s.mor(left.kids[1]).objs[0];
        if (p2[0] != x || p2[1] != s.obj_tensor(y, z) || p2[2] != w) return std::nullopt;
        if (s.mor(right.kids[0]).objs[0] != x || p3[0] != y || p3[1] != z || p3[2] != w) return std::nullopt;
        return s.comp(s.phi(s.obj_tensor(x, y), z, w), s.phi(x, y, s.obj_tensor(z, w)));
      }));
  r.push_back(rule(
      "psi_natural", false,
      [](WordStore& s, MorId t) -> Match {
        // <(b x a) o psi_{X,Y}>  ->  <psi_{X',Y'} o (a x b)>
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[1], MorKind::psi) || !is(s, n.kids[0], MorKind::tensor)) return std::nullopt;
        MorNode ba = s.mor(n.kids[0]);
        MorId b = ba.kids[0], a = ba.kids[1];
        return s.comp(s.psi(s.cod(a), s.cod(b)), s.mor_tensor(a, b));
      },
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[0], MorKind::psi) || !is(s, n.kids[1], MorKind::tensor)) return std::nullopt;
        MorNode ab = s.mor(n.kids[1]);
        MorId a = ab.kids[0], b = ab.kids[1];
        return s.comp(s.mor_tensor(b, a), s.psi(s.dom(a), s.dom(b)));
      }));
  r.push_back(rule(
      "psi_square", true,
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[0], MorKind::psi) || !is(s, n.kids[1], MorKind::psi)) return std::nullopt;
        auto o = s.mor(n.kids[0]).objs, i = s.mor(n.kids[1]).objs;
        if (o[0] != i[1] || o[1] != i[0]) return std::nullopt;
        return s.iota(n.dom);
      },
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::iota) return std::nullopt;
        auto xy = split(s, n.objs[0]);
        if (!xy) return std::nullopt;
        return s.comp(s.psi(xy->second, xy->first), s.psi(xy->first, xy->second));
      }));
  r.push_back(rule(
      "hexagon", false,
      [](WordStore& s, MorId t) -> Match {
        // <phi_{Z,X,Y} o <psi_{XY,Z} o phi_{X,Y,Z}>>
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[0], MorKind::phi) || !is(s, n.kids[1], MorKind::comp)) return std::nullopt;
        MorNode rest = s.mor(n.kids[1]);
        if (!is(s, rest.kids[0], MorKind::psi) || !is(s, rest.kids[1], MorKind::phi)) return std::nullopt;
        auto outer = s.mor(n.kids[0]).objs, ps = s.mor(rest.kids[0]).objs, inner = s.mor(rest.kids[1]).objs;
        ObjId x = inner[0], y = inner[1], z = inner[2];
        if (ps[0] != s.obj_tensor(x, y) || ps[1] != z || outer[0] != z || outer[1] != x || outer[2] != y) return std::nullopt;
        return s.comp(s.mor_tensor(s.psi(x, z), s.iota(y)),
                      s.comp(s.phi(x, z, y), s.mor_tensor(s.iota(x), s.psi(y, z))));
      },
      [](WordStore& s, MorId t) -> Match {
        MorNode n = s.mor(t);
        if (n.kind != MorKind::comp || !is(s, n.kids[0], MorKind::tensor) || !is(s, n.kids[1], MorKind::comp)) return std::nullopt;
        MorNode left = s.mor(n.kids[0]), rest = s.mor(n.kids[1]);
        if (!is(s, left.kids[0], MorKind::psi) || !is(s, left.kids[1], MorKind::iota)) return std::nullopt;
        if (!is(s, rest.kids[0], MorKind::phi) || !is(s, rest.kids[1], MorKind::tensor)) return std::nullopt;
        MorNode right = s.mor(rest.kids[1]);
        if (!is(s, right.kids[0], MorKind::iota) || !is(s, right.kids[1], MorKind::psi)) return std::nullopt;
        auto p1 = s.mor(left.kids[0]).objs, p2 = s.mor(rest.kids[0]).objs, p3 = s.mor(right.kids[1]).objs;
        ObjId x = p1[0], z = p1[1], y = s.mor(left.kids[1]).objs[0];
        if (p2[0] != x || p2[1] != z || p2[2] != y) return std::nullopt;
        if (s.mor(right.kids[0]).objs[0] != x || p3[0] != y || p3[1] != z) return std::nullopt;
        return s.comp(s.phi(z, x, y), s.comp(s.psi(s.obj_tensor(x, y), z), s.phi(x, y, z)));
      }));
  return r;
}

// Concrete maps of the iso records, when the fragment carries them.
struct IsoPayload {
  const Fragment& frag;

  bool present(const std::string& n) const {
    return frag.kind == FragmentKind::exact ? frag.graded_maps.contains(n) : frag.maps.contains(n);
  }
  bool is_identity(const IsoRecord& r) const {
    if (r.src != r.dst || !present(r.name)) return false;
    if (frag.kind == FragmentKind::exact) {
      const GradedMap& f = frag.graded_maps.at(r.name);
      return f == GradedMap::identity(f.src());
    }
    const ChainMap& f = frag.maps.at(r.name);
    return f == ChainMap::identity(f.src());
  }
  bool is_minus_identity(const IsoRecord& r) const {
    if (r.src != r.dst || !present(r.name)) return false;
    if (frag.kind == FragmentKind::exact) {
      const GradedMap& f = frag.graded_maps.at(r.name);
      const GradedObject& a = f.src();
      for (int i = a.lo(); i <= a.hi(); ++i)
        if (a.dim(i) > 0 && !(f.comp(i) == MatFp::scalar(frag.prime, a.dim(i), frag.prime - 1))) return false;
      return true;
    }
    const ChainMap& f = frag.maps.at(r.name);
    return f == negate(ChainMap::identity(f.src()));
  }
  // Payload of b o a equals the payload of c, or the identity when c is empty.
  bool composes(const IsoRecord& a, const IsoRecord& b, const IsoRecord* c) const {
    if (!present(a.name) || !present(b.name) || (c && !present(c->name))) return false;
    if (frag.kind == FragmentKind::exact) {
      GradedMap ba = compose(frag.graded_maps.at(b.name), frag.graded_maps.at(a.name));
      return c ? ba == frag.graded_maps.at(c->name) : ba == GradedMap::identity(ba.src());
    }
    ChainMap ba = compose(frag.maps.at(b.name), frag.maps.at(a.name));
    return c ? ba == frag.maps.at(c->name) : ba == ChainMap::identity(ba.src());
  }
};

}  // namespace

std::optional<std::size_t> RuleSet::find(const std::string& name) const {
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (rules[i].name == name) return i;
  return std::nullopt;
}

RuleSet RuleSet::of(const Fragment& frag, WordStore& s) {
  RuleSet rs;
  rs.rules = generic_rules();
  auto add = [&](std::string name, bool oriented, MorId lhs, MorId rhs) {
    if (s.dom(lhs) != s.dom(rhs) || s.cod(lhs) != s.cod(rhs)) throw TypeError("rule " + name + ": sides have different types");
    rs.rules.push_back(ground(std::move(name), oriented, lhs, rhs));
  };
  IsoPayload pay{frag};

  // Isomorphisms of the fragment: identities, composites, mutual inverses.
  for (const auto& r : frag.isos)
    if (pay.is_identity(r)) add("identity:" + r.name, true, s.iso(r.name), s.iota(s.under(r.src)));
  std::map<std::pair<std::string, std::string>, std::vector<const IsoRecord*>> by_ends;
  for (const auto& r : frag.isos) by_ends[{r.src, r.dst}].push_back(&r);
  std::set<std::pair<std::string, std::string>> cancels;
  for (const auto& a : frag.isos) {
    for (const auto& b : frag.isos) {
      if (a.dst != b.src) continue;
      if (auto it = by_ends.find({a.src, b.dst}); it != by_ends.end())
        for (const IsoRecord* c : it->second)
          if (pay.composes(a, b, c)) add("compose:" + c->name + "=" + b.name + "." + a.name, false, s.iso(c->name), s.comp(s.iso(b.name), s.iso(a.name)));
      bool inverse = (a.inverse && *a.inverse == b.name) || (b.inverse && *b.inverse == a.name);
      if (b.dst == a.src && (inverse || pay.composes(a, b, nullptr)) && cancels.insert({b.name, a.name}).second)
        add("cancel:" + b.name + "." + a.name, true, s.comp(s.iso(b.name), s.iso(a.name)), s.iota(s.under(a.src)));
    }
  }

  for (const auto& t : frag.triangles) {
    ObjId ac = s.obj_tensor(s.under(t.A), s.under(t.C));
    add("tri_inverse_left:" + t.name, true, s.comp(s.tri(t.name), s.tri_bar(t.name)), s.iota(ac));
    add("tri_inverse_right:" + t.name, true, s.comp(s.tri_bar(t.name), s.tri(t.name)), s.iota(s.under(t.B)));
  }
  for (const auto& r : frag.triangle_isos)
    add("naturality:" + r.name, false, s.comp(s.tri(r.to), s.iso(r.b)),
        s.comp(s.mor_tensor(s.iso(r.a), s.iso(r.c)), s.tri(r.from)));
  for (const auto& o : frag.octahedra) {
    const TriangleRecord &h1 = frag.triangle(o.h1), &v1 = frag.triangle(o.v1);
    ObjId a = s.under(h1.A), c1 = s.under(h1.C), a1 = s.under(v1.C);
    MorId lhs = s.comp(s.phi(a, c1, a1), s.comp(s.mor_tensor(s.iota(a), s.tri(o.v2)), s.tri(o.h2)));
    MorId rhs = s.comp(s.mor_tensor(s.tri(o.h1), s.iota(a1)), s.tri(o.v1));
    add("associativity:" + o.name, false, lhs, rhs);
  }
  for (const auto& sm : frag.sums)
    add("commutativity:" + sm.name, false, s.comp(s.psi(s.under(sm.A), s.under(sm.B)), s.tri(sm.d1)), s.tri(sm.d2));
  return rs;
}

// ---------------------------------------------------------------- proofs

namespace {

std::optional<MorId> replace_at(WordStore& s, MorId t, const std::vector<int>& path, std::size_t depth,
                                const std::function<std::optional<MorId>(MorId)>& f) {
  if (depth == path.size()) {
    auto r = f(t);
    if (!r || s.dom(*r) != s.dom(t) || s.cod(*r) != s.cod(t)) return std::nullopt;
    return r;
  }
  MorNode n = s.mor(t);
  if (n.kind != MorKind::comp && n.kind != MorKind::tensor) return std::nullopt;
  int k = path[depth];
  if (k != 0 && k != 1) return std::nullopt;
  auto sub = replace_at(s, n.kids[k], path, depth + 1, f);
  if (!sub) return std::nullopt;
  return s.rebuild(t, k == 0 ? *sub : n.kids[0], k == 1 ? *sub : n.kids[1]);
}

void positions(const WordStore& s, MorId t, std::vector<int>& path, std::vector<std::vector<int>>& out) {
  out.push_back(path);
  const MorNode& n = s.mor(t);
  if (n.kind != MorKind::comp && n.kind != MorKind::tensor) return;
  MorId k0 = n.kids[0], k1 = n.kids[1];
  path.push_back(0);
  positions(s, k0, path, out);
  path.back() = 1;
  positions(s, k1, path, out);
  path.pop_back();
}

}  // namespace

std::optional<MorId> apply_step(WordStore& store, const RuleSet& rules, MorId word, const Step& st) {
  if (st.rule >= rules.rules.size()) return std::nullopt;
  const Rule& r = rules.rules[st.rule];
  const auto& f = st.forward ? r.forward : r.backward;
  return replace_at(store, word, st.position, 0, [&](MorId u) { return f(store, u); });
}

bool replay(WordStore& store, const RuleSet& rules, const EqProof& proof) {
  MorId t = proof.from;
  for (const auto& st : proof.steps) {
    auto next = apply_step(store, rules, t, st);
    if (!next) return false;
    t = *next;
  }
  return t == proof.to;
}

EqProof concat(const EqProof& first, const EqProof& second) {
  if (first.to != second.from) throw InputError("concat: proofs do not meet");
  EqProof p{first.from, second.to, first.steps};
  p.steps.insert(p.steps.end(), second.steps.begin(), second.steps.end());
  return p;
}

std::string show_step(const RuleSet& rules, const Step& s) {
  std::string pos = "root";
  if (!s.position.empty()) {
    pos.clear();
    for (int k : s.position) pos += std::to_string(k);
  }
  return rules.rules.at(s.rule).name + (s.forward ? " -> " : " <- ") + "at " + pos;
}

ProveResult prove_equal(WordStore& s, const RuleSet& rules, MorId a, MorId b, std::size_t budget) {
  if (s.dom(a) != s.dom(b) || s.cod(a) != s.cod(b))
    throw TypeError("prove: endpoints differ in type: " + s.show_mor(a) + " vs " + s.show_mor(b));
  ProveResult res;
  res.proof.from = a;
  res.proof.to = b;
  if (a == b) {
    res.status = ProveStatus::equal;
    return res;
  }
  struct Visit {
    MorId parent;
    Step step;
  };
  std::unordered_map<MorId, Visit> seen[2];
  seen[0].emplace(a, Visit{a, {}});
  seen[1].emplace(b, Visit{b, {}});
  std::vector<MorId> frontier[2] = {{a}, {b}};

  auto finish = [&](MorId meet) {
    std::vector<Step> left;
    for (MorId t = meet; t != a;) {
      const Visit& v = seen[0].at(t);
      left.push_back(v.step);
      t = v.parent;
    }
    std::reverse(left.begin(), left.end());
    for (MorId t = meet; t != b;) {
      const Visit& v = seen[1].at(t);
      left.push_back({v.step.rule, v.step.position, !v.step.forward});
      t = v.parent;
    }
    res.status = ProveStatus::equal;
    res.proof.steps = std::move(left);
    res.nodes = seen[0].size() + seen[1].size() - 2;
    return res;
  };

  while (!frontier[0].empty() || !frontier[1].empty()) {
    int side = frontier[0].empty() ? 1 : frontier[1].empty() ? 0 : (frontier[0].size() <= frontier[1].size() ? 0 : 1);
    std::vector<MorId> next;
    for (MorId t : frontier[side]) {
      std::vector<std::vector<int>> pos;
      std::vector<int> path;
      positions(s, t, path, pos);
      for (const auto& p : pos) {
        for (std::size_t ri = 0; ri < rules.rules.size(); ++ri) {
          const Rule& r = rules.rules[ri];
          for (bool fwd : {true, false}) {
            if (!fwd && r.oriented) continue;
            Step st{ri, p, fwd};
            auto u = apply_step(s, rules, t, st);
            if (!u || seen[side].contains(*u)) continue;
            seen[side].emplace(*u, Visit{t, st});
            if (seen[1 - side].contains(*u)) return finish(*u);
            next.push_back(*u);
            if (seen[0].size() + seen[1].size() - 2 > budget) {
              res.nodes = seen[0].size() + seen[1].size() - 2;
              return res;
            }
          }
        }
      }
    }
    frontier[side] = std::move(next);
  }
  res.nodes = seen[0].size() + seen[1].size() - 2;
  return res;
}

// ---------------------------------------------------------------- evaluation

Obj eval_obj(const DetData& d, const WordStore& s, ObjId x) {
  const ObjNode& n = s.obj(x);
  if (n.kind == ObjKind::tensor) return d.model->tensor_obj(eval_obj(d, s, n.left), eval_obj(d, s, n.right));
  auto it = d.f1_obj.find(n.name);
  if (it == d.f1_obj.end()) throw IncompleteData("eval: no value for object " + n.name);
  return it->second;
}

Mor eval_word(const DetData& d, const WordStore& s, MorId a) {
  const PicardModel& m = *d.model;
  const MorNode& n = s.mor(a);
  auto o = [&](int k) { return eval_obj(d, s, n.objs[static_cast<std::size_t>(k)]); };
  switch (n.kind) {
    case MorKind::iota: return identity(m, o(0));
    case MorKind::comp: return compose(m, eval_word(d, s, n.kids[0]), eval_word(d, s, n.kids[1]));
    case MorKind::tensor: return tensor(m, eval_word(d, s, n.kids[0]), eval_word(d, s, n.kids[1]));
    case MorKind::phi: return phi(m, o(0), o(1), o(2));
    case MorKind::phi_bar: return phi_inv(m, o(0), o(1), o(2));
    case MorKind::psi: return psi(m, o(0), o(1));
    case MorKind::iso: {
      auto it = d.f1_iso.find(n.name);
      if (it == d.f1_iso.end()) throw IncompleteData("eval: no value for isomorphism " + n.name);
      return {eval_obj(d, s, n.dom), it->second};
    }
    case MorKind::tri:
    case MorKind::tri_bar: {
      auto it = d.f2.find(n.name);
      if (it == d.f2.end()) throw IncompleteData("eval: no value for triangle " + n.name);
      Mor f{eval_obj(d, s, n.kind == MorKind::tri ? n.dom : n.cod), it->second};
      return n.kind == MorKind::tri ? f : inverse(m, f);
    }
  }
  throw InputError("eval: bad word");
}

RefuteResult refute_equal(const std::vector<DetData>& models, const WordStore& s, MorId a, MorId b) {
  if (s.dom(a) != s.dom(b) || s.cod(a) != s.cod(b)) throw TypeError("refute: endpoints differ in type");
  for (std::size_t i = 0; i < models.size(); ++i)
    if (eval_word(models[i], s, a) != eval_word(models[i], s, b)) return {true, i};
  return {};
}

// ---------------------------------------------------------------- axiom instances

std::vector<AxiomInstance> axiom_instances(const Fragment& frag, WordStore& s) {
  std::vector<AxiomInstance> out;
  if (frag.objects.empty()) return out;
  auto obj_at = [&](std::size_t k) { return s.under(frag.objects[k % frag.objects.size()]); };
  ObjId x = obj_at(0), y = obj_at(1), z = obj_at(2), w = obj_at(3);
  MorId a = frag.triangles.empty() ? s.iota(x) : s.tri(frag.triangles.front().name);
  MorId abar = frag.triangles.empty() ? s.iota(x) : s.tri_bar(frag.triangles.front().name);
  MorId b = frag.isos.empty() ? s.iota(y) : s.iso(frag.isos.front().name);
  MorId c = s.psi(y, z);

  // (i)
  out.push_back({"left identity", s.comp(s.iota(s.cod(a)), a), a});
  out.push_back({"right identity", s.comp(a, s.iota(s.dom(a))), a});
  out.push_back({"associativity of composition", s.comp(a, s.comp(abar, a)), s.comp(s.comp(a, abar), a)});
  // (ii)
  out.push_back({"tensor of identities", s.mor_tensor(s.iota(x), s.iota(y)), s.iota(s.obj_tensor(x, y))});
  MorId cb = s.psi(z, y);
  out.push_back({"interchange", s.mor_tensor(s.comp(abar, a), s.comp(cb, c)), s.comp(s.mor_tensor(abar, cb), s.mor_tensor(a, c))});
  // (iii)
  out.push_back({"phi natural", s.comp(s.mor_tensor(s.mor_tensor(a, b), c), s.phi(s.dom(a), s.dom(b), s.dom(c))),
                 s.comp(s.phi(s.cod(a), s.cod(b), s.cod(c)), s.mor_tensor(a, s.mor_tensor(b, c)))});
  out.push_back({"phi inverse", s.comp(s.phi(x, y, z), s.phi_bar(x, y, z)), s.iota(s.obj_tensor(s.obj_tensor(x, y), z))});
  out.push_back({"phi inverse", s.comp(s.phi_bar(x, y, z), s.phi(x, y, z)), s.iota(s.obj_tensor(x, s.obj_tensor(y, z)))});
  out.push_back({"pentagon", s.comp(s.phi(s.obj_tensor(x, y), z, w), s.phi(x, y, s.obj_tensor(z, w))),
                 s.comp(s.mor_tensor(s.phi(x, y, z), s.iota(w)),
                        s.comp(s.phi(x, s.obj_tensor(y, z), w), s.mor_tensor(s.iota(x), s.phi(y, z, w))))});
  out.push_back({"psi natural", s.comp(s.mor_tensor(b, a), s.psi(s.dom(a), s.dom(b))), s.comp(s.psi(s.cod(a), s.cod(b)), s.mor_tensor(a, b))});
  out.push_back({"psi squared", s.comp(s.psi(y, x), s.psi(x, y)), s.iota(s.obj_tensor(x, y))});
  out.push_back({"hexagon", s.comp(s.phi(z, x, y), s.comp(s.psi(s.obj_tensor(x, y), z), s.phi(x, y, z))),
                 s.comp(s.mor_tensor(s.psi(x, z), s.iota(y)), s.comp(s.phi(x, z, y), s.mor_tensor(s.iota(x), s.psi(y, z))))});
  // (iv)
  IsoPayload pay{frag};
  for (const auto& r : frag.isos)
    if (pay.is_identity(r)) {
      out.push_back({"identity isomorphism", s.iso(r.name), s.iota(s.under(r.src))});
      break;
    }
  bool composite = false;
  for (const auto& p : frag.isos) {
    for (const auto& q : frag.isos) {
      if (p.dst != q.src) continue;
      for (const auto& r : frag.isos)
        if (r.src == p.src && r.dst == q.dst && pay.composes(p, q, &r)) {
          out.push_back({"composite isomorphism", s.iso(r.name), s.comp(s.iso(q.name), s.iso(p.name))});
          composite = true;
          break;
        }
      if (composite) break;
    }
    if (composite) break;
  }
  if (!frag.triangles.empty()) {
    const auto& t = frag.triangles.front();
    out.push_back({"triangle inverse", s.comp(s.tri(t.name), s.tri_bar(t.name)), s.iota(s.obj_tensor(s.under(t.A), s.under(t.C)))});
    out.push_back({"triangle inverse", s.comp(s.tri_bar(t.name), s.tri(t.name)), s.iota(s.under(t.B))});
  }
  // (v)
  for (const auto& r : frag.triangle_isos)
    out.push_back({"naturality " + r.name, s.comp(s.tri(r.to), s.iso(r.b)), s.comp(s.mor_tensor(s.iso(r.a), s.iso(r.c)), s.tri(r.from))});
  for (const auto& o : frag.octahedra) {
    const TriangleRecord &h1 = frag.triangle(o.h1), &v1 = frag.triangle(o.v1);
    ObjId oa = s.under(h1.A), c1 = s.under(h1.C), a1 = s.under(v1.C);
    out.push_back({"associativity " + o.name, s.comp(s.phi(oa, c1, a1), s.comp(s.mor_tensor(s.iota(oa), s.tri(o.v2)), s.tri(o.h2))),
                   s.comp(s.mor_tensor(s.tri(o.h1), s.iota(a1)), s.tri(o.v1))});
  }
  for (const auto& sm : frag.sums)
    out.push_back({"commutativity " + sm.name, s.comp(s.psi(s.under(sm.A), s.under(sm.B)), s.tri(sm.d1)), s.tri(sm.d2)});
  return out;
}

// ---------------------------------------------------------------- K-groups

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

using SparseRow = std::map<std::size_t, BigInt>;

}  // namespace

K0Result k0(const Fragment& frag) {
  K0Result res;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < frag.objects.size(); ++i) index[frag.objects[i]] = i;
  UnionFind uf(frag.objects.size());
  for (const auto& r : frag.isos) uf.join(index.at(r.src), index.at(r.dst));
  std::map<std::size_t, std::size_t> gen_of_root;
  std::vector<std::size_t> gen(frag.objects.size());
  for (std::size_t i = 0; i < frag.objects.size(); ++i) {
    std::size_t root = uf.find(i);
    auto [it, fresh] = gen_of_root.emplace(root, res.generators.size());
    if (fresh) res.generators.push_back(frag.objects[root]);
    gen[i] = it->second;
  }
  const std::size_t n = res.generators.size();

  std::vector<SparseRow> rows;
  for (const auto& t : frag.triangles) {
    SparseRow r;
    r[gen[index.at(t.B)]] += 1;
    r[gen[index.at(t.A)]] -= 1;
    r[gen[index.at(t.C)]] -= 1;
    std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
    if (!r.empty()) rows.push_back(std::move(r));
  }
  res.relations = frag.triangles.size();

  // Eliminate generators against unit entries before the Smith form; the relations are sparse
  // with coefficients +-1, so almost everything goes here.
  std::vector<std::map<std::size_t, BigInt>> expr(n);
  std::vector<std::size_t> order;
  std::vector<bool> gone(n, false), dead(rows.size(), false);
  std::vector<std::set<std::size_t>> rows_with(n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [j, v] : rows[i]) rows_with[j].insert(i);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (dead[i]) continue;
      auto unit = std::find_if(rows[i].begin(), rows[i].end(), [](const auto& kv) { return kv.second == 1 || kv.second == -1; });
      if (unit == rows[i].end()) continue;
      std::size_t j = unit->first;
      BigInt u = unit->second;
      SparseRow piv = rows[i];
      // g_j = -u * sum_{k != j} r_k g_k
      for (const auto& [k, v] : piv)
        if (k != j) expr[j][k] = -u * v;
      order.push_back(j);
      gone[j] = true;
      dead[i] = true;
      for (const auto& [k, v] : piv) rows_with[k].erase(i);
      std::vector<std::size_t> touched(rows_with[j].begin(), rows_with[j].end());
      for (std::size_t q : touched) {
        BigInt c = rows[q].at(j) * u;
        for (const auto& [k, v] : piv) {
          BigInt nv = rows[q][k] - c * v;
          if (nv == 0) {
            rows[q].erase(k);
            rows_with[k].erase(q);
          } else {
            rows[q][k] = nv;
            rows_with[k].insert(q);
          }
        }
        if (rows[q].empty()) dead[q] = true;
      }
      changed = true;
    }
  }

  std::vector<std::size_t> alive_index(n, 0);
  std::size_t m = 0;
  for (std::size_t j = 0; j < n; ++j)
    if (!gone[j]) alive_index[j] = m++;
  MatZ rel(0, m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (dead[i]) continue;
    std::vector<BigInt> row(m, 0);
    for (const auto& [k, v] : rows[i]) row[alive_index[k]] = v;
    rel.append_row(row);
  }
  res.group = group_from_presentation(m, rel);

  // Every generator as a combination of the surviving ones.
  std::vector<std::vector<BigInt>> comb(n);
  for (std::size_t j = 0; j < n; ++j)
    if (!gone[j]) {
      comb[j].assign(m, 0);
      comb[j][alive_index[j]] = 1;
    }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::size_t j = *it;
    comb[j].assign(m, 0);
    for (const auto& [k, v] : expr[j])
      for (std::size_t l = 0; l < m; ++l) comb[j][l] += v * comb[k][l];
  }
  for (std::size_t i = 0; i < frag.objects.size(); ++i) res.classes[frag.objects[i]] = res.group.normalize(comb[gen[i]]);
  return res;
}

DetMorphism twist(const Fragment& frag, const K0Result& k, const PicardModel& m, const std::vector<Elt>& chi) {
  if (chi.size() != k.group.moduli.size()) throw InputError("twist: one value per canonical K0 coordinate expected");
  for (std::size_t c = 0; c < chi.size(); ++c) {
    const BigInt& mod = k.group.moduli[c];
    if (mod != 0 && m.pow(chi[c], static_cast<long long>(mod)) != m.one())
      throw InputError("twist: value does not respect the order of coordinate " + std::to_string(c));
  }
  DetMorphism lambda;
  for (const auto& n : frag.objects) {
    Elt v = m.one();
    const auto& x = k.classes.at(n);
    for (std::size_t c = 0; c < x.size(); ++c) v = m.mul(v, m.pow(chi[c], static_cast<long long>(x[c])));
    lambda[n] = v;
  }
  return lambda;
}

std::vector<K1Probe> k1_probe(const Fragment& frag, const std::vector<DetData>& models) {
  std::vector<K1Probe> out;
  IsoPayload pay{frag};
  for (const auto& d : models) {
    const PicardModel& m = *d.model;
    K1Probe pr;
    pr.model = m.spec();
    auto hit = [&](const Elt& e) {
      if (std::find(pr.hits.begin(), pr.hits.end(), e) == pr.hits.end()) pr.hits.push_back(e);
    };
    for (const auto& r : frag.isos) {
      if (r.src == r.dst) hit(d.f1_iso.at(r.name));
      if (pay.is_minus_identity(r)) {
        ++pr.eps_checks;
        if (d.f1_iso.at(r.name) != epsilon(m, d.f1_obj.at(r.src))) pr.eps_failures.push_back(r.name);
      }
    }
    for (std::size_t i = 0; i < frag.isos.size(); ++i)
      for (std::size_t j = i + 1; j < frag.isos.size(); ++j) {
        const auto &a = frag.isos[i], &b = frag.isos[j];
        if (a.src == b.src && a.dst == b.dst) hit(m.mul(d.f1_iso.at(a.name), m.inv(d.f1_iso.at(b.name))));
      }
    for (std::size_t i = 0; i < frag.triangles.size(); ++i)
      for (std::size_t j = i + 1; j < frag.triangles.size(); ++j) {
        const auto &s = frag.triangles[i], &t = frag.triangles[j];
        if (s.B != t.B) continue;
        Elt fs = d.f2.at(s.name), ft = d.f2.at(t.name);
        if (s.A == t.A && s.C == t.C) hit(m.mul(m.inv(ft), fs));
        else if (s.A == t.C && s.C == t.A) hit(m.mul(m.inv(ft), m.mul(m.psi_val(d.f1_obj.at(s.A), d.f1_obj.at(s.C)), fs)));
      }
    for (const auto& n : frag.objects) hit(epsilon(m, d.f1_obj.at(n)));

    std::set<Elt> group{m.one()};
    std::vector<Elt> queue{m.one()};
    while (!queue.empty()) {
      Elt e = queue.back();
      queue.pop_back();
      for (const auto& h : pr.hits) {
        Elt f = m.mul(e, h);
        if (group.insert(f).second) queue.push_back(f);
      }
    }
    pr.subgroup.assign(group.begin(), group.end());
    pr.pi1_order = m.pi1_elements().size();
    out.push_back(std::move(pr));
  }
  return out;
}

}  // namespace detfun
