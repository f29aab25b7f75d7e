#pragma once

#include "detfun/errors.hpp"
#include "detfun/fragments.hpp"
#include "detfun/linalg.hpp"
#include "detfun/picard.hpp"

#include <array>
#include <cstdint>
#include <tuple>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace detfun {

// Ill-typed word: a composite whose middle objects differ, or an unknown record.
struct TypeError : InputError {
  using InputError::InputError;
};

using ObjId = std::uint32_t;
using MorId = std::uint32_t;

enum class ObjKind { under, tensor };

struct ObjNode {
  ObjKind kind = ObjKind::under;
  std::string name;
  ObjId left = 0, right = 0;
};

enum class MorKind { iota, comp, tensor, phi, phi_bar, psi, iso, tri, tri_bar };

struct MorNode {
  MorKind kind = MorKind::iota;
  std::string name;             // iso or triangle record
  std::array<ObjId, 3> objs{};  // iota: X; phi, phi_bar: X, Y, Z; psi: X, Y
  std::array<MorId, 2> kids{};  // comp: <kids[0] o kids[1]>; tensor: <kids[0] x kids[1]>
  ObjId dom = 0, cod = 0;
};

// Types of the generators, read off the records of a fragment.
struct Signature {
  std::vector<std::string> objects;
  std::map<std::string, std::pair<std::string, std::string>> isos;     // src, dst
  std::map<std::string, std::array<std::string, 3>> triangles;         // A, B, C
  static Signature of(const Fragment& frag);
};

// Hash-consed object and morphism words; equal words get equal ids.
class WordStore {
 public:
  explicit WordStore(Signature sig);

  ObjId under(const std::string& a);
  ObjId obj_tensor(ObjId x, ObjId y);

  MorId iota(ObjId x);
  MorId comp(MorId beta, MorId alpha);  // <beta o alpha>
  MorId mor_tensor(MorId a, MorId b);
  MorId phi(ObjId x, ObjId y, ObjId z);      // X(YZ) -> (XY)Z
  MorId phi_bar(ObjId x, ObjId y, ObjId z);  // (XY)Z -> X(YZ)
  MorId psi(ObjId x, ObjId y);
  MorId iso(const std::string& name);
  MorId tri(const std::string& name);      // B -> AC
  MorId tri_bar(const std::string& name);  // AC -> B

  const ObjNode& obj(ObjId x) const { return objs_.at(x); }
  const MorNode& mor(MorId a) const { return mors_.at(a); }
  ObjId dom(MorId a) const { return mors_.at(a).dom; }
  ObjId cod(MorId a) const { return mors_.at(a).cod; }
  const Signature& signature() const { return sig_; }

  // Nodes created so far, objects and morphisms together.
  std::size_t size() const { return objs_.size() + mors_.size(); }

  std::string show(ObjId x) const;
  std::string show_mor(MorId a) const;
  // S-expressions: A, (tensor X Y) for objects; (iota X), (comp b a), (tensor a b), (phi X Y Z),
  // (phibar X Y Z), (psi X Y), (iso i), (tri D), (tribar D) for morphisms.
  ObjId parse_obj(const std::string& text);
  MorId parse_mor(const std::string& text);

  // Same node kind with new children.
  MorId rebuild(MorId a, MorId k0, MorId k1);

 private:
  MorId intern(MorNode n);
  Signature sig_;
  std::vector<ObjNode> objs_;
  std::vector<MorNode> mors_;
  std::map<std::tuple<int, std::string, ObjId, ObjId>, ObjId> obj_index_;
  std::map<std::tuple<int, std::string, ObjId, ObjId, ObjId, MorId, MorId>, MorId> mor_index_;
};

// An equation read in both directions. Oriented rules are only used left to right during
// search; proofs may use either direction of any rule.
struct Rule {
  std::string name;
  bool oriented = false;
  std::function<std::optional<MorId>(WordStore&, MorId)> forward, backward;
};

// Instances of the admissible relation over the records of one fragment.
struct RuleSet {
  std::vector<Rule> rules;
  static RuleSet of(const Fragment& frag, WordStore& store);
  std::optional<std::size_t> find(const std::string& name) const;
};

struct Step {
  std::size_t rule = 0;
  std::vector<int> position;  // child indices from the root
  bool forward = true;
  bool operator==(const Step&) const = default;
};

struct EqProof {
  MorId from = 0, to = 0;
  std::vector<Step> steps;
};

// Applies one step; nothing if the rule does not match there or the types change.
std::optional<MorId> apply_step(WordStore& store, const RuleSet& rules, MorId word, const Step& s);
// Applies every step in order and checks that the result is proof.to.
bool replay(WordStore& store, const RuleSet& rules, const EqProof& proof);
// Chains proofs a -> b -> c.
EqProof concat(const EqProof& first, const EqProof& second);
std::string show_step(const RuleSet& rules, const Step& s);

enum class ProveStatus { equal, unknown };

struct ProveResult {
  ProveStatus status = ProveStatus::unknown;
  EqProof proof;
  std::size_t nodes = 0;  // words reached during the search
};

// Bidirectional breadth-first rewriting until the two sides meet or more than budget words were reached.
ProveResult prove_equal(WordStore& store, const RuleSet& rules, MorId a, MorId b, std::size_t budget);

// Value of a word under determinant data on the fragment.
Obj eval_obj(const DetData& d, const WordStore& store, ObjId x);
Mor eval_word(const DetData& d, const WordStore& store, MorId a);

struct RefuteResult {
  bool refuted = false;
  std::size_t model = 0;  // index of the first separating model
};

RefuteResult refute_equal(const std::vector<DetData>& models, const WordStore& store, MorId a, MorId b);

// One labelled instance of each clause of the admissible relation that the fragment supports.
struct AxiomInstance {
  std::string clause;
  MorId lhs = 0, rhs = 0;
};

std::vector<AxiomInstance> axiom_instances(const Fragment& frag, WordStore& store);

// Grothendieck group of the fragment: iso classes of objects modulo (B) - (A) - (C).
struct K0Result {
  GroupForm group;
  std::vector<std::string> generators;  // one representative per iso class
  std::size_t relations = 0;
  std::map<std::string, std::vector<BigInt>> classes;  // canonical coordinates per object
};

K0Result k0(const Fragment& frag);

// lambda(X) = prod chi_k^{x_k} for the class x of X; chi gives the image of each canonical
// basis element of K0 and must respect its order.
DetMorphism twist(const Fragment& frag, const K0Result& k, const PicardModel& m, const std::vector<Elt>& chi);

struct K1Probe {
  std::string model;
  std::vector<Elt> hits;       // values of the automorphism words tried
  std::vector<Elt> subgroup;   // generated subgroup of pi_1, sorted
  std::size_t pi1_order = 0;
  std::size_t eps_checks = 0;  // recorded -id isomorphisms compared with eps
  std::vector<std::string> eps_failures;
};

// Lower bound for the image of K_1 in each model: automorphism isos, differences of parallel
// isos, triangle loops and eps of objects.
std::vector<K1Probe> k1_probe(const Fragment& frag, const std::vector<DetData>& models);

}  // namespace detfun
