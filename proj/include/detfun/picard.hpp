#pragma once

#include "detfun/linalg.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace detfun {

// Skeletal Picard categories: Hom(X, Y) is empty unless X == Y, and every
// automorphism group is canonically the same abelian group pi_1. A morphism is
// therefore an object together with a pi_1 element.
using Obj = std::vector<long long>;
using Elt = std::vector<long long>;

struct Mor {
  Obj obj;
  Elt val;
  bool operator==(const Mor&) const = default;
};

class PicardModel {
 public:
  virtual ~PicardModel() = default;

  // Canonical textual model spec, e.g. "gradedline:5".
  virtual std::string spec() const = 0;

  virtual bool valid_obj(const Obj& x) const = 0;
  virtual Obj tensor_obj(const Obj& x, const Obj& y) const = 0;
  virtual Obj inverse_obj(const Obj& x) const = 0;
  virtual Obj neutral() const = 0;

  virtual bool valid_elt(const Elt& a) const = 0;
  virtual Elt one() const = 0;
  virtual Elt mul(const Elt& a, const Elt& b) const = 0;
  virtual Elt inv(const Elt& a) const = 0;

  // Values of phi(X,Y,Z): X(YZ) -> (XY)Z and psi(X,Y): XY -> YX.
  virtual Elt phi_val(const Obj& x, const Obj& y, const Obj& z) const = 0;
  virtual Elt psi_val(const Obj& x, const Obj& y) const = 0;

  virtual GroupForm pi0_form() const = 0;
  // Canonical pi_0 coordinates of an object.
  virtual std::vector<BigInt> pi0_coords(const Obj& x) const = 0;
  virtual GroupForm pi1_form() const = 0;
  virtual std::vector<Elt> pi1_elements() const = 0;
  virtual std::vector<Elt> pi1_generators() const = 0;

  virtual std::string show_obj(const Obj& x) const;
  virtual std::string show_elt(const Elt& a) const;

  Elt pow(const Elt& a, long long e) const;
  void require_obj(const Obj& x, const char* where) const;
  void require_elt(const Elt& a, const char* where) const;
};

using ModelPtr = std::shared_ptr<const PicardModel>;

// Objects are degrees, pi_1 = F_p^*, psi(n, m) = (-1)^{nm}, phi trivial.
class GradedLine final : public PicardModel {
 public:
  explicit GradedLine(std::uint32_t p);
  std::uint32_t prime() const { return p_; }

  std::string spec() const override;
  bool valid_obj(const Obj& x) const override { return x.size() == 1; }
  Obj tensor_obj(const Obj& x, const Obj& y) const override;
  Obj inverse_obj(const Obj& x) const override { return {-x.at(0)}; }
  Obj neutral() const override { return {0}; }
  bool valid_elt(const Elt& a) const override;
  Elt one() const override { return {1}; }
  Elt mul(const Elt& a, const Elt& b) const override;
  Elt inv(const Elt& a) const override;
  Elt phi_val(const Obj&, const Obj&, const Obj&) const override { return one(); }
  Elt psi_val(const Obj& x, const Obj& y) const override;
  GroupForm pi0_form() const override;
  std::vector<BigInt> pi0_coords(const Obj& x) const override { return {BigInt(x.at(0))}; }
  GroupForm pi1_form() const override;
  std::vector<Elt> pi1_elements() const override;
  std::vector<Elt> pi1_generators() const override;

 private:
  std::uint32_t p_;
  Fp generator_;
};

// Objects are elements of a finitely generated abelian group A0, automorphisms
// are elements of a finite abelian group A1, and psi is the bilinear form
// b(x, y) = sum_k x_k y_k eps(e_k) in the canonical basis of A0.
class DiscretePicard final : public PicardModel {
 public:
  // eps_rows[i] is the image of the i-th A0 generator, in A1 generator coordinates.
  DiscretePicard(std::size_t a0_gens, const MatZ& a0_relations, std::size_t a1_gens, const MatZ& a1_relations,
                 const std::vector<std::vector<long long>>& eps_rows);
  // Cyclic factors; an order of 0 means Z.
  static DiscretePicard cyclic(const std::vector<long long>& a0_orders, const std::vector<long long>& a1_orders,
                               const std::vector<std::vector<long long>>& eps_rows);

  std::string spec() const override { return spec_; }
  bool valid_obj(const Obj& x) const override;
  Obj tensor_obj(const Obj& x, const Obj& y) const override;
  Obj inverse_obj(const Obj& x) const override;
  Obj neutral() const override { return Obj(a0_.moduli.size(), 0); }
  bool valid_elt(const Elt& a) const override;
  Elt one() const override { return Elt(a1_.moduli.size(), 0); }
  Elt mul(const Elt& a, const Elt& b) const override;
  Elt inv(const Elt& a) const override;
  Elt phi_val(const Obj&, const Obj&, const Obj&) const override { return one(); }
  Elt psi_val(const Obj& x, const Obj& y) const override;
  GroupForm pi0_form() const override { return a0_; }
  std::vector<BigInt> pi0_coords(const Obj& x) const override;
  GroupForm pi1_form() const override { return a1_; }
  std::vector<Elt> pi1_elements() const override;
  std::vector<Elt> pi1_generators() const override;

  // Object from A0 generator coordinates / element from A1 generator coordinates.
  Obj obj_from_generators(const std::vector<long long>& x) const;
  Elt elt_from_generators(const std::vector<long long>& x) const;

 private:
  Obj reduce_obj(Obj x) const;
  Elt reduce_elt(Elt a) const;

  GroupForm a0_, a1_;
  std::vector<Elt> eps_basis_;  // eps of each canonical A0 basis element
  std::string spec_;
};

// "gradedline:P" or "discrete:a0=...;a1=...;eps=..." (cyclic orders comma-separated,
// eps rows per A0 generator separated by '/').
ModelPtr parse_model(const std::string& spec);

Mor identity(const PicardModel& m, const Obj& x);
Mor compose(const PicardModel& m, const Mor& second, const Mor& first);
Mor tensor(const PicardModel& m, const Mor& a, const Mor& b);
Mor inverse(const PicardModel& m, const Mor& a);
Mor phi(const PicardModel& m, const Obj& x, const Obj& y, const Obj& z);
Mor phi_inv(const PicardModel& m, const Obj& x, const Obj& y, const Obj& z);
Mor psi(const PicardModel& m, const Obj& x, const Obj& y);
Elt epsilon(const PicardModel& m, const Obj& x);

// Bracketings of tensor products of a list of objects, for coherence isomorphisms.
struct Bracket {
  int leaf = -1;  // index into the object list, or -1 for a pair
  std::shared_ptr<const Bracket> left, right;

  static Bracket of(int i);
  static Bracket pair(Bracket l, Bracket r);
  // a_0 (a_1 (... a_{n-1})) over the given leaf order.
  static Bracket right_nested(const std::vector<int>& leaves);
  std::vector<int> leaves() const;
  Obj object(const PicardModel& m, const std::vector<Obj>& objs) const;
};

// The coherence isomorphism from the src bracketing to the dst bracketing, whose
// leaves are a permutation of src's; built from phi and psi only.
Mor reorder(const PicardModel& m, const std::vector<Obj>& objs, const Bracket& src, const Bracket& dst);

struct Report {
  bool ok = true;
  std::vector<std::string> failures;
  void fail(std::string what) {
    ok = false;
    failures.push_back(std::move(what));
  }
};

// psi^2, pentagon and hexagon on all tuples of probe objects; stops at the first failure.
Report check_picard_axioms(const PicardModel& m, const std::vector<Obj>& probes);

struct Unit {
  ModelPtr model;
  Obj obj;
  Elt delta;  // value of delta: U -> U (x) U

  Mor lambda(const Obj& x) const;  // X -> U (x) X
  Mor rho(const Obj& x) const;     // X -> X (x) U
  Mor delta_mor() const { return {model->tensor_obj(obj, obj), delta}; }
};

Unit unit_of(ModelPtr m, const Obj& u, const Elt& delta);
Report check_unit(const Unit& u, const std::vector<Obj>& probes);
Unit unit_product(const Unit& a, const Unit& b);
// The unique unit morphism a -> b, if the candidate alpha is one.
bool is_unit_morphism(const Unit& a, const Unit& b, const Elt& alpha);
Elt unit_morphism(const Unit& a, const Unit& b);

struct MonoidalFunctorSpec {
  ModelPtr src, dst;
  std::function<Obj(const Obj&)> on_obj;
  // Image of an automorphism val of x.
  std::function<Elt(const Obj&, const Elt&)> on_mor;
  // Value of c(X, Y): M(X) (x) M(Y) -> M(X (x) Y).
  std::function<Elt(const Obj&, const Obj&)> coherence;
};

MonoidalFunctorSpec compose_functors(const MonoidalFunctorSpec& second, const MonoidalFunctorSpec& first);
MonoidalFunctorSpec identity_functor(ModelPtr m);

Report check_monoidal(const MonoidalFunctorSpec& f, const std::vector<Obj>& probes);

struct InducedMaps {
  MatZ pi0;  // rows: canonical pi_0 basis of the source, in target pi_0 coordinates
  std::vector<std::pair<Elt, Elt>> pi1;  // full table on pi_1 of the source
  bool pi0_iso = false;
  bool pi1_iso = false;
  bool equivalence() const { return pi0_iso && pi1_iso; }
};

InducedMaps induced_pi_maps(const MonoidalFunctorSpec& f);

}  // namespace detfun
