#pragma once

#include "detfun/complexes.hpp"
#include "detfun/graded.hpp"
#include "detfun/picard.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace detfun {

struct IsoRecord {
  std::string name, src, dst;
  std::optional<std::string> inverse;
  bool operator==(const IsoRecord&) const = default;
};

// A -a-> B -b-> C -c-> TA, or a short exact sequence A -> B -> C in an exact fragment.
struct TriangleRecord {
  std::string name, A, B, C;
  std::string a, b, c;  // map labels
  bool operator==(const TriangleRecord&) const = default;
};

// h1 = A->B->C', h2 = A->C->B', v1 = B->C->A', v2 = C'->B'->A'.
struct OctahedronRecord {
  std::string name, h1, h2, v1, v2;
  bool operator==(const OctahedronRecord&) const = default;
};

// d1 = A -> S -> B and d2 = B -> S -> A with the canonical maps.
struct SumRecord {
  std::string name, A, B, S, d1, d2;
  bool operator==(const SumRecord&) const = default;
};

// Isomorphisms a, b, c (iso record names) from triangle `from` to triangle `to`.
struct TriangleIsoRecord {
  std::string name, from, to, a, b, c;
  bool operator==(const TriangleIsoRecord&) const = default;
};

enum class FragmentKind { triangulated, exact };

struct Fragment {
  FragmentKind kind = FragmentKind::triangulated;
  std::uint32_t prime = 2;
  std::vector<std::string> objects;
  std::map<std::string, std::string> translation;  // partial, injective
  std::vector<IsoRecord> isos;
  std::vector<TriangleRecord> triangles;
  std::vector<OctahedronRecord> octahedra;
  std::vector<SumRecord> sums;
  std::vector<TriangleIsoRecord> triangle_isos;

  // Optional concrete payload: complexes or graded objects per object name, maps per label.
  std::map<std::string, Complex> complexes;
  std::map<std::string, ChainMap> maps;
  std::map<std::string, GradedObject> graded_objects;
  std::map<std::string, GradedMap> graded_maps;

  // Throws InputError naming the first unresolved reference or shape violation.
  void validate() const;

  bool has_object(const std::string& n) const;
  const IsoRecord& iso(const std::string& n) const;
  const TriangleRecord& triangle(const std::string& n) const;

  bool operator==(const Fragment&) const = default;
};

struct DetData {
  ModelPtr model;
  std::map<std::string, Obj> f1_obj;
  std::map<std::string, Elt> f1_iso;
  std::map<std::string, Elt> f2;  // value of f2(D) : f1(B) -> f1(A) (x) f1(C)
};

// Per-object components lambda_A : f(A) -> g(A).
using DetMorphism = std::map<std::string, Elt>;

// Throws IncompleteData listing every missing assignment, and InputError on shape violations.
void require_complete(const Fragment& frag, const DetData& d);

Report check_det_axioms(const Fragment& frag, const DetData& d);
Report check_exact_det_axioms(const Fragment& frag, const DetData& d);
Report check_det_morphism(const Fragment& frag, const DetData& d, const DetData& e, const DetMorphism& lambda);

struct UnitOracle {
  Unit unit;
  Report report;
};

// ([0], delta_0) from the triangle 0 -> 0 -> 0; also checks that recorded isomorphisms
// between zero objects are unit morphisms.
UnitOracle zero_unit_oracle(const Fragment& frag, const DetData& d, const std::string& zero);
// ([A] (x) [TA], mu_A) from A -> 0 -> TA; checks compatibility with recorded triangles whose
// translates are recorded as well.
UnitOracle mu_unit_oracle(const Fragment& frag, const DetData& d, const std::string& a);

// Image of determinant data under a monoidal functor.
DetData push_forward(const Fragment& frag, const DetData& d, const MonoidalFunctorSpec& f);

// Records concrete complexes, maps and diagrams under generated names.
class FragmentBuilder {
 public:
  explicit FragmentBuilder(std::uint32_t p);

  std::string object(const Complex& a);
  std::string iso(const ChainMap& f);
  std::string triangle(const Triangle& t);
  std::string octahedron(const Octahedron& o);
  // Both sum triangles of A and B.
  std::string sum(const Complex& a, const Complex& b);
  std::string triangle_iso(const TriangleIso& t);
  // A -> 0 -> TA and the zero triangle.
  std::string mu_triangle(const Complex& a);
  std::string zero_triangle();

  const Fragment& fragment() const { return frag_; }
  const std::map<std::string, Triangle>& triangles() const { return tris_; }

 private:
  std::string label(const ChainMap& f);

  Fragment frag_;
  std::map<std::string, Triangle> tris_;
  std::size_t next_map_ = 0;
};

// Same for exact fragments of graded objects.
class ExactFragmentBuilder {
 public:
  explicit ExactFragmentBuilder(std::uint32_t p);

  std::string object(const GradedObject& a);
  std::string iso(const GradedMap& f);
  std::string ses(const GradedSes& s);
  // A subset B subset C: h1 = A->B->B/A, h2 = A->C->C/A, v1 = B->C->C/B, v2 = B/A->C/A->C/B.
  std::string associativity(const GradedSes& h1, const GradedSes& h2, const GradedSes& v1, const GradedSes& v2);
  std::string sum(const GradedObject& a, const GradedObject& b);
  std::string ses_iso(const GradedSes& from, const GradedSes& to, const GradedMap& a, const GradedMap& b,
                      const GradedMap& c);

  const Fragment& fragment() const { return frag_; }
  const std::map<std::string, GradedSes>& sequences() const { return seqs_; }

 private:
  std::string label(const GradedMap& f);

  Fragment frag_;
  std::map<std::string, GradedSes> seqs_;
  std::size_t next_map_ = 0;
};

// Cones of random maps with their octahedra, sums, rebased copies with the comparison
// isomorphisms, shifted copies and A -> 0 -> TA.
FragmentBuilder random_triangle_fragment(Rng& rng, std::uint32_t p, int rounds, int max_window, std::size_t max_dim);

// Evaluates f on every record of a fragment built from complexes.
DetData evaluate(const Fragment& frag, const TriangleDet& f);

}  // namespace detfun
