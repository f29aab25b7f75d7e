#pragma once

#include "detfun/complexes.hpp"
#include "detfun/fragments.hpp"
#include "detfun/graded.hpp"
#include "detfun/picard.hpp"

#include <functional>

namespace detfun {

// Determinant data on the heart: finite-dimensional F_p-spaces, their automorphisms
// and short exact sequences.
struct ExactDet {
  ModelPtr model;
  std::uint32_t prime = 2;
  std::function<Obj(std::size_t)> obj;
  std::function<Elt(const MatFp&)> iso;
  std::function<Elt(const VectSes&)> ses;
};

// Determinant data on bounded graded spaces, with unit structures on g1(A) (x) g1(TA).
struct DetWithTranslation {
  ModelPtr model;
  std::uint32_t prime = 2;
  std::function<Obj(const GradedObject&)> obj;
  std::function<Elt(const GradedMap&)> iso;
  std::function<Elt(const GradedSes&)> ses;
  std::function<Unit(const GradedObject&)> mu;
};

// X -> X* with a unit structure on X (x) X*. In a skeletal model X* is forced to be the
// inverse object, so only the unit structure is a choice.
struct RightInverseChooser {
  std::function<Elt(const Obj&)> delta;
};

RightInverseChooser default_chooser(const ModelPtr& m);

// Dimension, determinant, and det[in | s]^{-1} for any section s of the quotient map.
ExactDet vect_det(std::uint32_t p);

// Unit structure on X (x) X*, the map alpha* and the canonical (X (x) Y)* -> X* (x) Y*.
Unit chosen_unit(const ModelPtr& m, const RightInverseChooser& ch, const Obj& x);
Elt star(const ModelPtr& m, const RightInverseChooser& ch, const Obj& x, const Obj& y, const Elt& alpha);
Elt kappa(const ModelPtr& m, const RightInverseChooser& ch, const Obj& x, const Obj& y);

// Even and odd parts as direct sums in increasing degree.
std::size_t even_part(const GradedObject& a);
std::size_t odd_part(const GradedObject& a);
MatFp parity_part(const GradedMap& f, int parity);

DetWithTranslation functor_R(const ExactDet& f, const RightInverseChooser& ch);
// Restriction to spaces concentrated in degree 0.
ExactDet functor_W(const DetWithTranslation& g);

// Sum of T^{-i} A_i with zero differentials.
Complex functor_J(const GradedObject& a);
ChainMap functor_J(const GradedMap& f);
// J(A) -> J(B) -> J(C) -> TJ(A); the connecting map is zero since every sequence of
// vector spaces splits.
Triangle functor_J_ses(const GradedSes& s);

// The unit ([A] (x) [TA], mu_A) induced by f from A -> 0 -> TA.
Unit triangle_mu(const TriangleDet& f, const Complex& a);

DetWithTranslation functor_V(const TriangleDet& f, std::uint32_t p);
TriangleDet functor_Hstar(const DetWithTranslation& g);

// Evaluation on exact fragments: graded objects for DetWithTranslation, spaces
// concentrated in degree 0 for ExactDet.
DetData evaluate(const Fragment& frag, const DetWithTranslation& g);
DetData evaluate(const Fragment& frag, const ExactDet& f);

// Exact axioms on the fragment, plus unit-morphism conditions for every iso record and
// every sequence record against its translate.
Report check_translation_det(const Fragment& frag, const DetWithTranslation& g);

// Components of the comparison isomorphisms.
Elt witness_WR(const ExactDet& f, const RightInverseChooser& ch, std::size_t n);         // f -> W(R(f))
Elt witness_RW(const DetWithTranslation& g, const RightInverseChooser& ch, const GradedObject& a);  // g -> R(W(g))
Elt witness_VH(const DetWithTranslation& g, const GradedObject& a);                      // g -> V(H*(g))
Elt witness_HV(const TriangleDet& f, const Complex& a);                                  // f -> H*(V(f))

// Each check builds both sides on the fragment and verifies that the witness is a morphism
// of determinant data; the translation checks also verify compatibility with mu.
Report check_composite_WR(const Fragment& vect_frag, const ExactDet& f, const RightInverseChooser& ch);
Report check_composite_RW(const Fragment& graded_frag, const DetWithTranslation& g, const RightInverseChooser& ch);
Report check_composite_VHstar(const Fragment& graded_frag, const DetWithTranslation& g);
Report check_composite_HstarV(const Fragment& frag, const TriangleDet& f);

// Random graded data for probing.
GradedObject random_graded(Rng& rng, std::uint32_t p, int max_window, std::size_t max_dim, int lo_min = -2, int spread = 3);
GradedMap random_graded_iso(Rng& rng, const GradedObject& a);
// A -> B -> C with B = A + C twisted by a random automorphism.
GradedSes random_graded_ses(Rng& rng, const GradedObject& a, const GradedObject& c);
// Random sequences with their translates, sums, isomorphisms and sequence isomorphisms; with
// degree0 set every object is concentrated in degree 0 and translates are omitted.
Fragment random_graded_fragment(Rng& rng, std::uint32_t p, int rounds, bool degree0);

}  // namespace detfun
