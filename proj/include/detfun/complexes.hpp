#pragma once

#include "detfun/graded.hpp"
#include "detfun/linalg.hpp"
#include "detfun/picard.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace detfun {

// Bounded cochain complex of finite-dimensional F_p-spaces; d^i : A^i -> A^{i+1}.
// The window is trimmed to the nonzero terms; the zero complex has an empty window.
class Complex {
 public:
  Complex() = default;
  // diffs[k] is d^{lo+k}; missing trailing differentials are zero.
  Complex(std::uint32_t p, int lo, std::vector<std::size_t> dims, std::vector<MatFp> diffs);
  static Complex zero(std::uint32_t p);
  static Complex concentrated(std::uint32_t p, int degree, std::size_t dim);
  // Zero differentials.
  static Complex from_graded(const GradedObject& a);

  std::uint32_t prime() const { return p_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(dims_.size()) - 1; }
  bool is_zero() const { return dims_.empty(); }
  std::size_t dim(int i) const;
  MatFp diff(int i) const;
  GradedObject terms() const { return {p_, lo_, dims_}; }
  std::size_t total_dim() const;

  bool operator==(const Complex& o) const;
  std::string to_string() const;

 private:
  std::uint32_t p_ = 2;
  int lo_ = 0;
  std::vector<std::size_t> dims_;
  std::vector<MatFp> diffs_;  // d^{lo} .. d^{hi-1}
};

class ChainMap {
 public:
  ChainMap() = default;
  ChainMap(Complex src, Complex tgt, std::map<int, MatFp> comps);
  static ChainMap identity(const Complex& a);
  static ChainMap zero(const Complex& a, const Complex& b);

  const Complex& src() const { return src_; }
  const Complex& tgt() const { return tgt_; }
  MatFp comp(int i) const;

  bool operator==(const ChainMap& o) const;

 private:
  Complex src_, tgt_;
  std::map<int, MatFp> comps_;
};

// (T^k A)^i = A^{i+k}, d_{TA} = -d_A; (Tf)^i = f^{i+1}.
Complex shift(const Complex& a, int k = 1);
ChainMap shift(const ChainMap& f, int k = 1);

ChainMap compose(const ChainMap& second, const ChainMap& first);
ChainMap add(const ChainMap& f, const ChainMap& g);
ChainMap scale(const ChainMap& f, Fp s);
ChainMap negate(const ChainMap& f);

// h^i : A^i -> B^{i-1}
using Homotopy = std::map<int, MatFp>;

// Some h with d h + h d = f - g, if one exists.
std::optional<Homotopy> find_homotopy(const ChainMap& f, const ChainMap& g);
bool is_homotopic(const ChainMap& f, const ChainMap& g);
bool is_null_homotopic(const ChainMap& f);

enum class Provenance { cone, sum, transported };
std::string to_string(Provenance p);

// A -> B -> C -> TA.
struct Triangle {
  ChainMap a, b, c;
  Provenance provenance = Provenance::cone;

  const Complex& A() const { return a.src(); }
  const Complex& B() const { return a.tgt(); }
  const Complex& C() const { return b.tgt(); }
};

// Shapes match and the three composites are null-homotopic.
bool has_triangle_shape(const Triangle& t);

Triangle cone(const ChainMap& f);
// A -> A + B -> B -> TA with zero connecting map.
Triangle sum_triangle(const Complex& a, const Complex& b);
// B -> A + B -> A with the canonical inclusion and projection.
Triangle sum_triangle_swapped(const Complex& a, const Complex& b);
// B -> C -> TA -> TB with last map -Ta.
Triangle rotate(const Triangle& t);
// TA -> TB -> TC -> T^2 A with last map -Tc.
Triangle shift_triangle(const Triangle& t);

// Maps (alpha, beta, gamma) between the bases of two triangles.
struct TriangleIso {
  Triangle from, to;
  ChainMap alpha, beta, gamma;
};

// Squares commute up to homotopy and the three maps are quasi-isomorphisms.
bool is_triangle_iso(const TriangleIso& t);

// Canonical cohomology bases: RREF kernel basis of d^i, greedily reduced modulo im d^{i-1}.
class Cohomology {
 public:
  explicit Cohomology(const Complex& a);
  const Complex& complex() const { return a_; }
  GradedObject graded() const;
  std::size_t dim(int i) const;
  // Columns are cycles representing the basis of H^i.
  MatFp reps(int i) const;
  // Coordinates of the classes of the given cycles (columns) in the basis of H^i.
  MatFp classes(int i, const MatFp& cycles) const;

 private:
  Complex a_;
  std::map<int, MatFp> reps_, solver_;
};

GradedObject cohomology(const Complex& a);
GradedMap h_map(const ChainMap& f);
GradedMap h_map(const ChainMap& f, const Cohomology& hs, const Cohomology& ht);
bool is_quasi_iso(const ChainMap& f);

struct Truncation {
  Complex complex;
  ChainMap map;
};

// tau_{<=i} A -> A, with ker d^i in degree i.
Truncation truncate_le(const Complex& a, int i);
// A -> tau_{>i} A, with coker d^i in degree i+1.
Truncation truncate_gt(const Complex& a, int i);
// tau_{<=i} A -> A -> tau_{>i} A -> T tau_{<=i} A; the connecting map is zero.
Triangle truncation_triangle(const Complex& a, int i);

// Diagram with h1 = A->B->C'->TA, h2 = A->C->B'->TA, v1 = B->C->A'->TB, v2 = C'->B'->A'->TC'.
struct Octahedron {
  Triangle h1, h2, v1, v2;
};

// For composable u : A -> B and v : B -> C, the cone octahedron.
Octahedron octahedron_of(const ChainMap& u, const ChainMap& v);
// Failures of the commutativity and composite conditions, checked on the nose.
std::vector<std::string> octahedron_defects(const Octahedron& o);

// 3x3 diagram: rows A'->B'->C', A->B->C, A''->B''->C''; columns A'->A->A'', B'->B->B'', C'->C->C''.
struct NineTerm {
  Triangle row[3];
  Triangle col[3];
};

// For a commutative square beta u' = u alpha with u' : A'->B', u : A->B, alpha : A'->A, beta : B'->B.
NineTerm nine_term_of(const ChainMap& u_top, const ChainMap& u, const ChainMap& alpha, const ChainMap& beta);
std::vector<std::string> nine_term_defects(const NineTerm& n);

// Determinant data on the homotopy category: f1 on objects and quasi-isomorphisms,
// f2 on distinguished triangles, valued in a skeletal Picard model.
struct TriangleDet {
  ModelPtr model;
  std::function<Obj(const Complex&)> obj;
  std::function<Elt(const ChainMap&)> iso;
  std::function<Elt(const Triangle&)> tri;
};

// Graded-line determinant: degree chi(A), det of cohomology on quasi-isomorphisms,
// and the splitting composite on triangles.
Obj det_graded(const Complex& a);
Elt det_graded_iso(const ChainMap& f);
Elt det_graded_triangle(const Triangle& t);
TriangleDet det_graded_functor(std::uint32_t p);

using Rng = std::mt19937_64;

// Random complex whose window starts in [lo_min, lo_min + spread] and has length <= max_window.
Complex random_complex(Rng& rng, std::uint32_t p, int max_window, std::size_t max_dim, int lo_min = -2, int spread = 3);
ChainMap random_chain_map(Rng& rng, const Complex& a, const Complex& b);
// A complex isomorphic to a by a random change of basis, and the isomorphism.
ChainMap random_rebase(Rng& rng, const Complex& a);
MatFp random_invertible(Rng& rng, std::uint32_t p, std::size_t n);
MatFp random_matrix(Rng& rng, std::uint32_t p, std::size_t rows, std::size_t cols);

}  // namespace detfun
