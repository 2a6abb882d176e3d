#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ocf/nilpotent.hpp"

namespace ocf {

/// A Q-filtration: descending chain X^{>=a} with Q vanishing on X^{>=a} and
/// X^{>=1-a} = (X^{>=a})^perp for a >= 1.
struct QFiltration {
  QuadSpace space;
  int lo = 0;                   // X^{>=a} = V for a <= lo
  std::vector<Subspace> chain;  // chain[i] = X^{>= lo+i}; last entry is 0

  const Subspace& at(int a) const;
  int f(int a) const;    // dim gr^a
  int amax() const;      // largest a >= 0 with f(a) > 0
  std::vector<int> fvec() const;  // f(0), f(1), ..., f(amax)
  friend bool operator==(const QFiltration& x, const QFiltration& y) {
    return x.space.gram_upper == y.space.gram_upper && x.lo == y.lo && x.chain == y.chain;
  }
};

/// Builds the full filtration from its positive part (X^{>=a} for a >= 1,
/// weakly descending totally singular subspaces); negative degrees are the
/// perps forced by the Q-filtration law.
QFiltration from_positive_chain(const QuadSpace& s, const std::vector<Subspace>& positive);

bool is_qfiltration(const QFiltration& x);

/// The canonical filtration of N (unique adapted Q-filtration).  For p = 2
/// the recursion reduces by the line L with index windows depending on
/// whether the top functional λ_e vanishes; for p odd the window is always
/// [2-e, e-1].
QFiltration canonical_filtration(const NilpotentWitness& w);

/// N respects the filtration with degree shift 2 and induces a graded map
/// satisfying the nondegeneracy conditions (symplectic on odd negative
/// degrees, quadratic-with-injective-radical on even ones).
bool is_adapted(const QFiltration& x, const NilpotentWitness& w);

/// Enumerates every Q-filtration with support in [1-D, D-1] (any filtration
/// with wider support fails adaptedness for dimension reasons).
void for_each_qfiltration(const QuadSpace& s, const std::function<void(const QFiltration&)>& fn);

/// Exhaustive check that exactly one Q-filtration is adapted to w and that
/// it equals canonical_filtration(w).
bool verify_uniqueness(const NilpotentWitness& w);

/// The label of a piece: graded dimensions plus, when D is even and f0 = 0,
/// the connected component (0/1) of the middle totally singular subspace.
struct PieceLabel {
  std::vector<int> f;  // f[a] for a = 0..amax (symmetric part implied)
  int component = -1;  // 0/1 when D even and f[0] == 0, else -1
  std::string str() const;
  friend bool operator==(const PieceLabel&, const PieceLabel&) = default;
  bool operator<(const PieceLabel& o) const {
    return std::tie(f, component) < std::tie(o.f, o.component);
  }
};

PieceLabel piece_label(const QFiltration& x);

/// All admissible labels for dimension D and type (+1/-1 even D, 0 odd D):
/// f symmetric, sum D, even-degree dims weakly decreasing, odd-degree dims
/// weakly decreasing and even.  f0 = 0 labels carry components for eta = +1
/// and are dropped for eta = -1.
std::vector<PieceLabel> admissible_labels(int D, int type);

/// Refined label (p = 2, f0 > 0): for each odd i that occurs as f_a with a
/// even, the radical line L_i of the image Z_i of gr^{-a} in gr^0; S groups
/// the i with equal lines.
struct ClassLabel {
  PieceLabel piece;
  std::vector<std::vector<int>> s;  // partition blocks, sorted
  std::string str() const;
  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
  bool operator<(const ClassLabel& o) const {
    return std::tie(piece, s) < std::tie(o.piece, o.s);
  }
};

ClassLabel class_label(const QFiltration& x, const NilpotentWitness& w);

/// Direct sum splitting V = ⊕ X^a refining the filtration with
/// ⟨X^a, X^b⟩ = 0 for a+b != 0 and Q|_{X^a} = 0 for a != 0.  Under it the
/// graded quadratic space (gr, Qbar) is identified with (V, Q).
struct GradedSplitting {
  QuadSpace space;
  std::vector<int> degs;   // ascending degrees with f > 0
  std::vector<Mat> comp;   // comp[i]: f_a x D basis rows of X^{degs[i]}
  std::vector<Mat> dual;   // dual[i]: f_a x D coordinate functionals
  int index_of(int a) const;
};

GradedSplitting split_filtration(const QFiltration& x);

/// The matrix of proj_b ∘ n ∘ incl_a in the splitting's block bases.
Mat block_map(const GradedSplitting& gs, const Mat& n, int a, int b);
/// The degree-2 graded part of n as an ambient matrix.
Mat graded_part(const GradedSplitting& gs, const Mat& n);

/// T maps X^a into X^{a+2}, is skew across the pairings of complementary
/// degrees, and has ⟨x,Tx⟩ = 0 on X^{-1} — the membership conditions for a
/// graded degree-2 map in the graded Lie algebra.
bool graded_compatible(const GradedSplitting& gs, const Mat& t);

/// Solves the level-k systems to produce N with graded part T; T must
/// satisfy graded_compatible.
Mat lift_graded(const GradedSplitting& gs, const Mat& t);

/// Enumeration of SO_Q with guarded breadth-first closure.
struct SOEnum {
  unsigned long long order = 0;
  std::vector<Mat> so_generators;
  std::vector<Mat> unipotents;
};
SOEnum enumerate_so(const QuadSpace& s, unsigned long long guard = 10000000ULL);

struct PieceTally {
  PieceLabel label;
  unsigned long long count = 0;
};
struct TheoremReport {
  unsigned long long so_order = 0;
  unsigned long long unipotent_count = 0;
  std::vector<PieceTally> pieces;  // sorted by label
  bool all_adapted = false;
  bool uniqueness_ok = true;  // only meaningful when check_uniqueness
};
/// Every unipotent of SO_Q gets an adapted canonical filtration; tallies
/// the pieces.  check_uniqueness additionally runs the exhaustive
/// Q-filtration search for each element (small spaces only).
TheoremReport verify_theorem_1_7(const QuadSpace& s, bool check_uniqueness = false,
                                 unsigned long long guard = 10000000ULL);

struct OrbitTally {
  std::string label;  // full label: piece [+ component] [+ S]
  std::vector<unsigned long long> orbit_sizes;
};
struct ClassReport {
  std::vector<OrbitTally> labels;
  bool label_constant_on_orbits = false;
};
/// Conjugation orbits of unipotents under SO_Q, grouped by full label.
ClassReport class_partition(const QuadSpace& s, unsigned long long guard = 10000000ULL);

/// Full label of a single unipotent (piece, component, S where defined).
std::string unipotent_label(const QuadSpace& s, const Mat& u);

/// The nilpotent-algebra shadow of a unipotent: the graded part of u-1 seen
/// as a skew (alternating) nilpotent in the Lie algebra, with its Jordan
/// type and the per-size bits recording whether Q(nabla^{i-1} x) vanishes
/// identically on ker nabla^i.
struct Shadow {
  Mat nabla;
  std::vector<int> c;
  std::vector<int> qbits;
};
Shadow nilpotent_shadow(const QuadSpace& s, const Mat& u);

}  // namespace ocf
