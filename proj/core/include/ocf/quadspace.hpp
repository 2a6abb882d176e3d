#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ocf/linalg.hpp"

namespace ocf {

enum class SpaceKind { Split, Nonsplit, Odd };

/// A finite-dimensional space with a quadratic form Q, its polarization
/// ⟨x,y⟩ = Q(x+y) − Q(x) − Q(y), the radical of the polarization, and the
/// Witt type (+1 split / −1 nonsplit for even dimension, 0 for odd).
struct QuadSpace {
  const FieldCtx* F = nullptr;
  int D = 0;
  Mat gram_upper;    // upper triangular; Q(x) = x^T gram_upper x
  Mat bilinear;      // gram_upper + gram_upper^T
  Subspace radical;  // radical of the bilinear form
  int type = 0;      // +1, -1 (D even) or 0 (D odd)

  uint8_t Q(const Vec& x) const;
  uint8_t B(const Vec& x, const Vec& y) const;
};

/// Builds the derived fields (bilinear, radical, type) from gram_upper and
/// checks nondegeneracy: Q has zero kernel on the radical.  Throws if the
/// form is degenerate.
QuadSpace make_quad_space(const FieldCtx* F, const Mat& gram_upper);

/// Standard models: split = hyperbolic planes Q(x,y)=xy; nonsplit = planes
/// plus one anisotropic plane x^2+xy+dy^2; odd D = planes plus a line z^2.
QuadSpace standard_space(const FieldCtx* F, int D, SpaceKind kind);

/// Descriptor strings "D4+", "D4-", "D3": returns (dimension, kind).
std::pair<int, SpaceKind> parse_space_desc(const std::string& desc);
std::string space_desc(const QuadSpace& s);

Subspace perp(const QuadSpace& s, const Subspace& w);
bool is_totally_singular(const QuadSpace& s, const Subspace& w);

/// Greedy Witt decomposition.  pairs[i] = (e_i, f_i) hyperbolic, aniso
/// spans the anisotropic kernel, plus the radical.
struct WittDecomposition {
  std::vector<std::pair<Vec, Vec>> pairs;
  std::vector<Vec> aniso;
};
WittDecomposition witt_decompose(const QuadSpace& s);

/// +1 iff a totally singular D/2-dimensional subspace exists.  D even only.
int witt_type(const QuadSpace& s);

/// A maximal totally singular subspace (the span of the e_i above).
Subspace max_totally_singular(const QuadSpace& s);

/// Q restricted to w, expressed in the row basis of w.  nondegenerate is
/// true iff no nonzero vector of the restricted radical is singular.
struct RestrictedForm {
  QuadSpace space;
  bool nondegenerate = false;
  Mat basis;  // rows = basis of w in ambient coordinates
};
RestrictedForm restrict_form(const QuadSpace& s, const Subspace& w);

/// The induced nondegenerate form on L^⊥/L for totally singular L.
/// section rows are ambient representatives of the quotient basis;
/// proj sends a vector of L^⊥ to its quotient coordinates.
struct QuotientForm {
  QuadSpace space;
  Mat section;  // dim' x D
  Mat proj;     // dim' x D
  Subspace lperp;
};
QuotientForm quotient_form(const QuadSpace& s, const Subspace& L);

/// proj ∘ N ∘ section — the induced map on L^⊥/L when N preserves L and L^⊥.
Mat pushforward(const QuotientForm& qf, const Mat& n);

bool is_isometry(const QuadSpace& s, const Mat& g);

/// |O_Q| for the standard spaces, from the classical order formulas.
unsigned long long classical_O_order(const QuadSpace& s);

/// Generators of O_Q: one transvection x ↦ x − (⟨x,v⟩/Q(v))·v per projective
/// nonsingular point, patched with hyperbolic-plane permutations whenever the
/// transvections alone generate a proper subgroup (the split D=4, q=2 case).
/// The closure order is checked against classical_O_order when it is at most
/// `verify_limit`; a mismatch throws.
std::vector<Mat> transvection_generators(const QuadSpace& s,
                                         unsigned long long verify_limit = 10000000ULL);

/// Dickson invariant in Z/2; for p=2 and even D this is rank(g−1) mod 2,
/// cross-checked against dim(S/(S ∩ gS)) mod 2 when the type is split.
int dickson(const QuadSpace& s, const Mat& g);
bool so_membership(const QuadSpace& s, const Mat& g);

/// Breadth-first closure under multiplication.  Throws past the guard.
std::set<Mat> group_closure(const std::vector<Mat>& gens,
                            unsigned long long guard = 10000000ULL);
/// Orbit of u under conjugation by the group generated by gens.
std::set<Mat> conjugacy_orbit(const std::vector<Mat>& gens, const Mat& u,
                              unsigned long long guard = 10000000ULL);

}  // namespace ocf
