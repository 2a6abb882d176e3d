#pragma once

#include "ocf/quadspace.hpp"

namespace ocf {

/// Membership of a nilpotent N in the compatible sets:
///   InTilde: Q(Nx) = −⟨x,Nx⟩ for all x.
///   InM: additionally dim ker N is even when p = 2 and D is even
///        (equivalently 1+N lies in SO_Q); for other (p, D) InM = InTilde.
enum class Membership { NotIn, InTilde, InM };
Membership membership(const QuadSpace& s, const Mat& n);

/// A nilpotent N compatible with Q together with its computed invariants.
struct NilpotentWitness {
  QuadSpace space;
  Mat N;
  int e = 0;             // least e >= 0 with N^e = 0
  std::vector<int> c;    // c[i] = number of Jordan blocks of size i, i <= e
  std::vector<int> eps;  // p=2: eps[i] = 1 iff the functional λ_i is nonzero
  Mat dagger;            // (1+N)^{-1} - 1
};

/// Computes all invariants; throws unless N ∈ 𝔪̃_Q.
NilpotentWitness make_witness(const QuadSpace& s, const Mat& n);

/// The functional λ_i(x) = ⟨x, N^{i-1}x⟩^{1/2} on ker N^i (p = 2 only);
/// returned as a row covector on the ambient space (valid on ker N^i).
Vec lambda_covector(const NilpotentWitness& w, int i);

/// The canonical line/subspace L attached to N ≠ 0:
///   p=2: N^{e-1}V if λ_e = 0; (ker λ_e)^⊥ if λ_e ≠ 0 and the radical is 0;
///        the singular part of (ker λ_e)^⊥ otherwise.
Subspace line_L(const NilpotentWitness& w);
/// p ≠ 2: always N^{e-1}V.
Subspace line_L_odd_p(const NilpotentWitness& w);

/// Reduction to V' = L^⊥/L with the induced form and nilpotent.
struct Reduction {
  NilpotentWitness next;
  Subspace L;
  QuotientForm qf;
};
Reduction reduce(const NilpotentWitness& w);

/// Arithmetic oracle for the invariants of the reduced nilpotent (p = 2):
/// three transition rules keyed on λ_e and the parity of c_e.
std::pair<std::vector<int>, std::vector<int>> predict_reduced(
    const std::vector<int>& c, const std::vector<int>& eps, int e, bool lambda_nonzero);

/// Splitting V = W ⊕ Y: W carries the size-e blocks, Y = W^⊥ the rest.
struct WYSplit {
  Subspace W, Y;
};
WYSplit wy_split(const NilpotentWitness& w);

}  // namespace ocf
