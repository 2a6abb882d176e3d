#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "ocf/filtration.hpp"

namespace ocf {

/// Polynomial in q with exact rational coefficients, dense ascending order,
/// normalized (no trailing zero coefficients).
struct QPoly {
  std::vector<mpq_class> c;

  QPoly() = default;
  explicit QPoly(const mpq_class& c0);
  explicit QPoly(long c0);
  /// coef * q^exp
  static QPoly monomial(long exp, const mpq_class& coef = 1);

  void normalize();
  int degree() const { return int(c.size()) - 1; }  // -1 if zero
  bool is_zero() const { return c.empty(); }
  /// All coefficients are integers.
  bool integral() const;
  mpq_class eval(const mpq_class& q) const;
  /// Evaluation at an integer point of an integral polynomial.
  mpz_class eval_int(long q) const;
  /// Canonical descending-power rendering, e.g. "q^4 - 2*q^2 + 1".
  std::string str() const;

  friend bool operator==(const QPoly&, const QPoly&) = default;
};

QPoly operator+(const QPoly& x, const QPoly& y);
QPoly operator-(const QPoly& x, const QPoly& y);
QPoly operator*(const QPoly& x, const QPoly& y);
QPoly operator*(const QPoly& x, const mpq_class& s);

/// Exact polynomial division; empty optional if the remainder is nonzero.
std::optional<QPoly> poly_divide(const QPoly& num, const QPoly& den);

/// A ratio of polynomials in q, kept unreduced.  Reduction to a polynomial
/// is an exact division whose success is part of what the formulas assert.
struct QRat {
  QPoly num{1L};
  QPoly den{1L};

  QRat() = default;
  QRat(QPoly n) : num(std::move(n)) {}
  QRat(QPoly n, QPoly d);
  static QRat scalar(const mpq_class& v) { return QRat(QPoly(v)); }

  mpq_class eval(const mpq_class& q) const;
  /// Exact division (throws if the denominator does not divide).
  QPoly to_polynomial() const;
  /// to_polynomial plus an integer-coefficient certificate (throws if not).
  QPoly to_integer_polynomial() const;
};

QRat operator+(const QRat& x, const QRat& y);
QRat operator-(const QRat& x, const QRat& y);
QRat operator*(const QRat& x, const QRat& y);
QRat operator/(const QRat& x, const QRat& y);

/// Order-formula building blocks.
///   P_m   (m odd >= 1):   q^{(m-1)^2/4} (q^2-1)(q^4-1)...(q^{m-1}-1)
///   P_m^d (m even >= 2):  q^{m(m-2)/4} (q^2-1)...(q^{m-2}-1)(q^{m/2}-d)
///   R_m   (m even >= 0):  q^{m^2/4} (q^2-1)(q^4-1)...(q^m-1)
///   A_m   (m >= 0):       q^{(m^2-m)/2} (q-1)(q^2-1)...(q^m-1)
QPoly poly_P(int m);
QPoly poly_Pd(int m, int delta);
QPoly poly_R(int m);
QPoly poly_A(int m);

/// N_{s,k}: the number of k-dimensional subspaces of an s-dimensional
/// nondegenerate quadratic space on which the form stays nondegenerate,
/// refined by Witt type.  eps is the ambient type, delta the subspace type;
/// 0 means untyped (odd dimension).  Cases by parity:
///   s even, k odd:        P_s^eps / (P_k P_{s-k})
///   s even, k even, k<s:  (1/2) P_s^eps / (P_k^delta P_{s-k}^{eps*delta})
///   s odd,  k odd,  k<s:  (1/2) sum_d P_s / (P_k P_{s-k}^d)
///   s odd,  k even:       (1/2) P_s / (P_k^delta P_{s-k})
/// plus k = s (1 if untyped match, [delta == eps] if typed) and k = 0 (1).
QRat count_N(int s, int k, int eps, int delta);

/// Number of chains U_0 >= U_2 >= ... of subspaces of a nondegenerate
/// quadratic space with prescribed dimensions r = (r_0, r_2, ...), r_0 the
/// ambient dimension, each restriction nondegenerate.  nu: r_0 odd;
/// nu_eps: r_0 even with ambient type eps.  Computed by the chain recursion
/// over count_N with type sums; the exact division and the integrality of
/// the result are certified (they are the content of the polynomiality
/// claim, not an assumption).
QPoly nu(const std::vector<int>& r);
QPoly nu_eps(int eps, const std::vector<int>& r);
/// The chain recursion itself, exposed for identity tests; t0 is the
/// ambient type (0 = untyped).
QRat chain_ratio(const std::vector<int>& r, int t0);

/// Number of chains of nondegenerate subspaces of a symplectic space with
/// dimensions r = (r_1, r_3, ...), all even:
///   R_{r_1} R^{-1}_{r_1-r_3} R^{-1}_{r_3-r_5} ... R^{-1}_{r_last}.
QPoly nu_prime(const std::vector<int>& r);

/// Fiber dimension of the graded-part bundle for the label f (f[a] for
/// a >= 0, negative degrees implied by symmetry):
///   d = sum_{a<a', a+a'<=-3} f_a f_{a'} + sum_{a<=-2} f_a(f_a-1)/2.
long dim_d(const std::vector<int>& f);

/// Number of totally singular k-dimensional subspaces of a nondegenerate
/// space of dimension D and type (0 for odd D):
///   prod_{i<k} sigma(D-2i) / (q^{k-i}-1)
/// where sigma(m) counts nonzero singular vectors.  Zero when k exceeds the
/// Witt index.
QPoly ts_subspace_count(int D, int type, int k);

/// |E^2_* gr|: the number of graded degree-2 maps attached to the label f
/// that lie in the Lie algebra and meet the nondegeneracy conditions:
///   prod_{a>=1} A_{f_a} * xi * nu'(f_1, f_3, ...) / R_{f_1}
/// with xi = nu(f_0, f_2, ...) for f_0 odd, nu_eps(type, ...) for f_0 even
/// positive, 1 for f_0 = 0.  type is the ambient Witt type.
QPoly card_E2star(const std::vector<int>& f, int type);

/// Number of Q-filtrations with graded dimensions f: layered product of
/// totally singular subspace counts in successive quotients; halved for
/// f_0 = 0 component labels (component >= 0).
QPoly card_ybar(const std::vector<int>& f, int D, int type, int component = -1);

/// |Xi_phi| as a polynomial in q: card_ybar * q^d * card_E2star.
QPoly card_piece(const PieceLabel& phi, int D, int type);

/// Brute-force oracles (literal enumeration, guarded by the caller's choice
/// of parameters).  delta filter: 0 = any type, +-1 = that Witt type only.
long bf_count_subspaces(const QuadSpace& s, int k, int delta);
/// Chains of nondegenerate subspaces with dims = (r_0, r_2, ...), r_0 = D.
long bf_count_flags(const QuadSpace& s, const std::vector<int>& dims);
/// Chains of nondegenerate subspaces of the standard symplectic space,
/// dims = (r_1, r_3, ...), r_1 the ambient dimension, all even.
long bf_count_symplectic_flags(const FieldCtx* F, const std::vector<int>& dims);
/// Literal enumeration of the graded degree-2 maps attached to a
/// Q-filtration whose associated element lies in SO and whose canonical
/// filtration is the given one.
unsigned long long bf_count_E2star(const QuadSpace& s, const QFiltration& x);

}  // namespace ocf
