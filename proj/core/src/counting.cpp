#include "ocf/counting.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ocf {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// q^e - c as a polynomial.
QPoly q_pow_minus(long e, const mpq_class& c) {
  QPoly r = QPoly::monomial(e);
  return r - QPoly(c);
}

}  // namespace

QPoly::QPoly(const mpq_class& c0) {
  c.push_back(c0);
  normalize();
}

QPoly::QPoly(long c0) : QPoly(mpq_class(c0)) {}

QPoly QPoly::monomial(long exp, const mpq_class& coef) {
  require(exp >= 0, "QPoly::monomial: negative exponent");
  QPoly r;
  r.c.assign(size_t(exp) + 1, 0);
  r.c[size_t(exp)] = coef;
  r.normalize();
  return r;
}

void QPoly::normalize() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

bool QPoly::integral() const {
  for (const auto& x : c)
    if (x.get_den() != 1) return false;
  return true;
}

mpq_class QPoly::eval(const mpq_class& q) const {
  mpq_class acc = 0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * q + c[i];
  return acc;
}

mpz_class QPoly::eval_int(long q) const {
  mpq_class v = eval(mpq_class(q));
  if (v.get_den() != 1) throw std::runtime_error("QPoly::eval_int: non-integer value");
  return v.get_num();
}

std::string QPoly::str() const {
  if (c.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    mpq_class coef = c[i];
    bool neg = coef < 0;
    if (first) {
      if (neg) out << "-";
      first = false;
    } else {
      out << (neg ? " - " : " + ");
    }
    mpq_class mag = neg ? mpq_class(-coef) : coef;
    if (i == 0) {
      out << mag.get_str();
    } else {
      if (mag != 1) out << mag.get_str() << "*";
      out << "q";
      if (i > 1) out << "^" << i;
    }
  }
  return out.str();
}

QPoly operator+(const QPoly& x, const QPoly& y) {
  QPoly r;
  r.c.resize(std::max(x.c.size(), y.c.size()), 0);
  for (size_t i = 0; i < x.c.size(); ++i) r.c[i] += x.c[i];
  for (size_t i = 0; i < y.c.size(); ++i) r.c[i] += y.c[i];
  r.normalize();
  return r;
}

QPoly operator-(const QPoly& x, const QPoly& y) {
  QPoly r;
  r.c.resize(std::max(x.c.size(), y.c.size()), 0);
  for (size_t i = 0; i < x.c.size(); ++i) r.c[i] += x.c[i];
  for (size_t i = 0; i < y.c.size(); ++i) r.c[i] -= y.c[i];
  r.normalize();
  return r;
}

QPoly operator*(const QPoly& x, const QPoly& y) {
  if (x.is_zero() || y.is_zero()) return QPoly();
  QPoly r;
  r.c.assign(x.c.size() + y.c.size() - 1, 0);
  for (size_t i = 0; i < x.c.size(); ++i)
    for (size_t j = 0; j < y.c.size(); ++j) r.c[i + j] += x.c[i] * y.c[j];
  r.normalize();
  return r;
}

QPoly operator*(const QPoly& x, const mpq_class& s) {
  QPoly r = x;
  for (auto& v : r.c) v *= s;
  r.normalize();
  return r;
}

std::optional<QPoly> poly_divide(const QPoly& num, const QPoly& den) {
  if (den.is_zero()) throw std::invalid_argument("poly_divide: zero denominator");
  if (num.is_zero()) return QPoly();
  QPoly rem = num;
  QPoly quot;
  if (num.degree() >= den.degree()) quot.c.assign(size_t(num.degree() - den.degree()) + 1, 0);
  while (!rem.is_zero() && rem.degree() >= den.degree()) {
    long shift = rem.degree() - den.degree();
    mpq_class f = rem.c.back() / den.c.back();
    quot.c[size_t(shift)] = f;
    rem = rem - den * QPoly::monomial(shift, f);
  }
  if (!rem.is_zero()) return std::nullopt;
  quot.normalize();
  return quot;
}

QRat::QRat(QPoly n, QPoly d) : num(std::move(n)), den(std::move(d)) {
  if (den.is_zero()) throw std::invalid_argument("QRat: zero denominator");
}

mpq_class QRat::eval(const mpq_class& q) const {
  mpq_class d = den.eval(q);
  if (d == 0) throw std::runtime_error("QRat::eval: denominator vanishes");
  return num.eval(q) / d;
}

QPoly QRat::to_polynomial() const {
  auto quot = poly_divide(num, den);
  if (!quot) throw std::runtime_error("QRat::to_polynomial: inexact division");
  return *quot;
}

QPoly QRat::to_integer_polynomial() const {
  QPoly p = to_polynomial();
  if (!p.integral())
    throw std::runtime_error("QRat::to_integer_polynomial: non-integer coefficients");
  return p;
}

QRat operator+(const QRat& x, const QRat& y) {
  return QRat(x.num * y.den + y.num * x.den, x.den * y.den);
}
QRat operator-(const QRat& x, const QRat& y) {
  return QRat(x.num * y.den - y.num * x.den, x.den * y.den);
}
QRat operator*(const QRat& x, const QRat& y) { return QRat(x.num * y.num, x.den * y.den); }
QRat operator/(const QRat& x, const QRat& y) {
  if (y.num.is_zero()) throw std::invalid_argument("QRat: division by zero");
  return QRat(x.num * y.den, x.den * y.num);
}

QPoly poly_P(int m) {
  require(m >= 1 && m % 2 == 1, "poly_P: m must be odd >= 1");
  long exp = long(m - 1) * (m - 1) / 4;
  QPoly r = QPoly::monomial(exp);
  for (int i = 2; i <= m - 1; i += 2) r = r * q_pow_minus(i, 1);
  return r;
}

QPoly poly_Pd(int m, int delta) {
  require(m >= 2 && m % 2 == 0, "poly_Pd: m must be even >= 2");
  require(delta == 1 || delta == -1, "poly_Pd: delta must be +-1");
  long exp = long(m) * (m - 2) / 4;
  QPoly r = QPoly::monomial(exp);
  for (int i = 2; i <= m - 2; i += 2) r = r * q_pow_minus(i, 1);
  return r * q_pow_minus(m / 2, delta);
}

QPoly poly_R(int m) {
  require(m >= 0 && m % 2 == 0, "poly_R: m must be even >= 0");
  QPoly r = QPoly::monomial(long(m) * m / 4);
  for (int i = 2; i <= m; i += 2) r = r * q_pow_minus(i, 1);
  return r;
}

QPoly poly_A(int m) {
  require(m >= 0, "poly_A: m must be >= 0");
  QPoly r = QPoly::monomial(long(m) * (m - 1) / 2);
  for (int i = 1; i <= m; ++i) r = r * q_pow_minus(i, 1);
  return r;
}

QRat count_N(int s, int k, int eps, int delta) {
  require(s >= 1 && k >= 0 && k <= s, "count_N: need 0 <= k <= s");
  if (s % 2 == 0)
    require(eps == 1 || eps == -1, "count_N: eps required for even s");
  else
    require(eps == 0, "count_N: eps must be 0 for odd s");
  if (k % 2 == 0 && k > 0)
    require(delta == 1 || delta == -1, "count_N: delta required for even k");
  else
    require(delta == 0, "count_N: delta must be 0 for odd or zero k");

  if (k == 0) return QRat(QPoly(1L));
  if (k == s) {
    // The only k-dimensional subspace is the whole space.
    if (k % 2 == 0) return QRat(QPoly(delta == eps ? 1L : 0L));
    return QRat(QPoly(1L));
  }
  if (s % 2 == 0 && k % 2 == 1) {
    // P_s^eps / (P_k P_{s-k}); the source text's "P_{t-k}" is a typo for
    // P_{s-k} (forced by the dimension count, confirmed by the oracles).
    return QRat(poly_Pd(s, eps), poly_P(k) * poly_P(s - k));
  }
  if (s % 2 == 0 && k % 2 == 0) {
    return QRat(poly_Pd(s, eps), poly_Pd(k, delta) * poly_Pd(s - k, eps * delta) * QPoly(2L));
  }
  if (s % 2 == 1 && k % 2 == 1) {
    QRat acc(QPoly(0L));
    for (int d : {1, -1}) acc = acc + QRat(poly_P(s), poly_P(k) * poly_Pd(s - k, d));
    return acc * QRat::scalar(mpq_class(1, 2));
  }
  // s odd, k even.
  return QRat(poly_P(s), poly_Pd(k, delta) * poly_P(s - k) * QPoly(2L));
}

QRat chain_ratio(const std::vector<int>& r, int t0) {
  if (r.size() <= 1 || r[1] == 0) return QRat(QPoly(1L));
  int s = r[0], k = r[1];
  require(k <= s, "chain_ratio: dims must be weakly descending");
  std::vector<int> tail(r.begin() + 1, r.end());
  if (k % 2 == 1) return count_N(s, k, t0, 0) * chain_ratio(tail, 0);
  QRat acc(QPoly(0L));
  for (int d : {1, -1}) acc = acc + count_N(s, k, t0, d) * chain_ratio(tail, d);
  return acc;
}

namespace {

std::vector<int> strip_zeros(std::vector<int> r) {
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

void check_descending(const std::vector<int>& r, const char* who) {
  for (size_t i = 0; i + 1 < r.size(); ++i)
    require(r[i] >= r[i + 1], who);
}

}  // namespace

QPoly nu(const std::vector<int>& r0) {
  std::vector<int> r = strip_zeros(r0);
  require(!r.empty() && r[0] % 2 == 1, "nu: leading dimension must be odd");
  check_descending(r, "nu: dims must be weakly descending");
  return chain_ratio(r, 0).to_integer_polynomial();
}

QPoly nu_eps(int eps, const std::vector<int>& r0) {
  std::vector<int> r = strip_zeros(r0);
  require(eps == 1 || eps == -1, "nu_eps: eps must be +-1");
  require(!r.empty() && r[0] % 2 == 0, "nu_eps: leading dimension must be even");
  check_descending(r, "nu_eps: dims must be weakly descending");
  return chain_ratio(r, eps).to_integer_polynomial();
}

QPoly nu_prime(const std::vector<int>& r0) {
  std::vector<int> r = strip_zeros(r0);
  if (r.empty()) return QPoly(1L);
  check_descending(r, "nu_prime: dims must be weakly descending");
  for (int v : r) require(v % 2 == 0, "nu_prime: dims must be even");
  QRat acc(poly_R(r[0]));
  for (size_t i = 0; i < r.size(); ++i) {
    int next = (i + 1 < r.size()) ? r[i + 1] : 0;
    acc = acc / QRat(poly_R(r[i] - next));
  }
  return acc.to_integer_polynomial();
}

long dim_d(const std::vector<int>& f) {
  int amax = int(f.size()) - 1;
  auto fa = [&](int a) { return f[size_t(a < 0 ? -a : a)]; };
  long d = 0;
  for (int a = -amax; a <= amax; ++a) {
    for (int ap = a + 1; ap <= amax; ++ap)
      if (a + ap <= -3) d += long(fa(a)) * fa(ap);
    if (a <= -2) d += long(fa(a)) * (fa(a) - 1) / 2;
  }
  return d;
}

namespace {

/// Nonzero singular vectors of a nondegenerate space of dimension m, type t.
QPoly sigma_singular(int m, int t) {
  if (m <= 0) return QPoly();
  if (m % 2 == 1) return q_pow_minus(m - 1, 1);
  // (q^{m/2} - t)(q^{m/2-1} + t)
  return q_pow_minus(m / 2, t) * (QPoly::monomial(m / 2 - 1) + QPoly(mpq_class(t)));
}

}  // namespace

QPoly ts_subspace_count(int D, int type, int k) {
  require(k >= 0, "ts_subspace_count: k must be >= 0");
  QRat acc(QPoly(1L));
  for (int i = 0; i < k; ++i)
    acc = acc * QRat(sigma_singular(D - 2 * i, type), q_pow_minus(k - i, 1));
  return acc.to_integer_polynomial();
}

QPoly card_E2star(const std::vector<int>& f, int type) {
  int amax = int(f.size()) - 1;
  QRat acc(QPoly(1L));
  for (int a = 1; a <= amax; ++a) acc = acc * QRat(poly_A(f[size_t(a)]));

  std::vector<int> evens, odds;
  for (int a = 0; a <= amax; a += 2) evens.push_back(f[size_t(a)]);
  for (int a = 1; a <= amax; a += 2) odds.push_back(f[size_t(a)]);
  evens = strip_zeros(evens);
  odds = strip_zeros(odds);

  QPoly xi(1L);
  if (!evens.empty()) xi = (f[0] % 2 == 1) ? nu(evens) : nu_eps(type, evens);
  acc = acc * QRat(xi);

  acc = acc * QRat(nu_prime(odds));
  int f1 = amax >= 1 ? f[1] : 0;
  acc = acc / QRat(poly_R(f1));
  return acc.to_integer_polynomial();
}

QPoly card_ybar(const std::vector<int>& f, int D, int type, int component) {
  int amax = int(f.size()) - 1;
  QRat acc(QPoly(1L));
  int cur = D;
  for (int a = amax; a >= 1; --a) {
    if (f[size_t(a)] == 0) continue;
    acc = acc * QRat(ts_subspace_count(cur, type, f[size_t(a)]));
    cur -= 2 * f[size_t(a)];
  }
  if (component >= 0) {
    require(amax >= 0 && f[0] == 0, "card_ybar: component label requires f_0 = 0");
    acc = acc * QRat::scalar(mpq_class(1, 2));
  }
  return acc.to_integer_polynomial();
}

QPoly card_piece(const PieceLabel& phi, int D, int type) {
  QPoly ybar = card_ybar(phi.f, D, type, phi.component);
  QPoly e2 = card_E2star(phi.f, type);
  return ybar * QPoly::monomial(dim_d(phi.f)) * e2;
}

long bf_count_subspaces(const QuadSpace& s, int k, int delta) {
  long total = 0;
  for_each_subspace(s.F, s.D, k, [&](const Subspace& w) {
    RestrictedForm rf = restrict_form(s, w);
    if (!rf.nondegenerate) return;
    if (delta != 0 && (k % 2 != 0 || rf.space.type != delta)) return;
    ++total;
  });
  return total;
}

long bf_count_flags(const QuadSpace& s, const std::vector<int>& dims) {
  require(!dims.empty() && dims[0] == s.D, "bf_count_flags: dims[0] must equal D");
  if (dims.size() == 1 || dims[1] == 0) return 1;
  long total = 0;
  std::vector<int> tail(dims.begin() + 1, dims.end());
  for_each_subspace(s.F, s.D, dims[1], [&](const Subspace& w) {
    RestrictedForm rf = restrict_form(s, w);
    if (!rf.nondegenerate) return;
    total += bf_count_flags(rf.space, tail);
  });
  return total;
}

namespace {

long bf_symplectic_rec(const FieldCtx* F, const Mat& gram, const std::vector<int>& dims,
                       size_t idx) {
  if (idx >= dims.size() || dims[idx] == 0) return 1;
  int k = dims[idx];
  long total = 0;
  for_each_subspace(F, gram.rows, k, [&](const Subspace& w) {
    Mat g = mat_mul(mat_mul(w.basis, gram), w.basis.transposed());
    if (rank(g) != k) return;
    total += bf_symplectic_rec(F, g, dims, idx + 1);
  });
  return total;
}

}  // namespace

long bf_count_symplectic_flags(const FieldCtx* F, const std::vector<int>& dims) {
  require(!dims.empty() && dims[0] % 2 == 0, "bf_count_symplectic_flags: ambient must be even");
  int m = dims[0];
  Mat j(F, m, m);
  for (int i = 0; i < m; i += 2) {
    j.at(i, i + 1) = 1;
    j.at(i + 1, i) = F->neg(1);
  }
  return bf_symplectic_rec(F, j, dims, 1);
}

unsigned long long bf_count_E2star(const QuadSpace& s, const QFiltration& x) {
  GradedSplitting gs = split_filtration(x);
  const FieldCtx* F = s.F;
  // Adjacent degree pairs a -> a+2 with both blocks present.
  struct BlockSlot {
    int from, to;  // indices into gs.degs
    int rows, cols;
  };
  std::vector<BlockSlot> slots;
  size_t entries = 0;
  for (size_t i = 0; i < gs.degs.size(); ++i) {
    int j = gs.index_of(gs.degs[i] + 2);
    if (j < 0) continue;
    BlockSlot b{int(i), j, gs.comp[size_t(j)].rows, gs.comp[i].rows};
    entries += size_t(b.rows) * b.cols;
    slots.push_back(b);
  }
  std::vector<uint8_t> vals(entries, 0);
  unsigned long long total = 0;
  const int q = F->q();
  while (true) {
    // Assemble the ambient matrix from the current block entries.
    Mat n(F, s.D, s.D);
    size_t pos = 0;
    for (const auto& b : slots) {
      Mat blk(F, b.rows, b.cols);
      for (auto& e : blk.a) e = vals[pos++];
      // incl_{a+2} * blk * proj_a
      Mat contrib = mat_mul(mat_mul(gs.comp[size_t(b.to)].transposed(), blk),
                            gs.dual[size_t(b.from)]);
      n = mat_add(n, contrib);
    }
    // A graded map is in E^2_* exactly when it satisfies the graded
    // membership conditions and its lift has canonical filtration x.
    if (graded_compatible(gs, n)) {
      NilpotentWitness w = make_witness(s, lift_graded(gs, n));
      if (canonical_filtration(w) == x) ++total;
    }
    // Odometer over all assignments.
    size_t i = 0;
    for (; i < entries; ++i) {
      if (++vals[i] < q) break;
      vals[i] = 0;
    }
    if (i == entries) break;
  }
  return total;
}

}  // namespace ocf
