#include "ocf/nilpotent.hpp"

#include <cmath>
#include <stdexcept>

namespace ocf {

// Q(Nx) + <x,Nx> as a function of x; zero iff N is compatible with Q.
static uint8_t defect(const QuadSpace& s, const Mat& n, const Vec& x) {
  Vec nx = mat_vec(n, x);
  return s.F->add(s.Q(nx), s.B(x, nx));
}

Membership membership(const QuadSpace& s, const Mat& n) {
  if (n.rows != s.D || n.cols != s.D) throw std::invalid_argument("membership: dimension mismatch");
  if (!is_nilpotent(n)) return Membership::NotIn;
  const FieldCtx* F = s.F;
  bool ok = true;
  double bits = s.D * std::log2(double(F->q()));
  if (bits <= 16) {
    for_each_vector(F, s.D, [&](const Vec& x) {
      if (defect(s, n, x) != 0) ok = false;
    });
  } else {
    // the defect is a quadratic form, so vanishing on basis vectors and
    // pairwise sums forces it to vanish identically
    for (int i = 0; i < s.D && ok; ++i) {
      Vec ei(s.D, 0);
      ei[i] = 1;
      if (defect(s, n, ei) != 0) ok = false;
      for (int j = i + 1; j < s.D && ok; ++j) {
        Vec v = ei;
        v[j] = 1;
        if (defect(s, n, v) != 0) ok = false;
      }
    }
  }
  if (!ok) return Membership::NotIn;
  if (F->p() == 2 && s.D % 2 == 0 && kernel(n).dim() % 2 != 0) return Membership::InTilde;
  return Membership::InM;
}

NilpotentWitness make_witness(const QuadSpace& s, const Mat& n) {
  if (membership(s, n) == Membership::NotIn)
    throw std::invalid_argument("make_witness: N is not compatible with Q");
  NilpotentWitness w;
  w.space = s;
  w.N = n;
  // rank sequence -> block counts
  std::vector<int> r{s.D};
  Mat p = n;
  while (true) {
    r.push_back(rank(p));
    if (r.back() == 0) break;
    p = mat_mul(p, n);
  }
  w.e = is_zero(n) ? 0 : int(r.size()) - 1;  // convention: e = 0 for N = 0
  w.c.assign(std::max(w.e, 1) + 1, 0);
  auto rk = [&](int i) { return i < int(r.size()) ? r[i] : 0; };
  for (int i = 1; i < int(w.c.size()); ++i) w.c[i] = rk(i - 1) - 2 * rk(i) + rk(i + 1);
  w.dagger = mat_sub(*inverse(mat_add(Mat::identity(s.F, s.D), n)), Mat::identity(s.F, s.D));
  if (s.F->p() == 2) {
    w.eps.assign(w.e + 1, 0);
    for (int i = 2; i <= w.e; i += 2)
      if (!is_zero(lambda_covector(w, i))) w.eps[i] = 1;
  }
  return w;
}

Vec lambda_covector(const NilpotentWitness& w, int i) {
  const QuadSpace& s = w.space;
  if (s.F->p() != 2) throw std::invalid_argument("lambda_covector needs characteristic 2");
  Mat m = mat_pow(w.N, i - 1);
  Vec l(s.D, 0);
  for (int j = 0; j < s.D; ++j) {
    Vec ej(s.D, 0);
    ej[j] = 1;
    l[j] = s.F->sqrt_char2(s.B(ej, mat_vec(m, ej)));
  }
  return l;
}

Subspace line_L(const NilpotentWitness& w) {
  const QuadSpace& s = w.space;
  if (s.F->p() != 2) throw std::invalid_argument("line_L is the characteristic-2 construction");
  if (w.e == 0) throw std::invalid_argument("line_L: N = 0");
  if (w.eps[w.e] == 0) return image(mat_pow(w.N, w.e - 1));
  Vec l = lambda_covector(w, w.e);
  Mat lm(s.F, 1, s.D);
  for (int j = 0; j < s.D; ++j) lm.at(0, j) = l[j];
  Subspace kerl = kernel(lm);
  Subspace p = perp(s, kerl);
  if (s.radical.dim() == 0) return p;
  // the singular vectors of p form the line we want
  std::vector<Vec> sing;
  for_each_vector(s.F, p.dim(), [&](const Vec& c) {
    Vec x = vec_mat(c, p.basis);
    if (s.Q(x) == 0) sing.push_back(x);
  });
  Mat m(s.F, int(sing.size()), s.D);
  for (int i = 0; i < int(sing.size()); ++i)
    for (int j = 0; j < s.D; ++j) m.at(i, j) = sing[i][j];
  Subspace L = row_space(m);
  // sanity: the singular locus must itself be a subspace
  for (const Vec& x : sing)
    if (!contains(L, x)) throw std::logic_error("line_L: singular locus is not linear");
  for (int i = 0; i < L.dim(); ++i)
    if (s.Q(L.basis.row(i)) != 0 || !contains(p, L.basis.row(i)))
      throw std::logic_error("line_L: singular locus is not linear");
  if (!is_totally_singular(s, L)) throw std::logic_error("line_L: L not totally singular");
  return L;
}

Subspace line_L_odd_p(const NilpotentWitness& w) {
  if (w.space.F->p() == 2) throw std::invalid_argument("line_L_odd_p needs odd characteristic");
  if (w.e == 0) throw std::invalid_argument("line_L_odd_p: N = 0");
  return image(mat_pow(w.N, w.e - 1));
}

Reduction reduce(const NilpotentWitness& w) {
  const QuadSpace& s = w.space;
  Reduction r;
  r.L = (s.F->p() == 2) ? line_L(w) : line_L_odd_p(w);
  r.qf = quotient_form(s, r.L);
  Mat np = pushforward(r.qf, w.N);
  if (membership(r.qf.space, np) == Membership::NotIn)
    throw std::logic_error("reduce: induced nilpotent is not compatible with the induced form");
  r.next = make_witness(r.qf.space, np);
  return r;
}

std::pair<std::vector<int>, std::vector<int>> predict_reduced(
    const std::vector<int>& c, const std::vector<int>& eps, int e, bool lambda_nonzero) {
  std::vector<int> c2(c), e2(eps);
  c2.resize(std::max<size_t>(c2.size(), e + 1), 0);
  e2.resize(std::max<size_t>(e2.size(), e + 1), 0);
  if (!lambda_nonzero) {
    c2[e] = 0;
    if (e > 2) c2[e - 2] += c[e];
  } else if (c[e] % 2 == 0) {
    c2[e] -= 2;
    c2[e - 1] += 2;
    e2[e] = 0;
  } else {
    c2[e] -= 1;
    if (e > 2) {
      c2[e - 2] += 1;
      e2[e - 2] = 1;
    }
    e2[e] = 0;
  }
  while (!c2.empty() && c2.back() == 0) c2.pop_back();
  e2.resize(c2.size());
  return {c2, e2};
}

WYSplit wy_split(const NilpotentWitness& w) {
  const QuadSpace& s = w.space;
  if (w.e == 0) throw std::invalid_argument("wy_split: N = 0");
  Subspace kerHigh = kernel(mat_pow(w.N, w.e - 1));
  Mat E = complement_in(kerHigh, full_space(s.F, s.D));
  // the pairing (x, y) -> <x, N^{e-1} y> on E must be nondegenerate
  Mat m = mat_pow(w.N, w.e - 1);
  Mat pair(s.F, E.rows, E.rows);
  for (int i = 0; i < E.rows; ++i)
    for (int j = 0; j < E.rows; ++j) pair.at(i, j) = s.B(E.row(i), mat_vec(m, E.row(j)));
  if (rank(pair) != E.rows) throw std::logic_error("wy_split: degenerate top pairing");
  Mat all(s.F, E.rows * w.e, s.D);
  int row = 0;
  Mat cur = Mat::identity(s.F, s.D);
  for (int k = 0; k < w.e; ++k) {
    for (int i = 0; i < E.rows; ++i) {
      Vec v = mat_vec(cur, E.row(i));
      for (int j = 0; j < s.D; ++j) all.at(row, j) = v[j];
      ++row;
    }
    cur = mat_mul(w.N, cur);
  }
  WYSplit res;
  res.W = row_space(all);
  if (res.W.dim() != E.rows * w.e) throw std::logic_error("wy_split: assembly not injective");
  res.Y = perp(s, res.W);
  if (!contains(res.Y, s.radical)) throw std::logic_error("wy_split: radical escapes Y");
  Subspace ny = row_space(mat_mul(res.Y.basis, w.N.transposed()));
  if (!contains(res.Y, ny)) throw std::logic_error("wy_split: Y not N-stable");
  if (!is_zero(mat_mul(res.Y.basis, mat_pow(w.N, w.e - 1).transposed())))
    throw std::logic_error("wy_split: N^{e-1} does not kill Y");
  if (intersect(res.W, res.Y).dim() != 0 || res.W.dim() + res.Y.dim() != s.D)
    throw std::logic_error("wy_split: not a direct sum");
  return res;
}

}  // namespace ocf
