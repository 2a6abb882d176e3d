#include "ocf/linalg.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace ocf {

Mat Mat::identity(const FieldCtx* f, int n) {
  Mat m(f, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::transposed() const {
  Mat t(F, cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

Mat mat_mul(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mat_mul: dimension mismatch");
  const FieldCtx* F = x.F;
  Mat r(F, x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      uint8_t c = x.at(i, k);
      if (c == 0) continue;
      for (int j = 0; j < y.cols; ++j)
        r.at(i, j) = F->add(r.at(i, j), F->mul(c, y.at(k, j)));
    }
  return r;
}

Mat mat_add(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("mat_add: shape");
  Mat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.F->add(x.a[i], y.a[i]);
  return r;
}

Mat mat_sub(const Mat& x, const Mat& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("mat_sub: shape");
  Mat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.F->sub(x.a[i], y.a[i]);
  return r;
}

Mat mat_pow(const Mat& x, int n) {
  Mat r = Mat::identity(x.F, x.rows);
  for (int i = 0; i < n; ++i) r = mat_mul(r, x);
  return r;
}

Vec mat_vec(const Mat& m, const Vec& v) {
  if (int(v.size()) != m.cols) throw std::invalid_argument("mat_vec: dimension mismatch");
  Vec r(m.rows, 0);
  for (int i = 0; i < m.rows; ++i) {
    uint8_t s = 0;
    for (int j = 0; j < m.cols; ++j) s = m.F->add(s, m.F->mul(m.at(i, j), v[j]));
    r[i] = s;
  }
  return r;
}

Vec vec_mat(const Vec& v, const Mat& m) {
  if (int(v.size()) != m.rows) throw std::invalid_argument("vec_mat: dimension mismatch");
  Vec r(m.cols, 0);
  for (int i = 0; i < m.rows; ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < m.cols; ++j)
      r[j] = m.F->add(r[j], m.F->mul(v[i], m.at(i, j)));
  }
  return r;
}

Vec vec_add(const FieldCtx* F, const Vec& x, const Vec& y) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = F->add(x[i], y[i]);
  return r;
}

Vec vec_scale(const FieldCtx* F, uint8_t c, const Vec& x) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = F->mul(c, x[i]);
  return r;
}

uint8_t dot(const FieldCtx* F, const Vec& x, const Vec& y) {
  uint8_t s = 0;
  for (size_t i = 0; i < x.size(); ++i) s = F->add(s, F->mul(x[i], y[i]));
  return s;
}

bool is_zero(const Vec& v) {
  for (uint8_t c : v)
    if (c) return false;
  return true;
}

bool is_zero(const Mat& m) {
  for (uint8_t c : m.a)
    if (c) return false;
  return true;
}

std::vector<int> rref_in_place(Mat& m) {
  const FieldCtx* F = m.F;
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int piv = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
    uint8_t s = F->inv(m.at(r, c));
    for (int j = 0; j < m.cols; ++j) m.at(r, j) = F->mul(s, m.at(r, j));
    for (int i = 0; i < m.rows; ++i) {
      if (i == r) continue;
      uint8_t f = m.at(i, c);
      if (f == 0) continue;
      for (int j = 0; j < m.cols; ++j)
        m.at(i, j) = F->sub(m.at(i, j), F->mul(f, m.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int rank(Mat m) { return int(rref_in_place(m).size()); }

std::optional<Mat> inverse(const Mat& m) {
  if (m.rows != m.cols) return std::nullopt;
  int n = m.rows;
  Mat aug(m.F, n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  auto piv = rref_in_place(aug);
  if (int(piv.size()) != n || (n > 0 && piv[n - 1] != n - 1)) return std::nullopt;
  Mat inv(m.F, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

bool is_nilpotent(const Mat& m) {
  if (m.rows != m.cols) return false;
  return is_zero(mat_pow(m, m.rows));
}

Subspace row_space(Mat m) {
  auto piv = rref_in_place(m);
  Subspace s(m.F, m.cols);
  s.basis = Mat(m.F, int(piv.size()), m.cols);
  for (int i = 0; i < int(piv.size()); ++i)
    for (int j = 0; j < m.cols; ++j) s.basis.at(i, j) = m.at(i, j);
  return s;
}

Subspace full_space(const FieldCtx* F, int D) { return row_space(Mat::identity(F, D)); }
Subspace zero_space(const FieldCtx* F, int D) { return Subspace(F, D); }

Subspace kernel(const Mat& m) {
  Mat r = m;
  auto piv = rref_in_place(r);
  const FieldCtx* F = m.F;
  std::vector<int> is_pivot(m.cols, -1);
  for (int i = 0; i < int(piv.size()); ++i) is_pivot[piv[i]] = i;
  Mat basis(F, m.cols - int(piv.size()), m.cols);
  int row = 0;
  for (int c = 0; c < m.cols; ++c) {
    if (is_pivot[c] >= 0) continue;
    basis.at(row, c) = 1;
    for (int i = 0; i < int(piv.size()); ++i)
      basis.at(row, piv[i]) = F->neg(r.at(i, c));
    ++row;
  }
  return row_space(basis);
}

Subspace image(const Mat& m) { return row_space(m.transposed()); }

std::optional<Vec> solve(const Mat& m, const Vec& rhs) {
  if (int(rhs.size()) != m.rows) throw std::invalid_argument("solve: rhs size");
  Mat aug(m.F, m.rows, m.cols + 1);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = rhs[i];
  }
  auto piv = rref_in_place(aug);
  if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
  Vec x(m.cols, 0);
  for (int i = 0; i < int(piv.size()); ++i) x[piv[i]] = aug.at(i, m.cols);
  return x;
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient != b.ambient) throw std::invalid_argument("sum: ambient mismatch");
  Mat m(a.F, a.dim() + b.dim(), a.ambient);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.ambient; ++j) m.at(i, j) = a.basis.at(i, j);
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < a.ambient; ++j) m.at(a.dim() + i, j) = b.basis.at(i, j);
  return row_space(m);
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  // Zassenhaus: row-reduce [A|A; B|0]; rows with zero left half carry the
  // intersection in the right half.
  if (a.ambient != b.ambient) throw std::invalid_argument("intersect: ambient mismatch");
  int D = a.ambient;
  Mat m(a.F, a.dim() + b.dim(), 2 * D);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < D; ++j) {
      m.at(i, j) = a.basis.at(i, j);
      m.at(i, D + j) = a.basis.at(i, j);
    }
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < D; ++j) m.at(a.dim() + i, j) = b.basis.at(i, j);
  rref_in_place(m);
  Mat inter(a.F, 0, D);
  for (int i = 0; i < m.rows; ++i) {
    bool left_zero = true;
    for (int j = 0; j < D && left_zero; ++j)
      if (m.at(i, j)) left_zero = false;
    if (!left_zero) continue;
    bool right_zero = true;
    for (int j = 0; j < D && right_zero; ++j)
      if (m.at(i, D + j)) right_zero = false;
    if (right_zero) continue;
    inter.rows++;
    for (int j = 0; j < D; ++j) inter.a.push_back(m.at(i, D + j));
  }
  return row_space(inter);
}

bool contains(const Subspace& a, const Vec& v) {
  // v reduces to zero against the RREF basis.
  Vec w = v;
  const FieldCtx* F = a.F;
  for (int i = 0; i < a.dim(); ++i) {
    int pc = -1;
    for (int j = 0; j < a.ambient; ++j)
      if (a.basis.at(i, j)) {
        pc = j;
        break;
      }
    if (pc < 0) continue;
    uint8_t f = w[pc];
    if (f == 0) continue;
    for (int j = 0; j < a.ambient; ++j)
      w[j] = F->sub(w[j], F->mul(f, a.basis.at(i, j)));
  }
  return is_zero(w);
}

bool contains(const Subspace& a, const Subspace& b) {
  for (int i = 0; i < b.dim(); ++i)
    if (!contains(a, b.basis.row(i))) return false;
  return true;
}

Mat complement_in(const Subspace& sub, const Subspace& sup) {
  // Extend the RREF basis of sub by rows of sup that increase the rank.
  Mat acc = sub.basis;
  Mat comp(sub.F, 0, sub.ambient);
  int r = rank(acc);
  for (int i = 0; i < sup.dim(); ++i) {
    Mat trial(sub.F, acc.rows + 1, sub.ambient);
    for (int k = 0; k < acc.rows; ++k)
      for (int j = 0; j < sub.ambient; ++j) trial.at(k, j) = acc.at(k, j);
    for (int j = 0; j < sub.ambient; ++j) trial.at(acc.rows, j) = sup.basis.at(i, j);
    if (rank(trial) > r) {
      acc = trial;
      ++r;
      comp.rows++;
      for (int j = 0; j < sub.ambient; ++j) comp.a.push_back(sup.basis.at(i, j));
    }
  }
  return comp;
}

QuotientMap quotient_map(int ambient, const Subspace& sub) {
  const FieldCtx* F = sub.F;
  Mat comp = complement_in(sub, full_space(F, ambient));
  int d = comp.rows;
  // Basis change matrix: rows of sub then rows of comp.
  Mat b(F, ambient, ambient);
  for (int i = 0; i < sub.dim(); ++i)
    for (int j = 0; j < ambient; ++j) b.at(i, j) = sub.basis.at(i, j);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < ambient; ++j) b.at(sub.dim() + i, j) = comp.at(i, j);
  Mat binv = *inverse(b.transposed());  // columns are basis vectors
  // coords of x in basis b: binv * x; projection keeps the last d coords.
  QuotientMap qm;
  qm.proj = Mat(F, d, ambient);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < ambient; ++j) qm.proj.at(i, j) = binv.at(sub.dim() + i, j);
  qm.section = comp.transposed();
  return qm;
}

Vec coords_in(const Mat& basis_rows, const Vec& v) {
  auto x = solve(basis_rows.transposed(), v);
  if (!x) throw std::logic_error("coords_in: vector outside span");
  return *x;
}

void for_each_subspace(const FieldCtx* F, int D, int k,
                       const std::function<void(const Subspace&)>& fn) {
  if (k < 0 || k > D) return;
  if (k == 0) {
    fn(zero_space(F, D));
    return;
  }
  // Enumerate pivot column sets then free entries of the RREF form.
  std::vector<int> piv(k);
  std::function<void(int, int)> choose = [&](int idx, int start) {
    if (idx == k) {
      std::vector<std::pair<int, int>> free_pos;  // (row, col)
      std::vector<bool> is_piv(D, false);
      for (int c : piv) is_piv[c] = true;
      for (int i = 0; i < k; ++i)
        for (int c = piv[i] + 1; c < D; ++c)
          if (!is_piv[c]) free_pos.emplace_back(i, c);
      Mat m(F, k, D);
      for (int i = 0; i < k; ++i) m.at(i, piv[i]) = 1;
      size_t nfree = free_pos.size();
      std::vector<uint8_t> vals(nfree, 0);
      while (true) {
        for (size_t t = 0; t < nfree; ++t) m.at(free_pos[t].first, free_pos[t].second) = vals[t];
        Subspace s(F, D);
        s.basis = m;
        fn(s);
        size_t t = 0;
        while (t < nfree && vals[t] == F->q() - 1) vals[t++] = 0;
        if (t == nfree) break;
        vals[t]++;
      }
      return;
    }
    for (int c = start; c <= D - (k - idx); ++c) {
      piv[idx] = c;
      choose(idx + 1, c + 1);
    }
  };
  choose(0, 0);
}

void for_each_vector(const FieldCtx* F, int D, const std::function<void(const Vec&)>& fn) {
  Vec v(D, 0);
  while (true) {
    fn(v);
    int t = 0;
    while (t < D && v[t] == F->q() - 1) v[t++] = 0;
    if (t == D) break;
    v[t]++;
  }
}

Mat read_mat(std::istream& in, const FieldCtx* expected) {
  int rows, cols, q;
  if (!(in >> rows >> cols >> q)) throw std::runtime_error("matrix header: expected 'rows cols q'");
  const FieldCtx* F = expected;
  if (F) {
    if (F->q() != q) throw std::runtime_error("matrix field size does not match the space");
  } else {
    for (int p = 2; p <= q; ++p) {
      bool prime = true;
      for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) prime = false;
      if (!prime) continue;
      int k = 0;
      long long v = 1;
      while (v < q) {
        v *= p;
        ++k;
      }
      if (v == q) {
        F = make_field(p, k);
        break;
      }
    }
    if (!F) throw std::runtime_error("matrix header: q is not a prime power");
  }
  Mat m(F, rows, cols);
  for (auto& e : m.a) {
    int v;
    if (!(in >> v)) throw std::runtime_error("matrix body: not enough entries");
    if (v < 0 || v >= q) throw std::runtime_error("matrix entry out of range [0,q)");
    e = uint8_t(v);
  }
  return m;
}

void write_mat(std::ostream& out, const Mat& m) {
  out << m.rows << " " << m.cols << " " << m.F->q() << "\n";
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) out << (j ? " " : "") << int(m.at(i, j));
    out << "\n";
  }
}

}  // namespace ocf
