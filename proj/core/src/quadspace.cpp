#include "ocf/quadspace.hpp"

#include <algorithm>
#include <stdexcept>

namespace ocf {

uint8_t QuadSpace::Q(const Vec& x) const {
  uint8_t s = 0;
  for (int i = 0; i < D; ++i) {
    if (x[i] == 0) continue;
    for (int j = i; j < D; ++j)
      s = F->add(s, F->mul(F->mul(x[i], x[j]), gram_upper.at(i, j)));
  }
  return s;
}

uint8_t QuadSpace::B(const Vec& x, const Vec& y) const {
  uint8_t s = 0;
  for (int i = 0; i < D; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < D; ++j)
      s = F->add(s, F->mul(F->mul(x[i], y[j]), bilinear.at(i, j)));
  }
  return s;
}

static Subspace bilinear_radical(const Mat& b) { return kernel(b); }

QuadSpace make_quad_space(const FieldCtx* F, const Mat& gram_upper) {
  QuadSpace s;
  s.F = F;
  s.D = gram_upper.rows;
  s.gram_upper = gram_upper;
  s.bilinear = mat_add(gram_upper, gram_upper.transposed());
  s.radical = bilinear_radical(s.bilinear);
  // Nondegeneracy: Q kills no nonzero radical vector.  (For p odd this
  // forces the radical to vanish; for p = 2 a one-dimensional radical with
  // nonsingular generator is allowed, which happens exactly for odd D.)
  for_each_vector(F, s.radical.dim(), [&](const Vec& c) {
    if (is_zero(c)) return;
    Vec r = vec_mat(c, s.radical.basis);
    if (s.Q(r) == 0) throw std::invalid_argument("degenerate quadratic form");
  });
  if (s.D % 2 == 0 && s.radical.dim() > 0)
    throw std::invalid_argument("degenerate quadratic form (even dim with radical)");
  s.type = (s.D % 2 == 0) ? witt_type(s) : 0;
  return s;
}

QuadSpace standard_space(const FieldCtx* F, int D, SpaceKind kind) {
  if (kind == SpaceKind::Odd ? (D % 2 == 0) : (D % 2 == 1))
    throw std::invalid_argument("standard_space: dimension parity mismatch");
  Mat m(F, D, D);
  int planes = (kind == SpaceKind::Odd) ? (D - 1) / 2 : (kind == SpaceKind::Split ? D / 2 : D / 2 - 1);
  for (int i = 0; i < planes; ++i) m.at(2 * i, 2 * i + 1) = 1;  // Q(x,y) = xy
  if (kind == SpaceKind::Odd) {
    m.at(D - 1, D - 1) = 1;  // line Q(z) = z^2
  } else if (kind == SpaceKind::Nonsplit) {
    // anisotropic plane x^2 + xy + d y^2
    int d = -1;
    if (F->p() == 2) {
      for (int c = 0; c < F->q(); ++c)
        if (F->trace(c) == 1) {
          d = c;
          break;
        }
    } else {
      // need 1 - 4d to be a nonsquare
      for (int c = 0; c < F->q(); ++c) {
        uint8_t disc = F->sub(1, F->mul(F->add(F->add(1, 1), F->add(1, 1)), uint8_t(c)));
        if (!F->is_square(disc)) {
          d = c;
          break;
        }
      }
    }
    if (d < 0) throw std::logic_error("no anisotropic plane coefficient found");
    m.at(D - 2, D - 2) = 1;
    m.at(D - 2, D - 1) = 1;
    m.at(D - 1, D - 1) = uint8_t(d);
  }
  return make_quad_space(F, m);
}

std::pair<int, SpaceKind> parse_space_desc(const std::string& desc) {
  if (desc.size() < 2 || desc[0] != 'D') throw std::invalid_argument("bad space descriptor: " + desc);
  size_t i = 1;
  int D = 0;
  while (i < desc.size() && isdigit(desc[i])) D = 10 * D + (desc[i++] - '0');
  if (D <= 0) throw std::invalid_argument("bad space descriptor: " + desc);
  if (i == desc.size()) {
    if (D % 2 == 0) throw std::invalid_argument("even dimension needs a sign: " + desc);
    return {D, SpaceKind::Odd};
  }
  if (i + 1 != desc.size() || D % 2 != 0) throw std::invalid_argument("bad space descriptor: " + desc);
  if (desc[i] == '+') return {D, SpaceKind::Split};
  if (desc[i] == '-') return {D, SpaceKind::Nonsplit};
  throw std::invalid_argument("bad space descriptor: " + desc);
}

std::string space_desc(const QuadSpace& s) {
  std::string r = "D" + std::to_string(s.D);
  if (s.type == 1) r += "+";
  if (s.type == -1) r += "-";
  return r;
}

Subspace perp(const QuadSpace& s, const Subspace& w) {
  // x with B(x, row) = 0 for each basis row: kernel of (basis * bilinear^T).
  Mat m = mat_mul(w.basis, s.bilinear.transposed());
  return kernel(m);
}

bool is_totally_singular(const QuadSpace& s, const Subspace& w) {
  for (int i = 0; i < w.dim(); ++i) {
    if (s.Q(w.basis.row(i)) != 0) return false;
    for (int j = i + 1; j < w.dim(); ++j)
      if (s.B(w.basis.row(i), w.basis.row(j)) != 0) return false;
  }
  return true;
}

WittDecomposition witt_decompose(const QuadSpace& s) {
  const FieldCtx* F = s.F;
  WittDecomposition wd;
  Subspace U = full_space(F, s.D);
  while (true) {
    // a singular vector in U not perpendicular to all of U
    Vec v;
    bool found = false;
    for_each_vector(F, U.dim(), [&](const Vec& c) {
      if (found || is_zero(c)) return;
      Vec x = vec_mat(c, U.basis);
      if (s.Q(x) != 0) return;
      for (int i = 0; i < U.dim(); ++i)
        if (s.B(x, U.basis.row(i)) != 0) {
          v = x;
          found = true;
          return;
        }
    });
    if (!found) break;
    Vec w;
    for (int i = 0; i < U.dim(); ++i)
      if (s.B(v, U.basis.row(i)) != 0) {
        uint8_t c = s.B(v, U.basis.row(i));
        w = vec_scale(F, F->inv(c), U.basis.row(i));
        break;
      }
    // make w singular: Q(w + c v) = Q(w) + c with B(v,w) = 1
    w = vec_add(F, w, vec_scale(F, F->neg(s.Q(w)), v));
    wd.pairs.emplace_back(v, w);
    Mat plane(F, 2, s.D);
    for (int j = 0; j < s.D; ++j) {
      plane.at(0, j) = v[j];
      plane.at(1, j) = w[j];
    }
    U = intersect(U, perp(s, row_space(plane)));
  }
  // what is left: anisotropic kernel plus the radical
  Mat comp = complement_in(intersect(U, s.radical), U);
  for (int i = 0; i < comp.rows; ++i) wd.aniso.push_back(comp.row(i));
  return wd;
}

int witt_type(const QuadSpace& s) {
  if (s.D % 2 != 0) throw std::invalid_argument("witt_type needs even dimension");
  WittDecomposition wd = witt_decompose(s);
  return wd.aniso.empty() ? +1 : -1;
}

Subspace max_totally_singular(const QuadSpace& s) {
  WittDecomposition wd = witt_decompose(s);
  Mat m(s.F, int(wd.pairs.size()), s.D);
  for (int i = 0; i < int(wd.pairs.size()); ++i)
    for (int j = 0; j < s.D; ++j) m.at(i, j) = wd.pairs[i].first[j];
  return row_space(m);
}

RestrictedForm restrict_form(const QuadSpace& s, const Subspace& w) {
  const FieldCtx* F = s.F;
  int d = w.dim();
  RestrictedForm rf;
  rf.basis = w.basis;
  Mat g(F, d, d);
  for (int i = 0; i < d; ++i) {
    g.at(i, i) = s.Q(w.basis.row(i));
    for (int j = i + 1; j < d; ++j) g.at(i, j) = s.B(w.basis.row(i), w.basis.row(j));
  }
  QuadSpace r;
  r.F = F;
  r.D = d;
  r.gram_upper = g;
  r.bilinear = mat_add(g, g.transposed());
  r.radical = bilinear_radical(r.bilinear);
  bool ok = true;
  for_each_vector(F, r.radical.dim(), [&](const Vec& c) {
    if (is_zero(c)) return;
    if (r.Q(vec_mat(c, r.radical.basis)) == 0) ok = false;
  });
  if (r.D % 2 == 0 && r.radical.dim() > 0) ok = false;
  rf.nondegenerate = ok;
  if (ok) r.type = (d % 2 == 0 && d > 0) ? witt_type(r) : 0;
  rf.space = r;
  return rf;
}

QuotientForm quotient_form(const QuadSpace& s, const Subspace& L) {
  if (!is_totally_singular(s, L)) throw std::invalid_argument("quotient_form: L not totally singular");
  Subspace W = perp(s, L);
  if (!contains(W, L)) throw std::invalid_argument("quotient_form: L not inside its perp");
  QuotientForm qf;
  qf.lperp = W;
  qf.section = complement_in(L, W);
  int d = qf.section.rows;
  // quotient coordinates: extend [L; section] to a basis of the ambient
  // space, invert, and keep the rows dual to the section vectors.
  Mat b(s.F, L.dim() + d, s.D);
  for (int i = 0; i < L.dim(); ++i)
    for (int j = 0; j < s.D; ++j) b.at(i, j) = L.basis.at(i, j);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < s.D; ++j) b.at(L.dim() + i, j) = qf.section.at(i, j);
  Mat ext = complement_in(row_space(b), full_space(s.F, s.D));
  Mat full(s.F, s.D, s.D);
  for (int i = 0; i < b.rows; ++i)
    for (int j = 0; j < s.D; ++j) full.at(i, j) = b.at(i, j);
  for (int i = 0; i < ext.rows; ++i)
    for (int j = 0; j < s.D; ++j) full.at(b.rows + i, j) = ext.at(i, j);
  Mat dual = *inverse(full.transposed());
  qf.proj = Mat(s.F, d, s.D);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < s.D; ++j) qf.proj.at(i, j) = dual.at(L.dim() + i, j);
  Mat g(s.F, d, d);
  for (int i = 0; i < d; ++i) {
    g.at(i, i) = s.Q(qf.section.row(i));
    for (int j = i + 1; j < d; ++j) g.at(i, j) = s.B(qf.section.row(i), qf.section.row(j));
  }
  qf.space = make_quad_space(s.F, g);
  return qf;
}

Mat pushforward(const QuotientForm& qf, const Mat& n) {
  return mat_mul(qf.proj, mat_mul(n, qf.section.transposed()));
}

bool is_isometry(const QuadSpace& s, const Mat& g) {
  if (g.rows != s.D || g.cols != s.D || !inverse(g)) return false;
  for (int i = 0; i < s.D; ++i) {
    Vec ei(s.D, 0);
    ei[i] = 1;
    Vec gi = mat_vec(g, ei);
    if (s.Q(gi) != s.Q(ei)) return false;
    for (int j = i + 1; j < s.D; ++j) {
      Vec ej(s.D, 0);
      ej[j] = 1;
      if (s.B(gi, mat_vec(g, ej)) != s.B(ei, ej)) return false;
    }
  }
  return true;
}

unsigned long long classical_O_order(const QuadSpace& s) {
  unsigned long long q = s.F->q();
  auto qpow = [&](int e) {
    unsigned long long r = 1;
    while (e--) r *= q;
    return r;
  };
  if (s.D % 2 == 0) {
    int m = s.D / 2;
    long long eta = s.type;
    unsigned long long r = 2 * qpow(m * (m - 1)) * (unsigned long long)((long long)qpow(m) - eta);
    for (int i = 1; i < m; ++i) r *= qpow(2 * i) - 1;
    return r;
  }
  int m = (s.D - 1) / 2;
  unsigned long long r = qpow(m * m);
  for (int i = 1; i <= m; ++i) r *= qpow(2 * i) - 1;
  if (s.F->p() != 2) r *= 2;  // p=2 odd D: O_Q ≅ Sp_{2m}
  return r;
}

std::vector<Mat> transvection_generators(const QuadSpace& s, unsigned long long verify_limit) {
  const FieldCtx* F = s.F;
  std::vector<Mat> gens;
  std::set<Subspace> seen_lines;
  for_each_subspace(F, s.D, 1, [&](const Subspace& line) {
    Vec v = line.basis.row(0);
    uint8_t qv = s.Q(v);
    if (qv == 0) return;
    // x -> x - (B(x,v)/Q(v)) v
    Mat g = Mat::identity(F, s.D);
    for (int j = 0; j < s.D; ++j) {
      Vec ej(s.D, 0);
      ej[j] = 1;
      uint8_t c = F->div(s.B(ej, v), qv);
      for (int i = 0; i < s.D; ++i) g.at(i, j) = F->sub(g.at(i, j), F->mul(c, v[i]));
    }
    gens.push_back(g);
  });
  unsigned long long target = classical_O_order(s);
  if (target > verify_limit) return gens;
  auto cl = group_closure(gens, verify_limit);
  if (cl.size() == target) return gens;
  // patch: permutations of the hyperbolic planes of a Witt decomposition
  WittDecomposition wd = witt_decompose(s);
  for (size_t i = 0; i + 1 < wd.pairs.size(); ++i) {
    // map plane i to plane i+1 and back, identity elsewhere: express as a
    // matrix in the decomposition basis, then conjugate into standard coords.
    std::vector<Vec> basis;
    for (auto& pr : wd.pairs) {
      basis.push_back(pr.first);
      basis.push_back(pr.second);
    }
    for (auto& v : wd.aniso) basis.push_back(v);
    for (int i2 = 0; i2 < s.radical.dim(); ++i2) basis.push_back(s.radical.basis.row(i2));
    Mat b(F, s.D, s.D);
    for (int r = 0; r < s.D; ++r)
      for (int c = 0; c < s.D; ++c) b.at(r, c) = basis[r][c];
    Mat perm = Mat::identity(F, s.D);
    auto swap_cols = [&](int a2, int b2) {
      for (int r = 0; r < s.D; ++r) std::swap(perm.at(r, a2), perm.at(r, b2));
    };
    swap_cols(int(2 * i), int(2 * i + 2));
    swap_cols(int(2 * i + 1), int(2 * i + 3));
    // columns of b^T are the decomposition basis vectors
    Mat bt = b.transposed();
    Mat g = mat_mul(bt, mat_mul(perm, *inverse(bt)));
    if (is_isometry(s, g)) gens.push_back(g);
  }
  cl = group_closure(gens, verify_limit);
  if (cl.size() != target)
    throw std::logic_error("isometry generators do not close to the classical order");
  return gens;
}

static uint8_t det(Mat m) {
  const FieldCtx* F = m.F;
  uint8_t d = 1;
  int n = m.rows;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (m.at(i, c)) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(c, j));
      d = F->neg(d);
    }
    d = F->mul(d, m.at(c, c));
    uint8_t s = F->inv(m.at(c, c));
    for (int i = c + 1; i < n; ++i) {
      uint8_t f = F->mul(s, m.at(i, c));
      if (!f) continue;
      for (int j = c; j < n; ++j) m.at(i, j) = F->sub(m.at(i, j), F->mul(f, m.at(c, j)));
    }
  }
  return d;
}

int dickson(const QuadSpace& s, const Mat& g) {
  if (!is_isometry(s, g)) throw std::invalid_argument("dickson: not an isometry");
  if (s.F->p() != 2) return det(g) == 1 ? 0 : 1;
  int d = rank(mat_sub(g, Mat::identity(s.F, s.D))) % 2;
  if (s.D % 2 == 0 && s.type == +1) {
    Subspace S = max_totally_singular(s);
    Subspace gS = row_space(mat_mul(S.basis, g.transposed()));
    int d2 = (S.dim() - intersect(S, gS).dim()) % 2;
    if (d2 != d) throw std::logic_error("Dickson invariant cross-check failed");
  }
  return d;
}

bool so_membership(const QuadSpace& s, const Mat& g) {
  if (s.F->p() == 2 && s.D % 2 == 1) {
    if (!is_isometry(s, g)) throw std::invalid_argument("so_membership: not an isometry");
    return true;  // the full isometry group is connected here
  }
  return dickson(s, g) == 0;
}

std::set<Mat> group_closure(const std::vector<Mat>& gens, unsigned long long guard) {
  std::set<Mat> seen;
  std::vector<Mat> frontier;
  if (gens.empty()) return seen;
  Mat id = Mat::identity(gens[0].F, gens[0].rows);
  seen.insert(id);
  frontier.push_back(id);
  while (!frontier.empty()) {
    std::vector<Mat> next;
    for (const Mat& m : frontier)
      for (const Mat& g : gens) {
        Mat p = mat_mul(m, g);
        if (seen.insert(p).second) {
          next.push_back(p);
          if (seen.size() > guard) throw std::runtime_error("group_closure guard exceeded");
        }
      }
    frontier = std::move(next);
  }
  return seen;
}

std::set<Mat> conjugacy_orbit(const std::vector<Mat>& gens, const Mat& u,
                              unsigned long long guard) {
  std::set<Mat> seen{u};
  std::vector<Mat> frontier{u};
  std::vector<std::pair<Mat, Mat>> gpairs;
  for (const Mat& g : gens) gpairs.emplace_back(g, *inverse(g));
  while (!frontier.empty()) {
    std::vector<Mat> next;
    for (const Mat& m : frontier)
      for (auto& [g, gi] : gpairs) {
        Mat p = mat_mul(g, mat_mul(m, gi));
        if (seen.insert(p).second) {
          next.push_back(p);
          if (seen.size() > guard) throw std::runtime_error("conjugacy_orbit guard exceeded");
        }
      }
    frontier = std::move(next);
  }
  return seen;
}

}  // namespace ocf
