#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ocf/gf.hpp"

namespace ocf {

using Vec = std::vector<uint8_t>;

/// Dense matrix over a small finite field.  Plain value type; row-major.
struct Mat {
  const FieldCtx* F = nullptr;
  int rows = 0, cols = 0;
  std::vector<uint8_t> a;

  Mat() = default;
  Mat(const FieldCtx* f, int r, int c) : F(f), rows(r), cols(c), a(size_t(r) * c, 0) {}

  uint8_t& at(int r, int c) { return a[size_t(r) * cols + c]; }
  uint8_t at(int r, int c) const { return a[size_t(r) * cols + c]; }

  static Mat identity(const FieldCtx* f, int n);
  static Mat zero(const FieldCtx* f, int r, int c) { return Mat(f, r, c); }

  Mat transposed() const;
  Vec row(int r) const { return Vec(a.begin() + size_t(r) * cols, a.begin() + size_t(r + 1) * cols); }

  friend bool operator==(const Mat&, const Mat&) = default;
  bool operator<(const Mat& o) const { return a < o.a; }
};

Mat mat_mul(const Mat& x, const Mat& y);
Mat mat_add(const Mat& x, const Mat& y);
Mat mat_sub(const Mat& x, const Mat& y);
Mat mat_pow(const Mat& x, int n);
Vec mat_vec(const Mat& m, const Vec& v);
Vec vec_mat(const Vec& v, const Mat& m);  // row vector times matrix
Vec vec_add(const FieldCtx* F, const Vec& x, const Vec& y);
Vec vec_scale(const FieldCtx* F, uint8_t c, const Vec& x);
uint8_t dot(const FieldCtx* F, const Vec& x, const Vec& y);
bool is_zero(const Vec& v);
bool is_zero(const Mat& m);

/// In-place reduced row echelon form; returns pivot column indices.
std::vector<int> rref_in_place(Mat& m);
int rank(Mat m);
std::optional<Mat> inverse(const Mat& m);
bool is_nilpotent(const Mat& m);

/// A subspace of F^D stored as an RREF basis, so equality of subspaces is
/// equality of representations.
struct Subspace {
  const FieldCtx* F = nullptr;
  int ambient = 0;
  Mat basis;  // RREF, rows = dim

  Subspace() = default;
  Subspace(const FieldCtx* f, int amb) : F(f), ambient(amb), basis(f, 0, amb) {}

  int dim() const { return basis.rows; }
  friend bool operator==(const Subspace&, const Subspace&) = default;
  bool operator<(const Subspace& o) const { return basis.a < o.basis.a; }
};

/// Canonical subspace spanned by the rows of m.
Subspace row_space(Mat m);
Subspace full_space(const FieldCtx* F, int D);
Subspace zero_space(const FieldCtx* F, int D);
Subspace kernel(const Mat& m);
Subspace image(const Mat& m);
std::optional<Vec> solve(const Mat& m, const Vec& rhs);

Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);
bool contains(const Subspace& a, const Vec& v);
bool contains(const Subspace& a, const Subspace& b);  // b <= a

/// Rows of `sup` completing a basis of `sub` to one of `sup`.
Mat complement_in(const Subspace& sub, const Subspace& sup);

/// Projection of F^ambient onto a complement-coordinate model of
/// ambient/sub together with a right-inverse section.
struct QuotientMap {
  Mat proj;     // (ambient-dim(sub)) x ambient
  Mat section;  // ambient x (ambient-dim(sub)); proj*section = id
};
QuotientMap quotient_map(int ambient, const Subspace& sub);

/// Coordinates of v in the row basis of m (throws if v is outside).
Vec coords_in(const Mat& basis_rows, const Vec& v);

/// Enumerates every dim-k subspace of F^D (RREF enumeration) and calls fn.
void for_each_subspace(const FieldCtx* F, int D, int k,
                       const std::function<void(const Subspace&)>& fn);
/// Enumerates every vector of F^D.
void for_each_vector(const FieldCtx* F, int D, const std::function<void(const Vec&)>& fn);

/// Matrix text format: first line "rows cols q", then row-major entries.
Mat read_mat(std::istream& in, const FieldCtx* expected = nullptr);
void write_mat(std::ostream& out, const Mat& m);

}  // namespace ocf
