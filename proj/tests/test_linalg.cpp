#include <sstream>

#include "doctest.h"
#include "ocf/linalg.hpp"

using namespace ocf;

static Mat from_rows(const FieldCtx* F, std::vector<Vec> rows) {
  Mat m(F, int(rows.size()), rows.empty() ? 0 : int(rows[0].size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
  return m;
}

TEST_CASE("rref, rank, inverse round trip") {
  const FieldCtx* F = make_field(3, 1);
  Mat m = from_rows(F, {{1, 2, 0}, {2, 1, 1}, {0, 1, 2}});
  CHECK(rank(m) == 3);
  Mat inv = *inverse(m);
  CHECK(mat_mul(m, inv) == Mat::identity(F, 3));
  Mat sing = from_rows(F, {{1, 2, 0}, {2, 2, 0}, {0, 0, 0}});
  CHECK(rank(sing) == 2);
  CHECK(!inverse(sing).has_value());
}

TEST_CASE("Jordan block J3 kernel dimensions") {
  const FieldCtx* F = make_field(2, 1);
  Mat n(F, 3, 3);
  n.at(0, 1) = 1;
  n.at(1, 2) = 1;
  CHECK(is_nilpotent(n));
  CHECK(kernel(n).dim() == 1);
  CHECK(kernel(mat_pow(n, 2)).dim() == 2);
  CHECK(kernel(mat_pow(n, 3)).dim() == 3);
  CHECK(image(n).dim() == 2);
}

TEST_CASE("kernel vectors are killed; image spanned by columns") {
  const FieldCtx* F = make_field(2, 2);
  Mat m = from_rows(F, {{1, 2, 3, 0}, {0, 1, 1, 2}, {1, 3, 2, 2}});
  Subspace K = kernel(m);
  CHECK(K.dim() == 4 - rank(m));
  for (int i = 0; i < K.dim(); ++i) CHECK(is_zero(mat_vec(m, K.basis.row(i))));
  Subspace I = image(m);
  CHECK(I.dim() == rank(m));
  for (int j = 0; j < m.cols; ++j) {
    Vec col(m.rows);
    for (int i = 0; i < m.rows; ++i) col[i] = m.at(i, j);
    CHECK(contains(I, col));
  }
}

TEST_CASE("solve") {
  const FieldCtx* F = make_field(5, 1);
  Mat m = from_rows(F, {{1, 2}, {3, 4}, {4, 1}});
  Vec x0{2, 3};
  Vec b = mat_vec(m, x0);
  auto x = solve(m, b);
  REQUIRE(x.has_value());
  CHECK(mat_vec(m, *x) == b);
  CHECK(!solve(m, Vec{1, 0, 0}).has_value());
}

TEST_CASE("sum, intersect, modular law spot checks") {
  const FieldCtx* F = make_field(2, 1);
  int D = 4;
  std::vector<Subspace> spaces;
  for (int k = 1; k <= 2; ++k)
    for_each_subspace(F, D, k, [&](const Subspace& s) { spaces.push_back(s); });
  for (size_t i = 0; i < spaces.size(); i += 3)
    for (size_t j = 0; j < spaces.size(); j += 5) {
      const Subspace &A = spaces[i], &B = spaces[j];
      Subspace S = sum(A, B), I = intersect(A, B);
      CHECK(S.dim() + I.dim() == A.dim() + B.dim());
      CHECK(contains(S, A));
      CHECK(contains(A, I));
      for (size_t l = 0; l < spaces.size(); l += 7) {
        const Subspace& C = spaces[l];
        if (!contains(C, A)) continue;
        // A <= C implies A + (B ∩ C) = (A + B) ∩ C
        CHECK(sum(A, intersect(B, C)) == intersect(sum(A, B), C));
      }
    }
}

TEST_CASE("subspace enumeration matches Gaussian binomials") {
  // [4 choose 2]_2 = 35, [4 choose 1]_3 = 40, [3 choose 1]_4 = 21
  int n = 0;
  for_each_subspace(make_field(2, 1), 4, 2, [&](const Subspace&) { ++n; });
  CHECK(n == 35);
  n = 0;
  for_each_subspace(make_field(3, 1), 4, 1, [&](const Subspace&) { ++n; });
  CHECK(n == 40);
  n = 0;
  for_each_subspace(make_field(2, 2), 3, 1, [&](const Subspace&) { ++n; });
  CHECK(n == 21);
}

TEST_CASE("quotient map: proj is onto, section is a right inverse") {
  const FieldCtx* F = make_field(2, 1);
  Mat m = from_rows(F, {{1, 1, 0, 0}, {0, 0, 1, 1}});
  Subspace sub = row_space(m);
  QuotientMap qm = quotient_map(4, sub);
  CHECK(qm.proj.rows == 2);
  CHECK(mat_mul(qm.proj, qm.section) == Mat::identity(F, 2));
  for (int i = 0; i < sub.dim(); ++i) CHECK(is_zero(mat_vec(qm.proj, sub.basis.row(i))));
  CHECK(rank(qm.proj) == 2);
}

TEST_CASE("coords_in inverts span combinations") {
  const FieldCtx* F = make_field(3, 1);
  Mat b = from_rows(F, {{1, 0, 2}, {0, 1, 1}});
  Vec v = vec_add(F, vec_scale(F, 2, b.row(0)), b.row(1));
  Vec c = coords_in(b, v);
  CHECK(c == Vec{2, 1});
}

TEST_CASE("matrix text io round trips") {
  const FieldCtx* F = make_field(2, 2);
  Mat m = from_rows(F, {{0, 1, 2}, {3, 2, 1}});
  std::stringstream ss;
  write_mat(ss, m);
  Mat m2 = read_mat(ss);
  CHECK(m2 == m);
  CHECK(m2.F == F);
  std::stringstream bad("2 2 4\n0 1 4 0\n");
  CHECK_THROWS(read_mat(bad));
}
