#include "doctest.h"
#include "ocf/nilpotent.hpp"

using namespace ocf;

// every nilpotent compatible with Q, by brute force over all D x D matrices
static std::vector<Mat> all_tilde(const QuadSpace& s) {
  std::vector<Mat> out;
  long long total = 1;
  for (int i = 0; i < s.D * s.D; ++i) total *= s.F->q();
  Mat n(s.F, s.D, s.D);
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (auto& e : n.a) {
      e = uint8_t(c % s.F->q());
      c /= s.F->q();
    }
    if (membership(s, n) != Membership::NotIn) out.push_back(n);
  }
  return out;
}

static Mat d3_example(const QuadSpace& s) {
  // basis e, f, r with <e,f> = 1, Q(r) = 1: N f = e + r, N e = N r = 0
  Mat n(s.F, 3, 3);
  n.at(0, 1) = 1;
  n.at(2, 1) = 1;
  return n;
}

TEST_CASE("membership basics") {
  const FieldCtx* F = make_field(2, 1);
  QuadSpace s2 = standard_space(F, 2, SpaceKind::Split);
  CHECK(membership(s2, Mat::zero(F, 2, 2)) == Membership::InM);
  // N(x) = <x,v> v with Q(v) = 1, v = e+f: rank 1, odd kernel
  Mat n(F, 2, 2);
  for (int j = 0; j < 2; ++j) {
    Vec ej(2, 0);
    ej[j] = 1;
    Vec v{1, 1};
    uint8_t c = s2.B(ej, v);
    n.at(0, j) = c;
    n.at(1, j) = c;
  }
  CHECK(membership(s2, n) == Membership::InTilde);
  QuadSpace s3 = standard_space(F, 3, SpaceKind::Odd);
  CHECK(membership(s3, d3_example(s3)) == Membership::InM);
}

TEST_CASE("jordan invariants") {
  const FieldCtx* F = make_field(2, 1);
  QuadSpace s3 = standard_space(F, 3, SpaceKind::Odd);
  NilpotentWitness z = make_witness(s3, Mat::zero(F, 3, 3));
  CHECK(z.e == 0);
  CHECK(z.c[1] == 3);
  NilpotentWitness w = make_witness(s3, d3_example(s3));
  CHECK(w.e == 2);
  CHECK(w.c[2] == 1);
  CHECK(w.c[1] == 1);
}

TEST_CASE("lambda and epsilon for the D=3 example") {
  const FieldCtx* F = make_field(2, 1);
  QuadSpace s = standard_space(F, 3, SpaceKind::Odd);
  NilpotentWitness w = make_witness(s, d3_example(s));
  CHECK(w.eps[2] == 1);
  Vec l = lambda_covector(w, 2);
  CHECK(l == Vec{0, 1, 0});  // lambda(f) = 1
  // lambda_i vanishes for odd i on ker N^i
  Vec l1 = lambda_covector(w, 1);
  Subspace k1 = kernel(w.N);
  for (int i = 0; i < k1.dim(); ++i) CHECK(dot(F, l1, k1.basis.row(i)) == 0);
}

TEST_CASE("line L in the three characteristic-2 cases") {
  const FieldCtx* F = make_field(2, 1);
  // lambda != 0, radical != 0
  QuadSpace s3 = standard_space(F, 3, SpaceKind::Odd);
  NilpotentWitness w3 = make_witness(s3, d3_example(s3));
  Subspace L3 = line_L(w3);
  CHECK(L3.dim() == 1);
  CHECK(L3.basis.row(0) == Vec{1, 0, 0});
  // lambda = 0: type (2,2) on split D4, N f1 = e2, N f2 = e1
  QuadSpace s4 = standard_space(F, 4, SpaceKind::Split);
  Mat n(F, 4, 4);
  n.at(2, 1) = 1;
  n.at(0, 3) = 1;
  NilpotentWitness w4 = make_witness(s4, n);
  CHECK(w4.e == 2);
  CHECK(w4.c[2] == 2);
  CHECK(w4.eps[2] == 0);
  Subspace L4 = line_L(w4);
  CHECK(L4 == image(n));
  CHECK(L4.dim() == 2);
  // lambda != 0, radical = 0: found among all compatible N of type (2,2)
  bool found = false;
  for (const Mat& m : all_tilde(s4)) {
    if (membership(s4, m) != Membership::InM) continue;
    NilpotentWitness w = make_witness(s4, m);
    if (w.e != 2 || w.c[2] != 2 || w.eps[2] != 1) continue;
    found = true;
    Subspace L = line_L(w);
    CHECK(L.dim() == 1);
    CHECK(contains(image(m), L));
  }
  CHECK(found);
}

TEST_CASE("reduction of the worked examples") {
  const FieldCtx* F = make_field(2, 1);
  QuadSpace s3 = standard_space(F, 3, SpaceKind::Odd);
  Reduction r3 = reduce(make_witness(s3, d3_example(s3)));
  CHECK(r3.next.space.D == 1);
  CHECK(is_zero(r3.next.N));
  CHECK(r3.next.space.Q(Vec{1}) != 0);
  QuadSpace s4 = standard_space(F, 4, SpaceKind::Split);
  Mat n(F, 4, 4);
  n.at(2, 1) = 1;
  n.at(0, 3) = 1;
  Reduction r4 = reduce(make_witness(s4, n));
  CHECK(r4.next.space.D == 0);
}

TEST_CASE("predict_reduced oracle cases") {
  // (iii) e=2, c2=1, c1=1
  auto [c1, e1] = predict_reduced({0, 1, 1}, {0, 0, 1}, 2, true);
  CHECK(c1 == std::vector<int>{0, 1});
  CHECK(e1 == std::vector<int>{0, 0});
  // (i) e=3, c3=1, c1=1
  auto [c2, e2] = predict_reduced({0, 1, 0, 1}, {0, 0, 0, 0}, 3, false);
  CHECK(c2 == std::vector<int>{0, 2});
  // (ii) e=2, c2=2, c1=0
  auto [c3, e3] = predict_reduced({0, 0, 2}, {0, 0, 1}, 2, true);
  CHECK(c3 == std::vector<int>{0, 2});
  CHECK(e3 == std::vector<int>{0, 0});
}

TEST_CASE("exhaustive invariants over small spaces") {
  const FieldCtx* F = make_field(2, 1);
  for (auto [D, kind] : std::vector<std::pair<int, SpaceKind>>{
           {2, SpaceKind::Split}, {2, SpaceKind::Nonsplit}, {3, SpaceKind::Odd},
           {4, SpaceKind::Split}, {4, SpaceKind::Nonsplit}}) {
    QuadSpace s = standard_space(F, D, kind);
    for (const Mat& n : all_tilde(s)) {
      Mat u = mat_add(Mat::identity(F, D), n);
      CHECK(is_isometry(s, u));
      NilpotentWitness w = make_witness(s, n);
      // (1+N)(1+N-dagger) = 1 and N-dagger is compatible too
      CHECK(mat_mul(u, mat_add(Mat::identity(F, D), w.dagger)) == Mat::identity(F, D));
      CHECK(membership(s, w.dagger) != Membership::NotIn);
      // radical facts
      CHECK(intersect(image(n), s.radical).dim() == 0);
      CHECK(is_zero(mat_mul(s.radical.basis, n.transposed())));
      for (int i = 1; i <= w.e; ++i) {
        Mat ni = mat_pow(n, i);
        CHECK(perp(s, kernel(ni)) == sum(image(ni), s.radical));
        CHECK(perp(s, image(ni)) == kernel(ni));
      }
      // membership in the smaller set matches SO membership of 1+N
      if (D % 2 == 0) {
        CHECK((membership(s, n) == Membership::InM) == so_membership(s, u));
        CHECK(dickson(s, u) == kernel(n).dim() % 2);
      }
      if (w.e == 0 || membership(s, n) != Membership::InM) continue;
      // L postconditions
      Subspace L = line_L(w);
      CHECK(is_totally_singular(s, L));
      CHECK(contains(perp(s, L), L));
      CHECK(is_zero(mat_mul(L.basis, n.transposed())));
      Subspace lp = perp(s, L);
      CHECK(contains(lp, row_space(mat_mul(lp.basis, n.transposed()))));
      CHECK(contains(sum(image(mat_pow(n, w.e - 1)), s.radical), L));
      if (w.eps[w.e] == 1) {
        CHECK(L.dim() == 1);
        // 2.2(b): L inside N^{e-1}(L-perp) iff c_e is even
        Subspace nl = row_space(mat_mul(lp.basis, mat_pow(n, w.e - 1).transposed()));
        CHECK(contains(nl, L) == (w.c[w.e] % 2 == 0));
      }
      // reduction invariants match the arithmetic oracle
      Reduction r = reduce(w);
      auto [pc, pe] = predict_reduced(w.c, w.eps, w.e, w.eps[w.e] == 1);
      std::vector<int> rc = r.next.c, re = r.next.eps;
      while (!rc.empty() && rc.back() == 0) rc.pop_back();
      re.resize(rc.size());
      std::vector<int> pcc = pc;
      while (!pcc.empty() && pcc.back() == 0) pcc.pop_back();
      CHECK(rc == pcc);
      if (!pe.empty()) {
        pe.resize(pcc.size());
        CHECK(re == pe);
      }
      // W + Y splitting
      WYSplit wy = wy_split(w);
      CHECK(wy.W.dim() + wy.Y.dim() == D);
    }
  }
}

TEST_CASE("wy_split worked examples") {
  const FieldCtx* F = make_field(2, 1);
  QuadSpace s3 = standard_space(F, 3, SpaceKind::Odd);
  WYSplit wy = wy_split(make_witness(s3, d3_example(s3)));
  CHECK(wy.W.dim() == 2);
  CHECK(wy.Y.dim() == 1);
  CHECK(contains(wy.Y, s3.radical));
  // D=6 split, two 2-blocks and two trivial blocks
  QuadSpace s6 = standard_space(F, 6, SpaceKind::Split);
  Mat n(F, 6, 6);
  n.at(2, 1) = 1;
  n.at(0, 3) = 1;
  WYSplit wy6 = wy_split(make_witness(s6, n));
  CHECK(wy6.W.dim() == 4);
  CHECK(wy6.Y.dim() == 2);
}

TEST_CASE("odd characteristic: L = N^{e-1}V and reductions") {
  const FieldCtx* F = make_field(3, 1);
  QuadSpace s = standard_space(F, 3, SpaceKind::Odd);
  // regular nilpotent in the isometry Lie algebra, found by search
  bool found = false;
  for (const Mat& n : all_tilde(s)) {
    NilpotentWitness w = make_witness(s, n);
    if (w.e != 3) continue;
    found = true;
    Subspace L = line_L_odd_p(w);
    CHECK(L.dim() == 1);
    CHECK(is_totally_singular(s, L));
    CHECK(is_zero(mat_mul(L.basis, n.transposed())));
    Reduction r = reduce(w);
    CHECK(r.next.space.D == 1);
    CHECK(r.next.e <= w.e - 1);
    break;
  }
  CHECK(found);
}
