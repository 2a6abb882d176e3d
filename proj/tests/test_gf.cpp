#include "doctest.h"
#include "ocf/gf.hpp"

using namespace ocf;

TEST_CASE("prime fields") {
  for (int p : {2, 3, 5, 7}) {
    const FieldCtx* F = make_field(p, 1);
    CHECK(F->q() == p);
    for (int a = 0; a < p; ++a) {
      for (int b = 0; b < p; ++b) {
        CHECK(F->add(a, b) == (a + b) % p);
        CHECK(F->mul(a, b) == (a * b) % p);
      }
      if (a) CHECK(F->mul(a, F->inv(a)) == 1);
    }
  }
}

TEST_CASE("GF(4) modulus is x^2+x+1") {
  const FieldCtx* F = make_field(2, 2);
  CHECK(F->modulus_string() == "x^2 + x + 1");
  // the two non-prime elements are primitive cube roots of 1
  CHECK(F->mul(2, 2) == 3);
  CHECK(F->mul(2, 3) == 1);
}

TEST_CASE("field axioms on every supported field") {
  for (auto [p, k] : std::vector<std::pair<int, int>>{
           {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6},
           {3, 1}, {3, 2}, {3, 3}, {5, 1}, {5, 2}, {7, 1}, {7, 2},
           {11, 1}, {13, 1}, {17, 1}, {19, 1}, {23, 1}, {29, 1},
           {31, 1}, {37, 1}, {41, 1}, {43, 1}, {47, 1}, {53, 1},
           {59, 1}, {61, 1}}) {
    const FieldCtx* F = make_field(p, k);
    int q = F->q();
    for (int a = 0; a < q; ++a) {
      CHECK(F->add(a, 0) == a);
      CHECK(F->mul(a, 1) == a);
      CHECK(F->add(a, F->neg(a)) == 0);
      if (a) CHECK(F->mul(a, F->inv(a)) == 1);
      for (int b = 0; b < q; ++b) {
        CHECK(F->add(a, b) == F->add(b, a));
        CHECK(F->mul(a, b) == F->mul(b, a));
        for (int c = 0; c < q; ++c) {
          CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
          CHECK(F->mul(a, F->mul(b, c)) == F->mul(F->mul(a, b), c));
        }
      }
    }
  }
}

TEST_CASE("multiplicative order divides q-1; x^8 = 1 in GF(9)") {
  const FieldCtx* F = make_field(3, 2);
  for (int a = 1; a < 9; ++a) CHECK(F->pow(a, 8) == 1);
}

TEST_CASE("square roots in characteristic 2 are exhaustive and unique") {
  for (int k : {1, 2, 3, 4, 5, 6}) {
    const FieldCtx* F = make_field(2, k);
    for (int a = 0; a < F->q(); ++a) {
      int s = F->sqrt_char2(a);
      CHECK(F->mul(s, s) == a);
    }
  }
}

TEST_CASE("trace is additive, GF(p)-valued, with kernel of size q/p") {
  for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 2}, {5, 2}}) {
    const FieldCtx* F = make_field(p, k);
    int zeros = 0;
    for (int a = 0; a < F->q(); ++a) {
      CHECK(F->trace(a) < p);
      if (F->trace(a) == 0) ++zeros;
      for (int b = 0; b < F->q(); ++b)
        CHECK(F->trace(F->add(a, b)) == (F->trace(a) + F->trace(b)) % p);
    }
    CHECK(zeros == F->q() / p);
  }
}

TEST_CASE("frobenius is the p-power map") {
  const FieldCtx* F = make_field(2, 4);
  for (int a = 0; a < 16; ++a) CHECK(F->frob(a) == F->mul(a, a));
  const FieldCtx* G = make_field(3, 2);
  for (int a = 0; a < 9; ++a) CHECK(G->frob(a) == G->pow(a, 3));
}

TEST_CASE("squares: all in char 2, half of units otherwise") {
  const FieldCtx* F = make_field(2, 3);
  for (int a = 0; a < 8; ++a) CHECK(F->is_square(a));
  const FieldCtx* G = make_field(3, 2);
  int sq = 0;
  for (int a = 1; a < 9; ++a)
    if (G->is_square(a)) ++sq;
  CHECK(sq == 4);
}
