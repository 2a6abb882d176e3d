#include "doctest.h"
#include "ocf/quadspace.hpp"

using namespace ocf;

TEST_CASE("standard split plane over GF(2): exactly 2 singular lines") {
  QuadSpace s = standard_space(make_field(2, 1), 2, SpaceKind::Split);
  CHECK(s.type == +1);
  int singular = 0;
  for_each_subspace(s.F, 2, 1, [&](const Subspace& l) {
    if (is_totally_singular(s, l)) ++singular;
  });
  CHECK(singular == 2);
}

TEST_CASE("standard nonsplit plane over GF(2): every nonzero vector has Q=1") {
  QuadSpace s = standard_space(make_field(2, 1), 2, SpaceKind::Nonsplit);
  CHECK(s.type == -1);
  for_each_vector(s.F, 2, [&](const Vec& v) {
    if (!is_zero(v)) CHECK(s.Q(v) == 1);
  });
}

TEST_CASE("odd D over GF(2): 1-dim radical with nonsingular generator") {
  QuadSpace s = standard_space(make_field(2, 1), 3, SpaceKind::Odd);
  CHECK(s.radical.dim() == 1);
  CHECK(s.radical.basis.row(0) == Vec{0, 0, 1});
  CHECK(s.Q(s.radical.basis.row(0)) == 1);
  CHECK(s.type == 0);
}

TEST_CASE("polarization identity on every standard space") {
  for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
    const FieldCtx* F = make_field(p, k);
    for (auto kind : {SpaceKind::Split, SpaceKind::Nonsplit})
      for (int D : {2, 4}) {
        QuadSpace s = standard_space(F, D, kind);
        for_each_vector(F, D, [&](const Vec& x) {
          for_each_vector(F, D, [&](const Vec& y) {
            CHECK(s.B(x, y) == F->sub(s.Q(vec_add(F, x, y)), F->add(s.Q(x), s.Q(y))));
          });
        });
      }
  }
}

TEST_CASE("perp basics") {
  QuadSpace s = standard_space(make_field(2, 1), 4, SpaceKind::Split);
  CHECK(perp(s, zero_space(s.F, 4)) == full_space(s.F, 4));
  // first hyperbolic plane perps to the second
  Mat h1(s.F, 2, 4);
  h1.at(0, 0) = 1;
  h1.at(1, 1) = 1;
  Mat h2(s.F, 2, 4);
  h2.at(0, 2) = 1;
  h2.at(1, 3) = 1;
  CHECK(perp(s, row_space(h1)) == row_space(h2));
  // radical perps to everything
  QuadSpace t = standard_space(make_field(2, 1), 3, SpaceKind::Odd);
  CHECK(perp(t, t.radical) == full_space(t.F, 3));
}

TEST_CASE("witt type of x^2+y^2 over GF(3) is nonsplit") {
  const FieldCtx* F = make_field(3, 1);
  Mat g(F, 2, 2);
  g.at(0, 0) = 1;
  g.at(1, 1) = 1;
  QuadSpace s = make_quad_space(F, g);
  CHECK(s.type == -1);
}

TEST_CASE("witt types of standard spaces") {
  for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    const FieldCtx* F = make_field(p, k);
    for (int D : {2, 4, 6}) {
      CHECK(standard_space(F, D, SpaceKind::Split).type == +1);
      CHECK(standard_space(F, D, SpaceKind::Nonsplit).type == -1);
    }
  }
}

TEST_CASE("restrict_form flags") {
  QuadSpace s = standard_space(make_field(2, 1), 4, SpaceKind::Split);
  CHECK(restrict_form(s, full_space(s.F, 4)).nondegenerate);
  Mat sing(s.F, 1, 4);
  sing.at(0, 0) = 1;  // singular line in a split plane
  CHECK(!restrict_form(s, row_space(sing)).nondegenerate);
  Mat aniso(s.F, 1, 4);
  aniso.at(0, 0) = 1;
  aniso.at(0, 1) = 1;  // Q(e+f) = 1
  CHECK(restrict_form(s, row_space(aniso)).nondegenerate);
}

TEST_CASE("quotient by a singular line of split D4 is split D2") {
  QuadSpace s = standard_space(make_field(2, 1), 4, SpaceKind::Split);
  Mat l(s.F, 1, 4);
  l.at(0, 0) = 1;
  QuotientForm qf = quotient_form(s, row_space(l));
  CHECK(qf.space.D == 2);
  CHECK(qf.space.type == +1);
  CHECK(mat_mul(qf.proj, qf.section.transposed()) == Mat::identity(s.F, 2));
  // Q is constant on cosets of L inside L-perp
  for (int i = 0; i < qf.section.rows; ++i) {
    Vec v = qf.section.row(i);
    CHECK(s.Q(v) == qf.space.Q(mat_vec(qf.proj, v)));
    CHECK(s.Q(vec_add(s.F, v, l.row(0))) == s.Q(v));
  }
}

TEST_CASE("closure of transvection generators matches classical orders") {
  const FieldCtx* F2 = make_field(2, 1);
  auto order = [](const QuadSpace& s) {
    return group_closure(transvection_generators(s)).size();
  };
  CHECK(order(standard_space(F2, 2, SpaceKind::Split)) == 2);
  CHECK(order(standard_space(F2, 3, SpaceKind::Odd)) == 6);
  CHECK(order(standard_space(F2, 4, SpaceKind::Split)) == 72);  // needs the patch
  CHECK(order(standard_space(F2, 4, SpaceKind::Nonsplit)) == 120);
  CHECK(order(standard_space(F2, 5, SpaceKind::Odd)) == 720);
  const FieldCtx* F3 = make_field(3, 1);
  CHECK(order(standard_space(F3, 3, SpaceKind::Odd)) == 48);
  CHECK(order(standard_space(F3, 4, SpaceKind::Split)) == 1152);
  const FieldCtx* F4 = make_field(2, 2);
  CHECK(order(standard_space(F4, 3, SpaceKind::Odd)) == 60);
  CHECK(order(standard_space(F4, 4, SpaceKind::Nonsplit)) == 8160);
}

TEST_CASE("dickson invariant") {
  QuadSpace s = standard_space(make_field(2, 1), 2, SpaceKind::Split);
  CHECK(dickson(s, Mat::identity(s.F, 2)) == 0);
  // swap of the two singular lines
  Mat swp(s.F, 2, 2);
  swp.at(0, 1) = 1;
  swp.at(1, 0) = 1;
  CHECK(dickson(s, swp) == 1);
  CHECK(!so_membership(s, swp));
  // |SO2+(2)| = q - 1 = 1
  int members = 0;
  for (const Mat& g : group_closure(transvection_generators(s)))
    if (so_membership(s, g)) ++members;
  CHECK(members == 1);
}

TEST_CASE("dickson is a homomorphism to Z/2 at D=4") {
  QuadSpace s = standard_space(make_field(2, 1), 4, SpaceKind::Split);
  auto grp = group_closure(transvection_generators(s));
  std::vector<Mat> elems(grp.begin(), grp.end());
  for (size_t i = 0; i < elems.size(); i += 7)
    for (size_t j = 0; j < elems.size(); j += 11)
      CHECK(dickson(s, mat_mul(elems[i], elems[j])) ==
            (dickson(s, elems[i]) + dickson(s, elems[j])) % 2);
}

TEST_CASE("SO orders at small rank") {
  const FieldCtx* F = make_field(2, 1);
  QuadSpace s3 = standard_space(F, 3, SpaceKind::Odd);
  auto g3 = group_closure(transvection_generators(s3));
  int so = 0, uni = 0;
  for (const Mat& g : g3) {
    if (so_membership(s3, g)) ++so;
    if (is_zero(mat_pow(mat_sub(g, Mat::identity(F, 3)), 3))) ++uni;
  }
  CHECK(so == 6);   // odd D char 2: the whole isometry group
  CHECK(uni == 4);  // 1 + (q^2 - 1)
  QuadSpace s4 = standard_space(F, 4, SpaceKind::Split);
  auto g4 = group_closure(transvection_generators(s4));
  so = 0;
  for (const Mat& g : g4)
    if (so_membership(s4, g)) ++so;
  CHECK(so == 36);
}

TEST_CASE("conjugacy orbit basics") {
  const FieldCtx* F = make_field(2, 1);
  QuadSpace s = standard_space(F, 3, SpaceKind::Odd);
  auto gens = transvection_generators(s);
  Mat id = Mat::identity(F, 3);
  CHECK(conjugacy_orbit(gens, id) == std::set<Mat>{id});
  CHECK(group_closure({id}) == std::set<Mat>{id});
}

TEST_CASE("space descriptors parse and print") {
  auto [d1, k1] = parse_space_desc("D4+");
  CHECK(d1 == 4);
  CHECK(k1 == SpaceKind::Split);
  auto [d2, k2] = parse_space_desc("D6-");
  CHECK(d2 == 6);
  CHECK(k2 == SpaceKind::Nonsplit);
  auto [d3, k3] = parse_space_desc("D3");
  CHECK(d3 == 3);
  CHECK(k3 == SpaceKind::Odd);
  CHECK_THROWS(parse_space_desc("D4"));
  CHECK_THROWS(parse_space_desc("4+"));
  QuadSpace s = standard_space(make_field(2, 1), 4, SpaceKind::Nonsplit);
  CHECK(space_desc(s) == "D4-");
}
