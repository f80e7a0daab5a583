#include <catch2/catch_amalgamated.hpp>

#include "extorth/perpalg.hpp"
#include "support/gen.hpp"

using namespace extorth;
using namespace extorth::testgen;

namespace {

const RationalField Q;

// exceptional generators for each corpus quiver, small enough for fuzzing
template <class F>
std::vector<RepPtr<F>> exceptional_generators(const QuiverPtr& q, const F& field) {
  std::vector<RepPtr<F>> out;
  for (int v = 0; v < q->vertex_count(); ++v) {
    out.push_back(share(simple(q, field, v)));
    out.push_back(share(projective(q, field, v)));
    out.push_back(share(injective(q, field, v)));
  }
  return out;
}

}  // namespace

TEST_CASE("pairs refuse non-exceptional generators") {
  auto a2 = quiver_a2();
  auto s1 = share(simple(a2, Q, 0));
  auto s2 = share(simple(a2, Q, 1));

  // S1 (+) S2 has a self-extension through Ext(S1, S2)
  auto both = direct_sum(std::vector<RepPtr<RationalField>>{s1, s2});
  REQUIRE_THROWS_AS(make_pair(both.rep), NotExceptional);

  // a regular Kronecker module is not rigid either
  auto kr = quiver_kronecker();
  Matrix<RationalField> one = Matrix<RationalField>::identity(Q, 1);
  Matrix<RationalField> zero(Q, 1, 1);
  auto reg = share(Representation<RationalField>(kr, Q, {1, 1}, {one, zero}));
  REQUIRE_THROWS_AS(make_pair(reg), NotExceptional);

  // simples and projectives are fine
  REQUIRE_NOTHROW(make_pair(s1));
  REQUIRE_NOTHROW(make_pair(s2));
}

TEST_CASE("reflection sends modules into the perpendicular class") {
  auto a2 = quiver_a2();
  auto s1 = share(simple(a2, Q, 0));
  auto s2 = share(simple(a2, Q, 1));
  auto p1 = share(projective(a2, Q, 0));

  auto pair_s2 = make_pair(s2);
  Reflection<RationalField> r1 = reflect(pair_s2, p1);
  REQUIRE(r1.target->dims() == DimVector{1, 0});  // P(1) reflects to S1
  REQUIRE(r1.unit.is_surjective());

  auto pair_s1 = make_pair(s1);
  Reflection<RationalField> r2 = reflect(pair_s1, s2);
  REQUIRE(r2.target->dims() == DimVector{1, 1});  // S2 extends to P(1)
  REQUIRE(r2.unit.is_injective());
  REQUIRE(membership_Y(pair_s1, r2.target));

  // a module already perpendicular reflects identically
  Reflection<RationalField> r3 = reflect(pair_s2, s1);
  REQUIRE(r3.unit.is_invertible());
}

TEST_CASE("reflection lands in the perpendicular class for random modules") {
  std::mt19937 rng(20240817);
  PrimeField f5(5);
  for (const auto& q : corpus_quivers()) {
    for (const auto& x : exceptional_generators(q, f5)) {
      auto pair = make_pair(x);
      for (int trial = 0; trial < 3; ++trial) {
        auto m = share(random_rep(q, f5, 3, rng));
        Reflection<PrimeField> r = reflect(pair, m);
        REQUIRE(membership_Y(pair, r.target));
      }
    }
  }
}

TEST_CASE("perpendicular algebra dimensions on the three pinned pairs") {
  auto a2 = quiver_a2();
  auto s1 = share(simple(a2, Q, 0));
  auto s2 = share(simple(a2, Q, 1));
  auto p1 = share(projective(a2, Q, 0));

  REQUIRE(make_pair(s2).perp().dim() == 1);
  REQUIRE(make_pair(s1).perp().dim() == 4);
  REQUIRE(make_pair(p1).perp().dim() == 1);

  // the perp of S2 deletes vertex 2: both reflected projectives are S1 or 0
  auto pair = make_pair(s2);
  const auto& pa = pair.perp();
  REQUIRE(pa.l_component(0)->dims() == DimVector{1, 0});
  REQUIRE(pa.l_component(1)->dims() == DimVector{0, 0});
}

TEST_CASE("perp of the first simple on A2 is a 2x2 matrix algebra") {
  auto a2 = quiver_a2();
  auto s1 = share(simple(a2, Q, 0));
  auto pair = make_pair(s1);
  const auto& pa = pair.perp();
  REQUIRE(pa.dim() == 4);

  // both reflected projectives are P(1), so L = P(1)^2
  REQUIRE(pa.l_component(0)->dims() == DimVector{1, 1});
  REQUIRE(pa.l_component(1)->dims() == DimVector{1, 1});

  // matrix units: u11 = f(e1), u22 = f(e2), u12 = f(a); solve for u21
  Matrix<RationalField> u11 = pa.path_vertex(0);
  Matrix<RationalField> u22 = pa.path_vertex(1);
  Matrix<RationalField> u12 = pa.path_arrow(0);
  REQUIRE(pa.multiply(u11, u11) == u11);
  REQUIRE(pa.multiply(u22, u22) == u22);
  REQUIRE((u11 + u22) == pa.one());

  // u21 must satisfy u21 = u22 u21 u11, u12 u21 = u11, u21 u12 = u22;
  // search it as a solution of the two-sided linear system
  Matrix<RationalField> sys(Q, 8, 4);
  Matrix<RationalField> rhs(Q, 8, 1);
  for (int b = 0; b < 4; ++b) {
    Matrix<RationalField> e(Q, 4, 1);
    e.at(b, 0) = Q.one();
    Matrix<RationalField> left = pa.multiply(u12, e);   // u12 * u21 = u11
    Matrix<RationalField> right = pa.multiply(e, u12);  // u21 * u12 = u22
    for (int r = 0; r < 4; ++r) {
      sys.at(r, b) = left.at(r, 0);
      sys.at(4 + r, b) = right.at(r, 0);
    }
  }
  for (int r = 0; r < 4; ++r) {
    rhs.at(r, 0) = u11.at(r, 0);
    rhs.at(4 + r, 0) = u22.at(r, 0);
  }
  auto u21 = solve(sys, rhs);
  REQUIRE(u21.has_value());
  REQUIRE(pa.multiply(u12, *u21) == u11);
  REQUIRE(pa.multiply(*u21, u12) == u22);
  REQUIRE(pa.multiply(pa.multiply(u22, *u21), u11) == *u21);

  // all sixteen products of the four units follow the matrix-unit rule
  std::vector<Matrix<RationalField>> units{u11, u12, *u21, u22};
  std::vector<std::pair<int, int>> shape{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Matrix<RationalField> prod = pa.multiply(units[i], units[j]);
      if (shape[i].second == shape[j].first) {
        for (int n = 0; n < 4; ++n)
          if (shape[n] == std::make_pair(shape[i].first, shape[j].second))
            REQUIRE(prod == units[n]);
      } else {
        REQUIRE(prod.is_zero());
      }
    }
}

TEST_CASE("reflected projectives are perpendicular and the unit reflects") {
  std::mt19937 rng(7);
  PrimeField f7(7);
  for (const auto& q : corpus_quivers()) {
    auto x = share(simple(q, f7, q->vertex_count() - 1));
    auto pair = make_pair(x);
    const auto& pa = pair.perp();
    for (int i = 0; i < q->vertex_count(); ++i) {
      REQUIRE(membership_Y(pair, pa.l_component(i)));
      // the unit is a Y-reflection: composition with it is bijective on homs
      // into any Y-object, here probed against L itself
      auto before = hom_space(pa.l_component(i), pa.l());
      auto after = hom_space(pa.projective_at(i), pa.l());
      REQUIRE(before.dimension() == after.dimension());
    }
  }
}

TEST_CASE("tensoring with B kills the generator and fixes perpendiculars") {
  auto a2 = quiver_a2();
  auto s1 = share(simple(a2, Q, 0));
  auto s2 = share(simple(a2, Q, 1));
  auto p1 = share(projective(a2, Q, 0));

  auto pair = make_pair(s2);
  const auto& pa = pair.perp();

  // the generator dies in both degrees
  TensorWithB<RationalField> tx = tensor_with_B(pa, s2);
  REQUIRE(tx.tensor->is_zero());
  REQUIRE(tx.tor1->is_zero());

  // P(1) becomes S1
  TensorWithB<RationalField> tp = tensor_with_B(pa, p1);
  REQUIRE(tp.tensor->dims() == DimVector{1, 0});
  REQUIRE(tp.tor1->is_zero());
  REQUIRE(tp.unit.is_surjective());

  // a perpendicular module is fixed by the unit
  TensorWithB<RationalField> ty = tensor_with_B(pa, s1);
  REQUIRE(ty.unit.is_invertible());
  REQUIRE(ty.tor1->is_zero());
}

TEST_CASE("tensor unit is invertible exactly on the perpendicular class") {
  std::mt19937 rng(99);
  PrimeField f5(5);
  for (const auto& q : corpus_quivers()) {
    auto x = share(projective(q, f5, 0));
    auto pair = make_pair(x);
    const auto& pa = pair.perp();
    for (int trial = 0; trial < 4; ++trial) {
      auto m = share(random_rep(q, f5, 3, rng));
      Reflection<PrimeField> r = reflect(pair, m);
      TensorWithB<PrimeField> t = tensor_with_B(pa, r.target);
      REQUIRE(t.unit.is_invertible());
      REQUIRE(t.tor1->is_zero());
    }
  }
}

TEST_CASE("hom from B recovers perpendicular modules via evaluation") {
  auto a2 = quiver_a2();
  auto s1 = share(simple(a2, Q, 0));
  auto s2 = share(simple(a2, Q, 1));
  auto p1 = share(projective(a2, Q, 0));
  auto pair = make_pair(s2);
  const auto& pa = pair.perp();

  HomFromB<RationalField> hy = hom_from_B(pa, s1);
  REQUIRE(hy.hom->dims() == DimVector{1, 0});
  REQUIRE(hy.ev.is_invertible());
  REQUIRE(hy.ext1->is_zero());

  // pinned values against P(1) and against the generator
  HomFromB<RationalField> hp = hom_from_B(pa, p1);
  REQUIRE(hp.hom->is_zero());
  REQUIRE(hp.ext1->is_zero());
  HomFromB<RationalField> hx = hom_from_B(pa, s2);
  REQUIRE(hx.hom->is_zero());
  REQUIRE(hx.ext1->dims() == DimVector{1, 0});
}

TEST_CASE("restriction along B is a homological epimorphism") {
  PrimeField f3(3);
  for (const auto& q : corpus_quivers()) {
    for (const auto& x : {share(simple(q, f3, 0)), share(injective(q, f3, 0))}) {
      auto pair = make_pair(x);
      auto report = verify_homological_epi(pair.perp());
      REQUIRE(report.tor1_zero);
      REQUIRE(report.unit_invertible);
      REQUIRE(report.dim_b == report.tensor_dim);
    }
  }
}

TEST_CASE("localization data pins the presentation of the generator") {
  auto a2 = quiver_a2();
  auto s1 = share(simple(a2, Q, 0));
  auto s2 = share(simple(a2, Q, 1));

  // S2 = P(2) is projective: sigma is 0 -> P(2)
  auto d2 = universal_localization_data(make_pair(s2));
  REQUIRE(d2.presentations.size() == 1);
  REQUIRE(d2.presentations[0].p1->is_zero());
  REQUIRE(d2.presentations[0].p0->dims() == DimVector{0, 1});

  // S1 has sigma = the inclusion P(2) -> P(1)
  auto d1 = universal_localization_data(make_pair(s1));
  REQUIRE(d1.presentations[0].p1->dims() == DimVector{0, 1});
  REQUIRE(d1.presentations[0].p0->dims() == DimVector{1, 1});
  REQUIRE(d1.presentations[0].sigma.is_injective());

  // Kronecker: S1 is presented by P(2)^2 -> P(1)
  auto kr = quiver_kronecker();
  auto ks1 = share(simple(kr, Q, 0));
  auto dk = universal_localization_data(make_pair(ks1));
  REQUIRE(dk.presentations[0].p1->dims() == DimVector{0, 2});
  REQUIRE(dk.presentations[0].p0->dims() == DimVector{1, 2});

  // summand decomposition: accepted when it sums to the generator
  auto pairboth = make_pair(share(projective(a2, Q, 0)));
  REQUIRE_THROWS_AS(universal_localization_data(pairboth, {s1}), InvalidShape);
}

TEST_CASE("sigma inverts over B and characterizes the perpendicular class") {
  std::mt19937 rng(2024);
  auto a2 = quiver_a2();
  auto s1 = share(simple(a2, Q, 0));
  auto s2 = share(simple(a2, Q, 1));
  auto p1 = share(projective(a2, Q, 0));

  auto pair1 = make_pair(s1);
  auto data1 = universal_localization_data(pair1);
  REQUIRE(sigma_inverts_over_B(pair1.perp(), data1));
  REQUIRE(sigma_characterizes(pair1, data1, p1));
  REQUIRE_FALSE(sigma_characterizes(pair1, data1, s1));
  REQUIRE_FALSE(sigma_characterizes(pair1, data1, s2));

  auto pair2 = make_pair(s2);
  auto data2 = universal_localization_data(pair2);
  REQUIRE(sigma_inverts_over_B(pair2.perp(), data2));
  REQUIRE(sigma_characterizes(pair2, data2, s1));
  REQUIRE_FALSE(sigma_characterizes(pair2, data2, p1));

  // fuzz: the equivalence itself is verified inside sigma_characterizes, so
  // it only needs to be invoked; any mismatch throws EquivalenceViolation
  PrimeField f5(5);
  for (const auto& q : corpus_quivers()) {
    auto x = share(simple(q, f5, 0));
    auto pair = make_pair(x);
    auto data = universal_localization_data(pair);
    REQUIRE(sigma_inverts_over_B(pair.perp(), data));
    for (int trial = 0; trial < 6; ++trial) {
      auto m = share(random_rep(q, f5, 3, rng));
      (void)sigma_characterizes(pair, data, m);
    }
  }
}

TEST_CASE("zero generator gives the trivial pair and the identity algebra") {
  auto a2 = quiver_a2();
  auto z = share(zero_rep(a2, Q));
  auto pair = make_pair(z);
  const auto& pa = pair.perp();

  // reflecting along nothing changes nothing: L_i = P(i), B = kQ
  REQUIRE(pa.dim() == 3);  // paths of A2: e1, e2, a
  for (int v = 0; v < 2; ++v) {
    REQUIRE(pa.l_component(v)->dims() == share(projective(a2, Q, v))->dims());
    REQUIRE(pa.unit(v).is_invertible());
  }
  auto m = share(projective(a2, Q, 0));
  TensorWithB<RationalField> t = tensor_with_B(pa, m);
  REQUIRE(t.unit.is_invertible());
  REQUIRE(universal_localization_data(pair).presentations.empty());
}
