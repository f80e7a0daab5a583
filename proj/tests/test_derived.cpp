#include <catch2/catch_amalgamated.hpp>

#include "extorth/derived.hpp"
#include "extorth/fields.hpp"
#include "support/gen.hpp"

using namespace extorth;
using testgen::Rng;

namespace {

// exceptional one-generator pairs used by the fuzz suites
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

template <class F>
FormalComplex<F> random_formal(const QuiverPtr& q, const F& field, Rng& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_int_distribution<int> deg(-3, 3);
  std::map<int, RepPtr<F>> terms;
  int k = count(rng);
  for (int i = 0; i < k; ++i) terms[deg(rng)] = share(testgen::random_rep(q, field, 3, rng));
  return FormalComplex<F>(q, field, terms);
}

template <class F>
bool complexes_isomorphic(const FormalComplex<F>& a, const FormalComplex<F>& b) {
  for (const auto& [n, rep] : a.terms())
    if (!is_isomorphic(rep, b.term(n)).is_iso()) return false;
  for (const auto& [n, rep] : b.terms())
    if (!a.has_term(n)) return false;
  return true;
}

}  // namespace

TEST_CASE("cohomology of zero-differential and contractible complexes") {
  RationalField q;
  QuiverPtr a2 = testgen::quiver_a2();
  RepPtr<RationalField> p1 = share(projective(a2, q, 0));
  RepPtr<RationalField> s2 = share(simple(a2, q, 1));

  SECTION("no differentials means cohomology is the complex itself") {
    RawComplex<RationalField> c{{{0, p1}, {2, s2}}, {}};
    FormalComplex<RationalField> h = cohomology(c);
    REQUIRE(h.terms().size() == 2);
    REQUIRE(*h.term(0) == *p1);
    REQUIRE(*h.term(2) == *s2);
  }

  SECTION("an identity differential is acyclic") {
    RawComplex<RationalField> c{{{0, p1}, {1, p1}}, {{0, identity_morphism(p1)}}};
    REQUIRE(cohomology(c).is_zero());
  }

  SECTION("differentials must square to zero") {
    RawComplex<RationalField> c{{{0, p1}, {1, p1}, {2, p1}},
                                {{0, identity_morphism(p1)}, {1, identity_morphism(p1)}}};
    REQUIRE_THROWS_AS(cohomology(c), NotAComplex);
  }

  SECTION("differential endpoints must be stored objects") {
    RawComplex<RationalField> c{{{0, p1}}, {{0, identity_morphism(p1)}}};
    REQUIRE_THROWS_AS(validate_complex(c), NotAComplex);
  }

  SECTION("mismatched endpoint objects are rejected") {
    RawComplex<RationalField> c{{{0, p1}, {1, s2}}, {{0, identity_morphism(p1)}}};
    REQUIRE_THROWS_AS(cohomology(c), NotAComplex);
  }
}

TEST_CASE("cohomology of a projective presentation recovers the module") {
  RationalField q;
  QuiverPtr a2 = testgen::quiver_a2();
  RepPtr<RationalField> s1 = share(simple(a2, q, 0));

  SECTION("the A2 simple at the source") {
    RawComplex<RationalField> c = perfect_presentation(s1);
    REQUIRE(c.objects.at(-1)->dims() == DimVector{0, 1});
    REQUIRE(c.objects.at(0)->dims() == DimVector{1, 1});
    FormalComplex<RationalField> h = cohomology(c);
    REQUIRE(h.terms().size() == 1);
    REQUIRE(h.term(0)->dims() == DimVector{1, 0});
  }

  SECTION("a projective module has a one-term presentation up to cohomology") {
    RepPtr<RationalField> p1 = share(projective(a2, q, 0));
    FormalComplex<RationalField> h = cohomology(perfect_presentation(p1));
    REQUIRE(h.terms().size() == 1);
    REQUIRE(is_isomorphic(h.term(0), p1).is_iso());
  }

  SECTION("the Kronecker simple at the source needs two copies upstairs") {
    PrimeField f5(5);
    QuiverPtr kr = testgen::quiver_kronecker();
    RepPtr<PrimeField> ks1 = share(simple(kr, f5, 0));
    RawComplex<PrimeField> c = perfect_presentation(ks1);
    REQUIRE(c.objects.at(-1)->dims() == DimVector{0, 2});
    REQUIRE(c.objects.at(0)->dims() == DimVector{1, 2});
    FormalComplex<PrimeField> h = cohomology(c);
    REQUIRE(h.terms().size() == 1);
    REQUIRE(is_isomorphic(h.term(0), ks1).is_iso());
  }

  SECTION("random modules over the corpus") {
    PrimeField f5(5);
    Rng rng(411);
    for (const QuiverPtr& qp : testgen::corpus_quivers()) {
      for (int t = 0; t < 4; ++t) {
        RepPtr<PrimeField> m = share(testgen::random_rep(qp, f5, 3, rng));
        FormalComplex<PrimeField> h = cohomology(perfect_presentation(m));
        REQUIRE(complexes_isomorphic(h, concentrated(m, 0)));
      }
    }
  }
}

TEST_CASE("localization and colocalization of pinned A2 complexes") {
  RationalField q;
  QuiverPtr a2 = testgen::quiver_a2();
  RepPtr<RationalField> p1 = share(projective(a2, q, 0));
  RepPtr<RationalField> s1 = share(simple(a2, q, 0));
  RepPtr<RationalField> s2 = share(simple(a2, q, 1));
  OrthoPair<RationalField> pair_s1 = make_pair(s1);
  OrthoPair<RationalField> pair_s2 = make_pair(s2);

  SECTION("inverting the arrow sends the sink simple to the big projective") {
    FormalComplex<RationalField> l = localize(pair_s1, concentrated(s2, 0));
    REQUIRE(l.terms().size() == 1);
    REQUIRE(is_isomorphic(l.term(0), p1).is_iso());
  }

  SECTION("the generator's own class dies under localization") {
    REQUIRE(localize(pair_s2, concentrated(s2, 0)).is_zero());
  }

  SECTION("a member of the perpendicular class is fixed in place") {
    FormalComplex<RationalField> c = concentrated(p1, 0).shifted(-2);
    REQUIRE(c.has_term(2));
    FormalComplex<RationalField> l = localize(pair_s1, c);
    REQUIRE(l.terms().size() == 1);
    REQUIRE(is_isomorphic(l.term(2), p1).is_iso());
  }

  SECTION("colocalization shifts the cone term up") {
    FormalComplex<RationalField> g = colocalize(pair_s1, concentrated(s2, 0));
    REQUIRE(g.terms().size() == 1);
    REQUIRE(g.term(1)->dims() == DimVector{1, 0});
    FormalComplex<RationalField> g2 = colocalize(pair_s2, concentrated(p1, 0));
    REQUIRE(g2.terms().size() == 1);
    REQUIRE(g2.term(0)->dims() == DimVector{0, 1});
  }
}

TEST_CASE("triangle cohomology matches the five-term sequence") {
  RationalField q;
  QuiverPtr a2 = testgen::quiver_a2();
  RepPtr<RationalField> p1 = share(projective(a2, q, 0));
  RepPtr<RationalField> s1 = share(simple(a2, q, 0));
  RepPtr<RationalField> s2 = share(simple(a2, q, 1));

  SECTION("a module of the generator's class passes through untouched") {
    OrthoPair<RationalField> pair = make_pair(s2);
    TriangleReport<RationalField> r = triangle_check(pair, s2);
    REQUIRE(r.gamma.terms().size() == 1);
    REQUIRE(*r.gamma.term(0) == *s2);
    REQUIRE(r.local.is_zero());
  }

  SECTION("the sink simple against the source simple's pair") {
    OrthoPair<RationalField> pair = make_pair(s1);
    TriangleReport<RationalField> r = triangle_check(pair, s2);
    REQUIRE(r.gamma.terms().size() == 1);
    REQUIRE(r.gamma.term(1)->dims() == DimVector{1, 0});
    REQUIRE(r.local.terms().size() == 1);
    REQUIRE(is_isomorphic(r.local.term(0), p1).is_iso());
  }

  SECTION("the big projective against the sink simple's pair") {
    OrthoPair<RationalField> pair = make_pair(s2);
    TriangleReport<RationalField> r = triangle_check(pair, p1);
    REQUIRE(r.gamma.term(0)->dims() == DimVector{0, 1});
    REQUIRE(r.local.term(0)->dims() == DimVector{1, 0});
  }

  SECTION("random probes across the corpus") {
    PrimeField f5(5);
    Rng rng(1123);
    for (const QuiverPtr& qp : testgen::corpus_quivers()) {
      std::vector<RepPtr<PrimeField>> gens = exceptional_generators(qp, f5);
      std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
      for (int t = 0; t < 3; ++t) {
        OrthoPair<PrimeField> pair = make_pair(gens[pick(rng)]);
        RepPtr<PrimeField> m = share(testgen::random_rep(qp, f5, 3, rng));
        REQUIRE_NOTHROW(triangle_check(pair, m));
      }
    }
  }
}

TEST_CASE("telescope trichotomy on the pinned A2 pair") {
  RationalField q;
  QuiverPtr a2 = testgen::quiver_a2();
  RepPtr<RationalField> p1 = share(projective(a2, q, 0));
  RepPtr<RationalField> s1 = share(simple(a2, q, 0));
  OrthoPair<RationalField> pair = make_pair(s1);

  std::vector<FormalComplex<RationalField>> probes;
  probes.push_back(cohomology(perfect_presentation(s1)));
  probes.push_back(concentrated(p1, 0));
  probes.push_back(complex_sum(concentrated(s1, -3), concentrated(s1, 5)));

  TelescopeReport<RationalField> r = telescope_check(pair, probes);
  REQUIRE(r.probes.size() == 3);
  REQUIRE(r.probes[0].in_kernel);
  REQUIRE_FALSE(r.probes[1].in_kernel);
  REQUIRE(r.probes[2].in_kernel);
  REQUIRE(r.generator_in_kernel);
  REQUIRE(r.coproduct_preserved);
  for (const TelescopeProbeVerdict& v : r.probes) {
    REQUIRE(v.localize_zero == v.approximation_trivial);
    REQUIRE(v.localize_zero == v.tensor_annihilated);
  }

  SECTION("localization fixes the probe that was not in the kernel") {
    FormalComplex<RationalField> l = localize(pair, probes[1]);
    REQUIRE(complexes_isomorphic(l, probes[1]));
  }
}

TEST_CASE("telescope trichotomy across the corpus") {
  PrimeField f5(5);
  Rng rng(2207);
  for (const QuiverPtr& qp : testgen::corpus_quivers()) {
    std::vector<RepPtr<PrimeField>> gens = exceptional_generators(qp, f5);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    OrthoPair<PrimeField> pair = make_pair(gens[pick(rng)]);
    std::vector<FormalComplex<PrimeField>> probes;
    probes.push_back(cohomology(perfect_presentation(pair.generator())));
    for (int t = 0; t < 4; ++t) probes.push_back(random_formal(qp, f5, rng));
    TelescopeReport<PrimeField> r = telescope_check(pair, probes);
    REQUIRE(r.probes.front().in_kernel);
    REQUIRE(r.generator_in_kernel);
    REQUIRE(r.coproduct_preserved);
  }
}

TEST_CASE("localization is idempotent") {
  PrimeField f5(5);
  Rng rng(3301);
  for (const QuiverPtr& qp : testgen::corpus_quivers()) {
    std::vector<RepPtr<PrimeField>> gens = exceptional_generators(qp, f5);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    OrthoPair<PrimeField> pair = make_pair(gens[pick(rng)]);
    for (int t = 0; t < 3; ++t) {
      FormalComplex<PrimeField> c = random_formal(qp, f5, rng);
      FormalComplex<PrimeField> once = localize(pair, c);
      FormalComplex<PrimeField> twice = localize(pair, once);
      REQUIRE(complexes_isomorphic(once, twice));
    }
  }
}

TEST_CASE("formal complex arithmetic") {
  RationalField q;
  QuiverPtr a2 = testgen::quiver_a2();
  RepPtr<RationalField> p1 = share(projective(a2, q, 0));
  RepPtr<RationalField> s2 = share(simple(a2, q, 1));

  SECTION("zero terms are dropped at construction") {
    RepPtr<RationalField> z = share(zero_rep(a2, q));
    FormalComplex<RationalField> c(a2, q, {{0, p1}, {1, z}});
    REQUIRE(c.terms().size() == 1);
    REQUIRE_FALSE(c.has_term(1));
    REQUIRE(c.term(1)->is_zero());
  }

  SECTION("shift moves degrees against the index") {
    FormalComplex<RationalField> c = concentrated(p1, 0).shifted(3);
    REQUIRE(c.has_term(-3));
    REQUIRE(c.shifted(-3).has_term(0));
  }

  SECTION("sums merge degreewise") {
    FormalComplex<RationalField> c =
        complex_sum(concentrated(p1, 0), complex_sum(concentrated(s2, 0), concentrated(s2, 2)));
    REQUIRE(c.term(0)->dims() == DimVector{1, 2});
    REQUIRE(c.term(2)->dims() == DimVector{0, 1});
  }

  SECTION("sums across different quivers are rejected") {
    QuiverPtr kr = testgen::quiver_kronecker();
    RepPtr<RationalField> ks = share(simple(kr, q, 0));
    REQUIRE_THROWS_AS(complex_sum(concentrated(p1, 0), concentrated(ks, 0)), FieldMismatch);
  }

  SECTION("cohomology is the identity on canonical forms") {
    FormalComplex<RationalField> c =
        complex_sum(concentrated(p1, -1), concentrated(s2, 4));
    RawComplex<RationalField> raw{c.terms(), {}};
    REQUIRE(cohomology(raw) == c);
  }
}
