#include <catch2/catch_amalgamated.hpp>

#include "extorth/json_io.hpp"
#include "support/gen.hpp"

using namespace extorth;

TEST_CASE("quiver serialization uses 1-based endpoints") {
  QuiverPtr q = testgen::quiver_a3_linear();
  Json j = quiver_to_json(*q);
  REQUIRE(j.at("vertices") == 3);
  REQUIRE(j.at("arrows").at(0).at("source") == 1);
  REQUIRE(j.at("arrows").at(1).at("target") == 3);
  QuiverPtr back = quiver_from_json(j);
  REQUIRE(*back == *q);

  SECTION("bad inputs are parse errors") {
    REQUIRE_THROWS_AS(quiver_from_json(Json{{"arrows", Json::array()}}), ParseError);
    Json out_of_range = quiver_to_json(*q);
    out_of_range["arrows"][0]["target"] = 9;
    REQUIRE_THROWS_AS(quiver_from_json(out_of_range), ParseError);
  }
}

TEST_CASE("representation roundtrips over both fields") {
  RationalField rf;
  QuiverPtr a2 = testgen::quiver_a2();

  SECTION("rational scalars travel as num/den strings") {
    Matrix<RationalField> m(rf, 1, 2);
    m.at(0, 0) = BigRat(1, 2);
    m.at(0, 1) = BigRat(-3);
    Representation<RationalField> rep(a2, rf, {2, 1}, {m});
    Json j = rep_to_json(rep);
    REQUIRE(j.at("matrices").at("a").at(0).at(0) == "1/2");
    REQUIRE(j.at("matrices").at("a").at(0).at(1) == "-3");
    REQUIRE(rep_from_json(a2, rf, j, "roundtrip") == rep);
  }

  SECTION("prime-field scalars travel as residues") {
    PrimeField f5(5);
    std::mt19937 rng(77);
    for (const QuiverPtr& q : testgen::corpus_quivers())
      for (int t = 0; t < 5; ++t) {
        Representation<PrimeField> rep = testgen::random_rep(q, f5, 3, rng);
        Json j = rep_to_json(rep);
        REQUIRE(rep_from_json(q, f5, j, "roundtrip") == rep);
      }
  }

  SECTION("rationals roundtrip over the corpus") {
    std::mt19937 rng(78);
    for (const QuiverPtr& q : testgen::corpus_quivers()) {
      Representation<RationalField> rep = testgen::random_rep(q, rf, 3, rng);
      REQUIRE(rep_from_json(q, rf, rep_to_json(rep), "roundtrip") == rep);
    }
  }

  SECTION("omitted matrices default to zero") {
    Json j{{"field", Json{{"kind", "Q"}}}, {"dims", {1, 1}}};
    Representation<RationalField> rep = rep_from_json(a2, rf, j, "sparse");
    REQUIRE(rep.arrow_matrix(0).is_zero());
  }

  SECTION("malformed inputs name their location") {
    Json good = rep_to_json(Representation<RationalField>(share(simple(a2, rf, 0))->quiver_ptr(),
                                                          rf, {1, 0},
                                                          {Matrix<RationalField>(rf, 0, 1)}));
    Json bad_field = good;
    bad_field["field"]["kind"] = "Fp";
    REQUIRE_THROWS_AS(rep_from_json(a2, rf, bad_field, "x"), ParseError);
    Json bad_dims = good;
    bad_dims["dims"] = {1};
    REQUIRE_THROWS_AS(rep_from_json(a2, rf, bad_dims, "x"), ParseError);
    Json bad_arrow = good;
    bad_arrow["matrices"]["zz"] = Json::array();
    REQUIRE_THROWS_AS(rep_from_json(a2, rf, bad_arrow, "x"), ParseError);
    REQUIRE_THROWS_WITH(scalar_from_json(rf, Json("3/0"), "s"),
                        Catch::Matchers::ContainsSubstring("denominator"));
    REQUIRE_THROWS_AS(scalar_from_json(rf, Json("abc"), "s"), ParseError);
  }
}

TEST_CASE("morphisms and five-term sequences re-parse to equal values") {
  RationalField rf;
  QuiverPtr a2 = testgen::quiver_a2();
  RepPtr<RationalField> s2 = share(simple(a2, rf, 1));
  RepPtr<RationalField> p1 = share(projective(a2, rf, 0));

  SECTION("morphism roundtrip with 1-based vertex keys") {
    HomSpace<RationalField> hs = hom_space(s2, p1);
    REQUIRE(hs.dimension() == 1);
    Json j = morphism_to_json(hs.basis[0]);
    REQUIRE(j.at("vertexMaps").contains("1"));
    REQUIRE(j.at("vertexMaps").contains("2"));
    Morphism<RationalField> back = morphism_from_json(s2, p1, j, "roundtrip");
    REQUIRE(back == hs.basis[0]);
  }

  SECTION("five-term sequence payload re-parses term by term") {
    OrthoPair<RationalField> pair = make_pair(s2);
    FiveTermSequence<RationalField> seq = five_term(pair, p1);
    Json j = five_term_to_json(seq);
    REQUIRE(rep_from_json(a2, rf, j.at("M"), "M") == *seq.module);
    REQUIRE(rep_from_json(a2, rf, j.at("terms").at("Y_M"), "Y") == *seq.y_sub);
    REQUIRE(rep_from_json(a2, rf, j.at("terms").at("X_M"), "X") == *seq.x_sub);
    REQUIRE(rep_from_json(a2, rf, j.at("terms").at("Yup"), "Yu") == *seq.y_up);
    REQUIRE(rep_from_json(a2, rf, j.at("terms").at("Xup"), "Xu") == *seq.x_up);
    REQUIRE(morphism_from_json(seq.y_sub, seq.x_sub, j.at("maps").at(0), "g") == seq.g);
    REQUIRE(morphism_from_json(seq.x_sub, seq.module, j.at("maps").at(1), "h") == seq.h);
    REQUIRE(morphism_from_json(seq.module, seq.y_up, j.at("maps").at(2), "u") == seq.u);
    REQUIRE(morphism_from_json(seq.y_up, seq.x_up, j.at("maps").at(3), "v") == seq.v);
  }

  SECTION("perpendicular algebra payload carries the full structure") {
    OrthoPair<RationalField> pair = make_pair(share(simple(a2, rf, 0)));
    Json j = perp_to_json(pair.perp());
    REQUIRE(j.at("dimB") == 4);
    REQUIRE(j.at("basis").size() == 4);
    REQUIRE(j.at("structure").size() == 4);
    REQUIRE(j.at("structure").at(0).at(0).size() == 4);
    REQUIRE(j.at("f").at("e_i").size() == 2);
    REQUIRE(rep_from_json(a2, rf, j.at("L"), "L") == *pair.perp().l());
  }
}

TEST_CASE("complexes roundtrip through JSON") {
  RationalField rf;
  QuiverPtr a2 = testgen::quiver_a2();
  RepPtr<RationalField> s1 = share(simple(a2, rf, 0));
  RepPtr<RationalField> p1 = share(projective(a2, rf, 0));

  SECTION("formal complexes key terms by degree") {
    FormalComplex<RationalField> c = complex_sum(concentrated(s1, -3), concentrated(p1, 5));
    Json j = formal_complex_to_json(c);
    REQUIRE(j.at("terms").contains("-3"));
    REQUIRE(formal_complex_from_json(a2, rf, j, "roundtrip") == c);
  }

  SECTION("raw complexes carry differentials and re-validate") {
    RawComplex<RationalField> raw = perfect_presentation(s1);
    Json j = raw_complex_to_json(raw);
    RawComplex<RationalField> back = raw_complex_from_json(a2, rf, j, "roundtrip");
    REQUIRE(*back.objects.at(-1) == *raw.objects.at(-1));
    REQUIRE(*back.objects.at(0) == *raw.objects.at(0));
    REQUIRE(back.differentials.at(-1) == raw.differentials.at(-1));
    REQUIRE(cohomology(back) == cohomology(raw));

    Json dangling = j;
    dangling["objects"].erase("0");
    REQUIRE_THROWS_AS(raw_complex_from_json(a2, rf, dangling, "x"), NotAComplex);
  }
}

TEST_CASE("value vectors and ideals roundtrip through JSON") {
  ValueVector v({{1, 1}, {4, -2}});
  Json jv = value_vector_to_json(v);
  REQUIRE(jv.at("1") == 1);
  REQUIRE(jv.at("4") == -2);
  REQUIRE(value_vector_from_json(jv, "roundtrip") == v);
  REQUIRE_THROWS_AS(value_vector_from_json(Json{{"0", 1}}, "x"), ParseError);

  IdealDesc ideal = IdealDesc::product(IdealDesc::canonical_family(),
                                       IdealDesc::finite({ValueVector::basis(2), v}));
  Json ji = ideal_to_json(ideal);
  IdealDesc back = ideal_from_json(ji, "roundtrip");
  REQUIRE(back.kind() == IdealDesc::Kind::product);
  REQUIRE(back.right().generators().size() == 2);
  REQUIRE(back.right().generators().at(1) == v);
  REQUIRE_THROWS_AS(ideal_from_json(Json{{"kind", "mystery"}}, "x"), ParseError);

  KellerReport report = keller_hypotheses(IdealDesc::canonical_family());
  Json jr = keller_report_to_json(report);
  REQUIRE(jr.at("allHold") == true);
  REQUIRE(jr.at("items").size() == 4);
  REQUIRE(jr.at("leastPositive").at("exists") == false);
  REQUIRE(jr.at("leastPositive").at("descendingChain").size() == 10);
}
