#include <catch2/catch_amalgamated.hpp>

#include "extorth/iso.hpp"
#include "support/gen.hpp"

using namespace extorth;
using namespace extorth::testgen;

namespace {

const RationalField Q;

}  // namespace

TEST_CASE("isomorphism verdicts on pinned pairs") {
  auto a2 = quiver_a2();
  auto p1 = share(projective(a2, Q, 0));
  auto s1 = share(simple(a2, Q, 0));
  auto s2 = share(simple(a2, Q, 1));

  auto self = is_isomorphic(p1, p1);
  REQUIRE(self.is_iso());
  REQUIRE(*self.witness == identity_morphism(p1));

  REQUIRE(is_isomorphic(s1, s2).is_not_iso());

  // (k -> k, x2) is P(1) in disguise
  Matrix<RationalField> two(Q, 1, 1);
  two.at(0, 0) = Q.from_int(2);
  auto p1_scaled = share(Representation<RationalField>(a2, Q, {1, 1}, {two}));
  auto v = is_isomorphic(p1_scaled, p1);
  REQUIRE(v.is_iso());
  REQUIRE(v.witness->is_invertible());

  // same dims, different End dimension
  auto split = share(Representation<RationalField>(a2, Q, {1, 1}, {Matrix<RationalField>(Q, 1, 1)}));
  auto nv = is_isomorphic(split, p1);
  REQUIRE(nv.is_not_iso());

  // same dims, Hom zero in one direction
  auto kr = quiver_kronecker();
  Matrix<RationalField> one(Q, 1, 1), zero(Q, 1, 1);
  one.at(0, 0) = Q.one();
  auto ra = share(Representation<RationalField>(kr, Q, {1, 1}, {one, zero}));
  auto rb = share(Representation<RationalField>(kr, Q, {1, 1}, {zero, one}));
  REQUIRE(is_isomorphic(ra, rb).is_not_iso());
}

TEST_CASE("isomorphism search finds base-change witnesses") {
  Rng rng(808);
  const PrimeField F5(5);
  for (const auto& q : corpus_quivers())
    for (int trial = 0; trial < 8; ++trial) {
      auto m = share(random_rep(q, F5, 4, rng));
      // conjugate by random invertible vertex maps
      std::vector<Matrix<PrimeField>> g;
      for (int v = 0; v < q->vertex_count(); ++v) {
        Matrix<PrimeField> gv(F5, 0, 0);
        do {
          gv = random_matrix(F5, m->dim(v), m->dim(v), rng);
        } while (rank(gv) != m->dim(v));
        g.push_back(std::move(gv));
      }
      std::vector<Matrix<PrimeField>> arr;
      for (int k = 0; k < q->arrow_count(); ++k) {
        const Arrow& a = q->arrow(k);
        arr.push_back(g[a.target] * m->arrow_matrix(k) * inverse(g[a.source]));
      }
      auto n = share(Representation<PrimeField>(q, F5, m->dims(), std::move(arr)));
      auto verdict = is_isomorphic(m, n);
      REQUIRE(verdict.is_iso());
      REQUIRE(verdict.witness->is_invertible());
      REQUIRE(verdict.witness->source() == *m);
      REQUIRE(verdict.witness->target() == *n);
    }
}

TEST_CASE("kernel and cokernel of a short exact sequence recover the ends") {
  Rng rng(909);
  const PrimeField F5(5);
  for (const auto& q : corpus_quivers())
    for (int trial = 0; trial < 4; ++trial) {
      auto n = share(random_rep(q, F5, 3, rng));
      auto m = share(random_rep(q, F5, 3, rng));
      // a split sequence is enough to exercise the round trip
      auto ds = direct_sum<PrimeField>({n, m});
      ShortExactSequence<PrimeField> ses(ds.injections[0], ds.projections[1]);
      auto k = kernel(ses.proj());
      auto c = cokernel(ses.incl());
      REQUIRE(is_isomorphic(k.rep, ds.injections[0].source_ptr()).is_iso());
      REQUIRE(is_isomorphic(c.rep, ds.projections[1].target_ptr()).is_iso());
    }
}

TEST_CASE("direct sum is associative up to isomorphism with zero unit") {
  Rng rng(111);
  auto a3 = quiver_a3_linear();
  auto x = share(random_rep(a3, Q, 2, rng));
  auto y = share(random_rep(a3, Q, 2, rng));
  auto z = share(random_rep(a3, Q, 2, rng));

  auto xy_z = direct_sum<RationalField>({direct_sum<RationalField>({x, y}).rep, z}).rep;
  auto x_yz = direct_sum<RationalField>({x, direct_sum<RationalField>({y, z}).rep}).rep;
  REQUIRE(is_isomorphic(xy_z, x_yz).is_iso());

  auto zero = share(zero_rep(a3, Q));
  REQUIRE(*direct_sum<RationalField>({x, zero}).rep == *x);
}
