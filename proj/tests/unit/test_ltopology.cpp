// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "golden.hpp"
#include "htopos/error.hpp"
#include "htopos/ltopology.hpp"
#include "htopos/pieces.hpp"

using namespace htopos;

TEST(Topologies, CountMatchesOracle) {
  EXPECT_EQ(enumerate_topologies(Topos(builtin_site("delta1"))).size(),
            golden()["delta1"]["topologies"].get<std::size_t>());
  EXPECT_EQ(enumerate_topologies(Topos(builtin_site("one"))).size(),
            golden()["one"]["topologies"].get<std::size_t>());
}

TEST(Topologies, DoubleNegationMatchesOracle) {
  Topos t(builtin_site("delta1"));
  LTTopology j = double_negation(t);
  const auto want = golden()["delta1"]["notnot"];
  for (Index c = 0; c < 2; ++c)
    for (Elem s = 0; s < t.omega().object().size(c); ++s) EXPECT_EQ(j(c, s), want[c][s].get<Elem>()) << c << "," << s;
}

TEST(Topologies, AllSatisfyAxiomsAndRoundTripCoverage) {
  for (const auto& n : builtin_names()) {
    Topos t(builtin_site(n));
    auto js = enumerate_topologies(t);
    EXPECT_NE(std::find(js.begin(), js.end(), identity_topology(t)), js.end());
    EXPECT_NE(std::find(js.begin(), js.end(), double_negation(t)), js.end());
    for (const auto& j : js) {
      EXPECT_TRUE(validate_topology(t, j).empty()) << n << " " << j.name;
      EXPECT_EQ(topology_from_coverage(t, coverage(t, j)), j);
    }
  }
}

TEST(Topologies, NonTopologyRejected) {
  Topos t(builtin_site("delta1"));
  LTTopology bad = identity_topology(t);
  bad.j[1][1] = 0;
  EXPECT_FALSE(validate_topology(t, bad).empty());
}

TEST(Closure, IdempotentAndInflationary) {
  Topos t(builtin_site("delta1"));
  Presheaf i = t.yoneda(1);
  for (const auto& j : enumerate_topologies(t))
    for (const auto& chi : t.hom(i, t.omega().object())) {
      Subobject s = t.omega().classified(chi);
      Subobject c = closure(t, j, s);
      EXPECT_TRUE(subobject_leq(s, c));
      EXPECT_EQ(closure(t, j, c), c);
      EXPECT_TRUE(is_closed(t, j, c));
      EXPECT_TRUE(is_dense(t, j, whole_subobject(i)));
    }
}

TEST(Sheafification, IdempotentAndSheaf) {
  Topos t(builtin_site("delta1"));
  LTTopology j = double_negation(t);
  Presheaf i = t.yoneda(1);
  for (const auto& x : {t.terminal(), t.two(), i, t.omega().object()}) {
    Sheafification l = sheafify(t, j, x);
    std::string why;
    EXPECT_TRUE(is_sheaf(t, j, l.object, &why)) << why;
    Sheafification ll = sheafify(t, j, l.object);
    EXPECT_TRUE(is_iso(ll.unit));
  }
  EXPECT_FALSE(is_sheaf(t, j, i));
  Sheafification l2 = sheafify(t, j, t.two());
  EXPECT_EQ(l2.object.sizes(), (std::vector<std::size_t>{2, 4}));
  EXPECT_TRUE(is_connected(l2.object));
}

TEST(Sheafification, IdentityTopologyEverythingIsSheaf) {
  Topos t(builtin_site("delta1"));
  LTTopology j = identity_topology(t);
  Presheaf i = t.yoneda(1);
  EXPECT_TRUE(is_sheaf(t, j, i));
  EXPECT_TRUE(is_iso(sheafify(t, j, i).unit));
}

TEST(Quotient, SeparatedAndUniversal) {
  Topos t(builtin_site("delta1"));
  Presheaf i = t.yoneda(1);
  for (const auto& j : enumerate_topologies(t))
    for (const auto& x : {t.two(), i, product(i, i).object}) {
      QuotientResult q = quotient(t, j, x);
      EXPECT_TRUE(is_separated(t, j, q.object)) << j.name;
      EXPECT_TRUE(is_epi(q.q));
      for (const auto& f : t.hom(x, t.two())) {
        MediatorResult m = quotient_universal(t, q, f);
        if (!m.respects) continue;
        ASSERT_TRUE(m.mediator);
        EXPECT_EQ(m.solutions, 1u);
        EXPECT_EQ(compose(*m.mediator, q.q), f);
      }
    }
}

TEST(Quotient, FunctorialOnArrows) {
  Topos t(builtin_site("delta1"));
  Presheaf i = t.yoneda(1);
  LTTopology j = double_negation(t);
  QuotientResult qi = quotient(t, j, i), q2 = quotient(t, j, t.two());
  EXPECT_EQ(quotient_map(qi, qi, identity_map(i)), identity_map(qi.object));
  for (const auto& g : t.hom(i, t.two())) EXPECT_EQ(compose(quotient_map(qi, q2, g), qi.q), compose(q2.q, g));
}

TEST(Lift, UniqueAlongSheafUnit) {
  Topos t(builtin_site("delta1"));
  LTTopology j = double_negation(t);
  Presheaf i = t.yoneda(1);
  Sheafification l = sheafify(t, j, i);
  Product one_i = product(t.terminal(), i);
  LiftResult r = homotopy_lift(t, j, {t.terminal(), i, one_i.p2, l.unit}, l, true);
  EXPECT_TRUE(r.dense_mono);
  EXPECT_TRUE(r.exists);
  EXPECT_TRUE(r.commutes);
  EXPECT_EQ(r.solutions, 1u);
  EXPECT_THROW(homotopy_lift(t, j, {t.terminal(), i, one_i.p2, l.unit}, l, false), PreconditionError);
}
